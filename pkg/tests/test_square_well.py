import numpy as np
import pytest
import scipy.linalg

from antispec.antiunitary import check_commutation, real_form
from antispec.classifier import RepKind, classify
from antispec.errors import NoRootInRegion
from antispec.linalg import spectral_distance
from antispec.models.square_well import (
    SquareWellModel,
    build_square_well,
    build_square_well_real,
    hermitean_limit_levels,
    matching_function,
    square_well_matching,
)


@pytest.mark.parametrize("Z,N", [(0.0, 16), (1.3, 64), (4.5, 100), (25.0, 202)])
def test_exact_discrete_pt_symmetry(Z, N):
    h, a = build_square_well(Z, N)
    assert check_commutation(h, a) <= 1e-12


def test_potential_is_antisymmetric():
    m = SquareWellModel(2.0, 32)
    v = m.potential()
    assert np.array_equal(v[::-1], -v)
    assert np.array_equal(v[::-1], np.conj(v))
    assert not np.any(m.grid == 0)


@pytest.mark.parametrize("N", [15, 17, 10])
def test_grid_validation(N):
    with pytest.raises(ValueError):
        SquareWellModel(1.0, N)


def test_real_builder_equals_real_form():
    h, a = build_square_well(3.0, 40)
    assert np.allclose(real_form(h, a), build_square_well_real(3.0, 40), atol=1e-9)


def test_hermitean_limit_finite_differences():
    h, _ = build_square_well(0.0, 400)
    w = np.sort(np.linalg.eigvalsh(h))[:4]
    exact = hermitean_limit_levels(4)
    # second-order scheme: relative error about E h^2 / 12
    assert np.all(np.abs(w / exact - 1) < exact * (2 / 401) ** 2 / 12 * 1.1)


def test_second_order_convergence():
    exact = np.array([s.E for s in square_well_matching(2.0, (0.0, 80.0, None, None))[:5]])
    assert np.all(exact.imag == 0)

    def error(N):
        w = scipy.linalg.eigvals(build_square_well_real(2.0, N))
        w = np.sort(w[w.real < 80].real)[:5]
        return np.max(np.abs(w - exact.real))

    # h = 2/127 and 2/255: a halving up to 0.4 %
    ratio = error(126) / error(254)
    assert 3 <= ratio <= 5


def test_matching_roots_at_zero_coupling():
    sols = square_well_matching(0.0, (0.0, 100.0, -1.0, 1.0))
    e = np.array([s.E for s in sols])
    assert np.allclose(e, hermitean_limit_levels(6), rtol=0, atol=1e-10)
    for s in sols:
        assert s.residual <= 1e-10
        assert s.pt_overlap() == pytest.approx(1.0)


def test_matching_function_is_real_on_real_axis():
    g, dg = matching_function(np.linspace(1, 50, 7), 3.0)
    assert np.max(np.abs(g.imag)) < 1e-12 * np.max(np.abs(g))
    assert np.max(np.abs(dg.imag)) < 1e-12 * np.max(np.abs(dg))


def test_matching_derivative(rng):
    e = 7.3 + 0.4j
    step = 1e-6
    g_plus = matching_function(e + step, 2.5)[0]
    g_minus = matching_function(e - step, 2.5)[0]
    assert abs((g_plus - g_minus) / (2 * step) - matching_function(e, 2.5)[1]) < 1e-7


def test_small_coupling_is_real():
    sols = square_well_matching(1.0, (0.0, 60.0, None, None))
    assert all(s.E.imag == 0 for s in sols)
    assert len(sols) == 4


def test_conjugate_pair_above_threshold():
    sols = square_well_matching(6.0, (0.0, 30.0, None, None))
    cplx = [s.E for s in sols if s.E.imag != 0]
    assert len(cplx) == 2
    assert abs(cplx[0].imag + cplx[1].imag) < 1e-10
    assert abs(cplx[0].real - cplx[1].real) < 1e-10
    for s in sols:
        assert s.residual <= 1e-10
    pair = [s for s in sols if s.E.imag != 0]
    assert pair[0].pt_overlap() < 0.99


def test_wavefunction_satisfies_boundary_conditions():
    s = square_well_matching(3.0, (0.0, 30.0, None, None))[0]
    assert abs(s.wavefunction(np.array([1.0]))[0]) < 1e-14
    assert abs(s.wavefunction(np.array([-1.0]))[0]) < 1e-14
    x = np.array([-1e-9, 1e-9])
    left, right = s.wavefunction(x)
    assert abs(left - right) < 1e-7 * abs(left)


def test_no_root_in_region():
    with pytest.raises(NoRootInRegion):
        square_well_matching(0.0, (0.0, 2.0, -1.0, 1.0))


def test_fd_agrees_with_matching():
    exact = np.array([s.E for s in square_well_matching(6.0, (0.0, 30.0, None, None))])
    w = scipy.linalg.eigvals(build_square_well_real(6.0, 600))
    w = w[np.abs(w) < 30]
    assert spectral_distance(w, exact) < 1e-3 * np.max(np.abs(exact))


def test_classification_below_and_above_threshold():
    rep = classify(*build_square_well(0.0, 32))
    assert rep.multiplicities.n_plus_1d == 32
    rep = classify(*build_square_well(8.0, 64))
    assert rep.multiplicities.n_plus >= 1
    low = min((b for b in rep.blocks if b.kind is RepKind.GammaPlus2D), key=lambda b: b.energies[0].real)
    assert low.energies[0].real < 20
