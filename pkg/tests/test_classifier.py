import json

import numpy as np
import pytest

from antispec._jsonio import dumps
from antispec.antiunitary import AntiUnitaryOp, apply, conjugate_basis
from antispec.classifier import (
    ClassificationReport,
    RepKind,
    classify,
    flip_value,
    gauge_fix,
    kinds_for_involution,
    representation_string,
)
from antispec.errors import NotDiagonalizable, NotProportional, SymmetryViolated
from antispec.linalg import random_unitary, spectral_distance
from antispec.models.planted import BlockSpec, PlantedPlan, build_planted
from conftest import random_complex


def test_real_diagonal_with_conjugation():
    rep = classify(np.diag([1.0, 2.0]), AntiUnitaryOp.conjugation(2))
    assert rep.multiplicities.n_plus_1d == 2
    assert rep.summary_line().startswith("N*=0 N-=0 N+=0 n+=2")
    assert all(b.kind is RepKind.GammaPlus1D and b.omega == 1 for b in rep.blocks)


def test_planted_gamma_minus_block():
    h, a, _ = build_planted(PlantedPlan((BlockSpec("GammaMinus2D", 2 + 1j),), seed=5))
    rep = classify(h, a)
    assert rep.multiplicities.n_minus == 1
    (block,) = rep.blocks
    assert block.omega_sq == pytest.approx(-1)
    assert block.omega == 1j
    assert block.energies[0] == pytest.approx(2 + 1j)


def test_mixed_plan_seed_42():
    plan = PlantedPlan(
        (
            BlockSpec("GammaStar2D", 1 + 2j, np.exp(1j * np.pi / 3)),
            BlockSpec("GammaPlus2D", 3 + 1j),
            BlockSpec("GammaPlus1D", 0.5),
        ),
        seed=42,
    )
    h, a, _ = build_planted(plan)
    m = classify(h, a).multiplicities
    assert (m.n_star, m.n_minus, m.n_plus, m.n_plus_1d) == (1, 0, 1, 1)


def test_flip_relations_hold_on_reported_vectors(rng):
    plan = PlantedPlan((BlockSpec("GammaStar2D", 1 - 1j, np.exp(2j)), BlockSpec("GammaMinus2D", -2 + 0.5j)), seed=3)
    h, a, _ = build_planted(plan)
    rep = classify(h, a)
    assert not rep.unassigned
    for b in rep.blocks:
        assert abs(b.omega**2 - b.omega_sq) < 1e-12
        assert abs(abs(b.omega_sq) - 1) < 1e-10
        assert max(b.residuals.values()) < 1e-8


def test_flip_value_branch():
    assert flip_value(-1.0) == 1j
    assert flip_value(1.0) == 1.0
    w = flip_value(np.exp(2j))
    assert abs(w - np.exp(1j)) < 1e-15


def test_gauge_fix_phase_and_fixed_point():
    a = AntiUnitaryOp.conjugation(2)
    # A psi = conj(psi) = e^{i pi/3} psi for psi = e^{-i pi/6} (1, 2)
    psi = np.exp(-1j * np.pi / 6) * np.array([1.0, 2.0])
    assert np.allclose(apply(a, psi), np.exp(1j * np.pi / 3) * psi)
    fixed, phase = gauge_fix(psi, a)
    assert phase == pytest.approx(np.exp(1j * np.pi / 6))
    assert np.allclose(apply(a, fixed), fixed, atol=1e-14)


def test_gauge_fix_of_sign_flip_is_multiplication_by_i():
    a = AntiUnitaryOp.conjugation(1)
    fixed, phase = gauge_fix(np.array([1j]), a)
    assert phase == pytest.approx(1j)
    assert np.allclose(apply(a, fixed), fixed)


def test_gauge_fix_rejects_non_proportional():
    with pytest.raises(NotProportional):
        gauge_fix(np.array([1.0, 1j]), AntiUnitaryOp.conjugation(2))


def test_broken_symmetry_detected():
    h = np.diag([1.0, 2.0 + 0.5j])
    with pytest.raises(SymmetryViolated) as err:
        classify(h, AntiUnitaryOp.conjugation(2))
    assert err.value.residual > 0.1


def test_jordan_block_not_diagonalizable():
    with pytest.raises(NotDiagonalizable):
        classify(np.array([[1.0, 1.0], [0.0, 1.0]]), AntiUnitaryOp.conjugation(2))


def test_complex_eigenvalues_land_in_two_dimensional_blocks(rng):
    p = np.eye(12)[::-1]
    b = random_complex(rng, (12, 12))
    rep = classify(b + p @ np.conj(b) @ p, AntiUnitaryOp(p))
    for blk in rep.blocks:
        if abs(blk.energies[0].imag) > 1e-8:
            assert blk.kind is RepKind.GammaPlus2D
    assert rep.multiplicities.dim == 12


def test_degenerate_kinds(rng):
    plan = PlantedPlan(
        (
            BlockSpec("GammaMinusDeg", 1.5),
            BlockSpec("GammaStarDeg", -0.5, np.exp(-0.7j)),
            BlockSpec("GammaPlusDeg", 3.0),
        ),
        seed=11,
    )
    h, a, expected = build_planted(plan)
    rep = classify(h, a)
    m = rep.multiplicities
    assert (m.n_minus_deg, m.n_star_deg, m.n_plus_deg) == (1, 1, 1)
    star = next(b for b in rep.blocks if b.kind is RepKind.GammaStarDeg)
    assert star.omega_sq.imag > 0 and abs(star.omega_sq - np.exp(0.7j)) < 1e-8
    assert "N-d=1" in rep.summary_line()


def test_classification_is_basis_independent(rng):
    p = np.eye(10)[::-1]
    b = random_complex(rng, (10, 10))
    h, a = b + p @ np.conj(b) @ p, AntiUnitaryOp(p)
    v = random_unitary(10, rng)
    r1 = classify(h, a)
    r2 = classify(v @ h @ v.conj().T, conjugate_basis(a, v))
    assert r1.multiplicities == r2.multiplicities
    assert spectral_distance(r1.sorted_energies(), r2.sorted_energies()) < 1e-8


def test_deterministic_and_json_round_trip(rng):
    h, a, _ = build_planted(PlantedPlan((BlockSpec("GammaStar2D", 2j, 1j), BlockSpec("GammaPlus1D", 1.0)), seed=2))
    r1, r2 = classify(h, a), classify(h, a)
    assert dumps(r1.to_json()) == dumps(r2.to_json())
    back = ClassificationReport.from_json(json.loads(dumps(r1.to_json())))
    assert back.multiplicities == r1.multiplicities
    assert [b.kind for b in back.blocks] == [b.kind for b in r1.blocks]
    assert np.array_equal(back.sorted_energies(), r1.sorted_energies())


def test_kinds_for_involution():
    kinds = kinds_for_involution([1.0, 2 + 1j, 2 - 1j])
    assert kinds == [RepKind.GammaPlus1D, RepKind.GammaPlus2D, RepKind.GammaPlus2D]


def test_representation_string():
    assert representation_string(["GammaPlus1D"] * 3) == "γ₊ ⊗ γ₊ ⊗ γ₊"
    assert representation_string([RepKind.GammaMinus2D]) == "Γ₋"
