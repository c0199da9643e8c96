import numpy as np
import pytest

from antispec.classifier import RepKind
from antispec.errors import BracketInvalid
from antispec.linalg import spectral_distance
from antispec.models.planted import BlockSpec, PlantedPlan
from antispec.sweep import (
    PlantedFamily,
    SquareWellFD,
    SquareWellMatching,
    find_threshold,
    link_spectra,
    lowest_levels,
    max_workers,
    sweep,
)


@pytest.fixture(scope="module")
def matching_threshold():
    return find_threshold(SquareWellMatching(), (0.0, 10.0), 1e-6)


def test_below_threshold_has_no_pairs():
    res = sweep(SquareWellMatching(), 0.0, 0.5, 6)
    assert res.pair_counts == [0] * 6
    assert res.first_transition is None
    assert all(k is RepKind.GammaPlus1D for spec in res.spectra for _, k in spec)


def test_straddling_sweep_has_one_transition():
    res = sweep(SquareWellMatching(), 3.0, 6.0, 7)
    assert len(res.transitions) == 1
    lo, hi = res.first_transition
    assert res.pair_counts[0] == 0 and res.pair_counts[-1] == 1
    above = res.spectra[-1]
    assert sum(k is RepKind.GammaPlus2D for _, k in above) == 2


def test_threshold_value_and_bracket(matching_threshold):
    th = matching_threshold
    assert th.bracket_width <= 1e-6
    assert 0 < th.z_c < 10
    assert th.z_c == pytest.approx(4.4753, abs=1e-3)


def test_threshold_independent_of_bracket(matching_threshold):
    other = find_threshold(SquareWellMatching(), (2.0, 7.5), 1e-6)
    assert abs(other.z_c - matching_threshold.z_c) <= 2e-6


def test_gap_shrinks_over_last_iterates(matching_threshold):
    gaps = matching_threshold.final_gaps(5)
    assert len(gaps) == 5
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_bracket_below_threshold_is_invalid():
    with pytest.raises(BracketInvalid):
        find_threshold(SquareWellMatching(), (0.0, 2.0), 1e-6)


def test_fd_backend_agrees_with_matching(matching_threshold):
    fd = find_threshold(SquareWellFD(N=600), (4.0, 5.0), 1e-6)
    assert abs(fd.z_c / matching_threshold.z_c - 1) < 1e-3


def test_fd_sparse_and_dense_solvers_agree():
    sparse = [e for e, _ in SquareWellFD(N=300, solver="sparse").spectrum(5.0)]
    dense = [e for e, _ in SquareWellFD(N=300, solver="dense").spectrum(5.0)]
    assert spectral_distance(sparse, dense) < 1e-8


def test_fd_classify_path_matches_eigenvalue_path():
    fast = SquareWellFD(N=64, n_levels=4).spectrum(6.0)
    full = SquareWellFD(N=64, n_levels=4, classify=True).spectrum(6.0)
    assert spectral_distance([e for e, _ in fast], [e for e, _ in full]) < 1e-8
    assert sorted(k.value for _, k in fast) == sorted(k.value for _, k in full)


def test_spectra_are_conjugation_symmetric():
    res = sweep(SquareWellFD(N=200), 0.0, 10.0, 6)
    for spec in res.spectra:
        e = np.array([x for x, _ in spec])
        assert spectral_distance(e, np.conj(e)) <= 1e-8


def test_links_are_bijections():
    res = sweep(SquareWellMatching(), 0.0, 8.0, 9)
    for link in res.links:
        assert sorted(link) == list(range(len(link)))


def test_greedy_linking_above_64_levels(rng):
    a = rng.standard_normal(80) + 1j * rng.standard_normal(80)
    perm = rng.permutation(80)
    link = link_spectra(a, a[perm] + 1e-9)
    assert np.array_equal(perm[link], np.arange(80))


def test_planted_family_is_constant():
    plan = PlantedPlan((BlockSpec("GammaMinus2D", 1 + 1j), BlockSpec("GammaPlus1D", 0.5)), seed=3)
    res = sweep(PlantedFamily(plan), 0.0, 1.0, 4)
    assert res.first_transition is None
    first = np.array([e for e, _ in res.spectra[0]])
    for spec in res.spectra:
        assert spectral_distance(first, [e for e, _ in spec]) < 1e-10
    for link in res.links:
        assert np.array_equal(link, np.arange(3))


def test_lowest_levels_never_split_pairs():
    w = np.array([1.0, 2 + 1j, 2 - 1j, 3.0, 4.0])
    assert np.allclose(lowest_levels(w, 2), [1.0, 3.0])
    assert np.allclose(lowest_levels(w, 3), [1.0, 2 + 1j, 2 - 1j])


def test_csv_export():
    res = sweep(SquareWellMatching(n_levels=3), 0.0, 1.0, 3)
    lines = res.to_csv().splitlines()
    assert lines[0] == "param,branch_id,re_E,im_E,rep_kind"
    assert len(lines) == 1 + 3 * 3
    fields = lines[2].split(",")
    assert len(fields[2].replace(".", "").lstrip("0")) >= 12
    assert {int(l.split(",")[1]) for l in lines[1:]} == {0, 1, 2}


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("ANTISPEC_THREADS", "2")
    assert max_workers(10) == 2
    monkeypatch.setenv("ANTISPEC_THREADS", "junk")
    assert max_workers(1) == 1


def test_steps_validated():
    with pytest.raises(ValueError):
        sweep(SquareWellMatching(), 0.0, 1.0, 1)
