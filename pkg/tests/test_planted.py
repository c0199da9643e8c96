import json

import numpy as np
import pytest

from antispec._jsonio import dumps
from antispec.antiunitary import check_commutation, square
from antispec.classifier import RepKind, classify
from antispec.errors import InvalidPlan
from antispec.models.planted import BlockSpec, PlantedPlan, build_planted, random_plan, report_mismatches


def test_single_gamma_plus():
    h, a, expected = build_planted(PlantedPlan((BlockSpec("GammaPlus1D", 1.0),), seed=0))
    assert h.shape == (1, 1) and h[0, 0] == 1
    assert np.array_equal(a.unitary_part, [[1]])
    assert expected.multiplicities.n_plus_1d == 1


def test_gamma_minus_squares_to_minus_one():
    h, a, _ = build_planted(PlantedPlan((BlockSpec("GammaMinus2D", 2 + 1j),), seed=9))
    assert np.allclose(square(a), -np.eye(2))
    assert check_commutation(h, a) < 1e-14
    assert classify(h, a).multiplicities.n_minus == 1


def test_star_omega_convention():
    om = np.exp(1j * np.pi / 3)
    _, _, expected = build_planted(PlantedPlan((BlockSpec("GammaStar2D", 1 + 2j, om),), seed=1))
    (b,) = expected.blocks
    assert b.energies[0] == 1 + 2j
    assert b.omega_sq == pytest.approx(np.conj(om))


@pytest.mark.parametrize(
    "spec",
    [
        dict(kind="GammaStar2D", energy=1 + 1j, omega_sq=1.0),
        dict(kind="GammaStar2D", energy=1 + 1j, omega_sq=-1.0),
        dict(kind="GammaStar2D", energy=1 + 1j, omega_sq=2j),
        dict(kind="GammaStar2D", energy=1 + 1j),
        dict(kind="GammaMinus2D", energy=1 + 1j, omega_sq=1.0),
        dict(kind="GammaPlus2D", energy=2.0),
        dict(kind="GammaPlus1D", energy=1 + 1j),
        dict(kind="GammaMinusDeg", energy=1 + 1j),
        dict(kind="Gamma?", energy=1.0),
    ],
)
def test_invalid_block_specs(spec):
    with pytest.raises(InvalidPlan):
        BlockSpec(**spec)


def test_invalid_plans():
    with pytest.raises(InvalidPlan):
        PlantedPlan(())
    with pytest.raises(InvalidPlan):
        PlantedPlan.from_json({"seed": 1})
    with pytest.raises(InvalidPlan):
        PlantedPlan.from_json({"blocks": [{"kind": "GammaPlus1D"}]})


def test_plan_json_round_trip(rng):
    plan = random_plan(rng, 20)
    back = PlantedPlan.from_json(json.loads(dumps(plan.to_json())))
    assert back == plan


def test_symbol_aliases():
    assert BlockSpec("Γ₋", 1j).kind is RepKind.GammaMinus2D
    assert BlockSpec("γ₊", 0.0).kind is RepKind.GammaPlus1D


def test_seed_determines_matrices(rng):
    plan = random_plan(rng, 12, seed=42)
    h1, a1, _ = build_planted(plan)
    h2, a2, _ = build_planted(plan)
    h3, _, _ = build_planted(plan.with_seed(43))
    assert np.array_equal(h1, h2) and np.array_equal(a1.unitary_part, a2.unitary_part)
    assert not np.allclose(h1, h3)


def test_random_plan_dimension(rng):
    for dim in (1, 2, 7, 64):
        assert random_plan(rng, dim).dim == dim


def test_coincident_plus_spaces_are_canonicalised():
    plan = PlantedPlan((BlockSpec("GammaPlus1D", 1.0), BlockSpec("GammaPlus1D", 1.0), BlockSpec("GammaPlus1D", 1.0)), 4)
    h, a, expected = build_planted(plan)
    m = expected.multiplicities
    assert (m.n_plus_deg, m.n_plus_1d) == (1, 1)
    assert report_mismatches(expected, classify(h, a)) == []


def test_round_trip_small_sample(rng):
    for _ in range(20):
        plan = random_plan(rng, int(rng.integers(2, 30)))
        h, a, expected = build_planted(plan)
        assert report_mismatches(expected, classify(h, a)) == []
