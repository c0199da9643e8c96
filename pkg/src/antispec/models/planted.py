"""Planted-representation oracle.

A plan lists blocks with known kind, energy and ``Omega``. Each block is a
small ``(H, U)`` pair realising that kind exactly:

=============  ================  ======================
kind           H                 U
=============  ================  ======================
GammaPlus1D    [E], E real       [1]
GammaPlus2D    diag(E, E*)       [[0, 1], [1, 0]]
GammaMinus2D   diag(E, E*)       [[0, -1], [1, 0]]
GammaStar2D    diag(E, E*)       [[0, 1], [Omega, 0]]
*Deg           diag(E, E), real  same frames
=============  ================  ======================

The blocks are stacked and rotated by a seeded random unitary ``V``
(``H -> V H V^H``, ``U -> V U V^T``), so the classifier sees a dense problem
whose answer is known.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .._jsonio import complex_pair, parse_complex
from ..antiunitary import AntiUnitaryOp
from ..classifier import ClassificationReport, Multiplicities, RepBlock, RepKind
from ..errors import InvalidPlan
from ..linalg import random_unitary, spectral_distance

__all__ = ["BlockSpec", "PlantedPlan", "build_planted", "random_plan", "report_mismatches"]

_ALIASES = {k.symbol: k for k in RepKind}
_ALIASES.update({k.value: k for k in RepKind})
_ALIASES.update({"gamma+": RepKind.GammaPlus1D, "Gamma+": RepKind.GammaPlus2D, "Gamma-": RepKind.GammaMinus2D,
                 "Gamma*": RepKind.GammaStar2D})

_COMPLEX_KINDS = (RepKind.GammaPlus2D, RepKind.GammaMinus2D, RepKind.GammaStar2D)


def _parse_kind(kind):
    if isinstance(kind, RepKind):
        return kind
    try:
        return _ALIASES[str(kind)]
    except KeyError:
        raise InvalidPlan(f"unknown block kind {kind!r}") from None


@dataclass(frozen=True)
class BlockSpec:
    kind: RepKind
    energy: complex
    omega_sq: complex = None

    def __post_init__(self):
        kind = _parse_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        e = complex(self.energy)
        if not np.isfinite(e.real) or not np.isfinite(e.imag):
            raise InvalidPlan("block energy must be finite")
        object.__setattr__(self, "energy", e)
        if kind in _COMPLEX_KINDS:
            if e.imag == 0:
                raise InvalidPlan(f"{kind.value} needs a non-real energy; use the degenerate kind for real E")
        elif e.imag != 0:
            raise InvalidPlan(f"{kind.value} needs a real energy, got {e}")

        om = None if self.omega_sq is None else complex(self.omega_sq)
        star = kind in (RepKind.GammaStar2D, RepKind.GammaStarDeg)
        if star:
            if om is None:
                raise InvalidPlan(f"{kind.value} requires omega_sq")
            if abs(abs(om) - 1) > 1e-10:
                raise InvalidPlan(f"omega_sq must be unimodular, |Omega| = {abs(om):.6g}")
            if abs(om.imag) <= 1e-8:
                raise InvalidPlan(f"{kind.value} needs Omega off the real axis, got {om}")
        else:
            forced = -1.0 if kind in (RepKind.GammaMinus2D, RepKind.GammaMinusDeg) else 1.0
            if om is not None and abs(om - forced) > 1e-10:
                raise InvalidPlan(f"{kind.value} forces Omega = {forced:+g}, got {om}")
            om = complex(forced)
        object.__setattr__(self, "omega_sq", om)

    def matrices(self):
        e, om = self.energy, self.omega_sq
        if self.kind is RepKind.GammaPlus1D:
            return np.array([[e]]), np.array([[1.0 + 0j]])
        h = np.diag([e, np.conj(e)])
        if self.kind in (RepKind.GammaPlus2D, RepKind.GammaPlusDeg):
            u = [[0, 1], [1, 0]]
        elif self.kind in (RepKind.GammaMinus2D, RepKind.GammaMinusDeg):
            u = [[0, -1], [1, 0]]
        else:
            u = [[0, 1], [om, 0]]
        return h, np.array(u, dtype=np.complex128)

    def expected_block(self):
        """Block as the classifier reports it (state with ``Im E > 0`` first)."""
        e, om = self.energy, self.omega_sq
        if self.kind is RepKind.GammaPlus1D:
            return RepBlock(self.kind, 1.0 + 0j, 1.0 + 0j, (e,))
        if self.kind in (RepKind.GammaStar2D, RepKind.GammaStarDeg):
            # U conj(U) = diag(conj(Omega), Omega): the state of energy E carries conj(Omega)
            if self.kind is RepKind.GammaStarDeg:
                om = om if om.imag > 0 else np.conj(om)
            elif e.imag > 0:
                om = np.conj(om)
        if self.kind.degenerate:
            energies = (e, e)
        else:
            energies = (e, np.conj(e)) if e.imag > 0 else (np.conj(e), e)
        return RepBlock(self.kind, complex(om), complex(np.sqrt(om)), energies)

    def to_json(self):
        out = {"kind": self.kind.value, "energy": complex_pair(self.energy)}
        if self.kind in (RepKind.GammaStar2D, RepKind.GammaStarDeg):
            out["omega_sq"] = complex_pair(self.omega_sq)
        return out


@dataclass(frozen=True)
class PlantedPlan:
    blocks: tuple
    seed: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        blocks = tuple(b if isinstance(b, BlockSpec) else BlockSpec(**b) for b in self.blocks)
        if not blocks:
            raise InvalidPlan("plan has no blocks")
        try:
            seed = int(self.seed)
        except (TypeError, ValueError):
            raise InvalidPlan(f"seed must be an integer, got {self.seed!r}") from None
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "seed", seed)

    @property
    def dim(self):
        return sum(b.kind.dim for b in self.blocks)

    def with_seed(self, seed):
        return PlantedPlan(self.blocks, seed)

    def to_json(self):
        return {"seed": self.seed, "blocks": [b.to_json() for b in self.blocks]}

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or "blocks" not in data:
            raise InvalidPlan('plan JSON must be an object with a "blocks" list')
        specs = []
        for k, b in enumerate(data["blocks"]):
            try:
                energy = parse_complex(b["energy"]) if isinstance(b["energy"], (list, tuple)) else complex(b["energy"])
                om = b.get("omega_sq")
                if om is not None:
                    om = parse_complex(om) if isinstance(om, (list, tuple)) else complex(om)
                specs.append(BlockSpec(b["kind"], energy, om))
            except (KeyError, TypeError, ValueError) as exc:
                raise InvalidPlan(f"block {k}: {exc}") from exc
        return cls(tuple(specs), data.get("seed", 0))


def _canonical_blocks(blocks, tol=1e-8):
    """Merge ``Omega = +1`` real eigenspaces the way the classifier reports them.

    A ``d``-dimensional A-fixed eigenspace at one real energy has no
    preferred splitting; it is reported as ``d // 2`` ``GammaPlusDeg`` blocks
    plus one ``GammaPlus1D`` when ``d`` is odd.
    """
    plus = [b for b in blocks if b.kind in (RepKind.GammaPlus1D, RepKind.GammaPlusDeg)]
    rest = [b for b in blocks if b.kind not in (RepKind.GammaPlus1D, RepKind.GammaPlusDeg)]
    groups = []
    for b in sorted(plus, key=lambda b: b.energies[0].real):
        e = b.energies[0].real
        if groups and abs(e - groups[-1][0]) <= tol * max(1.0, abs(e)):
            groups[-1][1] += b.kind.dim
        else:
            groups.append([e, b.kind.dim])
    for e, d in groups:
        rest.extend(RepBlock(RepKind.GammaPlusDeg, 1.0 + 0j, 1.0 + 0j, (complex(e), complex(e))) for _ in range(d // 2))
        if d % 2:
            rest.append(RepBlock(RepKind.GammaPlus1D, 1.0 + 0j, 1.0 + 0j, (complex(e),)))
    return sorted(rest, key=lambda b: (b.energies[0].real, b.energies[0].imag, b.kind.value))


def build_planted(plan):
    """Assemble ``(H, A, expected)`` for a plan.

    Returns
    -------
    H : ndarray, complex
    A : AntiUnitaryOp
    expected : ClassificationReport
        Ground truth, with ``Omega = +1`` degenerate spaces canonicalised as
        the classifier reports them.
    """
    if not isinstance(plan, PlantedPlan):
        plan = PlantedPlan.from_json(plan) if isinstance(plan, dict) else PlantedPlan(tuple(plan))
    hs, us = zip(*(b.matrices() for b in plan.blocks))
    h0 = scipy.linalg.block_diag(*hs)
    u0 = scipy.linalg.block_diag(*us)
    n = h0.shape[0]
    v = random_unitary(n, plan.seed) if n > 1 else np.ones((1, 1), dtype=np.complex128)
    h = v @ h0 @ v.conj().T
    u = v @ u0 @ v.T
    a = AntiUnitaryOp(u, "A")
    blocks = tuple(_canonical_blocks([b.expected_block() for b in plan.blocks]))
    expected = ClassificationReport(
        blocks=blocks,
        multiplicities=Multiplicities.from_blocks(blocks),
        commutation_residual=0.0,
        dim=n,
        cond=1.0,
    )
    return h, a, expected


def random_plan(rng, dim, seed=None, degenerate=True):
    """Random plan of total dimension ``dim`` mixing all kinds.

    Energies are kept at least 0.05 apart (conjugates included) and complex
    energies at least 0.1 from the real axis; ``Omega`` for ``GammaStar``
    kinds has argument in ``[0.3, pi - 0.3]`` up to sign.
    """
    rng = np.random.default_rng(rng)
    kinds = list(RepKind) if degenerate else [k for k in RepKind if not k.degenerate]
    used = []
    specs = []

    def fresh(real):
        while True:
            re = rng.uniform(-5, 5)
            im = 0.0 if real else rng.choice([-1, 1]) * rng.uniform(0.1, 3)
            z = complex(re, im)
            if all(abs(z - u) > 0.05 and abs(np.conj(z) - u) > 0.05 for u in used):
                used.append(z)
                return z

    left = dim
    while left > 0:
        kind = RepKind.GammaPlus1D if left == 1 else kinds[rng.integers(len(kinds))]
        om = None
        if kind in (RepKind.GammaStar2D, RepKind.GammaStarDeg):
            om = np.exp(1j * rng.choice([-1, 1]) * rng.uniform(0.3, np.pi - 0.3))
        specs.append(BlockSpec(kind, fresh(real=kind not in _COMPLEX_KINDS), om))
        left -= kind.dim
    rng.shuffle(specs)
    return PlantedPlan(tuple(specs), int(rng.integers(2**31)) if seed is None else seed)


def report_mismatches(expected, actual, tol=1e-8):
    """Differences between two classification reports, as readable strings.

    Compares multiplicities exactly, and per kind the block energies (optimal
    matching, absolute ``tol``) and, for ``GammaStar`` kinds, ``Omega`` of
    matched blocks.
    """
    out = []
    if expected.multiplicities != actual.multiplicities:
        out.append(f"multiplicities {expected.multiplicities} != {actual.multiplicities}")
    if actual.unassigned:
        out.append(f"unassigned states {actual.unassigned}")
    for kind in RepKind:
        eb = [b for b in expected.blocks if b.kind is kind]
        ab = [b for b in actual.blocks if b.kind is kind]
        if len(eb) != len(ab) or not eb:
            continue
        ee = np.array([b.energies[0] for b in eb])
        ae = np.array([b.energies[0] for b in ab])
        d = spectral_distance(ee, ae)
        if d > tol:
            out.append(f"{kind.value} energies differ by {d:.3e}")
            continue
        if kind in (RepKind.GammaStar2D, RepKind.GammaStarDeg):
            for b in eb:
                j = int(np.argmin(np.abs(ae - b.energies[0])))
                if abs(ab[j].omega_sq - b.omega_sq) > tol:
                    out.append(f"{kind.value} at E={b.energies[0]:.6g}: Omega {ab[j].omega_sq:.6g} != {b.omega_sq:.6g}")
    return out
