"""Wigner representation content of a spectrum with an anti-unitary symmetry.

Given ``H`` with ``[H, A] = 0`` the eigenvectors organise into blocks on
which ``A`` acts as one of

==========  ==========  ============================  ===
kind        A^2 = Omega  action                        dim
==========  ==========  ============================  ===
GammaStar2D  complex     A|W> = w*|W*>, A|W*> = w|W>    2
GammaMinus2D -1          A|-> = -i|-*>, A|-*> = i|->    2
GammaPlus2D  +1          A|+> = |+*>,   A|+*> = |+>     2
GammaPlus1D  +1          A|1> = |1>                     1
==========  ==========  ============================  ===

with ``w**2 == Omega``. Two-dimensional blocks on a single real, twofold
degenerate energy are reported as the ``*Deg`` kinds.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg

from . import defaults
from ._jsonio import complex_pair, parse_complex
from .antiunitary import apply, check_commutation, square
from .errors import NotProportional, NotUnimodular, SymmetryViolated
from .linalg import as_cvector, biorthogonalize

__all__ = [
    "RepKind",
    "RepBlock",
    "Multiplicities",
    "ClassificationReport",
    "classify",
    "gauge_fix",
    "flip_value",
    "kinds_for_involution",
    "representation_string",
]


class RepKind(str, Enum):
    GammaPlus1D = "GammaPlus1D"
    GammaPlus2D = "GammaPlus2D"
    GammaMinus2D = "GammaMinus2D"
    GammaStar2D = "GammaStar2D"
    GammaPlusDeg = "GammaPlusDeg"
    GammaMinusDeg = "GammaMinusDeg"
    GammaStarDeg = "GammaStarDeg"

    @property
    def dim(self):
        return 1 if self is RepKind.GammaPlus1D else 2

    @property
    def degenerate(self):
        return self.value.endswith("Deg")

    @property
    def symbol(self):
        return _SYMBOLS[self]


_SYMBOLS = {
    RepKind.GammaPlus1D: "γ₊",
    RepKind.GammaPlus2D: "Γ₊",
    RepKind.GammaMinus2D: "Γ₋",
    RepKind.GammaStar2D: "Γ*",
    RepKind.GammaPlusDeg: "Γ₊ᵈ",
    RepKind.GammaMinusDeg: "Γ₋ᵈ",
    RepKind.GammaStarDeg: "Γ*ᵈ",
}


@dataclass(frozen=True)
class RepBlock:
    """One irreducible (or degenerate two-dimensional) block.

    ``energies`` holds one value for ``GammaPlus1D`` and ``(E, E*)`` for the
    two-dimensional kinds, the member with ``Im E > 0`` first. ``omega_sq``
    is the eigenvalue of ``A^2`` on that first state and ``omega`` the
    flipping value (``1`` for ``GammaPlus1D`` after the gauge fix).
    """

    kind: RepKind
    omega_sq: complex
    omega: complex
    energies: tuple
    state_indices: tuple = ()
    residuals: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "kind": self.kind.value,
            "omega_sq": complex_pair(self.omega_sq),
            "omega": complex_pair(self.omega),
            "energies": [complex_pair(e) for e in self.energies],
            "state_indices": [int(i) for i in self.state_indices],
            "residuals": {k: float(v) for k, v in self.residuals.items()},
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            kind=RepKind(data["kind"]),
            omega_sq=parse_complex(data["omega_sq"]),
            omega=parse_complex(data["omega"]) if data.get("omega") is not None else 1.0,
            energies=tuple(parse_complex(e) for e in data["energies"]),
            state_indices=tuple(int(i) for i in data.get("state_indices", ())),
            residuals={k: float(v) for k, v in data.get("residuals", {}).items()},
        )


@dataclass(frozen=True)
class Multiplicities:
    """Block counts in the decomposition of the space under ``A``."""

    n_star: int = 0
    n_minus: int = 0
    n_plus: int = 0
    n_plus_1d: int = 0
    n_star_deg: int = 0
    n_minus_deg: int = 0
    n_plus_deg: int = 0

    @classmethod
    def from_blocks(cls, blocks):
        counts = {k: 0 for k in RepKind}
        for b in blocks:
            counts[b.kind] += 1
        return cls(
            n_star=counts[RepKind.GammaStar2D],
            n_minus=counts[RepKind.GammaMinus2D],
            n_plus=counts[RepKind.GammaPlus2D],
            n_plus_1d=counts[RepKind.GammaPlus1D],
            n_star_deg=counts[RepKind.GammaStarDeg],
            n_minus_deg=counts[RepKind.GammaMinusDeg],
            n_plus_deg=counts[RepKind.GammaPlusDeg],
        )

    @property
    def dim(self):
        two = self.n_star + self.n_minus + self.n_plus + self.n_star_deg + self.n_minus_deg + self.n_plus_deg
        return 2 * two + self.n_plus_1d

    def to_json(self):
        return dict(self.__dict__)


@dataclass(frozen=True)
class ClassificationReport:
    blocks: tuple
    multiplicities: Multiplicities
    commutation_residual: float
    unassigned: tuple = ()
    dim: int = 0
    cond: float = 1.0

    def summary_line(self):
        m = self.multiplicities
        line = (
            f"N*={m.n_star} N-={m.n_minus} N+={m.n_plus} n+={m.n_plus_1d} "
            f"residual={self.commutation_residual:.3e}"
        )
        if m.n_star_deg or m.n_minus_deg or m.n_plus_deg:
            line += f" N*d={m.n_star_deg} N-d={m.n_minus_deg} N+d={m.n_plus_deg}"
        return line

    def sorted_energies(self):
        """All block energies as one array sorted by (Re, Im)."""
        es = np.array([e for b in self.blocks for e in b.energies], dtype=np.complex128)
        return es[np.lexsort((es.imag, es.real))]

    def to_json(self):
        return {
            "multiplicities": self.multiplicities.to_json(),
            "blocks": [b.to_json() for b in self.blocks],
            "commutation_residual": float(self.commutation_residual),
            "unassigned": [{"index": int(i), "reason": r} for i, r in self.unassigned],
            "dim": int(self.dim),
            "cond": float(self.cond),
        }

    @classmethod
    def from_json(cls, data):
        blocks = tuple(RepBlock.from_json(b) for b in data["blocks"])
        mult = Multiplicities(**{k: int(v) for k, v in data["multiplicities"].items()})
        return cls(
            blocks=blocks,
            multiplicities=mult,
            commutation_residual=float(data.get("commutation_residual", 0.0)),
            unassigned=tuple((int(u["index"]), u["reason"]) for u in data.get("unassigned", [])),
            dim=int(data.get("dim", mult.dim)),
            cond=float(data.get("cond", 1.0)),
        )


def representation_string(kinds):
    """``"γ₊ ⊗ γ₊ ⊗ Γ₋"`` style rendering of a sequence of kinds."""
    return " ⊗ ".join(RepKind(k).symbol for k in kinds)


def flip_value(omega_sq, tol=defaults.TOL_PROP):
    """Principal square root of a unimodular ``Omega``.

    ``Omega = -1`` maps to ``+i`` (and ``+1`` to ``1``) even when rounding
    leaves it just below the branch cut.
    """
    omega_sq = complex(omega_sq)
    if abs(abs(omega_sq) - 1.0) > tol:
        raise NotUnimodular(f"|Omega| = {abs(omega_sq):.12g} is not 1")
    if abs(omega_sq + 1.0) <= tol:
        return 1j
    if abs(omega_sq - 1.0) <= tol:
        return 1.0 + 0j
    return complex(np.sqrt(omega_sq))


def gauge_fix(psi, a, tol=defaults.TOL_PROP):
    """Rephase ``psi`` so that ``A psi' = psi'``.

    If ``A psi = exp(i theta) psi`` then ``psi' = exp(i theta/2) psi``: the
    conjugation inside ``A`` turns the factor into ``exp(-i theta/2)``,
    which the ``exp(i theta)`` cancels to ``exp(i theta/2)``.

    Returns
    -------
    psi_fixed : ndarray
    phase : complex
        The factor ``exp(i theta/2)``, ``theta`` in (-pi, pi].

    Raises
    ------
    NotProportional
        If ``A psi`` is not a unimodular multiple of ``psi``.
    """
    psi = as_cvector(psi, a.dim, "psi")
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise NotProportional("zero vector")
    phi = apply(a, psi)
    c = np.vdot(psi, phi) / nrm**2
    if abs(c) < 1 - tol or np.linalg.norm(phi - c * psi) > np.sqrt(tol) * nrm:
        raise NotProportional(f"A psi is not a unimodular multiple of psi (|<psi|A psi>| = {abs(c):.3g})")
    phase = _half_phase(c)
    return phase * psi, phase


def _half_phase(c):
    """``exp(i theta/2)`` for ``c = |c| exp(i theta)``, ``theta`` in (-pi, pi]."""
    theta = float(np.angle(c))
    if theta <= -np.pi:
        theta = np.pi
    return complex(np.exp(0.5j * theta))


def kinds_for_involution(eigenvalues, tol=defaults.TOL_REAL):
    """Kinds implied by reality alone when ``A^2 = +I`` on the whole space.

    Real eigenvalues are then ``GammaPlus1D`` and complex ones members of
    ``GammaPlus2D`` flipping pairs; no eigenvectors are needed.
    """
    w = np.asarray(eigenvalues, dtype=np.complex128)
    real = np.abs(w.imag) <= tol * np.maximum(1.0, np.abs(w))
    return [RepKind.GammaPlus1D if r else RepKind.GammaPlus2D for r in real]


def _omega_kind(omega_sq, tol):
    if abs(omega_sq - 1.0) <= tol:
        return "plus"
    if abs(omega_sq + 1.0) <= tol:
        return "minus"
    if abs(omega_sq.imag) > tol:
        return "star"
    return None


def _schur_unitary(s):
    """Orthonormal eigenbasis of a (numerically) normal matrix."""
    t, z = scipy.linalg.schur(s, output="complex")
    return np.diag(t).copy(), z


class _Classifier:
    def __init__(self, h, a, tol, tol_degeneracy):
        self.h = h
        self.a = a
        self.tol = tol
        self.tol_omega = max(tol, 1e-10)
        self.bs = biorthogonalize(h, tol_degeneracy)
        self.s = square(a)
        self.hnorm = max(1.0, float(np.linalg.norm(h, np.inf)))
        self.blocks = []
        self.unassigned = []

    def is_real(self, e):
        return abs(e.imag) <= self.tol * max(1.0, abs(e))

    def eig_residual(self, v, e):
        return float(np.linalg.norm(self.h @ v - e * v) / (self.hnorm * np.linalg.norm(v)))

    def run(self):
        w = self.bs.eigenvalues
        clusters = self.bs.clusters
        centers = np.array([w[c].mean() for c in clusters])
        partner = self._pair_clusters(clusters, centers)
        # A psi and A^2 psi for all real nondegenerate states as two matrix products
        singles = [int(c[0]) for k, c in enumerate(clusters) if c.size == 1 and self.is_real(centers[k])]
        r = self.bs.right[:, singles]
        images = self.a.unitary_part @ np.conj(r)
        squares = self.s @ r
        column = {i: j for j, i in enumerate(singles)}
        for k, c in enumerate(clusters):
            e = centers[k]
            if self.is_real(e):
                if c.size == 1:
                    j = column[int(c[0])]
                    self._real_single(c[0], images[:, j], squares[:, j])
                else:
                    self._real_degenerate(c, e)
            elif e.imag > 0:
                self._complex_pair(c, clusters[partner[k]])
        return self.blocks, self.unassigned

    def _pair_clusters(self, clusters, centers):
        scale = max(1.0, float(np.max(np.abs(self.bs.eigenvalues))))
        pair_tol = max(1e-6, 100 * self.tol) * scale
        upper = [k for k, e in enumerate(centers) if not self.is_real(e) and e.imag > 0]
        lower = [k for k, e in enumerate(centers) if not self.is_real(e) and e.imag < 0]
        if len(upper) != len(lower):
            raise SymmetryViolated(
                f"{len(upper)} eigenvalue clusters above and {len(lower)} below the real axis; "
                "the spectrum is not closed under conjugation"
            )
        partner = {}
        if not upper:
            return partner
        up = centers[upper]
        lo = centers[lower]
        dist = np.abs(up[:, None] - np.conj(lo)[None, :])
        for i, k in enumerate(upper):
            j = int(np.argmin(dist[i]))
            if int(np.argmin(dist[:, j])) != i or dist[i, j] > pair_tol:
                raise SymmetryViolated(f"complex eigenvalue {centers[k]:.10g} has no conjugate partner")
            if clusters[k].size != clusters[lower[j]].size:
                raise SymmetryViolated(f"multiplicity of {centers[k]:.10g} differs from its conjugate's")
            partner[k] = lower[j]
        return partner

    def _real_single(self, i, phi, s_psi):
        psi = self.bs.right[:, i]
        e = self.bs.eigenvalues[i]
        overlap = abs(np.vdot(psi, phi)) / (np.linalg.norm(psi) * np.linalg.norm(phi))
        omega_sq = complex(np.vdot(psi, s_psi))
        if overlap < 1 - self.tol:
            self.unassigned.append(
                (int(i), f"A psi not proportional to psi for nondegenerate real E={e:.10g} (overlap {overlap:.3g})")
            )
            return
        if abs(omega_sq - 1.0) > 100 * self.tol:
            self.unassigned.append((int(i), f"A psi proportional to psi but A^2 = {omega_sq:.6g} != 1"))
            return
        # gauge fix without another product: A (p psi) = conj(p) A psi
        phase = _half_phase(np.vdot(psi, phi))
        fixed_point = float(np.linalg.norm(np.conj(phase) * phi - phase * psi))
        self.blocks.append(
            RepBlock(
                kind=RepKind.GammaPlus1D,
                omega_sq=omega_sq,
                omega=1.0,
                energies=(complex(e.real),),
                state_indices=(int(i),),
                residuals={
                    "proportionality_defect": 1.0 - overlap,
                    "fixed_point": fixed_point,
                    "imag_energy": abs(e.imag),
                },
            )
        )

    def _complex_pair(self, cu, cl):
        q = self.bs.right[:, cu]
        ql = self.bs.right[:, cl]
        if cu.size == 1:
            omegas = np.array([np.vdot(q[:, 0], self.s @ q[:, 0])])
            vecs = q
            # report an exact conjugate pair
            e_pair = 0.5 * (self.bs.eigenvalues[cu[0]] + np.conj(self.bs.eigenvalues[cl[0]]))
            energies = [e_pair]
            partner_energies = [np.conj(e_pair)]
        else:
            omegas, z = _schur_unitary(q.conj().T @ self.s @ q)
            vecs = q @ z
            energies = [np.vdot(v, self.h @ v) for v in vecs.T]
            partner_energies = [np.conj(e) for e in energies]
        for m in range(vecs.shape[1]):
            psi = vecs[:, m]
            omega_sq = complex(omegas[m])
            idx = (int(cu[m]), int(cl[m]))
            kind = _omega_kind(omega_sq, self.tol_omega)
            if kind is None:
                self.unassigned.extend((i, f"A^2 eigenvalue {omega_sq:.6g} is real but not +-1") for i in idx)
                continue
            omega = flip_value(omega_sq, tol=self.tol_omega)
            partner = omega * apply(self.a, psi)
            res = {
                "omega_residual": float(np.linalg.norm(self.s @ psi - omega_sq * psi)),
                "flip_residual": float(np.linalg.norm(apply(self.a, partner) - omega * psi)),
                "partner_eigen_residual": self.eig_residual(partner, np.conj(energies[m])),
                "partner_defect": float(np.linalg.norm(partner - ql @ (ql.conj().T @ partner))),
            }
            if max(res.values()) > 100 * self.tol:
                self.unassigned.extend((i, f"inconsistent flip pair (residuals {res})") for i in idx)
                continue
            self.blocks.append(
                RepBlock(
                    kind={"plus": RepKind.GammaPlus2D, "minus": RepKind.GammaMinus2D, "star": RepKind.GammaStar2D}[kind],
                    omega_sq=omega_sq,
                    omega=omega,
                    energies=(complex(energies[m]), complex(partner_energies[m])),
                    state_indices=idx,
                    residuals=res,
                )
            )

    def _real_degenerate(self, c, e):
        """Split a real degenerate eigenspace using A restricted to it."""
        q = self.bs.right[:, c]
        k = c.size
        u = q.conj().T @ self.a.unitary_part @ np.conj(q)
        image = self.a.unitary_part @ np.conj(q)
        leak = float(np.linalg.norm(image - q @ u))
        if leak > 100 * self.tol:
            self.unassigned.extend((int(i), f"eigenspace at E={e:.10g} not mapped into itself by A") for i in c)
            return

        def a_sub(y):
            return u @ np.conj(y)

        omegas, z = _schur_unitary(u @ np.conj(u))
        groups = {"plus": [], "minus": [], "star_up": [], "star_down": [], None: []}
        for m, om in enumerate(omegas):
            kind = _omega_kind(complex(om), self.tol_omega)
            if kind == "star":
                kind = "star_up" if om.imag > 0 else "star_down"
            groups[kind].append(m)
        if groups[None] or len(groups["minus"]) % 2 or len(groups["star_up"]) != len(groups["star_down"]):
            self.unassigned.extend((int(i), f"degenerate eigenspace at E={e:.10g} has inconsistent A^2 spectrum") for i in c)
            return

        pieces = []  # (kind, omega_sq, omega, [coordinate vectors])
        # A^2 = +1: A-fixed orthonormal vectors, paired into GammaPlusDeg
        zp = z[:, groups["plus"]]
        fixed = []
        for j in range(zp.shape[1]):
            for seed in (zp[:, j], 1j * zp[:, j]):
                y = seed + a_sub(seed)
                for f in fixed:
                    y = y - f * np.vdot(f, y)
                if np.linalg.norm(y) > 1e-6:
                    fixed.append(y / np.linalg.norm(y))
                    break
        for j in range(0, len(fixed) - 1, 2):
            pieces.append((RepKind.GammaPlusDeg, 1.0 + 0j, 1.0 + 0j, [fixed[j], fixed[j + 1]]))
        if len(fixed) % 2:
            pieces.append((RepKind.GammaPlus1D, 1.0 + 0j, 1.0 + 0j, [fixed[-1]]))
        # A^2 = -1: Kramers pairs (y, i A y)
        rest = [z[:, m] for m in groups["minus"]]
        while rest:
            y = rest.pop(0)
            y = y / np.linalg.norm(y)
            partner = 1j * a_sub(y)
            pieces.append((RepKind.GammaMinusDeg, -1.0 + 0j, 1j, [y, partner]))
            basis = np.column_stack([y, partner])
            rest = [r - basis @ (basis.conj().T @ r) for r in rest]
            rest = [r for r in rest if np.linalg.norm(r) > 1e-6]
        # complex A^2: (y, w A y)
        for m in groups["star_up"]:
            y = z[:, m]
            om = complex(omegas[m])
            w = flip_value(om, tol=self.tol_omega)
            pieces.append((RepKind.GammaStarDeg, om, w, [y, w * a_sub(y)]))

        pos = 0
        for kind, om, w, ys in pieces:
            vecs = [q @ y for y in ys]
            idx = tuple(int(i) for i in c[pos : pos + len(vecs)])
            pos += len(vecs)
            res = {"eigen_residual": max(self.eig_residual(v, e) for v in vecs), "subspace_leak": leak}
            if kind is RepKind.GammaPlus1D or kind is RepKind.GammaPlusDeg:
                res["fixed_point"] = max(float(np.linalg.norm(apply(self.a, v) - v)) for v in vecs)
            else:
                res["flip_residual"] = float(np.linalg.norm(apply(self.a, vecs[1]) - w * vecs[0]))
            energies = (complex(e.real),) * kind.dim
            self.blocks.append(RepBlock(kind, om, w, energies, idx, res))


def classify(h, a, tol=defaults.TOL_PROP, tol_sym=None, tol_degeneracy=defaults.TOL_DEGENERACY):
    """Decompose the eigenspaces of ``H`` into representations of ``A``.

    Parameters
    ----------
    h : array_like, shape (n, n)
        Diagonalizable matrix commuting with ``a``.
    a : AntiUnitaryOp
    tol : float
        Proportionality, reality and flip-relation tolerance. Blocks whose
        residuals exceed ``100 * tol`` are moved to ``unassigned``.
    tol_sym : float, optional
        Accepted commutation residual; defaults to ``tol``.
    tol_degeneracy : float
        Relative eigenvalue clustering tolerance.

    Returns
    -------
    ClassificationReport

    Raises
    ------
    SymmetryViolated
        If ``check_commutation(h, a) > tol_sym`` or a complex eigenvalue has
        no conjugate partner.
    NotDiagonalizable
        Propagated from :func:`antispec.linalg.biorthogonalize`.
    """
    tol_sym = tol if tol_sym is None else tol_sym
    residual = check_commutation(h, a)
    if residual > tol_sym:
        raise SymmetryViolated(f"commutation residual {residual:.3e} exceeds {tol_sym:.1e}", residual=residual)
    h = np.asarray(h, dtype=np.complex128)
    worker = _Classifier(h, a, tol, tol_degeneracy)
    blocks, unassigned = worker.run()
    return ClassificationReport(
        blocks=tuple(blocks),
        multiplicities=Multiplicities.from_blocks(blocks),
        commutation_residual=residual,
        unassigned=tuple(sorted(unassigned)),
        dim=h.shape[0],
        cond=worker.bs.cond,
    )
