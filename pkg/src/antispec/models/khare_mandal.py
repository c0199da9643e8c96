"""Khare-Mandal family ``H_M = p^2 - (zeta cosh 2x - iM)^2``.

The functions ``Psi(x) e^{kx}`` with ``Psi = exp((i/2) zeta cosh 2x)`` and
``k = M-1, M-3, ..., -(M-1)`` span an ``M``-dimensional space mapped into
itself by ``H_M``:

    H [Psi e^{kx}] = Psi [ (M^2 - zeta^2 - k^2) e^{kx}
                          + i zeta (M-1-k) e^{(k+2)x}
                          + i zeta (M-1+k) e^{(k-2)x} ].

So ``M`` eigenpairs are available in closed form from an ``M x M`` matrix.

PT uses parity about ``i pi/2``: ``(PT f)(x) = conj(f(conj(i pi/2 - x)))``,
which needs the eigenfunctions at complex arguments. Applying it twice is a
shift by ``-i pi``, so ``(PT)^2 = (-1)^(M-1)`` on this space.
"""

from dataclasses import dataclass

import numpy as np

from ..classifier import RepKind, representation_string
from ..errors import OutOfRegime, UnknownM

__all__ = [
    "envelope",
    "potential",
    "exponents",
    "qes_matrix",
    "KhareMandalState",
    "KhareMandalModel",
    "pt_image",
    "second_derivative",
    "eigen_residual",
    "khare_mandal_verify",
]

SUPPORTED_M = (2, 3, 4)

# central 7-point stencil for f''
_STENCIL = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])


def envelope(z, zeta):
    """``Psi(z) = exp((i/2) zeta cosh 2z)``, valid for complex ``z``."""
    return np.exp(0.5j * zeta * np.cosh(2 * np.asarray(z, dtype=np.complex128)))


def potential(z, M, zeta):
    return -((zeta * np.cosh(2 * np.asarray(z, dtype=np.complex128)) - 1j * M) ** 2)


def exponents(M):
    return np.arange(M - 1, -M, -2)


def qes_matrix(M, zeta):
    """Matrix of ``H_M`` on the basis ``Psi e^{kx}``, ``k = exponents(M)``.

    Column ``j`` holds the expansion of ``H [Psi e^{k_j x}]``.
    """
    ks = exponents(M)
    c = np.zeros((M, M), dtype=np.complex128)
    for j, k in enumerate(ks):
        c[j, j] = M**2 - zeta**2 - k**2
        if j > 0:
            c[j - 1, j] = 1j * zeta * (M - 1 - k)
        if j < M - 1:
            c[j + 1, j] = 1j * zeta * (M - 1 + k)
    return c


def _pt_coefficients(coeffs, ks):
    """Coefficients of ``PT f`` for ``f = Psi sum_k c_k e^{kx}``: ``c'_{-k} = i^k conj(c_k)``."""
    out = np.zeros_like(coeffs)
    index = {int(k): j for j, k in enumerate(ks)}
    for j, k in enumerate(ks):
        out[index[-int(k)]] = np.exp(0.5j * np.pi * k) * np.conj(coeffs[j])
    return out


@dataclass(frozen=True)
class KhareMandalState:
    label: str
    energy: complex
    coeffs: np.ndarray
    M: int
    zeta: float

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        ks = exponents(self.M)
        poly = sum(c * np.exp(k * z) for c, k in zip(self.coeffs, ks))
        return envelope(z, self.zeta) * poly

    def scaled(self, factor, label=None):
        return KhareMandalState(label or self.label, self.energy, factor * self.coeffs, self.M, self.zeta)


def pt_image(f):
    """``PT f`` as a function of (complex) ``z``: ``conj(f(conj(i pi/2 - z)))``."""

    def g(z):
        z = np.asarray(z, dtype=np.complex128)
        return np.conj(f(np.conj(0.5j * np.pi - z)))

    return g


def second_derivative(f, x, h=2e-3):
    """Sixth-order central difference of ``f`` at real points ``x``."""
    x = np.asarray(x, dtype=float)
    offsets = np.arange(-3, 4) * h
    vals = f(x[:, None] + offsets[None, :])
    return vals @ _STENCIL / h**2


def eigen_residual(state, x, h=2e-3):
    """``|H psi - E psi| / (|E| |psi|)`` over the sample points ``x``."""
    x = np.asarray(x, dtype=float)
    psi = state(x)
    h_psi = -second_derivative(state, x, h) + potential(x, state.M, state.zeta) * psi
    r = h_psi - state.energy * psi
    return float(np.linalg.norm(r) / (max(1.0, abs(state.energy)) * np.linalg.norm(psi)))


def _sector_eig(c, basis):
    """Eigenpairs of ``c`` restricted to the invariant span of ``basis`` columns."""
    restricted = np.linalg.lstsq(basis, c @ basis, rcond=None)[0]
    return restricted


class KhareMandalModel:
    """Closed-form eigenstates of ``H_M`` for ``M`` in {2, 3, 4}.

    ``M = 2``: ``psi_+ = Psi cosh x``, ``psi_- = Psi sinh x``.
    ``M = 3``: ``psi = Psi sinh 2x`` and ``Psi (A cosh 2x + i B)`` with real
    ``A, B`` for each of the two remaining energies (``psi_+`` is the
    higher one). ``M = 4``: two states from the even sector
    ``span{cosh 3x, cosh x}`` and their partners ``i PT psi``.
    """

    def __init__(self, M, zeta):
        if M not in SUPPORTED_M:
            raise UnknownM(f"M={M} not supported; expected one of {SUPPORTED_M}")
        self.M = int(M)
        self.zeta = float(zeta)
        self.ks = exponents(self.M)
        self.matrix = qes_matrix(self.M, self.zeta)
        self.degenerate = False

    def _vec(self, pairs):
        v = np.zeros(self.M, dtype=np.complex128)
        index = {int(k): j for j, k in enumerate(self.ks)}
        for k, c in pairs:
            v[index[k]] += c
        return v

    def _cosh(self, k):
        return self._vec([(k, 0.5), (-k, 0.5)])

    def _sinh(self, k):
        return self._vec([(k, 0.5), (-k, -0.5)])

    def _state(self, label, coeffs):
        c = self.matrix
        energy = np.vdot(coeffs, c @ coeffs) / np.vdot(coeffs, coeffs)
        return KhareMandalState(label, complex(energy), coeffs, self.M, self.zeta)

    def pt_partner(self, state, factor=1.0, label=None):
        """State with coefficients of ``factor * PT state`` (exact, in coefficient space)."""
        coeffs = factor * _pt_coefficients(state.coeffs, self.ks)
        return self._state(label or state.label + "*", coeffs)

    def states(self):
        if self.M == 2:
            return [self._state("psi_+", self._cosh(1)), self._state("psi_-", self._sinh(1))]
        if self.M == 3:
            return self._states_m3()
        return self._states_m4()

    def _states_m3(self):
        z = self.zeta
        if z * z >= 0.25 and not np.isclose(abs(z), 0.5, rtol=0, atol=1e-12):
            raise OutOfRegime(f"M=3 has three real levels only for zeta^2 < 1/4 (zeta={z})")
        psi = self._state("psi", self._sinh(2))
        basis = np.column_stack([self._cosh(2), self._vec([(0, 1j)])])
        sector = _sector_eig(self.matrix, basis)
        if np.linalg.norm(sector.imag) > 1e-12 * max(1.0, np.linalg.norm(sector)):
            raise AssertionError("even M=3 sector is not real in the (cosh 2x, i) basis")
        sector = sector.real
        tr, det = np.trace(sector), np.linalg.det(sector)
        disc = tr * tr / 4 - det
        if abs(disc) <= 1e-12 * max(1.0, tr * tr):
            # zeta = 1/2: the two levels merge into a Jordan block, one eigenvector survives
            self.degenerate = True
            e = tr / 2
            null = sector - e * np.eye(2)
            a, b = (-null[0, 1], null[0, 0]) if np.linalg.norm(null[0]) > 0 else (-null[1, 1], null[1, 0])
            ab = np.array([a, b]) / np.hypot(a, b)
            if ab[0] < 0:
                ab = -ab
            return [psi, self._state("varphi", basis @ ab)]
        w, v = np.linalg.eig(sector)
        order = np.argsort(w.real)[::-1]
        out = [psi]
        for label, j in zip(("psi_+", "psi_-"), order):
            ab = v[:, j].real / np.linalg.norm(v[:, j].real)
            if ab[0] < 0 or (ab[0] == 0 and ab[1] < 0):
                ab = -ab
            out.append(self._state(label, basis @ ab))
        return out

    def _states_m4(self):
        basis = np.column_stack([self._cosh(3), self._cosh(1)])
        sector = _sector_eig(self.matrix, basis)
        w, v = np.linalg.eig(sector)
        order = np.lexsort((w.imag, w.real))
        out = []
        for n, j in enumerate(order, start=1):
            coeffs = basis @ (v[:, j] / np.linalg.norm(v[:, j]))
            s = self._state(f"psi_{n}", coeffs)
            out.append(s)
            out.append(self.pt_partner(s, factor=1j, label=f"psi_{n}*"))
        return out

    def energies(self):
        """All ``M`` closed-form energies, sorted by (Re, Im)."""
        w = np.linalg.eigvals(self.matrix)
        return w[np.lexsort((w.imag, w.real))]


def _ratio(target, source):
    """Least-squares ``c`` with ``target ~ c source`` and the relative misfit."""
    c = np.vdot(source, target) / np.vdot(source, source)
    misfit = np.linalg.norm(target - c * source) / max(np.linalg.norm(target), 1e-300)
    return complex(c), float(misfit)


def khare_mandal_verify(M, zeta, sample_points=None, h=2e-3, tol_prop=1e-8, tol_real=1e-8):
    """Check the closed-form states of ``H_M`` and assign representations.

    (a) eigen-residuals from a 7-point stencil on the closed forms;
    (b) PT images computed pointwise with the complex-argument evaluator,
        matched against the states (flip relations / invariance);
    (c) ``(PT)^2`` from the double application, giving ``Omega`` and the kind.

    Returns a JSON-ready dict; ``representation`` is e.g. ``"Γ₋"``.

    Raises
    ------
    UnknownM
        ``M`` not in {2, 3, 4}.
    OutOfRegime
        ``M = 3`` with ``zeta^2 >= 1/4`` (``|zeta| = 1/2`` is accepted and
        reported as degenerate).
    """
    model = KhareMandalModel(M, zeta)
    states = model.states()
    x = np.linspace(-2.0, 2.0, 50) if sample_points is None else np.asarray(sample_points, dtype=float)
    samples = [s(x) for s in states]
    pt_samples = [pt_image(s)(x) for s in states]
    ptpt_samples = [pt_image(pt_image(s))(x) for s in states]

    entries = []
    for i, s in enumerate(states):
        best = min(((j,) + _ratio(pt_samples[i], samples[j]) for j in range(len(states))), key=lambda t: t[2])
        j, factor, misfit = best
        omega_sq, omega_misfit = _ratio(ptpt_samples[i], samples[i])
        entries.append(
            {
                "label": s.label,
                "energy": [s.energy.real, s.energy.imag],
                "eigen_residual": eigen_residual(s, x, h),
                "pt_partner": states[j].label,
                "pt_factor": [factor.real, factor.imag],
                "pt_misfit": misfit,
                "pt_squared": [omega_sq.real, omega_sq.imag],
                "pt_squared_misfit": omega_misfit,
                "_partner": j,
                "_factor": factor,
                "_omega_sq": omega_sq,
            }
        )

    blocks, gauge, flip_residuals, seen = [], [], [], set()
    for i, e in enumerate(entries):
        if i in seen:
            continue
        j = e["_partner"]
        om = e["_omega_sq"]
        s = states[i]
        if j == i:
            seen.add(i)
            if e["pt_misfit"] > tol_prop or abs(om - 1) > tol_prop:
                raise AssertionError(f"{s.label}: PT-invariant up to phase but (PT)^2 = {om}")
            theta = float(np.angle(e["_factor"]))
            if theta <= -np.pi + 1e-12:
                theta = np.pi
            phase = np.exp(0.5j * theta)
            fixed = s.scaled(phase, label=s.label if abs(phase - 1) < 1e-12 else f"{_phase_label(phase)}{s.label}")
            fixed_pt = pt_image(fixed)(x)
            res = float(np.max(np.abs(fixed_pt - fixed(x))))
            gauge.append({"label": fixed.label, "phase": [phase.real, phase.imag], "fixed_point_residual": res})
            flip_residuals.append(res)
            blocks.append({"kind": RepKind.GammaPlus1D.value, "states": [fixed.label], "energies": [e["energy"]], "omega_sq": [1.0, 0.0]})
            continue
        seen.update((i, j))
        if abs(om - 1) <= 1e-8:
            kind, omega = "plus", 1.0
        elif abs(om + 1) <= 1e-8:
            kind, omega = "minus", 1j
        else:
            kind, omega = "star", complex(np.sqrt(om))
        # Table relations: A|a> = conj(w)|b>, A|b> = w|a>
        partner = states[j]
        r1 = np.max(np.abs(pt_samples[i] - np.conj(omega) * samples[j]))
        r2 = np.max(np.abs(pt_samples[j] - omega * samples[i]))
        flip_residuals.extend([float(r1), float(r2)])
        real_e = abs(s.energy.imag) <= tol_real * max(1.0, abs(s.energy))
        rk = {
            ("plus", False): RepKind.GammaPlus2D,
            ("minus", False): RepKind.GammaMinus2D,
            ("star", False): RepKind.GammaStar2D,
            ("plus", True): RepKind.GammaPlusDeg,
            ("minus", True): RepKind.GammaMinusDeg,
            ("star", True): RepKind.GammaStarDeg,
        }[(kind, real_e)]
        blocks.append(
            {
                "kind": rk.value,
                "states": [s.label, partner.label],
                "energies": [e["energy"], entries[j]["energy"]],
                "omega_sq": [om.real, om.imag],
                "flip_residuals": [float(r1), float(r2)],
            }
        )

    double = [
        float(np.max(np.abs(ptpt_samples[i] - entries[i]["_omega_sq"] * samples[i]))) for i in range(len(states))
    ]
    for e in entries:
        for k in ("_partner", "_factor", "_omega_sq"):
            e.pop(k)
    eig_max = max(e["eigen_residual"] for e in entries)
    report = {
        "M": model.M,
        "zeta": model.zeta,
        "n_samples": int(x.size),
        "stencil_step": h,
        "states": entries,
        "blocks": blocks,
        "gauge_fixed": gauge,
        "representation": representation_string(b["kind"] for b in blocks),
        "checks": {
            "eigen_residual_max": eig_max,
            "flip_residual_max": max(flip_residuals) if flip_residuals else 0.0,
            "double_application_residual_max": max(double),
        },
        "degenerate": model.degenerate,
        "notes": [],
    }
    if model.degenerate:
        report["notes"].append(
            "zeta = 1/2: psi_+ and psi_- merge into one state; the second, independent "
            "PT-invariant solution is not constructed"
        )
    report["passed"] = bool(eig_max <= 1e-6 and report["checks"]["flip_residual_max"] <= 1e-10)
    return report


def _phase_label(phase):
    for value, text in ((1j, "i"), (-1j, "-i"), (-1, "-")):
        if abs(phase - value) < 1e-12:
            return text
    return f"({phase.real:.3g}{phase.imag:+.3g}i)"
