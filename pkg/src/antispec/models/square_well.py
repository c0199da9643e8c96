"""PT-symmetric square well on [-1, 1].

    H = -d^2/dx^2 + V_Z(x),   V_Z = +iZ for x < 0,  -iZ for x > 0,

with Dirichlet walls psi(+-1) = 0. Two independent backends:

* finite differences on an even number of interior points (no grid point at
  x = 0, parity is the index reversal) -- :func:`build_square_well`;
* the exact matching condition for the piecewise solutions
  ``K_p sinh kappa(1-x)`` and ``K_n sinh lambda*(1+x)`` -- :func:`square_well_matching`.
"""

from dataclasses import dataclass

import numpy as np

from .. import defaults
from ..antiunitary import AntiUnitaryOp
from ..errors import NoRootInRegion

__all__ = [
    "SquareWellModel",
    "MatchingSolution",
    "build_square_well",
    "build_square_well_real",
    "matching_function",
    "square_well_matching",
    "hermitean_limit_levels",
]


@dataclass(frozen=True)
class SquareWellModel:
    Z: float
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 16:
            raise ValueError(f"grid size N must be an integer >= 16, got {self.N}")
        if self.N % 2:
            raise ValueError("N must be even so that x = 0 is not a grid point")
        if not np.isfinite(self.Z):
            raise ValueError("Z must be finite")

    @property
    def h(self):
        return 2.0 / (self.N + 1)

    @property
    def grid(self):
        return -1.0 + self.h * np.arange(1, self.N + 1)

    def potential(self):
        return np.where(self.grid < 0, 1j * self.Z, -1j * self.Z)


def hermitean_limit_levels(n):
    """Infinite-well levels (k pi / 2)^2, k = 1..n, on an interval of width 2."""
    k = np.arange(1, n + 1)
    return (k * np.pi / 2.0) ** 2


def _laplacian(N, h):
    t = np.zeros((N, N))
    i = np.arange(N)
    t[i, i] = 2.0
    t[i[:-1], i[:-1] + 1] = -1.0
    t[i[:-1] + 1, i[:-1]] = -1.0
    return t / h**2


def build_square_well(Z, N):
    """Central-difference Hamiltonian and its PT operator.

    Returns
    -------
    H : ndarray, shape (N, N), complex
    A : AntiUnitaryOp
        ``P K`` with ``P`` the index reversal; ``P conj(H) P = H`` holds
        exactly in floating point.
    """
    model = SquareWellModel(float(Z), int(N))
    h = _laplacian(model.N, model.h).astype(np.complex128)
    h[np.diag_indices(model.N)] += model.potential()
    parity = np.eye(model.N)[::-1]
    return h, AntiUnitaryOp(parity, "PT")


def build_square_well_real(Z, N):
    """Real matrix similar to :func:`build_square_well`'s ``H``.

    In the PT-invariant basis ``Q = exp(-i pi/4)(1 + iP)/sqrt(2)`` the
    Hamiltonian becomes ``T + Z D P`` with ``T`` the real Laplacian and
    ``D = diag(sign(x))``; this is what
    ``antispec.antiunitary.real_form`` computes, assembled directly in
    O(N^2) instead of two dense products.
    """
    model = SquareWellModel(float(Z), int(N))
    hr = _laplacian(model.N, model.h)
    sign = np.sign(model.grid)
    # (D P)[i, j] = sign(x_i) delta(i, N-1-j)
    rows = np.arange(model.N)
    hr[rows, model.N - 1 - rows] += model.Z * sign[rows]
    return hr


def _sinhc(a):
    """sinh(sqrt a)/sqrt a, entire in a."""
    a = np.asarray(a, dtype=np.complex128)
    s = np.sqrt(a)
    small = np.abs(a) < 1e-3
    safe = np.where(small, 1.0, s)
    out = np.sinh(safe) / safe
    series = 1 + a / 6 + a**2 / 120 + a**3 / 5040
    return np.where(small, series, out)


def _sinhc_prime(a):
    """d/da of sinh(sqrt a)/sqrt a."""
    a = np.asarray(a, dtype=np.complex128)
    small = np.abs(a) < 1e-3
    safe = np.where(small, 1.0, a)
    out = (np.cosh(np.sqrt(safe)) - _sinhc(safe)) / (2 * safe)
    series = 1 / 6 + a / 60 + a**2 / 1680 + a**3 / 90720
    return np.where(small, series, out)


def _cosh_sqrt(a):
    return np.cosh(np.sqrt(np.asarray(a, dtype=np.complex128)))


def matching_function(E, Z):
    """Matching determinant ``G(E)`` whose zeros are the eigenvalues.

    With ``kappa^2 = -(E + iZ)`` and ``lambda*^2 = -(E - iZ)``, continuity of
    ``psi`` and ``psi'`` at ``x = 0`` requires

        kappa cosh(kappa) sinh(lambda*) + lambda* cosh(lambda*) sinh(kappa) = 0.

    ``G`` is this product form divided by ``kappa lambda*``: it depends only
    on the squares (no branch choice) and has no spurious zeros at
    ``kappa = 0`` or ``lambda* = 0``. Returns ``(G, dG/dE)``.
    """
    E = np.asarray(E, dtype=np.complex128)
    ka2 = -(E + 1j * Z)
    la2 = -(E - 1j * Z)
    ck, cl = _cosh_sqrt(ka2), _cosh_sqrt(la2)
    sk, sl = _sinhc(ka2), _sinhc(la2)
    g = ck * sl + cl * sk
    dg_dka2 = 0.5 * sk * sl + cl * _sinhc_prime(ka2)
    dg_dla2 = ck * _sinhc_prime(la2) + 0.5 * sl * sk
    return g, -(dg_dka2 + dg_dla2)


@dataclass(frozen=True)
class MatchingSolution:
    """One eigenvalue of the well with its piecewise eigenfunction.

    ``psi(x) = K_p sinh(kappa (1 - x))`` for ``x > 0`` and
    ``K_n sinh(lambda_star (1 + x))`` for ``x < 0``.
    """

    E: complex
    Z: float
    kappa: complex
    lambda_star: complex
    K_p: complex
    K_n: complex
    residual: float

    def wavefunction(self, x):
        """Evaluate psi on real points (via sinhc so kappa = 0 is harmless)."""
        x = np.asarray(x, dtype=float)
        ka2, la2 = self.kappa**2, self.lambda_star**2
        right = self.K_p * self.kappa * (1 - x) * _sinhc(ka2 * (1 - x) ** 2)
        left = self.K_n * self.lambda_star * (1 + x) * _sinhc(la2 * (1 + x) ** 2)
        return np.where(x > 0, right, left)

    def pt_overlap(self, n_samples=201):
        """|<psi|PT psi>| / |psi|^2 on a symmetric grid; 1 for a PT-invariant state."""
        x = np.linspace(-1, 1, n_samples)
        psi = self.wavefunction(x)
        pt = np.conj(psi[::-1])
        return float(abs(np.vdot(psi, pt)) / np.vdot(psi, psi).real)


def _reconstruct(E, Z):
    ka2 = -(E + 1j * Z)
    la2 = -(E - 1j * Z)
    kappa = np.sqrt(ka2)
    lam = np.sqrt(la2)
    # basis: right u(x) = (1-x) sinhc(ka2 (1-x)^2), left v(x) = (1+x) sinhc(la2 (1+x)^2)
    u0, du0 = _sinhc(ka2), -_cosh_sqrt(ka2)
    v0, dv0 = _sinhc(la2), _cosh_sqrt(la2)
    m = np.array([[u0, -v0], [du0, -dv0]], dtype=np.complex128)
    _, sv, vh = np.linalg.svd(m)
    a, b = np.conj(vh[-1])
    scale = max(abs(a * u0), abs(b * v0), abs(a * du0), abs(b * dv0), 1e-300)
    residual = float((abs(a * u0 - b * v0) + abs(a * du0 - b * dv0)) / scale)
    # u = sinh(kappa(1-x))/kappa, so K_p = a/kappa (a when kappa = 0 in the limit form)
    k_p = a / kappa if abs(kappa) > 0 else a
    k_n = b / lam if abs(lam) > 0 else b
    return MatchingSolution(complex(E), float(Z), complex(kappa), complex(lam), complex(k_p), complex(k_n), residual)


def _newton(seeds, Z, max_iter=80, rtol=1e-14):
    e = np.array(seeds, dtype=np.complex128)
    converged = np.zeros(e.shape, dtype=bool)
    for _ in range(max_iter):
        g, dg = matching_function(e, Z)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dg != 0, g / dg, np.nan)
        step = np.where(converged, 0, step)
        e = e - step
        ok = np.isfinite(e)
        e = np.where(ok, e, np.nan)
        newly = ok & (np.abs(step) <= rtol * np.maximum(1.0, np.abs(e)))
        converged |= newly
        if np.all(converged | ~ok):
            break
    return e, converged


def square_well_matching(Z, region=(0.0, 100.0, None, None), grid=24, tol_cluster=1e-8, diagnostics=None):
    """All eigenvalues of the continuum well inside a rectangle of the E plane.

    Parameters
    ----------
    Z : float
        Coupling.
    region : (re_min, re_max, im_min, im_max)
        Search rectangle; ``None`` imaginary limits default to ``-(|Z|+1)``
        and ``|Z|+1``, which encloses the numerical range of ``H``.
    grid : int
        Seeds per side of the rectangle for the complex Newton iteration.
        The real axis is additionally scanned for sign changes of the
        (real-valued there) matching function.
    diagnostics : dict, optional
        Filled with ``seeds``, ``diverged`` and ``converged`` counts.

    Returns
    -------
    list of MatchingSolution, sorted by (Re E, Im E).

    Raises
    ------
    NoRootInRegion
    """
    Z = float(Z)
    re_min, re_max, im_min, im_max = region
    bound = abs(Z) + 1.0
    im_min = -bound if im_min is None else im_min
    im_max = bound if im_max is None else im_max
    if not (re_max > re_min and im_max >= im_min):
        raise ValueError(f"empty search region {region}")

    # offset grid: Newton from a real seed never leaves the real axis
    re_seeds = np.linspace(re_min, re_max, grid)
    im_seeds = im_min + (np.arange(grid) + 0.5) * (im_max - im_min) / grid
    seeds = (re_seeds[:, None] + 1j * im_seeds[None, :]).ravel()
    # real-axis brackets: G is real for real E
    xs = np.linspace(re_min, re_max, max(40 * grid, 400))
    gx = matching_function(xs, Z)[0].real
    flips = np.nonzero(np.sign(gx[:-1]) * np.sign(gx[1:]) <= 0)[0]
    seeds = np.concatenate([seeds, 0.5 * (xs[flips] + xs[flips + 1]) + 0j])
    # quadratic model at each real critical point of G: seeds E* +- sqrt(-2G/G''),
    # which catch two nearly merged real roots as well as a newborn complex pair
    dgx = matching_function(xs, Z)[1].real
    crit = np.nonzero(np.sign(dgx[:-1]) * np.sign(dgx[1:]) < 0)[0]
    if crit.size:
        lo, hi = xs[crit], xs[crit + 1]
        d_lo, d_hi = dgx[crit], dgx[crit + 1]
        e_star = lo - d_lo * (hi - lo) / (d_hi - d_lo)
        curvature = (d_hi - d_lo) / (hi - lo)
        g_star = matching_function(e_star, Z)[0].real
        offset = np.sqrt((-2 * g_star / curvature).astype(np.complex128))
        seeds = np.concatenate([seeds, e_star + offset, e_star - offset])

    roots, conv = _newton(seeds, Z)
    if diagnostics is not None:
        diagnostics.update(seeds=int(seeds.size), converged=int(conv.sum()), diverged=int((~conv).sum()))
    roots = roots[conv]
    inside = (
        (roots.real >= re_min)
        & (roots.real <= re_max)
        & (roots.imag >= im_min - 1e-12)
        & (roots.imag <= im_max + 1e-12)
    )
    roots = roots[inside]
    if roots.size == 0:
        raise NoRootInRegion(f"no eigenvalue found in {region} for Z={Z}")
    roots = roots[np.lexsort((roots.imag, roots.real))]
    unique = []
    for r in roots:
        if not any(abs(r - u) <= tol_cluster * max(1.0, abs(u)) for u in unique):
            unique.append(r)
    # one more polishing step on the de-duplicated roots
    polished, _ = _newton(unique, Z, max_iter=3)
    polished = np.where(np.isfinite(polished), polished, unique)
    # purely numerical imaginary parts on real roots
    real_like = np.abs(polished.imag) <= defaults.TOL_REAL * 1e-4 * np.maximum(1.0, np.abs(polished))
    polished = np.where(real_like, polished.real + 0j, polished)
    sols = [_reconstruct(e, Z) for e in polished]
    sols.sort(key=lambda s: (s.E.real, s.E.imag))
    return sols
