"""Dense complex linear algebra for non-hermitean matrices.

Everything here works on plain ``numpy`` arrays: a "CMatrix" is a square
complex128 array with finite entries, a "CVector" a 1-d complex128 array.
Eigenvectors are stored as matrix columns.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from . import defaults
from .errors import DimensionMismatch, InvalidMatrix, NoConvergence, NotDiagonalizable

__all__ = [
    "as_cmatrix",
    "as_cvector",
    "eig_general",
    "cluster_eigenvalues",
    "BiorthogonalSystem",
    "biorthogonalize",
    "random_unitary",
    "spectral_distance",
    "is_unitary",
    "matrix_to_json",
    "matrix_from_json",
]


def as_cmatrix(a, name="matrix"):
    """Return ``a`` as a square, finite complex128 array (copying if needed)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise InvalidMatrix(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidMatrix(f"{name} has non-finite entries")
    return m


def as_cvector(v, dim=None, name="vector"):
    x = np.asarray(v, dtype=np.complex128)
    if x.ndim != 1:
        raise DimensionMismatch(f"{name} must be one-dimensional, got shape {x.shape}")
    if dim is not None and x.shape[0] != dim:
        raise DimensionMismatch(f"{name} has length {x.shape[0]}, expected {dim}")
    return x


def _geev(h, left):
    n = h.shape[0]
    lwork, info = lapack.zgeev_lwork(n, compute_vl=int(left), compute_vr=1)
    if info != 0:
        raise NoConvergence(f"zgeev workspace query failed (info={info})")
    lwork = max(int(np.real(lwork)), 2 * n, 1)
    w, vl, vr, info = lapack.zgeev(h, compute_vl=int(left), compute_vr=1, lwork=lwork)
    if info < 0:
        raise InvalidMatrix(f"zgeev rejected argument {-info}")
    if info > 0:
        raise NoConvergence(
            f"QR iteration failed; eigenvalues below index {info} did not converge", index=int(info)
        )
    return w, vl, vr


def _sort_order(w):
    # lexsort keys go last-major: sort by Re, then Im
    return np.lexsort((w.imag, w.real))


def eig_general(h):
    """Eigenvalues and right eigenvectors of a general complex matrix.

    Parameters
    ----------
    h : array_like, shape (n, n)

    Returns
    -------
    eigenvalues : ndarray, shape (n,)
        Sorted ascending by real part, then imaginary part.
    vectors : ndarray, shape (n, n)
        Unit-norm right eigenvectors, ``vectors[:, i]`` belongs to
        ``eigenvalues[i]``.

    Raises
    ------
    NoConvergence
        If LAPACK's QR iteration fails; ``index`` carries the LAPACK position.
    """
    h = as_cmatrix(h, "H")
    w, _, vr = _geev(h, left=False)
    order = _sort_order(w)
    w = w[order]
    vr = vr[:, order]
    vr = vr / np.linalg.norm(vr, axis=0)
    return w, vr


def cluster_eigenvalues(w, tol_degeneracy=defaults.TOL_DEGENERACY):
    """Group (sorted) eigenvalues closer than ``tol_degeneracy * max(1, rho)``.

    Clusters are the connected components of the "closer than" graph, so a
    chain of near-equal values ends up in a single cluster. Returns a list of
    integer index arrays in ascending order of their first member.
    """
    w = np.asarray(w, dtype=np.complex128)
    n = w.shape[0]
    if n == 0:
        return []
    scale = max(1.0, float(np.max(np.abs(w))))
    cut = tol_degeneracy * scale
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # eigenvalues are sorted by real part, so only a window needs checking
    re = w.real
    for i in range(n):
        j = i + 1
        while j < n and re[j] - re[i] <= cut:
            if abs(w[j] - w[i]) <= cut:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
            j += 1
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [np.array(g, dtype=int) for g in sorted(groups.values(), key=lambda g: g[0])]


def _readonly(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BiorthogonalSystem:
    """Right and left eigenvectors of a diagonalizable matrix with ``L^H R = I``.

    ``right[:, n]`` is |psi_n> (unit norm) and ``left[:, n]`` is the dual
    |psi^n>, an eigenvector of ``H^H`` with eigenvalue ``conj(E_n)``.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    cond: float
    clusters: tuple
    duality_residual: float
    identity_residual: float

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    @property
    def left_eigenvalues(self):
        return np.conj(self.eigenvalues)

    def projector(self, indices):
        """Spectral projector ``sum_n |psi_n><psi^n|`` over ``indices``."""
        idx = np.atleast_1d(indices)
        return self.right[:, idx] @ self.left[:, idx].conj().T


def biorthogonalize(h, tol_degeneracy=defaults.TOL_DEGENERACY, cond_max=defaults.COND_MAX):
    """Build the bi-orthonormal eigenbasis of a diagonalizable matrix.

    Left eigenvectors come out of the same LAPACK Schur decomposition as the
    right ones (they are eigenvectors of ``H^H``), so no eigenvector matrix is
    inverted. Degenerate clusters get an orthonormal right basis and the dual
    left basis of that cluster. A final near-identity correction pushes the
    duality residual down to rounding level.

    Raises
    ------
    NotDiagonalizable
        When the eigenvector condition number ``max_n |psi_n| |psi^n|``
        exceeds ``cond_max`` or the duality relations cannot be met to
        ``defaults.TOL_BIORTHO``.
    """
    h = as_cmatrix(h, "H")
    n = h.shape[0]
    w, vl, vr = _geev(h, left=True)
    order = _sort_order(w)
    w = w[order]
    right = vr[:, order] / np.linalg.norm(vr[:, order], axis=0)
    left = vl[:, order].copy()
    clusters = cluster_eigenvalues(w, tol_degeneracy)

    for idx in clusters:
        if idx.size == 1:
            i = idx[0]
            s = np.vdot(left[:, i], right[:, i])
            if abs(s) * cond_max < np.linalg.norm(left[:, i]):
                raise NotDiagonalizable(
                    f"left/right eigenvectors of E={w[i]:.6g} are nearly orthogonal", cond=np.inf
                )
            left[:, i] = left[:, i] / np.conj(s)
            continue
        q, r = np.linalg.qr(right[:, idx])
        diag = np.abs(np.diag(r))
        if diag.min() * cond_max < diag.max():
            raise NotDiagonalizable(
                f"eigenvectors of the cluster at E={w[idx[0]]:.6g} are linearly dependent",
                cond=np.inf,
            )
        right[:, idx] = q
        m = left[:, idx].conj().T @ q
        left[:, idx] = left[:, idx] @ np.linalg.inv(m).conj().T

    cond = float(np.max(np.linalg.norm(left, axis=0)))
    if not np.isfinite(cond) or cond > cond_max:
        raise NotDiagonalizable(f"eigenvector condition number {cond:.3e} exceeds {cond_max:.1e}", cond=cond)

    g = left.conj().T @ right
    left = left @ np.linalg.inv(g).conj().T
    eye = np.eye(n)
    duality = float(np.linalg.norm(left.conj().T @ right - eye))
    identity = float(np.linalg.norm(right @ left.conj().T - eye))
    cond = float(np.max(np.linalg.norm(left, axis=0)))
    if duality > defaults.TOL_BIORTHO or identity > defaults.TOL_BIORTHO:
        raise NotDiagonalizable(
            f"bi-orthonormality residuals {duality:.2e}/{identity:.2e} exceed "
            f"{defaults.TOL_BIORTHO:.0e} (cond={cond:.2e})",
            cond=cond,
        )
    return BiorthogonalSystem(
        eigenvalues=_readonly(w),
        right=_readonly(right),
        left=_readonly(left),
        cond=cond,
        clusters=tuple(_readonly(c) for c in clusters),
        duality_residual=duality,
        identity_residual=identity,
    )


def random_unitary(n, rng=None):
    """Haar-distributed unitary from the QR factorisation of a complex Gaussian matrix."""
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def spectral_distance(a, b):
    """Largest eigenvalue displacement after optimally matching two multisets.

    Sorting is not a safe comparison for complex spectra: a conjugate pair
    has equal real parts up to rounding, so its order is arbitrary.
    """
    from scipy.optimize import linear_sum_assignment

    a = np.asarray(a, dtype=np.complex128).ravel()
    b = np.asarray(b, dtype=np.complex128).ravel()
    if a.shape != b.shape:
        return np.inf
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def is_unitary(u, tol=defaults.TOL_UNITARY):
    u = np.asarray(u)
    return bool(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) <= tol * max(1, u.shape[0]) ** 0.5)


def matrix_to_json(h):
    """``{"dim": n, "entries": [[re, im], ...]}`` in row-major order."""
    h = as_cmatrix(h)
    flat = h.reshape(-1)
    return {"dim": int(h.shape[0]), "entries": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_json(data):
    try:
        n = int(data["dim"])
        entries = data["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMatrix(f"malformed matrix JSON: {exc}") from exc
    if n <= 0 or len(entries) != n * n:
        raise InvalidMatrix(f"matrix JSON has {len(entries)} entries, expected dim^2 = {n * n}")
    arr = np.empty(n * n, dtype=np.complex128)
    for k, e in enumerate(entries):
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise InvalidMatrix(f"entry {k} is not a [re, im] pair")
        arr[k] = complex(float(e[0]), float(e[1]))
    return as_cmatrix(arr.reshape(n, n))
