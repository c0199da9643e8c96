"""Anti-unitary operators in the factorised form ``A = U K``.

``K`` is entrywise complex conjugation in the computational basis and ``U``
is unitary, so ``A v = U conj(v)``. Every anti-unitary operator on a finite
dimensional space has this form.

Changing basis with a unitary ``V`` maps ``A`` to ``V A V^-1`` whose unitary
part is ``V U V^T`` -- *transpose*, not adjoint, because ``K`` turns the
``V^H`` on its right into ``V^T``. Using ``V U V^H`` silently produces an
operator that is no longer a symmetry of ``V H V^H``.
"""

from dataclasses import dataclass

import numpy as np

from . import defaults
from .errors import DimensionMismatch, NotUnitary
from .linalg import as_cmatrix, is_unitary, matrix_from_json, matrix_to_json

__all__ = [
    "AntiUnitaryOp",
    "apply",
    "square",
    "check_commutation",
    "conjugate_basis",
    "fixed_basis",
    "real_form",
    "antiunitary_to_json",
    "antiunitary_from_json",
]


@dataclass(frozen=True)
class AntiUnitaryOp:
    """Anti-unitary operator ``U K``.

    Parameters
    ----------
    unitary_part : array_like, shape (n, n)
        The unitary ``U``; checked on construction.
    label : str
        Free-form name, e.g. ``"PT"``.
    """

    unitary_part: np.ndarray
    label: str = "A"

    def __post_init__(self):
        u = as_cmatrix(self.unitary_part, "unitary_part")
        if np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) > 1e-12 * max(1, u.shape[0]):
            raise NotUnitary(f"unitary part of {self.label!r} is not unitary")
        u.setflags(write=False)
        object.__setattr__(self, "unitary_part", u)

    @property
    def dim(self):
        return self.unitary_part.shape[0]

    @classmethod
    def conjugation(cls, n, label="K"):
        """Pure complex conjugation, ``U = I``."""
        return cls(np.eye(n), label)

    def __call__(self, v):
        return apply(self, v)


def apply(a, v):
    """Return ``A v = U conj(v)``; ``v`` may be a vector or a matrix of column vectors."""
    v = np.asarray(v, dtype=np.complex128)
    if v.shape[0] != a.dim:
        raise DimensionMismatch(f"vector of length {v.shape[0]} for operator of dimension {a.dim}")
    return a.unitary_part @ np.conj(v)


def square(a):
    """The unitary ``A^2 = U conj(U)``."""
    u = a.unitary_part
    return u @ np.conj(u)


def check_commutation(h, a):
    """Relative residual ``|U conj(H) U^H - H|_F / max(1, |H|_F)``.

    Zero exactly when ``A H A^-1 = H``.
    """
    h = as_cmatrix(h, "H")
    if h.shape[0] != a.dim:
        raise DimensionMismatch(f"H has dimension {h.shape[0]}, operator {a.dim}")
    u = a.unitary_part
    transformed = u @ np.conj(h) @ u.conj().T
    return float(np.linalg.norm(transformed - h) / max(1.0, np.linalg.norm(h)))


def conjugate_basis(a, v):
    """Transport ``A`` to the basis rotated by unitary ``V``: ``V A V^-1``.

    The unitary part becomes ``V U V^T``.
    """
    v = as_cmatrix(v, "V")
    if v.shape[0] != a.dim:
        raise DimensionMismatch(f"V has dimension {v.shape[0]}, operator {a.dim}")
    if not is_unitary(v, defaults.TOL_UNITARY):
        raise NotUnitary("basis change V is not unitary")
    return AntiUnitaryOp(v @ a.unitary_part @ v.T, a.label)


def fixed_basis(a, tol=1e-10):
    """Orthonormal basis ``Q`` of ``A``-invariant vectors, ``A Q[:, j] = Q[:, j]``.

    Exists only when ``A^2 = +I``. Then ``U conj(Q) = Q``, and ``Q^H H Q``
    is real for every ``H`` commuting with ``A``.

    For a real symmetric involution ``U`` (a permutation such as parity) the
    closed form ``Q = exp(-i pi/4) (I + iU)/sqrt(2)`` is used; otherwise the
    vectors are built by Gram-Schmidt on ``v + A v``.
    """
    n = a.dim
    u = a.unitary_part
    if np.linalg.norm(square(a) - np.eye(n)) > tol * max(1, n):
        raise ValueError(f"{a.label}^2 is not the identity; no A-invariant basis exists")
    if np.all(u.imag == 0) and np.array_equal(u, u.T):
        return np.exp(-0.25j * np.pi) * (np.eye(n) + 1j * u) / np.sqrt(2.0)
    q = np.zeros((n, n), dtype=np.complex128)
    k = 0
    for j in range(n):
        for seed in (np.eye(n)[:, j], 1j * np.eye(n)[:, j]):
            if k == n:
                break
            z = seed + apply(a, seed)
            # orthogonal complements of A-fixed vectors are A-invariant
            z = z - q[:, :k] @ (q[:, :k].conj().T @ z)
            z = z - q[:, :k] @ (q[:, :k].conj().T @ z)
            nz = np.linalg.norm(z)
            if nz > 1e-6:
                q[:, k] = z / nz
                k += 1
    if k != n:
        raise ValueError("failed to build an A-invariant basis")
    return q


def real_form(h, a):
    """Real matrix ``Q^H H Q`` similar to ``H``, using :func:`fixed_basis`.

    Requires ``A^2 = +I`` and ``[H, A] = 0``. Real-arithmetic eigensolvers
    then return exactly real eigenvalues or exact conjugate pairs.
    """
    h = as_cmatrix(h, "H")
    q = fixed_basis(a)
    hr = q.conj().T @ h @ q
    scale = max(1.0, np.linalg.norm(h))
    if np.linalg.norm(hr.imag) > 1e-10 * scale:
        raise ValueError("H does not commute with A; its real form has an imaginary part")
    return np.ascontiguousarray(hr.real)


def antiunitary_to_json(a):
    return {"label": a.label, "unitary_part": matrix_to_json(a.unitary_part)}


def antiunitary_from_json(data):
    try:
        label = str(data.get("label", "A"))
        u = matrix_from_json(data["unitary_part"])
    except (KeyError, AttributeError, TypeError) as exc:
        raise ValueError(f"malformed anti-unitary JSON: {exc}") from exc
    return AntiUnitaryOp(u, label)
