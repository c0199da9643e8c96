# %% [markdown]
# # Changing basis and the bi-orthonormal eigenbasis
#
# An anti-unitary operator A = U K moves to a new basis V as V U Vᵀ. The
# transpose matters: V U Vᴴ is not a symmetry of V H Vᴴ.

# %%
import numpy as np

from antispec import AntiUnitaryOp, biorthogonalize, check_commutation, classify, conjugate_basis, random_unitary

rng = np.random.default_rng(0)
n = 12
p = np.eye(n)[::-1]
b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
h = b + p @ np.conj(b) @ p
a = AntiUnitaryOp(p, "PT")

v = random_unitary(n, rng)
hv = v @ h @ v.conj().T
print("transported with V U V^T:", check_commutation(hv, conjugate_basis(a, v)))
print("naive V U V^H:           ", check_commutation(hv, AntiUnitaryOp(v @ p @ v.conj().T)))

# %%
print("original basis:", classify(h, a).summary_line())
print("rotated basis: ", classify(hv, conjugate_basis(a, v)).summary_line())

# %% [markdown]
# The left eigenvectors are dual to the right ones, and together they
# resolve the identity even though H is far from normal.

# %%
bs = biorthogonalize(h)
print("duality residual ", bs.duality_residual)
print("identity residual", bs.identity_residual)
print("condition number ", bs.cond)
