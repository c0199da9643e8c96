# %% [markdown]
# # Closed-form states of the Khare-Mandal potential
#
# H_M = p² - (ζ cosh 2x - iM)². Here PT reflects about the point iπ/2, so
# the eigenfunctions have to be evaluated at complex arguments.

# %%
import numpy as np

from antispec.models import KhareMandalModel, khare_mandal_verify
from antispec.models.khare_mandal import pt_image

x = np.linspace(-2, 2, 50)

# %% [markdown]
# M = 2: the two states form a Kramers-like pair. PT maps one onto the
# other with a factor of ∓i and squares to -1.

# %%
psi_p, psi_m = KhareMandalModel(2, 0.3).states()
print("energies:", psi_p.energy, psi_m.energy)
print("max |PT psi_+ + i psi_-| =", np.max(np.abs(pt_image(psi_p)(x) + 1j * psi_m(x))))
print("max |PT PT psi_+ + psi_+| =", np.max(np.abs(pt_image(pt_image(psi_p))(x) + psi_p(x))))

# %% [markdown]
# The verifier bundles these checks and names the representation.

# %%
for M, zeta in ((2, 0.3), (3, 0.3), (4, 0.3), (2, 0.0)):
    r = khare_mandal_verify(M, zeta, x)
    print(f"M={M} zeta={zeta}: {r['representation']:14s} eigen residual {r['checks']['eigen_residual_max']:.1e}")

# %% [markdown]
# For M = 3 all three levels are real while ζ² < 1/4. Two of the states
# pick up a sign under PT, and multiplying them by i makes them invariant.

# %%
r = khare_mandal_verify(3, 0.3, x)
for s in r["states"]:
    print(f"{s['label']:6s} E = {s['energy'][0]:.6f}  PT factor {complex(*s['pt_factor']):.3f}")
for g in r["gauge_fixed"]:
    print(f"gauge fixed {g['label']:8s} residual {g['fixed_point_residual']:.1e}")
