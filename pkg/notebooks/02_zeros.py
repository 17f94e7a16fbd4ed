# %% [markdown]
# # Zeros on the critical line
#
# The rotated function Z(t) is real, so zeros show up as sign changes.
# A separate winding-number count of the completed function certifies
# that none were missed.

# %%
import numpy as np

from lzerosum import character, principal_character, rotated_Z, scan_zeros, verify_completeness
from lzerosum.zeros import count_zeros_argument_principle

zeta = principal_character(1)
t = np.linspace(0, 40, 9)
print(np.column_stack([t, rotated_Z(zeta, t)]))

# %%
zl = verify_completeness(scan_zeros(zeta, 0, 100))
print(len(zl), "zeros, certified", zl.certified_count)
print(zl.gammas[:5])

# %% [markdown]
# Complex characters have different zeros above and below the real axis.
# Zeros of the conjugate character sit at the mirrored heights.

# %%
chi = character(5, 1)
up = scan_zeros(chi, 0, 40).gammas
down = scan_zeros(chi.conj(), 0, 40).gammas
print(chi.label, up[:4])
print(chi.conj().label, down[:4])
print(count_zeros_argument_principle(chi, 40.0), len(up))
