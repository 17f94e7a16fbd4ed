# %% [markdown]
# # Characters and L-values
#
# Characters mod q are exponent vectors on fixed generators of the unit
# group. Values, conjugates and conductors come from integer arithmetic.

# %%
import numpy as np

from lzerosum import character, enumerate_characters, gauss_sum, l_value, primitive_characters
from lzerosum.lfunc import delta_factor

for chi in enumerate_characters(12):
    print(chi.label, "conductor", chi.conductor, "parity", chi.kappa, "values", np.round(chi.values, 3))

# %% [markdown]
# Gauss sums of primitive characters have modulus sqrt(q).

# %%
for q in [5, 7, 8]:
    for chi in primitive_characters(q):
        tau = complex(gauss_sum(chi))
        print(chi.label, np.round(tau, 6), abs(tau) ** 2)

# %% [markdown]
# L(1, chi_4) is Leibniz's series; on the critical line the functional
# equation factor has modulus one.

# %%
chi4 = character(4, 1)
print(l_value(chi4, 1).value, np.pi / 4)
for t in [10.0, 100.0, 1000.0]:
    print(t, abs(delta_factor(0.5 + 1j * t, chi4).value))
