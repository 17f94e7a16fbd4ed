# %% [markdown]
# # Sums of L' over zeros
#
# The sum of L'(rho, chi) over zeros up to height T is compared with its
# main term. Heights are moved to the midpoint of the surrounding gap
# between zeros, and every row is certified.

# %%
from lzerosum import character, compare, constants, principal_character

print(constants(1))
print(constants(12))

# %%
rep = compare(principal_character(1), [100, 200, 500, 1000])
for r in rep.rows:
    print(f"T={r.T:9.3f} n={r.n_zeros:4d} sum={r.empirical_sum:.4f} M={r.main_term:.4f} |R|/M={r.relative_remainder:.4f}")
print("fitted envelope constant", rep.envelope_constant, "log-log slope", rep.growth_exponent)

# %% [markdown]
# For a complex character the imaginary part of the sum stays small
# relative to the (real) main term.

# %%
rep = compare(character(5, 1), [100, 300])
for r in rep.rows:
    print(f"T={r.T:9.3f} sum={r.empirical_sum:.4f} M={r.main_term:.4f} imag fraction={r.imag_fraction:.4f}")
