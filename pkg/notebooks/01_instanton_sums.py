# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Instanton sums by localization
#
# The coefficient `alpha_n` of the partition function is a sum over r-tuples
# of Young diagrams of total size n. Each tuple contributes the product of its
# matter weights divided by the product of its tangent weights. This notebook
# computes a few coefficients, checks the rank-one closed form, and verifies
# the wall-crossing formula in both modes.

# %%
from fractions import Fraction

from nekrasov.localization import Context, alpha_n, fixed_point_weights
from nekrasov.partitions import enumerate_tuples, tuple_literal
from nekrasov.series import assemble_Z, binom_pow
from nekrasov.wallcross import u_r, verify_even, verify_main

# %% [markdown]
# ## Fixed points and their weights
#
# For rank 2 and n = 2 there are five fixed points. Each has 2rn = 8 tangent
# weights and, with four flavours, 8 matter weights.

# %%
ctx = Context(r=2, nf=4)
for vec_y in enumerate_tuples(2, 2):
    w = fixed_point_weights(ctx, vec_y)
    print(f"{tuple_literal(vec_y):10} tangent={w.tangent_count} matter={w.matter_count}")

# %% [markdown]
# ## Rank one: `Z = (1 + q)^{alpha_1}`
#
# In rank one the whole series is a binomial power of its first coefficient.

# %%
c1 = Context(r=1, nf=2)
a1 = alpha_n(c1, 1)
print("alpha_1 =", a1.to_str())
z = assemble_Z(c1, 4)
print(all(z[n] == c for n, c in enumerate(binom_pow(-1, a1, 4).coeffs)))

# %% [markdown]
# ## The wall-crossing formula
#
# `beta_n` is `alpha_n` with `a` and `m` negated. Their difference is a
# falling-factorial expression in
# `u_r = (e1+e2)(2 sum a + sum m)/(e1 e2)` and the lower coefficients. In
# symbolic mode both sides are normalized exactly and cross-multiplied.

# %%
print("u_1 =", u_r(c1).to_str())
for n in range(1, 5):
    report = verify_main(c1, n)
    print(n, report.verdict, f"{report.duration_s:.2f}s")

# %% [markdown]
# Higher rank is checked at seeded random rational points instead. Every side
# is evaluated exactly as a `Fraction`, so a mismatch is definitive and
# agreement is probabilistic evidence.

# %%
report = verify_main(Context(3, 6), 3, mode="randomized", points=5, seed=1)
print(report.verdict, report.certificate["points"][0])

# %% [markdown]
# The same statement, packaged as a series identity: flipping the sign of
# `e1, e2` multiplies `Z` by `(1 - (-1)^r q)^{u_r}`.

# %%
print(verify_even(Context(2, 4), 3, mode="randomized", points=5).verdict)

# %% [markdown]
# ## A sampled value
#
# `alpha_n` can be evaluated at a point without expanding anything.

# %%
from nekrasov.localization import alpha_value

point = [Fraction(1, 3), Fraction(-2, 5), Fraction(7), Fraction(3, 2), Fraction(-4)]
print(alpha_value(c1, 6, point), alpha_n(c1, 6).evaluate(point))
