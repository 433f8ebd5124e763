# %% [markdown]
# # When does some pair of intervals contain a solution?
#
# Given J pairs (I1_j, I2_j), we ask whether some j has m n = 1 (mod p)
# with m in I1_j and n in I2_j. The three threshold formulas predict how
# large J must be. Here we compare them with brute force.

# %%
from shortinv import (SpacingParams, bound_audit, generate_family, minimal_J_search,
                      scales, solution_exists, threshold_for)

solution_exists((3, 5), (3, 5), 11)

# %%
p, H = 1009, round(1009**0.75)
sc = scales(H, H, p)
X = int(sc.x) + 2
{kind: threshold_for(kind, p, H, H, SpacingParams(X, 1))
 for kind in ("disjoint", "x_spaced", "arithmetic")}

# %% [markdown]
# The thresholds come from asymptotic statements with implied constant 1,
# so at this size they are far above what is needed. The smallest J that
# worked in every trial is called J_emp, and c_emp = J_emp / threshold.

# %%
rep = minimal_J_search("x_spaced", p, H, H, SpacingParams(X), 0.5, trials=10, seed=3)
print(rep.empirical_min_J, f"{rep.c_emp:.2e}", rep.saturated)

# %%
# Shorter intervals make the question harder.
for h in (8, 12, 20, 40):
    r = minimal_J_search("disjoint", p, h, h, SpacingParams(), 0.5, trials=10, seed=4)
    print(h, "saturated" if r.saturated else r.empirical_min_J)

# %% [markdown]
# ## Error-term audit
# Ratio of the measured error |T - J x y / p| to the predicted shape of the bound.

# %%
fam = generate_family("arithmetic", p, H, H, 8, SpacingParams(X, 1), seed=5)
for a in bound_audit(fam, sc):
    print(a)
