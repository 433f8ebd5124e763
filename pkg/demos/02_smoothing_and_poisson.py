# %% [markdown]
# # Gaussian smoothing and the Poisson expansion
#
# The counting sum T weights solutions of m nbar = 1 (mod p) by
# w(t) = exp(-pi t^2) at scales x, y slightly below H and K. Completing it
# to all integers gives S, and Poisson summation rewrites S as a
# Kloosterman-weighted sum of theta tails F_k(x).

# %%
import math

import numpy as np

from shortinv import generate_family, scales, s_decompose, theta_tail_table
from shortinv.modular_core import balanced_residue

p, H = 1009, 60
sc = scales(H, H, p, epsilon=0.5)
sc

# %% [markdown]
# ## Theta tails
# F_k(x) decays like exp(-|k| x / p). The largest ratio below should come
# out under 1.

# %%
F = theta_tail_table(p, sc.x)
k = np.array([balanced_residue(r, p) for r in range(p)])
ratio = F / (2 * np.exp(-np.abs(k) * sc.x / p))
print(f"F_0 = {F[0]:.3f}, p/x = {p / sc.x:.3f}, max ratio {ratio.max():.3f}")

# %% [markdown]
# ## T = S - S1 - S2, and S computed twice

# %%
fam = generate_family("general", p, H, H, 12, seed=1)
d = s_decompose(fam, sc)
for name, v in d.as_dict().items():
    print(f"{name:>16}: {v}")

# %%
# Recovers T from the decomposition. The residual checks direct S against spectral S.
print(abs(d.T - (d.S - d.S1 - d.S2)), d.residual)

# %% [markdown]
# With H about 20 log p the tails S1 and S2 are far below the main term
# J x y / p.

# %%
H = math.ceil(20 * math.log(p))
sc = scales(H, H, p)
d = s_decompose(generate_family("general", p, H, H, 10, seed=2), sc, spectral=False)
print(f"(S1 + S2) / main = {(d.S1 + d.S2) / max(1, d.main_term_paper):.2e}")
