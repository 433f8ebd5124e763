# %% [markdown]
# # Kloosterman sums modulo a prime
#
# S(a, b; p) sums e((a c + b cbar)/p) over the units c mod p. It is always
# real because the terms for c and -c are conjugate.

# %%
import math

import numpy as np

from shortinv import kloosterman, kloosterman_base, kloosterman_matrix, weil_scan
from shortinv.modular_core import is_prime

print(kloosterman(1, 1, 7))
print(kloosterman(0, 3, 11).value)   # a Ramanujan sum, always -1

# %% [markdown]
# Only the product ab matters once a is a unit, so a single row
# S(1, t; p) holds every value. Two ways to build it:

# %%
p = 1009
naive = kloosterman_base(p, method="naive")
chirp = kloosterman_base(p, method="chirp")   # one prime-length DFT
np.max(np.abs(naive - chirp))

# %%
m = kloosterman_matrix(31)
a, b = 5, 17
m[a, b].real, naive[0], m[1, (a * b) % 31].real

# %% [markdown]
# ## Weil's bound, checked exhaustively
# |S(a, b; p)| <= 2 sqrt(p) whenever p does not divide b.

# %%
primes = [q for q in range(3, 200) if is_prime(q)]
scan = weil_scan(primes)
print(f"max |S| / 2 sqrt(p) over {len(primes)} primes: {scan['max_margin']:.5f}")

worst = max(scan["primes"], key=lambda r: r["margin"])
worst

# %%
# The normalised values S/(2 sqrt p) pile up like the Sato-Tate law on [-1, 1].
p = 1009
vals = kloosterman_base(p)[1:] / (2 * math.sqrt(p))
hist, _ = np.histogram(vals, bins=10, range=(-1, 1))
print(hist)
