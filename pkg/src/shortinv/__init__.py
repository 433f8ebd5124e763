"""Numerical laboratory for modular inverses in short intervals.

Kloosterman sums modulo a prime, Gaussian-smoothed counts of solutions to
``x y = 1 (mod p)`` in families of interval pairs, their exact Poisson /
Kloosterman expansion, and empirical checks of existence thresholds.
"""

from .modular_core import (PrimeModulus, get_modulus, is_prime, mod_inverse,
                           balanced_residue, dist_nearest_int)
from .kloosterman import (kloosterman, kloosterman_row, kloosterman_base, weil_margin,
                          incomplete_kloosterman, mean_value_check,
                          kloosterman_matrix, weil_scan)
from .gaussian_smoothing import (GaussianScale, weight, scales, theta_tail, theta_tail_table,
                                 smoothed_interval_sum)
from .poisson_engine import (IntervalFamily, SumDecomposition, t_direct, s_decompose,
                             s_spectral, family_exponential_sum, geometric_bound_check,
                             poisson_residual)
from .existence_lab import (SpacingParams, ExperimentReport, solution_exists, x_spacing,
                            thm1_threshold, thm3_threshold, thm4_thresholds, generate_family,
                            minimal_J_search, bound_audit, threshold_for,
                            family_has_solution, family_capacity, disjoint_intervals)

__version__ = "0.1.0"
