"""Exponentially scaled modified Bessel functions used by the curved backends.

Spherical functions follow the normalisation

    i_l(x) = sqrt(pi / 2x) I_{l+1/2}(x),      i_0(x) = sinh(x) / x
    k_l(x) = sqrt(2 / pi x) K_{l+1/2}(x),     k_0(x) = exp(-x) / x

so that the modified Helmholtz Green function expands as
``exp(-q|r-r'|)/(4 pi |r-r'|) = q sum_l i_l(q r<) k_l(q r>) sum_m Y_lm Y_lm^*``.
Every function returns the scaled value: ``exp(-x)`` times the growing
solutions and ``exp(+x)`` times the decaying ones.  Products of one growing
and one decaying function are therefore free of overflow.
"""

from __future__ import annotations

import numpy as np
from scipy import special as sp


def sph_i_scaled(l, x):
    """exp(-x) i_l(x)."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(np.pi / (2.0 * x)) * sp.ive(np.asarray(l) + 0.5, x)


def sph_k_scaled(l, x):
    """exp(x) k_l(x)."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(2.0 / (np.pi * x)) * sp.kve(np.asarray(l) + 0.5, x)


def sph_i_riccati_scaled(l, x):
    """exp(-x) (x i_l(x))' / x = exp(-x) [i_{l-1}(x) - l i_l(x) / x]."""
    x = np.asarray(x, dtype=float)
    return sph_i_scaled(np.asarray(l) - 1, x) - l * sph_i_scaled(l, x) / x


def sph_k_riccati_scaled(l, x):
    """exp(x) (x k_l(x))' / x = -exp(x) [k_{l-1}(x) + l k_l(x) / x]."""
    x = np.asarray(x, dtype=float)
    return -(sph_k_scaled(np.asarray(l) - 1, x) + l * sph_k_scaled(l, x) / x)


def cyl_i_scaled(m, x):
    """exp(-x) I_m(x)."""
    return sp.ive(m, x)


def cyl_k_scaled(m, x):
    """exp(x) K_m(x)."""
    return sp.kve(m, x)


def cyl_i_prime_scaled(m, x):
    """exp(-x) I_m'(x), from I_m' = (I_{m-1} + I_{m+1}) / 2."""
    return 0.5 * (sp.ive(np.asarray(m) - 1, x) + sp.ive(np.asarray(m) + 1, x))


def cyl_k_prime_scaled(m, x):
    """exp(x) K_m'(x), from K_m' = -(K_{m-1} + K_{m+1}) / 2."""
    return -0.5 * (sp.kve(np.asarray(m) - 1, x) + sp.kve(np.asarray(m) + 1, x))
