"""Basis-agnostic operator algebra of the multiple-scattering expansion.

All functions act on small dense blocks (typically 4x4 or 2x2 per mode) and
broadcast over leading stack axes, so a whole grid of modes can be handled by
one call.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import EnergyBreakdown, MseOrder, NM_EV, Units, matsubara_kappa
from .quadrature import QuadratureConfig, integrate_semi_infinite


class SingularOperatorError(ArithmeticError):
    """Raised when 1 - K is singular or det(1 - N) is not positive."""


def neumann_inverse(K, order: int):
    """Partial Neumann sum  sum_{p=0}^{order} K^p."""
    K = np.asarray(K, dtype=float)
    if order < 0:
        raise ValueError("order must be non-negative")
    eye = np.broadcast_to(np.eye(K.shape[-1]), K.shape)
    total = eye.copy()
    power = eye
    for _ in range(order):
        power = power @ K
        total = total + power
    return total


def exact_inverse(K, label: str = "body"):
    """(1 - K)^-1 by LU solve; raises SingularOperatorError if singular."""
    K = np.asarray(K, dtype=float)
    eye = np.broadcast_to(np.eye(K.shape[-1]), K.shape)
    try:
        inv = np.linalg.solve(eye - K, eye)
    except np.linalg.LinAlgError as exc:
        raise SingularOperatorError(f"1 - K is singular for {label}") from exc
    if not np.all(np.isfinite(inv)):
        raise SingularOperatorError(f"1 - K is singular for {label}")
    return inv


def char_coefficients(N):
    """Elementary symmetric functions c_1..c_n of the eigenvalues of N.

    Computed from sums of principal minors so that they keep full relative
    accuracy when N is tiny (det(1 - N) = sum_k (-1)^k c_k).
    """
    N = np.asarray(N, dtype=float)
    n = N.shape[-1]
    coeffs = []
    for size in range(1, n + 1):
        c = 0.0
        for idx in itertools.combinations(range(n), size):
            sub = N[..., idx, :][..., :, idx]
            c = c + (np.linalg.det(sub) if size > 1 else sub[..., 0, 0])
        coeffs.append(c)
    return coeffs


def logdet_one_minus(N):
    """ln det(1 - N) with full relative accuracy for small N."""
    coeffs = char_coefficients(N)
    x = sum(((-1) ** (i + 1)) * c for i, c in enumerate(coeffs))
    x = np.asarray(x)
    if np.any(x <= -1.0) or not np.all(np.isfinite(x)):
        raise SingularOperatorError("det(1 - N) is not positive")
    return np.log1p(x)


def trace_powers(N, count: int):
    """Tr N^j for j = 1..count, stacked on the last axis."""
    N = np.asarray(N, dtype=float)
    out = []
    power = N
    for _ in range(count):
        out.append(np.trace(power, axis1=-2, axis2=-1))
        power = power @ N
    return np.stack(out, axis=-1)


def single_body_inverse(K, l, label="body"):
    """Exact (l is None) or order-l Neumann approximation of (1 - K)^-1."""
    return exact_inverse(K, label) if l is None else neumann_inverse(K, l)


@dataclass
class RoundTripResult:
    matrix: np.ndarray
    logdet_one_minus: np.ndarray


def round_trip(K11, K12, K22, K21, inner: MseOrder | int | None = None, inner2="exact") -> RoundTripResult:
    """Round-trip operator N = (1-K11)^-1 K12 (1-K22)^-1 K21 and ln det(1-N).

    Parameters
    ----------
    inner : MseOrder, int or None
        Neumann order applied to body 1 (``None`` or an exact order keeps the
        inverse exact).
    inner2 : {"exact", "same"} or int
        Treatment of body 2: exact inverse, the same order as body 1, or an
        explicit Neumann order.
    """
    l1 = inner.l if isinstance(inner, MseOrder) else inner
    if inner2 == "exact":
        l2 = None
    elif inner2 == "same":
        l2 = l1
    else:
        l2 = int(inner2)
    X1 = single_body_inverse(K11, l1, "body 1")
    X2 = single_body_inverse(K22, l2, "body 2")
    N = X1 @ np.asarray(K12) @ X2 @ np.asarray(K21)
    return RoundTripResult(N, logdet_one_minus(N))


def mode_energy(N, k: int | None):
    """Per-mode energy integrand ln det(1-N), or its (k+1)-term expansion
    -sum_{j=1}^{k+1} Tr N^j / j."""
    if k is None:
        return logdet_one_minus(N)
    tr = trace_powers(N, k + 1)
    j = np.arange(1, k + 2)
    return -np.sum(tr / j, axis=-1)


def mode_energy_derivative_factor(N, k: int | None):
    """Tr[(1-N)^-1 N] or sum_{j=1}^{k+1} Tr N^j.

    When N scales as exp(-2 s0 d) the distance derivative of
    :func:`mode_energy` equals ``2 s0`` times this factor.
    """
    N = np.asarray(N, dtype=float)
    if k is None:
        eye = np.broadcast_to(np.eye(N.shape[-1]), N.shape)
        return np.trace(np.linalg.solve(eye - N, N), axis1=-2, axis2=-1)
    return np.sum(trace_powers(N, k + 1), axis=-1)


def block_eigenvalues(K):
    """Eigenvalues of a real block sorted by descending modulus, then by
    descending real part (so a pair +lambda, -lambda appears in that order)."""
    vals = np.linalg.eigvals(np.asarray(K, dtype=float))
    vals = np.where(np.abs(vals.imag) < 1e-15 * np.maximum(1.0, np.abs(vals)), vals.real + 0j, vals)
    order = np.lexsort((-vals.imag, -vals.real, -np.round(np.abs(vals), 12)))
    return vals[order]


def pairing_defect(eigs) -> float:
    """Distance between an eigenvalue multiset and its negation."""
    eigs = np.asarray(eigs)
    neg = -eigs
    used = np.zeros(len(eigs), dtype=bool)
    worst = 0.0
    for v in eigs:
        d = np.abs(neg - v)
        d[used] = np.inf
        j = int(np.argmin(d))
        used[j] = True
        worst = max(worst, float(d[j]))
    return worst


def matsubara_sum(term, temperature: float, cfg: QuadratureConfig = QuadratureConfig(),
                  n_max: int = 100000, term0=None, units: Units = NM_EV, min_terms: int = 3) -> EnergyBreakdown:
    """Primed Matsubara sum k_B T [1/2 term(0) + sum_{n>=1} term(kappa_n)].

    Parameters
    ----------
    term : callable
        ``term(kappa)`` for kappa > 0.  May return an array; the stopping
        test then uses the largest component.
    term0 : float, array or None
        Value of the n = 0 term (for integrands singular at kappa = 0 the
        caller supplies it from the static formulation).  If None, ``term(0)``
        is called.
    """
    kT = units.thermal_energy(temperature)
    if not kT > 0:
        raise ValueError("temperature must be positive")
    first = term(0.0) if term0 is None else term0
    first = np.asarray(first, dtype=float)
    partial = 0.5 * first
    terms = [(0, 0.0, first)]
    small_run = 0
    converged = False
    last = np.abs(first)
    tail_est = float(np.max(last))
    for n in range(1, n_max + 1):
        kappa = float(matsubara_kappa(n, temperature, units))
        value = np.asarray(term(kappa), dtype=float)
        partial = partial + value
        terms.append((n, kappa, value))
        prev, last = float(np.max(last)), np.abs(value)
        # geometric estimate of the remaining tail; at low temperature the
        # ratio is close to 1 and a single small term says little
        ratio = float(np.max(last)) / prev if prev > 0 else 0.0
        tail_est = float(np.max(last)) * ratio / (1.0 - ratio) if ratio < 1.0 else np.inf
        scale = np.max(np.abs(partial))
        if tail_est <= cfg.rel_tol * scale or np.max(last) <= cfg.abs_tol:
            small_run += 1
        else:
            small_run = 0
        if small_run >= min_terms:
            converged = True
            break
    total = kT * partial
    tail = float(kT * max(np.max(last), tail_est))
    if total.ndim == 0:
        total = float(total)
        terms = [(n, k, float(v)) for n, k, v in terms]
    return EnergyBreakdown(terms, total, tail, converged)


def zero_temperature_integral(term, cfg: QuadratureConfig = QuadratureConfig(), scale: float = 1.0,
                              units: Units = NM_EV, mapping: str = "rational", vectorized: bool = False) -> EnergyBreakdown:
    """(hbar/2 pi) int_0^inf d xi term = (hbar c / 2 pi) int_0^inf d kappa term(kappa).

    ``scale`` is the kappa scale used by the change of variables (for plates
    1/(2d) is natural).  Set ``vectorized`` if ``term`` accepts an array.
    """
    if vectorized:
        f = term
    else:
        def f(kappas):
            return np.array([term(float(x)) for x in kappas])
    res = integrate_semi_infinite(f, scale, cfg, mapping)
    pref = units.hbar_c / (2.0 * math.pi)
    total = pref * res.value
    if np.ndim(total) == 0:
        total = float(total)
    return EnergyBreakdown([], total, pref * res.error, res.converged)
