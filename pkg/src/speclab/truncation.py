"""Taylor truncation machinery for entire families of exponential type.

Works with families f(x, zeta) obeying a growth envelope

    ||f(., zeta)|| <= A exp(u N^v) exp(b N^t ||zeta||_1^d),   |zeta_j| <= B N^r,

and provides the Cauchy coefficient bound, tail bound, truncation-degree
selection, and the resulting (N log N)^(-l/s) approximation floor.

Quantities like 2^(-10^4) underflow any float, so every bound here is
returned as a base-2 logarithm unless stated otherwise; "log" means log2
throughout this module.
"""

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from mpmath import mp

__all__ = [
    "EntireFamilyParams",
    "CoefficientOracle",
    "TailBound",
    "CoeffCheckReport",
    "coeff_bound",
    "multinomial_count",
    "tail_bound",
    "truncation_degree",
    "floor_lower_bound",
    "empirical_coeff_check",
]

_LOG2_E = math.log2(math.e)


@dataclass(frozen=True)
class EntireFamilyParams:
    """Growth-envelope parameters; every field must be >= 1.

    N is the family size; N = 1 is accepted for scalar sanity cases even
    though the floor bound itself only bites for N >= 2.
    """

    A: float
    u: float
    v: float
    b: float
    t: float
    d: float
    B: float
    r: float
    N: int

    def __post_init__(self):
        for name in ("A", "u", "v", "b", "t", "d", "B", "r"):
            if getattr(self, name) < 1:
                raise ValueError(f"parameter {name} must be >= 1")
        if self.N < 1 or self.N != int(self.N):
            raise ValueError("N must be an integer >= 1")


@dataclass(frozen=True)
class CoefficientOracle:
    """Exact Taylor-coefficient magnitudes ||c_k|| for one concrete family.

    ``fn`` maps a multi-index (length params.N tuple) to a nonnegative real.
    """

    fn: Callable
    params: EntireFamilyParams


class TailBound(NamedTuple):
    log2_value: float
    valid: bool


@dataclass(frozen=True)
class CoeffCheckReport:
    passed: bool
    checked: int
    worst_margin_log2: float
    worst_index: tuple
    violations: tuple


def coeff_bound(params, total_degree):
    """log2 of the Cauchy bound on ||c_k|| at |k| = total_degree.

    The bound is A e^(u N^v) (e b d N^(d+t) / |k|)^(|k|/d); total_degree 0
    gives just the prefactor A e^(u N^v).
    """
    if total_degree < 0:
        raise ValueError("total_degree must be >= 0")
    p = params
    prefactor = math.log2(p.A) + p.u * p.N ** p.v * _LOG2_E
    if total_degree == 0:
        return prefactor
    k = float(total_degree)
    radius_term = math.log2(math.e * p.b * p.d) + (p.d + p.t) * math.log2(p.N)
    return prefactor + (k / p.d) * (radius_term - math.log2(k))


def multinomial_count(total, vars):
    """Number of multi-indices k in N^vars with k_1 + ... + k_vars = total.

    Exact integer arithmetic, never overflows.
    """
    if total < 0 or vars < 1:
        raise ValueError("need total >= 0 and vars >= 1")
    return math.comb(total + vars - 1, vars - 1)


def tail_bound(params, K):
    """Remainder bound A e^(u N^v) 2^(-K) past total degree K, as a log2.

    ``valid`` records whether K clears the regime in which the geometric
    tail argument applies: K >= e b d 2^((4e+1)d) B^d N^(d(r+1)+t) and
    K >= N.  The value is returned either way.
    """
    if K < 1:
        raise ValueError("need K >= 1")
    p = params
    log2_value = math.log2(p.A) + p.u * p.N ** p.v * _LOG2_E - K
    log2_threshold = (
        math.log2(math.e * p.b * p.d)
        + (4 * math.e + 1) * p.d
        + p.d * math.log2(p.B)
        + (p.d * (p.r + 1) + p.t) * math.log2(p.N)
    )
    valid = math.log2(K) >= log2_threshold and K >= p.N
    return TailBound(log2_value, valid)


def truncation_degree(params, holder, C):
    """Smallest admissible truncation degree K for error budget constant C.

    K = ceil( e b u d 2^((4e+1)d) B^d (1 + l/s)^2 log2(4A/C) N^(d(r+1)+v+t) ).
    Evaluated at 50 decimal digits so the ceiling is exact.
    """
    if not 0 < C <= 1:
        raise ValueError("need 0 < C <= 1")
    p = params
    with mp.workdps(50):
        val = (
            mp.e
            * mp.mpf(p.b)
            * mp.mpf(p.u)
            * mp.mpf(p.d)
            * mp.power(2, (4 * mp.e + 1) * mp.mpf(p.d))
            * mp.power(p.B, p.d)
            * (1 + mp.mpf(holder.l) / holder.s) ** 2
            * (mp.log(4 * mp.mpf(p.A) / mp.mpf(C)) / mp.log(2))
            * mp.power(p.N, p.d * (p.r + 1) + p.v + p.t)
        )
        return int(mp.ceil(val))


def floor_lower_bound(params, holder, case):
    """Approximation floor C' / (N log2 N)^(l/s) for the truncated family."""
    from .bump import analytic_floor_constant

    if params.N < 2:
        raise ValueError("the floor is stated for N >= 2")
    c_prime = analytic_floor_constant(case, holder, params)
    return c_prime / (params.N * math.log2(params.N)) ** (holder.l / holder.s)


def _multi_indices(vars, total):
    if vars == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _multi_indices(vars - 1, total - head):
            yield (head,) + rest


def empirical_coeff_check(oracle, max_total_degree):
    """Compare exact coefficient magnitudes against coeff_bound, all |k| <= cap.

    Returns a report with the worst log2 margin (bound minus actual; positive
    means the bound holds) and any offending multi-indices.  Violations go in
    the report rather than raising.
    """
    if max_total_degree < 0:
        raise ValueError("need max_total_degree >= 0")
    params = oracle.params
    worst_margin = math.inf
    worst_index = None
    violations = []
    checked = 0
    for total in range(max_total_degree + 1):
        bound = coeff_bound(params, total)
        for k in _multi_indices(params.N, total):
            value = float(oracle.fn(k))
            if value < 0:
                raise ValueError(f"oracle returned a negative magnitude at {k}")
            checked += 1
            if value == 0.0:
                continue
            margin = bound - math.log2(value)
            if margin < worst_margin:
                worst_margin = margin
                worst_index = k
            if margin < 0:
                violations.append(k)
    return CoeffCheckReport(
        passed=not violations,
        checked=checked,
        worst_margin_log2=worst_margin,
        worst_index=worst_index,
        violations=tuple(violations),
    )
