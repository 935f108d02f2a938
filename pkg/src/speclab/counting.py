"""Counting bounds and sign-vector experiments.

Closed-form bounds on the number of sign vectors attainable by polynomial
systems, on connected components of sign-condition sets, and on zeros of
exponential sums, together with the exact 1-d enumeration and random
sampling machinery used to probe them.  All bound calculators work in the
log domain internally; logs are base 2 throughout.
"""

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

__all__ = [
    "PolySystem",
    "ExpSum",
    "warren_component_bound",
    "warren_thresholds",
    "enumerate_sign_vectors_1d",
    "sample_sign_vectors",
    "find_unattained_sequence",
    "khovanskii_cell_bound",
    "khovanskii_complement_bound",
    "khovanskii_floor",
    "count_exp_sum_zeros",
    "exp_sum_distance_floor",
]

_GCD_TOL = 1e-10
_ROOT_TOL = 1e-12
_CLUSTER_TOL = 1e-9


def _trim(coeffs):
    """Drop trailing (highest-order) zero coefficients; keep at least one."""
    c = np.atleast_1d(np.asarray(coeffs, dtype=float))
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        return c[:1]
    return c[: nz[-1] + 1]


def _dense_degree(table):
    """Max total degree of a nonzero entry in a dense coefficient table."""
    nz = np.nonzero(table)
    if nz[0].size == 0:
        return -1
    return int(max(sum(idx) for idx in zip(*nz)))


@dataclass(frozen=True)
class PolySystem:
    """A system of q dense real polynomials in n variables.

    For n = 1 each entry of ``polys`` is a 1-d ascending coefficient array.
    For n >= 2 each entry is a dense table of shape (d+1,)*n indexed by the
    per-coordinate exponents.
    """

    n: int
    polys: tuple = field()

    def __init__(self, n, polys):
        if n < 1:
            raise ValueError("need n >= 1")
        tables = tuple(np.asarray(p, dtype=float) for p in polys)
        if not tables:
            raise ValueError("empty system")
        for p in tables:
            if p.ndim != n:
                raise ValueError(f"coefficient table must have ndim == n == {n}")
            if not np.any(p):
                raise ValueError("zero polynomial in system")
        if max(_dense_degree(p) for p in tables) < 1:
            raise ValueError("system degree must be >= 1")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "polys", tables)

    @property
    def q(self):
        return len(self.polys)

    @property
    def d(self):
        return max(_dense_degree(p) for p in self.polys)

    def evaluate(self, points):
        """Evaluate all q polynomials at points of shape (m, n); returns (q, m)."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None] if self.n == 1 else pts[None, :]
        out = np.empty((self.q, pts.shape[0]))
        for row, table in enumerate(self.polys):
            res = np.broadcast_to(table, (pts.shape[0],) + table.shape)
            for axis in range(self.n):
                powers = pts[:, axis, None] ** np.arange(res.shape[1])
                res = np.einsum("mi...,mi->m...", res, powers)
            out[row] = res
        return out

    @classmethod
    def random(cls, n, q, d, rng):
        """Random system, coefficients uniform in [-1, 1], total degree <= d."""
        polys = []
        for _ in range(q):
            table = rng.uniform(-1.0, 1.0, size=(d + 1,) * n)
            if n > 1:
                total = np.sum(np.indices(table.shape), axis=0)
                table = np.where(total <= d, table, 0.0)
            polys.append(table)
        return cls(n, polys)


@dataclass(frozen=True)
class ExpSum:
    """psi(t) = sum_j P_j(t) exp(zeta_j t) on a compact interval.

    ``terms`` is a sequence of (coeffs, zeta) pairs where coeffs is a 1-d
    ascending coefficient array for P_j.  Exponents must be pairwise
    distinct and at least one P_j nonzero.
    """

    terms: tuple = field()
    interval: tuple = field()

    def __init__(self, terms, interval):
        packed = tuple((_trim(c), float(z)) for c, z in terms)
        if not packed:
            raise ValueError("empty sum")
        zetas = [z for _, z in packed]
        if len(set(zetas)) != len(zetas):
            raise ValueError("exponents must be pairwise distinct")
        if not any(np.any(c) for c, _ in packed):
            raise ValueError("all polynomial factors vanish")
        a, b = float(interval[0]), float(interval[1])
        if not a < b:
            raise ValueError("interval must be nondegenerate")
        object.__setattr__(self, "terms", packed)
        object.__setattr__(self, "interval", (a, b))

    @property
    def n(self):
        return len(self.terms)

    @property
    def degrees(self):
        return tuple(len(c) - 1 for c, _ in self.terms)

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        total = np.zeros_like(t)
        for coeffs, zeta in self.terms:
            total += npoly.polyval(t, coeffs) * np.exp(zeta * t)
        return total

    @classmethod
    def random_constant(cls, n, rng, interval=(-1.0, 1.0), zeta_box=3.0):
        """n-term sum with constant coefficients uniform in [-1, 1]."""
        while True:
            zetas = rng.uniform(-zeta_box, zeta_box, size=n)
            if len(set(zetas)) == n:
                break
        coeffs = rng.uniform(-1.0, 1.0, size=n)
        return cls([(np.array([c]), z) for c, z in zip(coeffs, zetas)], interval)


def warren_component_bound(n, d, q):
    """(4*e*d*q / n)^n, the cap on attainable sign vectors."""
    if min(n, d, q) < 1:
        raise ValueError("need n, d, q >= 1")
    return math.exp(n * (math.log(4 * math.e * d * q) - math.log(n)))


def warren_thresholds(n, d):
    """Sample counts (q_unattained, q_robust) = ceil(8n log2 d), ceil(18n log2 d).

    Beyond q_unattained some sign sequence is unattained; beyond q_robust a
    positive fraction is.  Degree d must be at least 2.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if d < 2:
        raise ValueError("need d >= 2 (log2 d must be positive)")
    return math.ceil(8 * n * math.log2(d)), math.ceil(18 * n * math.log2(d))


def _poly_gcd(a, b):
    """Approximate monic gcd by Euclid with remainder renormalisation."""
    a, b = _trim(a), _trim(b)
    if len(b) > len(a):
        a, b = b, a
    a = a / np.max(np.abs(a))
    b = b / np.max(np.abs(b))
    while len(b) > 1:
        r = _trim(npoly.polydiv(a, b)[1])
        m = float(np.max(np.abs(r)))
        if m < _GCD_TOL:
            return b
        a, b = b, r / m
    return b


def _squarefree_part(coeffs):
    """Deflate repeated roots: p / gcd(p, p'). Returns (part, had_multiplicity)."""
    p = _trim(coeffs)
    if len(p) <= 2:
        return p, False
    g = _poly_gcd(p, npoly.polyder(p))
    if len(g) <= 1:
        return p, False
    return _trim(npoly.polydiv(p, g)[0]), True


def _bisect_root(coeffs, lo, hi):
    flo = npoly.polyval(lo, coeffs)
    while hi - lo > _ROOT_TOL:
        mid = 0.5 * (lo + hi)
        fmid = npoly.polyval(mid, coeffs)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def _real_roots_1d(coeffs, resolution):
    """Roots of the square-free part over a Cauchy-bound bracketing grid."""
    part, deflated = _squarefree_part(coeffs)
    if len(part) <= 1:
        return [], deflated
    radius = 1.0 + np.max(np.abs(part[:-1])) / abs(part[-1])
    xs = np.linspace(-radius - 1.0, radius + 1.0, resolution)
    vals = npoly.polyval(xs, part)
    roots = [float(x) for x, v in zip(xs, vals) if v == 0.0]
    for i in range(len(xs) - 1):
        if vals[i] * vals[i + 1] < 0:
            roots.append(_bisect_root(part, xs[i], xs[i + 1]))
    return roots, deflated


def _cluster(values):
    out = []
    for v in sorted(values):
        if not out or v - out[-1] > _CLUSTER_TOL:
            out.append(v)
    return out


def _sign_at(system, x, span):
    # nudge off accidental near-zeros of some other polynomial
    vals = None
    for shift in (0.0, 1e-9 * span, -1e-9 * span, 1e-6 * span, -1e-6 * span):
        vals = system.evaluate(np.array([x + shift]))[:, 0]
        if np.all(np.abs(vals) > 1e-12):
            break
    return tuple(1 if v >= 0 else -1 for v in vals)


def enumerate_sign_vectors_1d(system, resolution=2000):
    """Exact attained sign vectors (sgn p_1, ..., sgn p_q) over open intervals.

    Isolates all real roots of every polynomial (square-free reduction, then
    bisection on sign changes over a bracketing grid of ``resolution``
    points, refined to 1e-12) and samples the sign vector once per maximal
    root-free interval.  Root multiplicity beyond machine resolution is
    flagged with a warning; the result is still returned.
    """
    if system.n != 1:
        raise ValueError("exact enumeration requires n == 1")
    roots = []
    for j, p in enumerate(system.polys):
        rj, deflated = _real_roots_1d(p, resolution)
        if deflated:
            warnings.warn(
                f"polynomial {j} has repeated roots; deflated approximately",
                stacklevel=2,
            )
        roots.extend(rj)
    roots = _cluster(roots)
    if not roots:
        samples = [0.0]
        span = 1.0
    else:
        span = max(1.0, roots[-1] - roots[0])
        samples = [roots[0] - 1.0]
        samples += [0.5 * (a + b) for a, b in zip(roots, roots[1:])]
        samples.append(roots[-1] + 1.0)
    return {_sign_at(system, x, span) for x in samples}


def sample_sign_vectors(system, samples, box, rng):
    """Attained sign vectors at uniform random points of [-box, box]^n.

    A lower estimate: the result is a subset of the true attained set.
    Points where any polynomial is within 1e-12 of zero are discarded.
    """
    if samples < 1:
        raise ValueError("need samples >= 1")
    pts = rng.uniform(-box, box, size=(samples, system.n))
    vals = system.evaluate(pts)
    keep = np.all(np.abs(vals) > 1e-12, axis=0)
    signs = np.where(vals[:, keep] > 0, 1, -1)
    return {tuple(int(s) for s in col) for col in signs.T}


def find_unattained_sequence(system, resolution=2000):
    """First sign sequence in {-1,+1}^q missing from the attained set, or None."""
    attained = enumerate_sign_vectors_1d(system, resolution)
    for eps in itertools.product((-1, 1), repeat=system.q):
        if eps not in attained:
            return eps
    return None


def khovanskii_cell_bound(n, k, d):
    """2^{k(k-1)/2} d^{n+k} n^{n+2k}: nonempty sign cells of k polynomials."""
    if n < 2 or d < 2 or k < 1:
        raise ValueError("need n, d >= 2 and k >= 1")
    log2_val = k * (k - 1) / 2 + (n + k) * math.log2(d) + (n + 2 * k) * math.log2(n)
    return 2.0 ** log2_val


def khovanskii_complement_bound(n, k, d, m):
    """2^{k(k-1)/2} (4*e*m*d*n)^{n+2k}: components of a union-of-zero-sets complement."""
    if n < 2 or d < 2 or k < 1 or m < 1:
        raise ValueError("need n, d >= 2 and k, m >= 1")
    log2_val = k * (k - 1) / 2 + (n + 2 * k) * math.log2(4 * math.e * m * d * n)
    return 2.0 ** log2_val


def khovanskii_floor(n, k, d, holder):
    """Approximation floor C(l,s) / (k^2 n log2(n) log2(d))^{l/s}.

    The constant is the uniform-norm bump constant with 38^{l/s} in place of
    8^{l/s}.  Arguments n = 1 or d = 1 are promoted to 2 so the logs stay
    positive.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    n = max(int(n), 2)
    d = max(int(d), 2)
    l, s = holder.l, holder.s
    p = holder.bump_power
    log_c = -(
        0.5 * math.log(s)
        + (l + 1) * math.log(2)
        + (l / s) * math.log(38)
        + p * math.log(p)
        + s * p * math.log(4 * (1 + math.e))
    )
    denom = k * k * n * math.log2(n) * math.log2(d)
    return math.exp(log_c - (l / s) * math.log(denom))


def count_exp_sum_zeros(exp_sum, scan_points):
    """Count zeros of psi on its interval by dense sign-change scanning.

    Each sign-change bracket is refined by bisection to width 1e-12.  A
    sample below 1e-13 in magnitude with no accompanying sign change is
    flagged as a suspected tangential zero and not counted.  The count is
    checked against the Descartes bound n - 1 + sum(p_j).
    """
    bound = exp_sum.n - 1 + sum(exp_sum.degrees)
    if scan_points < 10 * (exp_sum.n + sum(exp_sum.degrees)):
        raise ValueError("scan_points too small for the term count")
    a, b = exp_sum.interval
    xs = np.linspace(a, b, scan_points)
    vals = exp_sum.evaluate(xs)
    if not np.any(vals):
        raise ValueError("function is identically zero on the scan grid")

    tiny = (np.abs(vals) < 1e-13) & (vals != 0.0)
    for i in np.nonzero(tiny)[0]:
        if 0 < i < len(vals) - 1 and vals[i - 1] * vals[i] > 0 and vals[i] * vals[i + 1] > 0:
            warnings.warn(
                f"suspected tangential zero near t = {xs[i]:.6g}; not counted",
                stacklevel=2,
            )

    count = 0
    nonzero = np.nonzero(vals)[0]
    prev = nonzero[0]
    for i in nonzero[1:]:
        if vals[prev] * vals[i] < 0:
            if i == prev + 1:
                lo, hi, flo = xs[prev], xs[i], vals[prev]
                while hi - lo > 1e-12:
                    mid = 0.5 * (lo + hi)
                    fmid = exp_sum.evaluate(np.array([mid]))[0]
                    if flo * fmid <= 0:
                        hi = mid
                    else:
                        lo, flo = mid, fmid
            count += 1
        elif i > prev + 1:
            # grid-exact zero without a sign change: tangential touch
            warnings.warn(
                f"suspected tangential zero near t = {xs[prev + 1]:.6g}; not counted",
                stacklevel=2,
            )
        prev = i
    if count > bound:
        raise RuntimeError(
            f"scan found {count} zeros, above the admissible bound {bound}"
        )
    return count


def exp_sum_distance_floor(n, degrees, holder):
    """C_l / (n + sum p_j)^l, the uniform distance from f_eps to n-term sums."""
    from .bump import lower_bound_constant

    if holder.s != 1:
        raise ValueError("the distance floor is stated for s = 1 only")
    c_l = lower_bound_constant("uniform", holder)
    return c_l / (n + sum(degrees)) ** holder.l
