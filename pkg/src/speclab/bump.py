"""Hölder-ball bumps and the explicit lower-bound constants built from them.

The compact under study is the unit ball Lambda_{l,s} of the Hölder class on
the cube [0,1]^s: derivatives up to order m bounded by 1, order-m derivatives
alpha-Hölder with constant 1, where l = m + alpha. The building block is the
polynomial bump

    g(x) = prod_j (x_j (1 - x_j))^(floor(l)+1),

scaled into each cell of an r^s tiling of the cube with a chosen sign per
cell. The tiled function f_eps oscillates with sup norm
1/(2 M 4^{s(floor(l)+1)} r^l) while staying inside Lambda_{l,s}; both facts
are what the closed-form constants C_inf, C_L1 and their analytic-family
counterparts C' hinge on.

All "log" in the constant formulas is base 2.
"""

import math
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Sequence

import numpy as np

__all__ = [
    "HolderClass",
    "BumpSpec",
    "MembershipReport",
    "eval_g",
    "norm_constant_m",
    "eval_f_eps",
    "f_eps_sup_norm",
    "verify_holder_membership",
    "lower_bound_constant",
    "analytic_floor_constant",
]

_ONE_PLUS_E = 1.0 + math.e


@dataclass(frozen=True)
class HolderClass:
    """Smoothness class parameters: l = m + alpha on the s-cube.

    m is defined as -floor(-l) - 1, so integer l gives m = l - 1 and
    alpha = 1 (the Lipschitz-type endpoint), while fractional l gives
    m = floor(l) and alpha = l - m.
    """

    l: float
    s: int

    def __post_init__(self):
        if not (self.l > 0):
            raise ValueError(f"smoothness l must be positive, got {self.l}")
        if not (isinstance(self.s, (int, np.integer)) and self.s >= 1):
            raise ValueError(f"dimension s must be an integer >= 1, got {self.s}")

    @property
    def m(self) -> int:
        return -math.floor(-self.l) - 1

    @property
    def alpha(self) -> float:
        return self.l - self.m

    @property
    def bump_power(self) -> int:
        """Exponent floor(l)+1 carried by each coordinate factor of g."""
        return math.floor(self.l) + 1


@dataclass(frozen=True)
class BumpSpec:
    """A tiling of [0,1]^s into r^s cells with one sign per cell."""

    holder: HolderClass
    r: int
    eps: tuple

    def __post_init__(self):
        if not (isinstance(self.r, (int, np.integer)) and self.r >= 1):
            raise ValueError(f"cells per axis r must be an integer >= 1, got {self.r}")
        q = self.r ** self.holder.s
        eps = tuple(int(e) for e in self.eps)
        if len(eps) != q:
            raise ValueError(f"eps must have length r^s = {q}, got {len(eps)}")
        if any(e not in (-1, 1) for e in eps):
            raise ValueError("eps entries must be +1 or -1")
        object.__setattr__(self, "eps", eps)

    @property
    def q(self) -> int:
        return len(self.eps)

    @classmethod
    def alternating(cls, holder: HolderClass, r: int) -> "BumpSpec":
        """Signs +1 on even flat cell indices, -1 on odd ones."""
        q = r ** holder.s
        return cls(holder, r, tuple(1 if i % 2 == 0 else -1 for i in range(q)))

    @classmethod
    def random(cls, holder: HolderClass, r: int, rng: np.random.Generator) -> "BumpSpec":
        q = r ** holder.s
        return cls(holder, r, tuple(int(e) for e in rng.choice((-1, 1), size=q)))


def _as_points(x, s: int) -> np.ndarray:
    """Coerce x to an (..., s) float array; scalars allowed when s = 1."""
    pts = np.asarray(x, dtype=float)
    if s == 1 and (pts.ndim == 0 or pts.shape[-1] != 1):
        pts = pts[..., np.newaxis]
    if pts.shape[-1] != s:
        raise ValueError(f"expected points with {s} coordinates, got shape {pts.shape}")
    return pts


def eval_g(holder: HolderClass, x) -> np.ndarray:
    """Evaluate g(x) = prod_j (x_j(1-x_j))^(floor(l)+1) on [0,1]^s.

    Args:
        holder: class parameters; only floor(l)+1 and s enter.
        x: point(s) in the unit cube, shape (..., s) (scalar ok for s=1).

    Returns:
        Array of shape x.shape[:-1]; values lie in [0, 4^{-s(floor(l)+1)}].

    Raises:
        ValueError: if any coordinate leaves [0, 1].
    """
    pts = _as_points(x, holder.s)
    if np.any(pts < 0.0) or np.any(pts > 1.0):
        raise ValueError("eval_g: coordinate outside [0, 1]")
    p = holder.bump_power
    vals = np.prod((pts * (1.0 - pts)) ** p, axis=-1)
    return vals if vals.ndim else float(vals)


def norm_constant_m(holder: HolderClass) -> float:
    """Normalization constant M = sqrt(s) (1+e)^{s(floor(l)+1)} (floor(l)+1)^{floor(l)+1}."""
    p = holder.bump_power
    return math.sqrt(holder.s) * _ONE_PLUS_E ** (holder.s * p) * float(p) ** p


def _cell_index(bump: BumpSpec, pts: np.ndarray):
    """Row-major flat cell index and per-axis indices for each point.

    Boundary points are assigned to the lower-index cell (clamp at r-1); the
    choice is harmless because f vanishes on every cell face.
    """
    r = bump.r
    axes = np.clip(np.floor(r * pts).astype(int), 0, r - 1)
    flat = np.zeros(pts.shape[:-1], dtype=int)
    for j in range(bump.holder.s):
        flat = flat * r + axes[..., j]
    return flat, axes


def eval_f_eps(bump: BumpSpec, x) -> np.ndarray:
    """Evaluate the tiled oscillating function f_eps at point(s) in [0,1]^s.

    The cell K_i containing x is found by flooring r*x_j per axis (row-major
    flat index); with y the cell-local coordinate, the value is
    eps_i * g(r*y) / (2 r^l M).
    """
    holder = bump.holder
    pts = _as_points(x, holder.s)
    if np.any(pts < 0.0) or np.any(pts > 1.0):
        raise ValueError("eval_f_eps: coordinate outside [0, 1]")
    flat, axes = _cell_index(bump, pts)
    local = bump.r * pts - axes  # in [0,1]^s within the cell
    g = np.prod((local * (1.0 - local)) ** holder.bump_power, axis=-1)
    eps = np.asarray(bump.eps)[flat]
    vals = eps * g / (2.0 * bump.r ** holder.l * norm_constant_m(holder))
    return vals if vals.ndim else float(vals)


def f_eps_sup_norm(bump: BumpSpec) -> float:
    """Exact sup norm of f_eps: 1/(2 M 4^{s(floor(l)+1)} r^l), attained at cell centers."""
    holder = bump.holder
    p = holder.bump_power
    return 1.0 / (
        2.0 * norm_constant_m(holder) * 4.0 ** (holder.s * p) * bump.r ** holder.l
    )


# ---------------------------------------------------------------------------
# membership checking


def _f_extended(bump: BumpSpec) -> Callable[[np.ndarray], np.ndarray]:
    """f_eps extended by zero outside the cube.

    The extension is C^m across the faces because every derivative of order
    <= m vanishes there (each factor of g has a zero of order floor(l)+1 >= m+1
    at the cell faces), so finite-difference stencils may poke outside.
    """

    def f(pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        inside = np.all((pts >= 0.0) & (pts <= 1.0), axis=-1)
        clipped = np.clip(pts, 0.0, 1.0)
        vals = np.asarray(eval_f_eps(bump, clipped))
        return np.where(inside, vals, 0.0)

    return f


# 4th-order central stencils: (offsets, weights) for first and second derivative
_STENCIL_D1 = (np.array([-2, -1, 1, 2]), np.array([1.0, -8.0, 8.0, -1.0]) / 12.0)
_STENCIL_D2 = (
    np.array([-2, -1, 0, 1, 2]),
    np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0,
)


def _fd_partial(
    f: Callable[[np.ndarray], np.ndarray],
    pts: np.ndarray,
    order: Sequence[int],
    h: float,
) -> np.ndarray:
    """Central finite-difference estimate of the mixed partial d^order f at pts.

    Applies the per-axis 4th-order stencil once per derivative order (orders
    0, 1, 2 per axis supported, which covers every |k| <= m arising here).
    """
    vals_pts = [(pts, 1.0)]
    for axis, k in enumerate(order):
        if k == 0:
            continue
        if k == 1:
            offsets, weights = _STENCIL_D1
            scale = 1.0 / h
        elif k == 2:
            offsets, weights = _STENCIL_D2
            scale = 1.0 / h**2
        else:
            raise ValueError(f"stencil order {k} per axis not supported")
        new = []
        for base, w in vals_pts:
            for o, c in zip(offsets, weights):
                shifted = base.copy()
                shifted[..., axis] = shifted[..., axis] + o * h
                new.append((shifted, w * c * scale))
        vals_pts = new
    out = np.zeros(pts.shape[:-1])
    for base, w in vals_pts:
        out = out + w * f(base)
    return out


def _multi_indices(s: int, total: int) -> Iterable[tuple]:
    """All s-tuples of nonnegative ints summing to exactly `total`."""
    if s == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _multi_indices(s - 1, total - head):
            yield (head, *rest)


@dataclass
class MembershipReport:
    """Numeric evidence that a bump sits inside its Hölder ball.

    derivative_sup maps each derivative total order <= m to the estimated sup
    norm over the sample grid; holder_quotient_max is the largest observed
    |d^m f(x) - d^m f(y)| / |x - y|^alpha. Both must stay <= 1 + tol.
    """

    derivative_sup: dict
    holder_quotient_max: float
    tol: float
    passed: bool


def verify_holder_membership(
    bump: BumpSpec,
    grid_step: float,
    pair_samples: int,
    tol: float,
    rng: np.random.Generator | None = None,
) -> MembershipReport:
    """Check numerically that f_eps belongs to the unit Hölder ball.

    Args:
        bump: the tiled bump to certify.
        grid_step: spacing of the sampling grid on [0,1]^s; must satisfy
            r * grid_step < 0.1 so every cell is sampled densely.
        pair_samples: number of random point pairs for the Hölder quotient,
            in addition to all pairs of distinct cell centers (worst
            quotients straddle cell boundaries).
        tol: slack; the report passes iff all maxima are <= 1 + tol.
        rng: generator for the random pairs (fresh Philox(0) if omitted).
    """
    holder = bump.holder
    if not (bump.r * grid_step < 0.1):
        raise ValueError("grid_step too coarse: need r * grid_step < 0.1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if rng is None:
        rng = np.random.Generator(np.random.Philox(0))

    f = _f_extended(bump)
    s, m, alpha = holder.s, holder.m, holder.alpha
    fd_h = 1e-3 / bump.r  # 1e-3 in cell-local coordinates

    axis = np.arange(0.0, 1.0 + grid_step / 2, grid_step)
    grids = np.meshgrid(*([axis] * s), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)

    derivative_sup: dict = {}
    for total in range(m + 1):
        worst = 0.0
        for order in _multi_indices(s, total):
            est = _fd_partial(f, pts, order, fd_h)
            worst = max(worst, float(np.max(np.abs(est))))
        derivative_sup[total] = worst

    # Hölder quotient of the order-m derivatives
    xs = rng.uniform(0.0, 1.0, size=(pair_samples, s))
    ys = rng.uniform(0.0, 1.0, size=(pair_samples, s))
    centers = (
        np.stack(
            [c.ravel() for c in np.meshgrid(*([np.arange(bump.r)] * s), indexing="ij")],
            axis=-1,
        )
        + 0.5
    ) / bump.r
    ca, cb = zip(*itertools.combinations(range(len(centers)), 2)) if len(centers) > 1 else ((), ())
    xs = np.concatenate([xs, centers[list(ca)]]) if ca else xs
    ys = np.concatenate([ys, centers[list(cb)]]) if cb else ys

    dist = np.linalg.norm(xs - ys, axis=-1)
    keep = dist > 1e-9
    xs, ys, dist = xs[keep], ys[keep], dist[keep]
    quot_max = 0.0
    for order in _multi_indices(s, m):
        dx = _fd_partial(f, xs, order, fd_h)
        dy = _fd_partial(f, ys, order, fd_h)
        quot = np.abs(dx - dy) / dist**alpha
        if quot.size:
            quot_max = max(quot_max, float(np.max(quot)))

    passed = all(v <= 1.0 + tol for v in derivative_sup.values()) and quot_max <= 1.0 + tol
    return MembershipReport(derivative_sup, quot_max, tol, passed)


# ---------------------------------------------------------------------------
# closed-form constants

Case = Literal["uniform", "l1"]


def lower_bound_constant(case: Case, holder: HolderClass) -> float:
    """Explicit lower-bound constant C(l, s) for the polynomial-family floor.

    case "uniform" gives
        C_inf = 1 / (sqrt(s) 2^{l+1} 8^{l/s} p^p (4(1+e))^{s p}),
    case "l1" gives
        C_L1 = (p!)^{2s} / (5 sqrt(s) 2^{l+2} 18^{l/s} p^p ((2 floor(l)+3)!)^s (1+e)^{s p}),
    with p = floor(l) + 1.
    """
    l, s = holder.l, holder.s
    p = holder.bump_power
    if case == "uniform":
        denom = (
            math.sqrt(s)
            * 2.0 ** (l + 1)
            * 8.0 ** (l / s)
            * float(p) ** p
            * (4.0 * _ONE_PLUS_E) ** (s * p)
        )
        return 1.0 / denom
    if case == "l1":
        num = float(math.factorial(p)) ** (2 * s)
        denom = (
            5.0
            * math.sqrt(s)
            * 2.0 ** (l + 2)
            * 18.0 ** (l / s)
            * float(p) ** p
            * float(math.factorial(2 * math.floor(l) + 3)) ** s
            * _ONE_PLUS_E ** (s * p)
        )
        return num / denom
    raise ValueError(f"case must be 'uniform' or 'l1', got {case!r}")


def analytic_floor_constant(case: Case, holder: HolderClass, params) -> float:
    """Constant C' entering the (N log2 N)^{-l/s} floor for analytic families.

    C' = (3/4) C / ( [d(r+1)+v+t] * log2(2 e b u d * 2^{(4e+1)d} * B^d
                     * (1+l/s)^2 * log2(4A/C)) )^{l/s}

    with C the matching constant from lower_bound_constant. `params` needs
    attributes A, u, v, b, t, d, B, r, all >= 1. The big product inside the
    log2 is assembled additively in log space; it overflows floats already at
    moderate d.
    """
    for name in ("A", "u", "v", "b", "t", "d", "B", "r"):
        if getattr(params, name) < 1:
            raise ValueError(f"analytic family parameter {name} must be >= 1")
    l, s = holder.l, holder.s
    c = lower_bound_constant(case, holder)
    inner = math.log2(4.0 * params.A / c)
    log2_arg = (
        math.log2(2.0 * math.e * params.b * params.u * params.d)
        + (4.0 * math.e + 1.0) * params.d
        + params.d * math.log2(params.B)
        + 2.0 * math.log2(1.0 + l / s)
        + math.log2(inner)
    )
    denom = (params.d * (params.r + 1.0) + params.v + params.t) * log2_arg
    return 0.75 * c / denom ** (l / s)
