"""Half-line Dirichlet spectra of -psi'' - omega^2 Q psi = lam psi.

Potentials Q >= 0 decay at infinity; bound states sit at lam = -xi^2 with
xi > 0 and psi(0) = 0.  The solver shoots a Pruefer phase for counting and
bisection, then polishes each eigenvalue on the Dirichlet miss psi_b(0) of
the backward shot that satisfies the decay condition at the domain cut
(backward integration is stable on both the forbidden and oscillatory
regions, so no interior matching is needed).  Norming constants
C_j = psi_j'(0)^2 come from the same normalized backward solution.  A
Picard iteration for the Jost function and a characteristic-identity
cross-check 4 xi^2 / C = s^2 G'(xi)^2 round out the module; both were
validated against the square-well closed forms.

Eigenfunction magnitudes span thousands of e-folds on the truncated domain,
so every shot carries an accumulated log scale next to an O(1) mantissa.
"""
import json
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from numba import njit
from scipy.integrate import quad, simpson
from scipy.optimize import brentq

__all__ = [
    "Potential",
    "RationalDecay",
    "SquareWell",
    "Tabulated",
    "potential_from_dict",
    "ShootingConfig",
    "Spectrum",
    "count_eigenvalues",
    "solve_spectrum",
    "square_well_phase_margin",
    "square_well_spectrum",
    "JostResult",
    "jost_function",
    "IdentityReport",
    "characteristic_identity_check",
]

_HALF_PI = 0.5 * math.pi


# ---------------------------------------------------------------------------
# potentials


@dataclass(frozen=True)
class RationalDecay:
    """Q(x) = scale / (1 + x^2)^exponent; exponent > 1 keeps sqrt(Q) integrable."""

    scale: float = 1.0
    exponent: float = 2.0

    def __post_init__(self):
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise ValueError("scale must be positive and finite")
        if not (self.exponent > 1.0 and math.isfinite(self.exponent)):
            raise ValueError("exponent must exceed 1")

    def q(self, x):
        x = np.asarray(x, dtype=float)
        out = self.scale * (1.0 + x * x) ** (-self.exponent)
        return out if out.ndim else float(out)

    @property
    def sup_q(self):
        return self.scale

    @property
    def breakpoints(self):
        return ()

    @property
    def decay_power(self):
        return 2.0 * self.exponent

    @property
    def support_end(self):
        return math.inf

    def sqrt_q_integral(self):
        e = self.exponent
        return math.sqrt(self.scale) * 0.5 * math.sqrt(math.pi) \
            * math.gamma(0.5 * (e - 1.0)) / math.gamma(0.5 * e)

    def q_integral_tail(self, x):
        val, _ = quad(lambda t: self.q(t), x, np.inf)
        return val

    def tq_integral_tail(self, x):
        e = self.exponent
        return self.scale * (1.0 + x * x) ** (1.0 - e) / (2.0 * (e - 1.0))

    def as_dict(self):
        return {"variant": "rational_decay",
                "parameters": {"scale": self.scale, "exponent": self.exponent}}


@dataclass(frozen=True)
class SquareWell:
    """Q = 1 on [0, 1], 0 beyond.  All integrals are closed-form."""

    def q(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x <= 1.0, 1.0, 0.0)
        return out if out.ndim else float(out)

    @property
    def sup_q(self):
        return 1.0

    @property
    def breakpoints(self):
        return (1.0,)

    @property
    def decay_power(self):
        return math.inf

    @property
    def support_end(self):
        return 1.0

    def sqrt_q_integral(self):
        return 1.0

    def q_integral_tail(self, x):
        return max(0.0, 1.0 - min(max(x, 0.0), 1.0))

    def tq_integral_tail(self, x):
        xc = min(max(x, 0.0), 1.0)
        return 0.5 * (1.0 - xc * xc)

    def as_dict(self):
        return {"variant": "square_well", "parameters": {}}


def _pl_segments(knots, values, x):
    """Segments of the piecewise-linear graph restricted to t >= x."""
    segs = []
    for a, b, va, vb in zip(knots, knots[1:], values, values[1:]):
        if b <= x:
            continue
        if a < x:
            va = va + (vb - va) * (x - a) / (b - a)
            a = x
        segs.append((a, b, va, vb))
    return segs


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear Q on given knots with a power tail beyond the last one.

    Beyond knots[-1] the potential continues as values[-1]*(x/knots[-1])**(-p)
    with p = decay_exponent > 2 (so both the Calogero integral and the
    first-moment tail converge).  A zero last value gives compact support.
    """

    knots: tuple
    values: tuple
    decay_exponent: float
    monotone: bool = False

    def __post_init__(self):
        knots = tuple(float(k) for k in self.knots)
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)
        if len(knots) < 2 or len(knots) != len(values):
            raise ValueError("need matching knots/values with at least two entries")
        if knots[0] != 0.0:
            raise ValueError("first knot must be 0")
        if any(b <= a for a, b in zip(knots, knots[1:])):
            raise ValueError("knots must be strictly increasing")
        if any(v < 0.0 or not math.isfinite(v) for v in values):
            raise ValueError("values must be finite and nonnegative")
        if not (self.decay_exponent > 2.0):
            raise ValueError("decay_exponent must exceed 2")
        if self.monotone and any(b >= a for a, b in zip(values, values[1:])):
            raise ValueError("monotone flag requires strictly decreasing values")

    def q(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.interp(x, self.knots, self.values)
        last_k = self.knots[-1]
        last_v = self.values[-1]
        if last_v > 0.0:
            with np.errstate(divide="ignore", invalid="ignore"):
                tail = last_v * np.where(
                    x > last_k, (np.maximum(x, last_k) / last_k) ** (-self.decay_exponent), 0.0)
        else:
            tail = 0.0
        out = np.where(x > last_k, tail, inside)
        return out if out.ndim else float(out)

    @property
    def sup_q(self):
        return max(self.values)

    @property
    def breakpoints(self):
        return self.knots[1:]

    @property
    def decay_power(self):
        return math.inf if self.values[-1] == 0.0 else self.decay_exponent

    @property
    def support_end(self):
        return self.knots[-1] if self.values[-1] == 0.0 else math.inf

    def _tail_moment(self, x, m):
        # int_max(x,last)^inf t^m * last_v * (t/last)^(-p) dt
        p = self.decay_exponent
        last_k, last_v = self.knots[-1], self.values[-1]
        if last_v == 0.0:
            return 0.0
        lo = max(x, last_k)
        return last_v * last_k**p * lo ** (m + 1.0 - p) / (p - 1.0 - m)

    def sqrt_q_integral(self):
        total = 0.0
        for a, b, va, vb in _pl_segments(self.knots, self.values, 0.0):
            slope = (vb - va) / (b - a)
            if abs(slope) < 1e-300:
                total += math.sqrt(va) * (b - a)
            else:
                total += (vb**1.5 - va**1.5) * 2.0 / (3.0 * slope)
        p, last_k, last_v = self.decay_exponent, self.knots[-1], self.values[-1]
        if last_v > 0.0:
            total += math.sqrt(last_v) * last_k / (0.5 * p - 1.0)
        return total

    def q_integral_tail(self, x):
        total = sum(0.5 * (va + vb) * (b - a)
                    for a, b, va, vb in _pl_segments(self.knots, self.values, x))
        return total + self._tail_moment(x, 0.0)

    def tq_integral_tail(self, x):
        total = 0.0
        for a, b, va, vb in _pl_segments(self.knots, self.values, x):
            slope = (vb - va) / (b - a)
            c0 = va - slope * a
            total += 0.5 * c0 * (b * b - a * a) + slope * (b**3 - a**3) / 3.0
        return total + self._tail_moment(x, 1.0)

    def as_dict(self):
        return {"variant": "tabulated",
                "parameters": {"knots": list(self.knots), "values": list(self.values),
                               "decay_exponent": self.decay_exponent,
                               "monotone": self.monotone}}


Potential = (RationalDecay, SquareWell, Tabulated)

_VARIANTS = {"rational_decay": RationalDecay, "square_well": SquareWell,
             "tabulated": Tabulated}


def potential_from_dict(d):
    """Inverse of Potential.as_dict for {variant, parameters} objects."""
    try:
        cls = _VARIANTS[d["variant"]]
    except KeyError:
        raise ValueError(f"unknown potential variant {d.get('variant')!r}") from None
    params = dict(d.get("parameters", {}))
    if cls is Tabulated:
        params["knots"] = tuple(params["knots"])
        params["values"] = tuple(params["values"])
    return cls(**params)


# ---------------------------------------------------------------------------
# configuration and spectrum containers


@dataclass(frozen=True)
class ShootingConfig:
    """Truncation and grid parameters for the shooting solver.

    domain_cut:  truncation point L (Robin tail condition applied there)
    grid_step:   target RK4 step; must satisfy grid_step * omega * sqrt(sup Q) < 0.05
    eig_tol:     absolute tolerance on each xi_j
    norm_quadrature: only "simpson" is implemented
    """

    domain_cut: float
    grid_step: float
    eig_tol: float = 1e-8
    norm_quadrature: str = "simpson"

    def __post_init__(self):
        if not (self.domain_cut > 0.0 and math.isfinite(self.domain_cut)):
            raise ValueError("domain_cut must be positive and finite")
        if not (0.0 < self.grid_step <= self.domain_cut):
            raise ValueError("grid_step must lie in (0, domain_cut]")
        if not (0.0 < self.eig_tol <= 1e-2):
            raise ValueError("eig_tol must lie in (0, 1e-2]")
        if self.norm_quadrature != "simpson":
            raise ValueError("only simpson normalization quadrature is supported")

    @classmethod
    def auto(cls, potential, omega, eig_tol=1e-8):
        """Pick L and the step for the given problem.

        Compact-support potentials truncate exactly at the support end (the
        exponential tail is then exact).  Decaying potentials push L to where
        omega^2 Q is negligible against the smallest expected xi^2, plus a
        decay margin of several e-folds of that mode.
        """
        if omega <= 0.0 or not math.isfinite(omega):
            raise ValueError("omega must be positive and finite")
        sup = potential.sup_q
        if sup <= 0.0:
            return cls(domain_cut=1.0, grid_step=2e-3, eig_tol=eig_tol)
        step = min(2e-3, 0.02 / (omega * math.sqrt(sup)))
        if math.isfinite(potential.support_end):
            return cls(domain_cut=potential.support_end, grid_step=step,
                       eig_tol=eig_tol)
        xi_hat = math.pi**2 * math.sqrt(sup) / (256.0 * omega)
        thresh = 1e-4 * xi_hat * xi_hat
        x = 1.0
        while omega * omega * potential.q(x) > thresh:
            x *= 2.0
        lo, hi = 0.5 * x, x
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if omega * omega * potential.q(mid) > thresh:
                lo = mid
            else:
                hi = mid
        return cls(domain_cut=hi + 6.0 / xi_hat, grid_step=step, eig_tol=eig_tol)


@dataclass(frozen=True)
class Spectrum:
    """Bound-state data: xi ascending (weakest binding first) and C = psi'(0)^2."""

    omega: float
    xi: tuple
    C: tuple

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(float(v) for v in self.xi))
        object.__setattr__(self, "C", tuple(float(v) for v in self.C))
        if not (self.omega > 0.0 and math.isfinite(self.omega)):
            raise ValueError("omega must be positive and finite")
        if len(self.xi) != len(self.C):
            raise ValueError("xi and C must have equal length")
        if any(v <= 0.0 for v in self.xi) or any(v <= 0.0 for v in self.C):
            raise ValueError("xi and C entries must be positive")
        if any(b <= a for a, b in zip(self.xi, self.xi[1:])):
            raise ValueError("xi must be strictly increasing")

    @property
    def N(self):
        return len(self.xi)

    def as_dict(self):
        return {"omega": self.omega, "xi": list(self.xi), "C": list(self.C),
                "N": self.N}

    def to_json(self):
        return json.dumps(self.as_dict())


# ---------------------------------------------------------------------------
# RK4 kernels (per-step potential samples: left-of-node, midpoint, right-of-node)


@njit(cache=True)
def _theta_end(xs, Wa, Wm, Wb, lam):
    """Pruefer phase at the end of the grid; flags per-step jumps above pi/2."""
    theta = 0.0
    bad = False
    for i in range(xs.shape[0] - 1):
        h = xs[i + 1] - xs[i]
        s = math.sin(theta)
        c = math.cos(theta)
        k1 = c * c + (Wa[i] + lam) * s * s
        t = theta + 0.5 * h * k1
        s = math.sin(t)
        c = math.cos(t)
        k2 = c * c + (Wm[i] + lam) * s * s
        t = theta + 0.5 * h * k2
        s = math.sin(t)
        c = math.cos(t)
        k3 = c * c + (Wm[i] + lam) * s * s
        t = theta + h * k3
        s = math.sin(t)
        c = math.cos(t)
        k4 = c * c + (Wb[i] + lam) * s * s
        d = h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if abs(d) > 1.5707963267948966:
            bad = True
        theta += d
    return theta, bad


@njit(cache=True)
def _shoot_end(xs, Wa, Wm, Wb, lam, psi0, dpsi0):
    """Integrate psi'' = (-lam - W) psi along xs (either orientation).

    Returns the final (mantissa psi, mantissa psi', accumulated log scale);
    the true values carry the factor exp(log scale).
    """
    psi = psi0
    phi = dpsi0
    ls = 0.0
    for i in range(xs.shape[0] - 1):
        h = xs[i + 1] - xs[i]
        aa = -lam - Wa[i]
        am = -lam - Wm[i]
        ab = -lam - Wb[i]
        k1p = phi
        k1f = aa * psi
        p2 = psi + 0.5 * h * k1p
        f2 = phi + 0.5 * h * k1f
        k2f = am * p2
        p3 = psi + 0.5 * h * f2
        f3 = phi + 0.5 * h * k2f
        k3f = am * p3
        p4 = psi + h * f3
        f4 = phi + h * k3f
        k4f = ab * p4
        psi += h * (k1p + 2.0 * f2 + 2.0 * f3 + f4) / 6.0
        phi += h * (k1f + 2.0 * k2f + 2.0 * k3f + k4f) / 6.0
        if (i + 1) % 100 == 0:
            m = max(abs(psi), abs(phi))
            if m > 0.0:
                psi /= m
                phi /= m
                ls += math.log(m)
    return psi, phi, ls


@njit(cache=True)
def _shoot_store(xs, Wa, Wm, Wb, lam, psi0, dpsi0, out_psi, out_ls):
    """Like _shoot_end but records mantissa/log at every node; returns final psi'."""
    psi = psi0
    phi = dpsi0
    ls = 0.0
    out_psi[0] = psi
    out_ls[0] = 0.0
    for i in range(xs.shape[0] - 1):
        h = xs[i + 1] - xs[i]
        aa = -lam - Wa[i]
        am = -lam - Wm[i]
        ab = -lam - Wb[i]
        k1p = phi
        k1f = aa * psi
        p2 = psi + 0.5 * h * k1p
        f2 = phi + 0.5 * h * k1f
        k2f = am * p2
        p3 = psi + 0.5 * h * f2
        f3 = phi + 0.5 * h * k2f
        k3f = am * p3
        p4 = psi + h * f3
        f4 = phi + h * k3f
        k4f = ab * p4
        psi += h * (k1p + 2.0 * f2 + 2.0 * f3 + f4) / 6.0
        phi += h * (k1f + 2.0 * k2f + 2.0 * k3f + k4f) / 6.0
        if (i + 1) % 100 == 0:
            m = max(abs(psi), abs(phi))
            if m > 0.0:
                psi /= m
                phi /= m
                ls += math.log(m)
        out_psi[i + 1] = psi
        out_ls[i + 1] = ls
    return phi


# ---------------------------------------------------------------------------
# grid sampling


def _build_grid(potential, omega, config):
    """Grid nodes aligned with potential breakpoints plus one-sided W samples."""
    L = config.domain_cut
    h0 = config.grid_step
    sup = potential.sup_q
    if h0 * omega * math.sqrt(sup) >= 0.05:
        raise ValueError("grid_step too coarse: grid_step*omega*sqrt(sup Q) must stay below 0.05")
    cuts = sorted({0.0, L, *(b for b in potential.breakpoints if 0.0 < b < L)})
    parts = [np.array([0.0])]
    for a, b in zip(cuts, cuts[1:]):
        n = max(1, int(math.ceil((b - a) / h0)))
        parts.append(np.linspace(a, b, n + 1)[1:])
    xs = np.concatenate(parts)
    d = 1e-9 * np.diff(xs)
    w2 = omega * omega
    Wa = w2 * potential.q(xs[:-1] + d)
    Wm = w2 * potential.q(0.5 * (xs[:-1] + xs[1:]))
    Wb = w2 * potential.q(xs[1:] - d)
    return xs, Wa, Wm, Wb


def _count_from_theta(theta, lam, w_beyond):
    """Node count of the shot including the one possibly pending beyond L."""
    n = int(math.floor(theta / math.pi))
    phi = theta - n * math.pi
    kappa = math.sqrt(max(-lam - w_beyond, 0.0))
    if phi > math.pi - math.atan2(1.0, kappa):
        n += 1
    return max(n, 0)


def _calogero_cap(potential, omega):
    return math.ceil(2.0 / math.pi * omega * potential.sqrt_q_integral())


def count_eigenvalues(potential, omega, config=None):
    """Number of bound states, from the zero-energy Pruefer phase.

    Raises RuntimeError when a phase step exceeds pi/2 (grid unresolved) or
    when the count exceeds the Calogero cap ceil((2/pi) omega int sqrt(Q)).
    """
    cfg = config if config is not None else ShootingConfig.auto(potential, omega)
    if potential.sup_q <= 0.0:
        return 0
    xs, Wa, Wm, Wb = _build_grid(potential, omega, cfg)
    theta, bad = _theta_end(xs, Wa, Wm, Wb, 0.0)
    if bad:
        raise RuntimeError(
            f"phase resolution lost at omega={omega}: some step moved the phase by more "
            "than pi/2; refine grid_step")
    w_beyond = omega * omega * potential.q(cfg.domain_cut + 1e-9)
    n = _count_from_theta(theta, 0.0, w_beyond)
    cap = _calogero_cap(potential, omega)
    if n > cap:
        raise RuntimeError(
            f"counted {n} modes but the Calogero cap is {cap}; shooting is inconsistent")
    return n


# ---------------------------------------------------------------------------
# full solve


@dataclass
class _ModeData:
    xi: float
    C: float
    window_x: np.ndarray = None
    window_logpsi: np.ndarray = None
    grid: np.ndarray = None
    psi: np.ndarray = None


def _assemble_mode(xs, rev, lam, kappa_end, xi, window, keep):
    """Normalize the stored backward shot and extract C = psi'(0)^2."""
    xs_rev, Wa_rev, Wm_rev, Wb_rev = rev
    n = xs.shape[0]
    raw = np.empty(n)
    ls = np.empty(n)
    dpsi0 = _shoot_store(xs_rev, Wa_rev, Wm_rev, Wb_rev, lam, 1.0, -kappa_end,
                         raw, ls)
    raw = raw[::-1]
    ls = ls[::-1]
    with np.errstate(divide="ignore"):
        logmag = ls + np.log(np.abs(raw))
    m_exp = float(np.max(logmag))
    sign = np.sign(raw)
    tilde = sign * np.exp(logmag - m_exp)
    integral = float(simpson(tilde * tilde, x=xs)) + tilde[-1] ** 2 / (2.0 * xi)
    # psi'(0) of the raw solution is dpsi0 * e^{ls[0]}; normalizing divides
    # by e^{m_exp} sqrt(integral)
    c_val = dpsi0 * dpsi0 * math.exp(2.0 * (ls[0] - m_exp)) / integral

    mode = _ModeData(xi=xi, C=c_val)
    if keep == "window":
        i0, i1 = np.searchsorted(xs, [window[0], window[1]])
        idx = np.arange(i0, max(i1, i0 + 2))
        if idx.size > 160:
            idx = idx[:: idx.size // 160]
        mode.window_x = xs[idx].copy()
        mode.window_logpsi = logmag[idx] - m_exp - 0.5 * math.log(integral)
    elif keep == "full":
        mode.grid = xs
        mode.psi = math.copysign(1.0, dpsi0) * tilde / math.sqrt(integral)
    return mode


def _solve_modes(potential, omega, config, keep="none"):
    cfg = config if config is not None else ShootingConfig.auto(potential, omega)
    if potential.sup_q <= 0.0:
        return []
    xs, Wa, Wm, Wb = _build_grid(potential, omega, cfg)
    L = cfg.domain_cut
    w_beyond = omega * omega * potential.q(L + 1e-9)
    theta0, bad = _theta_end(xs, Wa, Wm, Wb, 0.0)
    if bad:
        raise RuntimeError(
            f"phase resolution lost at omega={omega}; refine grid_step")
    n_modes = _count_from_theta(theta0, 0.0, w_beyond)
    if n_modes == 0:
        return []

    sup = potential.sup_q
    lam_floor = -(omega * omega * sup) - 1.0
    xs_rev = xs[::-1].copy()
    Wa_rev = Wb[::-1].copy()
    Wm_rev = Wm[::-1].copy()
    Wb_rev = Wa[::-1].copy()

    def count_at(lam):
        th, b = _theta_end(xs, Wa, Wm, Wb, lam)
        if b:
            raise RuntimeError(f"phase resolution lost during bisection at lam={lam}")
        return _count_from_theta(th, lam, w_beyond)

    def dirichlet_miss(lam):
        # backward shot obeying the decay condition at L; its value at 0 flips
        # sign exactly at eigenvalues
        kap = math.sqrt(max(-lam - w_beyond, 0.0))
        bp, _, _ = _shoot_end(xs_rev, Wa_rev, Wm_rev, Wb_rev, lam, 1.0, -kap)
        return bp

    # isolate every count transition first; midpoints between neighboring
    # windows then give rigorous separators for the sign-change search (the
    # phase count and the shot disagree on the transition location by the
    # integrator discrepancy, which grows with omega but stays far below the
    # physical gap between eigenvalues)
    windows = []
    for j in range(1, n_modes + 1):
        lo, hi = lam_floor, 0.0
        while hi - lo > 1e-5:
            mid = 0.5 * (lo + hi)
            if count_at(mid) >= j:
                hi = mid
            else:
                lo = mid
        windows.append((lo, hi))
    seps = [lam_floor]
    seps += [0.5 * (windows[j][1] + windows[j + 1][0])
             for j in range(n_modes - 1)]
    seps.append(0.0)

    modes = []
    for j in range(1, n_modes + 1):
        lo, hi = windows[j - 1]
        center = 0.5 * (lo + hi)
        sep_lo, sep_hi = seps[j - 1], seps[j]
        if not (sep_lo < center < sep_hi):
            raise RuntimeError(f"count windows collide around mode {j}")
        half_a = half_b = 50.0 * (hi - lo)
        a = max(sep_lo, center - half_a)
        b = min(sep_hi, center + half_b)
        ga, gb = dirichlet_miss(a), dirichlet_miss(b)
        while ga * gb > 0.0:
            widened = False
            if a > sep_lo:
                half_a *= 4.0
                a = max(sep_lo, center - half_a)
                widened = True
            if b < sep_hi:
                half_b *= 4.0
                b = min(sep_hi, center + half_b)
                widened = True
            if not widened:
                raise RuntimeError(
                    f"failed to bracket the eigenvalue of mode {j}")
            ga, gb = dirichlet_miss(a), dirichlet_miss(b)
        lam = brentq(dirichlet_miss, a, b, xtol=1e-12, rtol=8.9e-16, maxiter=200)
        xi = math.sqrt(-lam)
        kap = math.sqrt(max(-lam - w_beyond, 0.0))
        modes.append(_assemble_mode(xs, (xs_rev, Wa_rev, Wm_rev, Wb_rev),
                                    lam, kap, xi, (0.7 * L, 0.9 * L), keep))
    modes.sort(key=lambda m: m.xi)
    return modes


def solve_spectrum(potential, omega, config=None):
    """Solve for all bound states; xi ascending with matching norming constants.

    Weak coupling can legitimately bind nothing; the result is then empty.
    """
    modes = _solve_modes(potential, omega, config, keep="none")
    spec = Spectrum(omega=omega, xi=tuple(m.xi for m in modes),
                    C=tuple(m.C for m in modes))
    if not modes:
        return spec
    sup_cap = omega * math.sqrt(potential.sup_q) * (1.0 + 1e-12)
    if spec.xi[-1] > sup_cap:
        raise RuntimeError("largest xi exceeds omega*sqrt(sup Q)")
    if spec.N > _calogero_cap(potential, omega):
        raise RuntimeError("mode count exceeds the Calogero cap")
    return spec


# ---------------------------------------------------------------------------
# square-well closed forms


def square_well_phase_margin(omega):
    """Distance of omega - pi/2 from the nearest multiple of pi."""
    r = math.fmod(omega - _HALF_PI, math.pi)
    if r < 0.0:
        r += math.pi
    return min(r, math.pi - r)


def square_well_spectrum(omega):
    """Exact square-well spectrum from the transcendental root equation.

    Roots of sqrt(omega^2-e^2) sin(e) + e cos(e) over e in (0, omega) give
    xi = sqrt(omega^2 - e^2) and C = (2 xi / (1 + xi)) (omega^2 - xi^2).
    """
    if not (omega > _HALF_PI):
        raise ValueError("square well binds a half-line state only for omega > pi/2")
    if square_well_phase_margin(omega) < 0.2:
        warnings.warn(f"omega={omega} is within 1/5 of a threshold phase; "
                      "root locations are ill-conditioned", stacklevel=2)

    def g(e):
        return math.sqrt(max(omega * omega - e * e, 0.0)) * math.sin(e) + e * math.cos(e)

    step = math.pi / (4.0 * omega)
    pairs = []
    a = step * 1e-3
    fa = g(a)
    while a < omega:
        b = min(a + step, omega * (1.0 - 1e-14))
        fb = g(b)
        if fa == 0.0:
            pairs.append((a, a))
        elif fa * fb < 0.0:
            lo, hi, flo = a, b, fa
            while hi - lo > 1e-12:
                mid = 0.5 * (lo + hi)
                fm = g(mid)
                if fm == 0.0:
                    lo = hi = mid
                elif flo * fm < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            pairs.append((lo, hi))
        if b >= omega * (1.0 - 1e-14):
            break
        a, fa = b, fb
    xi_list = []
    c_list = []
    for lo, hi in pairs:
        e = 0.5 * (lo + hi)
        if abs(g(e)) > 1e-9 * max(1.0, omega):
            raise RuntimeError(f"root residual too large at e={e}")
        de = 1e-6
        deriv = (g(min(e + de, omega * (1 - 1e-14))) - g(max(e - de, 1e-300))) / (2 * de)
        if abs(deriv) < 1e-10:
            warnings.warn(f"nearly tangential root at e={e}; multiplicity suspected",
                          stacklevel=2)
        xi = math.sqrt(max(omega * omega - e * e, 0.0))
        if xi <= 0.0:
            continue
        xi_list.append(xi)
        c_list.append((2.0 * xi / (1.0 + xi)) * (omega * omega - xi * xi))
    order = np.argsort(xi_list)
    return Spectrum(omega=omega, xi=tuple(xi_list[i] for i in order),
                    C=tuple(c_list[i] for i in order))


# ---------------------------------------------------------------------------
# Jost function (Picard iteration on m(x) = e^{-ikx} f(k, x))


@njit(cache=True)
def _picard_step(xs, Vl, Vr, m, kr, ki):
    """One Picard sweep: new term int_x^inf D_k(t-x) V(t) m(t) dt.

    Vl/Vr are per-panel one-sided samples of V = -omega^2 Q, so potential
    jumps that sit on grid nodes stay exact.  The e^{2ik s} factor is
    integrated in closed form against a linear interpolant of V m.
    """
    n = xs.shape[0]
    out = np.empty(n, np.complex128)
    c = 2j * complex(kr, ki)
    E = 0.0 + 0.0j
    S = 0.0 + 0.0j
    out[n - 1] = 0.0
    for i in range(n - 2, -1, -1):
        h = xs[i + 1] - xs[i]
        g0 = Vl[i] * m[i]
        g1 = Vr[i] * m[i + 1]
        w = c * h
        ew = np.exp(w)
        if abs(w) > 1e-6:
            I0 = (ew - 1.0) / c
            I1 = (h * ew - I0) / c
        else:
            I0 = h * (1.0 + w / 2.0 + w * w / 6.0)
            I1 = h * h * (0.5 + w / 3.0 + w * w / 8.0)
        E = ew * E + g0 * I0 + (g1 - g0) * (I1 / h)
        S = S + 0.5 * h * (g0 + g1)
        out[i] = (E - S) / c
    return out


@njit(cache=True)
def _picard_step_origin(xs, Vl, Vr, m):
    """k = 0 limit of the sweep: kernel D_k(u) -> u."""
    n = xs.shape[0]
    out = np.empty(n, np.complex128)
    T = 0.0 + 0.0j
    S = 0.0 + 0.0j
    out[n - 1] = 0.0
    for i in range(n - 2, -1, -1):
        h = xs[i + 1] - xs[i]
        g0 = Vl[i] * m[i]
        g1 = Vr[i] * m[i + 1]
        T = T + 0.5 * h * (xs[i] * g0 + xs[i + 1] * g1)
        S = S + 0.5 * h * (g0 + g1)
        out[i] = T - xs[i] * S
    return out


@dataclass(frozen=True)
class JostResult:
    """F(k) samples with per-k series and domain-truncation error estimates."""

    k_values: tuple
    F: tuple
    series_remainder: tuple
    truncation_estimate: tuple
    x_cut: float


def jost_function(potential, omega, k_values, picard_iters=80, x_cut=None,
                  grid_step=1e-3):
    """Jost function F(k) = m(k, 0) of V = -omega^2 Q by Picard iteration.

    Valid for Im k >= 0.  picard_iters must be large enough for the term
    ratio to fall below 1e-10; a terminal ratio >= 1 raises RuntimeError.
    The returned truncation estimate is omega^2 * int_{x_cut}^inf t Q dt
    times the largest |m| seen, a bound on the neglected tail of the
    integral equation.
    """
    if x_cut is None:
        if math.isfinite(potential.support_end):
            x_cut = potential.support_end + 1.0
        else:
            x_cut = 60.0
    if picard_iters < 1:
        raise ValueError("picard_iters must be at least 1")
    cuts = sorted({0.0, x_cut, *(b for b in potential.breakpoints if 0.0 < b < x_cut)})
    parts = [np.array([0.0])]
    for a, b in zip(cuts, cuts[1:]):
        n = max(1, int(math.ceil((b - a) / grid_step)))
        parts.append(np.linspace(a, b, n + 1)[1:])
    xs = np.concatenate(parts)
    d = 1e-9 * np.diff(xs)
    Vl = -(omega * omega) * potential.q(xs[:-1] + d)
    Vr = -(omega * omega) * potential.q(xs[1:] - d)

    f_out = []
    rem_out = []
    trunc_out = []
    tq_tail = potential.tq_integral_tail(x_cut)
    for k in np.asarray(k_values, dtype=complex):
        if k.imag < -1e-15:
            raise ValueError("k must lie in the closed upper half plane")
        m = np.ones(xs.shape[0], np.complex128)
        total = m.copy()
        prev = 1.0
        ratio = 0.0
        sup_m = 1.0
        for _ in range(picard_iters):
            if abs(k) > 1e-8:
                m = _picard_step(xs, Vl, Vr, m, k.real, k.imag)
            else:
                m = _picard_step_origin(xs, Vl, Vr, m)
            total += m
            term = float(np.max(np.abs(m)))
            sup_m = max(sup_m, float(np.max(np.abs(total))))
            ratio = term / prev if prev > 0.0 else 0.0
            prev = term
            if term <= 1e-10 * sup_m:
                break
        else:
            if ratio >= 1.0:
                raise RuntimeError(
                    f"Picard series for k={k} is not converging (term ratio {ratio:.3g})")
        if ratio < 1.0:
            remainder = prev * ratio / (1.0 - ratio)
        else:
            remainder = math.inf
        f_out.append(complex(total[0]))
        rem_out.append(remainder)
        trunc_out.append(omega * omega * tq_tail * sup_m)
    return JostResult(k_values=tuple(complex(k) for k in np.asarray(k_values, complex)),
                      F=tuple(f_out), series_remainder=tuple(rem_out),
                      truncation_estimate=tuple(trunc_out), x_cut=x_cut)


def _jost_imaginary_axis(potential, omega, xi, x_cut, grid_step=None):
    """F(i xi) by backward integration from the free-decay regime.

    Initializes f = e^{-xi x} at x_cut and integrates psi'' = (xi^2 - W) psi
    down to 0 with log scaling; immune to the cancellation that kills the
    Picard series at large omega on the imaginary axis.
    """
    if grid_step is None:
        sup = potential.sup_q
        grid_step = min(2e-3, 0.02 / (omega * math.sqrt(sup))) if sup > 0 else 2e-3
    cfg = ShootingConfig(domain_cut=x_cut, grid_step=grid_step)
    xs, Wa, Wm, Wb = _build_grid(potential, omega, cfg)
    lam = -xi * xi
    psi, _, ls = _shoot_end(xs[::-1].copy(), Wb[::-1].copy(), Wm[::-1].copy(),
                            Wa[::-1].copy(), lam, 1.0, -xi)
    if psi == 0.0:
        return 0.0
    ln_f = math.log(abs(psi)) + ls - xi * x_cut
    if ln_f > 700.0:
        raise RuntimeError("Jost value overflow; x_cut is too large for this xi")
    return math.copysign(math.exp(ln_f), psi)


# ---------------------------------------------------------------------------
# characteristic identity 4 xi^2 / C = s^2 G'(xi)^2, G(xi) = F(i xi)


@dataclass(frozen=True)
class IdentityReport:
    """Per-mode relative residuals of the norming-constant identity."""

    mode_indices: tuple
    xi: tuple
    residuals: tuple
    skipped: tuple
    median_residual: float
    passed: bool


def characteristic_identity_check(spectrum, potential, omega, config=None):
    """Cross-check each 4 xi_j^2 / C_j against s_j^2 G'(xi_j)^2.

    s_j is fit from the exponential tail of the re-solved normalized
    eigenfunction on [0.7 L, 0.9 L]; G' is a central difference of the
    backward-ODE Jost values with step 1e-4 * xi_1.  Modes whose tail
    window is not cleanly exponential are skipped with a note.  Passing
    means the median residual over checked modes is below 0.05.
    """
    if spectrum.N == 0:
        return IdentityReport((), (), (), (), math.nan, True)
    base = config if config is not None else ShootingConfig.auto(potential, omega)
    xi1 = spectrum.xi[0]
    cfg = replace(base, domain_cut=base.domain_cut + 8.0 / xi1)
    modes = _solve_modes(potential, omega, cfg, keep="window")
    if len(modes) != spectrum.N:
        raise RuntimeError("re-solve found a different mode count than the given spectrum")

    if math.isfinite(potential.support_end):
        x_cut = potential.support_end
    else:
        x_cut = 8.0
        while omega * omega * potential.tq_integral_tail(x_cut) > 1e-4:
            x_cut *= 2.0
    delta = 1e-4 * xi1

    idx_out = []
    xi_out = []
    res_out = []
    skipped = []
    for j, mode in enumerate(modes, start=1):
        xi = mode.xi
        vals = mode.window_logpsi + xi * mode.window_x
        if not np.all(np.isfinite(vals)) or float(np.ptp(vals)) > 0.5:
            skipped.append((j, "tail window is not in the exponential regime"))
            continue
        ln_s = float(np.mean(vals))
        g_hi = _jost_imaginary_axis(potential, omega, xi + delta, x_cut)
        g_lo = _jost_imaginary_axis(potential, omega, xi - delta, x_cut)
        g_prime = (g_hi - g_lo) / (2.0 * delta)
        if g_prime == 0.0 or not math.isfinite(g_prime):
            skipped.append((j, "degenerate Jost derivative"))
            continue
        ln_lhs = math.log(4.0 * xi * xi / spectrum.C[j - 1])
        ln_rhs = 2.0 * ln_s + 2.0 * math.log(abs(g_prime))
        residual = abs(math.expm1(ln_rhs - ln_lhs))
        idx_out.append(j)
        xi_out.append(xi)
        res_out.append(residual)
    median = float(np.median(res_out)) if res_out else math.nan
    passed = bool(res_out) and median < 0.05
    return IdentityReport(tuple(idx_out), tuple(xi_out), tuple(res_out),
                          tuple(skipped), median, passed)
