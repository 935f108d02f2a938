"""Semiclassical level estimates for the half-line problem -psi'' - omega^2 Q psi.

Works on the even extension of Q, where the quantization rule
Phi(eta_j) = (j - 1/2) pi / omega with Phi(eta) = int sqrt(Q - eta^2) between
the turning points produces the full-line levels. Odd-parity levels
(j = 2, 4, ...) restrict to the Dirichlet half-line modes, which is what
compare_wkb_exact pairs against the shooting solver.

The tail phase theta_plus(eta) = eta x_+ + int_{x_+}^inf eta - sqrt(eta^2 - Q)
gives the decay-amplitude exponent ln s = omega theta_plus; s is kept in log
form since the exponent grows like omega^2.
"""

import math
from dataclasses import dataclass

from scipy.integrate import quad

__all__ = [
    "WkbLevels",
    "action_phi",
    "compare_wkb_exact",
    "theta_plus",
    "turning_points",
    "wkb_count",
    "wkb_levels",
]

_QUAD_ABS = 1e-10


@dataclass(frozen=True)
class WkbLevels:
    """Quantized levels eta_j (deepest first) with tail-phase exponents.

    eta_j estimates xi_{(j)} / omega for the full-line even extension;
    log_s holds ln s_j = omega * theta_plus(eta_j).
    """

    omega: float
    eta: tuple
    theta: tuple
    log_s: tuple

    def __post_init__(self):
        if not (self.omega > 0.0 and math.isfinite(self.omega)):
            raise ValueError("omega must be positive and finite")
        object.__setattr__(self, "eta", tuple(float(e) for e in self.eta))
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        object.__setattr__(self, "log_s", tuple(float(v) for v in self.log_s))
        if not (len(self.eta) == len(self.theta) == len(self.log_s)):
            raise ValueError("eta, theta, log_s must have equal length")
        if any(e <= 0.0 for e in self.eta):
            raise ValueError("eta values must be positive")
        if any(a <= b for a, b in zip(self.eta, self.eta[1:])):
            raise ValueError("eta must be strictly decreasing")
        if any(v < 0.0 for v in self.log_s):
            raise ValueError("log_s must be nonnegative (s_j >= 1)")

    @property
    def N(self):
        return len(self.eta)

    @property
    def s(self):
        """exp(log_s); overflows for omega beyond ~23, use log_s there."""
        return tuple(math.exp(v) for v in self.log_s)


def turning_points(potential, eta):
    """Classical turning points (-x_+, x_+) of the even extension at depth eta.

    Solves Q(x_+) = eta^2 by bisection to absolute 1e-12; assumes Q crosses
    eta^2 once (monotone decay past the first crossing).
    """
    q0 = potential.q(0.0)
    if not (0.0 < eta < math.sqrt(q0)):
        raise ValueError("eta must lie in (0, sqrt(Q(0))) for a turning point")
    eta2 = eta * eta
    hi = 1.0
    while potential.q(hi) >= eta2:
        hi *= 2.0
        if hi > 1e12:
            raise RuntimeError("turning point search did not terminate")
    lo = 0.0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if potential.q(mid) >= eta2:
            lo = mid
        else:
            hi = mid
    x_plus = 0.5 * (lo + hi)
    return -x_plus, x_plus


def action_phi(potential, eta):
    """Action Phi(eta) = int_{x_-}^{x_+} sqrt(Q(y) - eta^2) dy, to abs 1e-8.

    eta = 0 reduces to 2 int_0^inf sqrt(Q), taken from the potential's
    closed-form integral. The turning-point end uses the substitution
    y = x_+ - u^2, which removes the square-root singularity.
    """
    q0 = potential.q(0.0)
    if eta < 0.0 or eta >= math.sqrt(q0):
        raise ValueError("eta must lie in [0, sqrt(Q(0)))")
    if eta == 0.0:
        return 2.0 * potential.sqrt_q_integral()
    _, xp = turning_points(potential, eta)
    eta2 = eta * eta

    def f(y):
        return math.sqrt(max(potential.q(y) - eta2, 0.0))

    def g(u):
        return 2.0 * u * f(xp - u * u)

    cut = 0.5 * xp
    head, e1 = quad(f, 0.0, cut, epsabs=_QUAD_ABS, epsrel=_QUAD_ABS, limit=200)
    tail, e2 = quad(g, 0.0, math.sqrt(xp - cut),
                    epsabs=_QUAD_ABS, epsrel=_QUAD_ABS, limit=200)
    if e1 + e2 > 5e-9:
        raise RuntimeError("action quadrature failed to reach 1e-8")
    return 2.0 * (head + tail)


def wkb_count(potential, omega):
    """floor(omega Phi(0) / pi); the small shift guards exact-integer products."""
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    return int(math.floor(omega * action_phi(potential, 0.0) / math.pi + 1e-9))


def theta_plus(potential, eta):
    """Tail phase eta x_+ + int_{x_+}^inf [eta - sqrt(eta^2 - Q(y))] dy.

    The quadrature stops where Q <= 1e-4 eta^2 (at least 10 x_+) and the
    remaining tail uses the first-order form int Q/(2 eta); the dropped term
    is below 1e-4 of that remainder.
    """
    q0 = potential.q(0.0)
    if not (0.0 < eta < math.sqrt(q0)):
        raise ValueError("eta must lie in (0, sqrt(Q(0)))")
    if potential.decay_power <= 1.0:
        raise ValueError("tail integral diverges for decay power <= 1")
    _, xp = turning_points(potential, eta)
    eta2 = eta * eta
    far = max(10.0 * xp, 1.0)
    while potential.q(far) > 1e-4 * eta2:
        far *= 2.0
        if far > 1e12:
            raise RuntimeError("tail split search did not terminate")

    def f(y):
        return eta - math.sqrt(max(eta2 - potential.q(y), 0.0))

    def g(u):
        return 2.0 * u * f(xp + u * u)

    cut = min(1.0, 0.5 * (far - xp))
    head, e1 = quad(g, 0.0, math.sqrt(cut),
                    epsabs=_QUAD_ABS, epsrel=_QUAD_ABS, limit=200)
    pts = [b for b in potential.breakpoints if xp + cut < b < far]
    body, e2 = quad(f, xp + cut, far, epsabs=_QUAD_ABS, epsrel=_QUAD_ABS,
                    limit=400, points=pts or None)
    if e1 + e2 > 5e-9:
        raise RuntimeError("tail-phase quadrature failed to reach 1e-8")
    remainder = potential.q_integral_tail(far) / (2.0 * eta)
    return eta * xp + head + body + remainder


def wkb_levels(potential, omega):
    """Solve Phi(eta_j) = (j - 1/2) pi / omega for j = 1..wkb_count(omega).

    Phi is strictly decreasing for monotone Q, so plain bisection brackets
    every level; eta resolved to 1e-10.
    """
    n = wkb_count(potential, omega)
    if n < 1:
        raise ValueError("no quantized level: omega below pi / Phi(0)")
    sq0 = math.sqrt(potential.q(0.0))
    phi0 = action_phi(potential, 0.0)
    etas = []
    for j in range(1, n + 1):
        target = (j - 0.5) * math.pi / omega
        if target >= phi0:
            raise RuntimeError(f"level {j} target exceeds Phi(0); bracket lost")
        lo, hi = 0.0, sq0
        while hi - lo > 1e-10:
            mid = 0.5 * (lo + hi)
            if action_phi(potential, mid) > target:
                lo = mid
            else:
                hi = mid
        etas.append(0.5 * (lo + hi))
    thetas = [theta_plus(potential, e) for e in etas]
    return WkbLevels(omega=omega, eta=tuple(etas), theta=tuple(thetas),
                     log_s=tuple(omega * t for t in thetas))


def compare_wkb_exact(levels, spectrum):
    """Pair exact Dirichlet modes with the odd-parity WKB levels (j = 2i).

    Exact modes ranked deepest first; returns one row per pair that both
    sides resolve, with the relative gap in xi.
    """
    if abs(levels.omega - spectrum.omega) > 1e-12 * max(1.0, spectrum.omega):
        raise ValueError("levels and spectrum were computed at different omega")
    rows = []
    xi_desc = spectrum.xi[::-1]
    for i, xi in enumerate(xi_desc, start=1):
        j = 2 * i
        if j > levels.N:
            break
        xi_wkb = levels.omega * levels.eta[j - 1]
        rows.append({
            "exact_rank": i,
            "wkb_level": j,
            "xi_exact": xi,
            "xi_wkb": xi_wkb,
            "rel_error": abs(xi_wkb - xi) / xi,
        })
    return rows
