"""Hardness certificates: what exponential sums cannot do to bump functions.

Builds an alternating bump in a smoothness class and walks through four
certificates: the closed-form sup norm, the distance floor that any n-term
exponential sum must respect (checked against an actual variable-projection
fit), the sign-vector counting bound with an unattained sign vector past
the threshold, and the tail-validity threshold of the power-series
truncation machinery.
"""

import argparse
import math

import numpy as np
from scipy.optimize import minimize

from speclab import (
    BumpSpec,
    EntireFamilyParams,
    HolderClass,
    PolySystem,
    enumerate_sign_vectors_1d,
    eval_f_eps,
    exp_sum_distance_floor,
    f_eps_sup_norm,
    find_unattained_sequence,
    tail_bound,
    truncation_degree,
    verify_holder_membership,
    warren_component_bound,
    warren_thresholds,
)


def fit_exp_sum(ts, fs, n, restarts, rng):
    """Best uniform error over seeded restarts; coefficients by least squares."""
    def objective(zeta):
        if np.max(np.abs(zeta)) > 50.0:
            return math.inf
        basis = np.exp(np.outer(ts, zeta))
        coeff, *_ = np.linalg.lstsq(basis, fs, rcond=None)
        return float(np.max(np.abs(fs - basis @ coeff)))

    best = math.inf
    for _ in range(restarts):
        res = minimize(objective, rng.uniform(-3.0, 3.0, size=n),
                       method="Nelder-Mead",
                       options={"maxiter": 400 * n, "xatol": 1e-6,
                                "fatol": 1e-12})
        best = min(best, float(res.fun))
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--restarts", type=int, default=5)
    args = parser.parse_args()
    rng = np.random.Generator(np.random.Philox(args.seed))

    holder = HolderClass(1.5, 1)
    bump = BumpSpec.alternating(holder, 3)
    report = verify_holder_membership(bump, grid_step=0.05 / 3,
                                      pair_samples=200, tol=1e-3, rng=rng)
    ts = np.linspace(0.0, 1.0, 2001)
    fs = eval_f_eps(bump, ts)
    print("1. alternating bump, smoothness l = 1.5, 3 cells")
    print(f"   class membership verified: {report.passed}")
    print(f"   sup norm closed form {f_eps_sup_norm(bump):.8e}, "
          f"grid max {np.max(np.abs(fs)):.8e}\n")

    n = 2
    floor = exp_sum_distance_floor(n, (0,) * n, holder)
    best = fit_exp_sum(ts, fs, n, args.restarts, rng)
    print(f"2. distance floor for {n}-term exponential sums")
    print(f"   floor {floor:.6e} <= best fitted uniform error {best:.6e}: "
          f"{best >= floor}\n")

    bound = warren_component_bound(1, 4, 3)
    worst = max(len(enumerate_sign_vectors_1d(PolySystem.random(1, 3, 4, rng)))
                for _ in range(20))
    q_min, q_strict = warren_thresholds(1, 4)
    unattained = find_unattained_sequence(PolySystem.random(1, q_min, 4, rng))
    print("3. sign vectors of random quartic systems on the line")
    print(f"   20 instances, 3 polynomials: max count {worst} <= "
          f"bound {bound:.1f}")
    print(f"   thresholds (some / most vectors unattained): "
          f"{q_min} / {q_strict}")
    print(f"   unattained vector found at q = {q_min}: "
          f"{unattained is not None}\n")

    params = EntireFamilyParams(A=1.0, u=1.0, v=1.0, b=1.0, t=1.0, d=1.0,
                                B=1.0, r=1.0, N=1)
    degree = truncation_degree(params, HolderClass(1.0, 1), 1.0)
    print("4. power-series truncation for the all-ones family")
    print(f"   tail bound valid from K = 10197 "
          f"(valid(10196) = {tail_bound(params, 10196).valid}, "
          f"valid(10197) = {tail_bound(params, 10197).valid})")
    print(f"   truncation degree for unit budget: {degree}")


if __name__ == "__main__":
    main()
