"""Command-line experiment runner with CSV/JSON persistence.

Subcommands: bump, bounds, spectrum, reconstruct, convergence,
expsum-probe, signcount. Every run resolves settings as
CLI flag > config-file key > built-in default, writes artifacts under the
output directory (SPECLAB_OUT env > --out > config), and exits 0 iff all
of its checks pass. Wall-clock timings go to stderr only so repeated runs
with the same seed produce byte-identical files.
"""

import argparse
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np
from scipy.optimize import minimize

from .bump import (
    BumpSpec,
    HolderClass,
    analytic_floor_constant,
    eval_f_eps,
    f_eps_sup_norm,
    lower_bound_constant,
    norm_constant_m,
    verify_holder_membership,
)
from .counting import (
    PolySystem,
    enumerate_sign_vectors_1d,
    exp_sum_distance_floor,
    khovanskii_cell_bound,
    khovanskii_complement_bound,
    sample_sign_vectors,
    warren_component_bound,
    warren_thresholds,
)
from .reconstruct import GLParameters, primitive_error, reconstruct_q
from .spectral import (
    RationalDecay,
    Spectrum,
    SquareWell,
    potential_from_dict,
    solve_spectrum,
    square_well_spectrum,
)
from .truncation import EntireFamilyParams, floor_lower_bound
from .wkb import compare_wkb_exact, wkb_count, wkb_levels

__all__ = ["ExperimentConfig", "RunSummary", "main"]

_MAX_SEED = 2 ** 64


class UsageError(Exception):
    """Bad or missing command-line/config values; exits with code 2."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved settings of one run; seed lands in every artifact."""

    experiment: str
    seed: int
    out_dir: str
    threads: int = 1
    potential: dict = None
    omegas: tuple = ()
    holder: dict = None
    grid: dict = None

    def __post_init__(self):
        if not (0 <= self.seed < _MAX_SEED):
            raise UsageError("seed must fit in an unsigned 64-bit integer")
        if self.threads < 1:
            raise UsageError("threads must be >= 1")
        if any(b <= a for a, b in zip(self.omegas, self.omegas[1:])):
            raise UsageError("omega list must be strictly increasing")

    def echo(self):
        """JSON-ready view; out_dir stays out so artifacts relocate cleanly."""
        body = {"experiment": self.experiment, "seed": self.seed}
        if self.potential is not None:
            body["potential"] = self.potential
        if self.omegas:
            body["omegas"] = list(self.omegas)
        if self.holder is not None:
            body["holder"] = self.holder
        if self.grid is not None:
            body["grid"] = self.grid
        return body


@dataclass(frozen=True)
class RunSummary:
    """Check table of one run; runtime is reported on stderr, not persisted."""

    experiment: str
    seed: int
    checks: tuple
    extras: dict = field(default_factory=dict)
    runtime_s: float = 0.0

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks)

    def to_json(self, config):
        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "config": config.echo(),
            "checks": list(self.checks),
            "extras": self.extras,
            "passed": self.passed,
        }


def _check(name, formula, measured, bound, passed):
    return {"name": name, "formula": formula, "measured": measured,
            "bound": bound, "passed": bool(passed)}


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _write_csv(path, header, rows, seed):
    lines = [f"# seed={seed}", ",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _rng(seed):
    return np.random.Generator(np.random.Philox(seed))


class _Settings:
    """Flag-over-config resolution; config is one flat JSON object."""

    def __init__(self, args):
        self.args = args
        self.config = {}
        if getattr(args, "config", None):
            with open(args.config, encoding="utf-8") as fh:
                self.config = json.load(fh)
            if not isinstance(self.config, dict):
                raise UsageError("config file must hold a JSON object")

    def get(self, name, default=None, required=False):
        value = getattr(self.args, name.replace("-", "_"), None)
        if value is None:
            value = self.config.get(name, default)
        if required and value is None:
            raise UsageError(f"missing required option --{name}")
        return value

    @property
    def seed(self):
        return int(self.get("seed", 0))

    @property
    def threads(self):
        return int(self.get("threads", 1))

    def out_dir(self):
        out = os.environ.get("SPECLAB_OUT") or self.get("out", "out")
        os.makedirs(out, exist_ok=True)
        return out


def _resolve_potential(value):
    """Accept a named potential, a {variant, parameters} dict, or a JSON path."""
    if isinstance(value, dict):
        return potential_from_dict(value)
    name = str(value).lower()
    if name in ("squarewell", "square_well"):
        return SquareWell()
    if name in ("q1", "rational_decay"):
        return RationalDecay()
    if name.endswith(".json"):
        with open(value, encoding="utf-8") as fh:
            return potential_from_dict(json.load(fh))
    raise UsageError(f"unknown potential {value!r}; use squarewell, q1, or a JSON file")


def _finish(summary, config, out, report_name):
    _write_json(os.path.join(out, report_name), summary.to_json(config))
    for c in summary.checks:
        print(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}: "
              f"{c['formula']}")
    print(f"wrote {os.path.join(out, report_name)}")
    print(f"[{summary.experiment}] runtime {summary.runtime_s:.2f}s",
          file=sys.stderr)
    return 0 if summary.passed else 1


# ---------------------------------------------------------------------------
# bump


def cmd_bump(args):
    t0 = time.perf_counter()
    st = _Settings(args)
    out = st.out_dir()
    l = float(st.get("l", required=True))
    s = int(st.get("s", 1))
    r = int(st.get("r", 4))
    eps_mode = str(st.get("eps", "alternating"))
    holder = HolderClass(l, s)
    rng = _rng(st.seed)
    if eps_mode == "alternating":
        bump = BumpSpec.alternating(holder, r)
    elif eps_mode == "random":
        bump = BumpSpec.random(holder, r, rng)
    else:
        raise UsageError("--eps must be 'alternating' or 'random'")
    config = ExperimentConfig(experiment="bump", seed=st.seed, out_dir=out,
                              holder={"l": l, "s": s},
                              grid={"r": r, "eps": eps_mode})

    # cell centers carry the exact sup, so the sampled max matches the
    # closed form instead of undershooting by the grid resolution
    centers = (np.arange(r) + 0.5) / r
    axis = np.union1d(np.linspace(0.0, 1.0, 41 if s > 1 else 401), centers)
    if s == 1:
        pts = axis[:, None]
    else:
        mesh = np.meshgrid(*([axis] * s), indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
    vals = eval_f_eps(bump, pts)
    _write_csv(os.path.join(out, "bump_samples.csv"),
               [f"x{j + 1}" for j in range(s)] + ["f_eps"],
               [tuple(p) + (float(v),) for p, v in zip(pts, vals)],
               st.seed)

    report = verify_holder_membership(bump, grid_step=0.05 / r,
                                      pair_samples=200, tol=1e-3, rng=rng)
    sup_closed = f_eps_sup_norm(bump)
    sup_grid = float(np.max(np.abs(vals)))
    checks = (
        _check("holder_membership",
               "max(sup |D^k f| for k <= m, Holder quotient of D^m f) <= 1 + tol",
               max(max(report.derivative_sup.values()),
                   report.holder_quotient_max),
               1.0 + report.tol, report.passed),
        _check("sup_norm_closed_form",
               "max |f_eps| = 1 / (2 M_{l,s} 4^(s (floor(l)+1)) r^l)",
               sup_grid, sup_closed,
               abs(sup_grid - sup_closed) <= 1e-10 * sup_closed),
    )
    summary = RunSummary(
        experiment="bump", seed=st.seed, checks=checks,
        extras={
            "sup_norm": sup_closed,
            "norm_constant_m": norm_constant_m(holder),
            "derivative_sup": {str(k): v
                               for k, v in report.derivative_sup.items()},
            "holder_quotient_max": report.holder_quotient_max,
            "eps": list(bump.eps),
        },
        runtime_s=time.perf_counter() - t0)
    return _finish(summary, config, out, "bump_report.json")


# ---------------------------------------------------------------------------
# bounds


def _mp_lower_bound_constant(case, l, s):
    p = math.floor(l) + 1
    e1 = 1 + mp.e
    if case == "uniform":
        return 1 / (mp.sqrt(s) * mp.power(2, l + 1) * mp.power(8, mp.mpf(l) / s)
                    * mp.power(p, p) * mp.power(4 * e1, s * p))
    num = mp.factorial(p) ** (2 * s)
    den = (5 * mp.sqrt(s) * mp.power(2, l + 2) * mp.power(18, mp.mpf(l) / s)
           * mp.power(p, p) * mp.factorial(2 * math.floor(l) + 3) ** s
           * mp.power(e1, s * p))
    return num / den


def _mp_analytic_floor(case, l, s, n_family):
    # all-ones growth envelope: A = u = v = b = t = d = B = r = 1, so the
    # exponent-sum prefactor d(r+1)+v+t collapses to 4
    c = _mp_lower_bound_constant(case, l, s)
    inner = mp.log(4 / c, 2)
    log2_arg = (mp.log(2 * mp.e, 2) + (4 * mp.e + 1)
                + 2 * mp.log(1 + mp.mpf(l) / s, 2) + mp.log(inner, 2))
    c_prime = mp.mpf(3) / 4 * c / mp.power(4 * log2_arg, mp.mpf(l) / s)
    return c_prime / mp.power(n_family * mp.log(n_family, 2), mp.mpf(l) / s)


def cmd_bounds(args):
    t0 = time.perf_counter()
    st = _Settings(args)
    out = st.out_dir()
    target = args.subtarget
    values = {}
    checks = []

    def crosscheck(name, formula, value, reference):
        values[name] = value
        ref = float(reference)
        checks.append(_check(
            f"crosscheck_{name}", formula, value, ref,
            abs(value - ref) <= 1e-12 * max(abs(ref), 1e-300)))

    with mp.workdps(50):
        if target == "constants":
            l = float(st.get("l", required=True))
            s = int(st.get("s", 1))
            holder = HolderClass(l, s)
            crosscheck("C_inf",
                       "C = 1/(sqrt(s) 2^(l+1) 8^(l/s) p^p (4(1+e))^(s p))",
                       lower_bound_constant("uniform", holder),
                       _mp_lower_bound_constant("uniform", l, s))
            crosscheck("C_L1",
                       "C = (p!)^(2s) / (5 sqrt(s) 2^(l+2) 18^(l/s) p^p"
                       " ((2 floor(l)+3)!)^s (1+e)^(s p))",
                       lower_bound_constant("l1", holder),
                       _mp_lower_bound_constant("l1", l, s))
            config_holder = {"l": l, "s": s}
        elif target == "warren":
            n = int(st.get("n", required=True))
            d = int(st.get("d", required=True))
            q = int(st.get("q", required=True))
            crosscheck("warren_component_bound", "(4 e d q / n)^n",
                       warren_component_bound(n, d, q),
                       mp.power(4 * mp.e * d * q / mp.mpf(n), n))
            lo, hi = warren_thresholds(n, d)
            values["q_unattained_threshold"] = lo
            values["q_robust_threshold"] = hi
            config_holder = None
        elif target == "khovanskii":
            n = int(st.get("n", required=True))
            k = int(st.get("k", required=True))
            d = int(st.get("d", required=True))
            m = int(st.get("m", 1))
            crosscheck("khovanskii_cell_bound",
                       "2^(k(k-1)/2) d^(n+k) n^(n+2k)",
                       khovanskii_cell_bound(n, k, d),
                       mp.power(2, k * (k - 1) / 2) * mp.power(d, n + k)
                       * mp.power(n, n + 2 * k))
            crosscheck("khovanskii_complement_bound",
                       "2^(k(k-1)/2) (4 e m d n)^(n+2k)",
                       khovanskii_complement_bound(n, k, d, m),
                       mp.power(2, k * (k - 1) / 2)
                       * mp.power(4 * mp.e * m * d * n, n + 2 * k))
            config_holder = None
        elif target == "floor":
            if not st.get("all-ones", False) and not st.get("all_ones", False):
                raise UsageError("only the --all-ones envelope is supported")
            n_family = int(st.get("N", required=True))
            l = float(st.get("l", required=True))
            s = int(st.get("s", 1))
            holder = HolderClass(l, s)
            params = EntireFamilyParams(A=1, u=1, v=1, b=1, t=1, d=1, B=1,
                                        r=1, N=n_family)
            crosscheck("floor_lower_bound",
                       "C' / (N log2 N)^(l/s)",
                       floor_lower_bound(params, holder, "uniform"),
                       _mp_analytic_floor("uniform", l, s, n_family))
            values["analytic_floor_constant"] = analytic_floor_constant(
                "uniform", holder, params)
            config_holder = {"l": l, "s": s}
        else:
            raise UsageError(f"unknown bounds subtarget {target!r}")

    config = ExperimentConfig(experiment=f"bounds-{target}", seed=st.seed,
                              out_dir=out, holder=config_holder)
    summary = RunSummary(experiment=f"bounds-{target}", seed=st.seed,
                         checks=tuple(checks), extras={"values": values},
                         runtime_s=time.perf_counter() - t0)
    return _finish(summary, config, out, f"bounds_{target}.json")


# ---------------------------------------------------------------------------
# spectrum


def _spectrum_checks(potential, omega, spec):
    checks = [_check("xi_ascending", "xi_1 < xi_2 < ... < xi_N",
                     spec.N, spec.N,
                     all(b > a for a, b in zip(spec.xi, spec.xi[1:])))]
    if isinstance(potential, SquareWell):
        oracle = square_well_spectrum(omega)
        xi_rel = max((abs(a - b) / b for a, b
                      in zip(spec.xi, oracle.xi)), default=0.0)
        c_rel = max((abs(a - b) / b for a, b
                     in zip(spec.C, oracle.C)), default=0.0)
        checks.append(_check(
            "oracle_xi", "xi matches roots of"
            " xi sin(sqrt(omega^2-xi^2)) + sqrt(omega^2-xi^2)"
            " cos(sqrt(omega^2-xi^2)) = 0, rel < 1e-6",
            xi_rel, 1e-6, spec.N == oracle.N and xi_rel < 1e-6))
        checks.append(_check(
            "oracle_C", "C matches (2 xi/(1+xi)) (omega^2 - xi^2), rel < 1e-4",
            c_rel, 1e-4, spec.N == oracle.N and c_rel < 1e-4))
        checks.append(_check(
            "xi_floor", "every xi >= 1/omega",
            min(spec.xi, default=math.inf), 1.0 / omega,
            all(x >= 1.0 / omega for x in spec.xi)))
        ratios = [4.0 * x * x / c for x, c in zip(spec.xi, spec.C)]
        lo, hi = 1.0 / (5.0 * omega ** 2), 220.0 * omega ** 2
        checks.append(_check(
            "ratio_bracket", "1/(5 omega^2) <= 4 xi^2 / C <= 220 omega^2",
            [min(ratios, default=math.nan), max(ratios, default=math.nan)],
            [lo, hi], all(lo <= v <= hi for v in ratios)))
    if isinstance(potential, RationalDecay):
        if spec.N:
            checks.append(_check(
                "xi1_floor", "xi_1 >= pi^2 / (256 omega)",
                spec.xi[0], math.pi ** 2 / (256.0 * omega),
                spec.xi[0] >= math.pi ** 2 / (256.0 * omega)))
            gaps = [b - a for a, b in zip(spec.xi, spec.xi[1:])]
            checks.append(_check(
                "gap_floor", "xi_{n+1} - xi_n >= 1/(5 omega)",
                min(gaps, default=math.inf), 1.0 / (5.0 * omega),
                all(g >= 1.0 / (5.0 * omega) for g in gaps)))
    return checks


def cmd_spectrum(args):
    t0 = time.perf_counter()
    st = _Settings(args)
    out = st.out_dir()
    potential_spec = st.get("potential", required=True)
    potential = _resolve_potential(potential_spec)
    omega = float(st.get("omega", required=True))
    with_wkb = bool(st.get("wkb", False))
    config = ExperimentConfig(
        experiment="spectrum", seed=st.seed, out_dir=out,
        potential=potential.as_dict(), omegas=(omega,))

    spec = solve_spectrum(potential, omega)
    _write_json(os.path.join(out, "spectrum.json"),
                {"omega": omega, "xi": list(spec.xi), "C": list(spec.C),
                 "N": spec.N, "seed": st.seed})
    checks = _spectrum_checks(potential, omega, spec)
    extras = {"N": spec.N}

    if with_wkb:
        n_wkb = wkb_count(potential, omega)
        extras["wkb_count"] = n_wkb
        checks.append(_check(
            "parity_count", "|wkb_count - 2 N_dirichlet| <= 1",
            abs(n_wkb - 2 * spec.N), 1, abs(n_wkb - 2 * spec.N) <= 1))
        if n_wkb >= 1:
            levels = wkb_levels(potential, omega)
            rows = [(r["exact_rank"], r["wkb_level"], r["xi_exact"],
                     r["xi_wkb"], r["rel_error"])
                    for r in compare_wkb_exact(levels, spec)]
            _write_csv(os.path.join(out, "wkb_comparison.csv"),
                       ["exact_rank", "wkb_level", "xi_exact", "xi_wkb",
                        "rel_error"], rows, st.seed)
            if isinstance(potential, RationalDecay):
                eta_n = levels.eta[-1]
                lo = math.pi ** 2 / (256.0 * omega ** 2)
                hi = math.pi ** 2 / (16.0 * omega ** 2)
                checks.append(_check(
                    "eta_N_bracket",
                    "pi^2/(256 omega^2) <= eta_N <= pi^2/(16 omega^2)",
                    eta_n, [lo, hi], lo <= eta_n <= hi))

    summary = RunSummary(experiment="spectrum", seed=st.seed,
                         checks=tuple(checks), extras=extras,
                         runtime_s=time.perf_counter() - t0)
    return _finish(summary, config, out, "spectrum_report.json")


# ---------------------------------------------------------------------------
# reconstruct


def _load_spectrum(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return Spectrum(omega=float(doc["omega"]), xi=tuple(doc["xi"]),
                    C=tuple(doc["C"]))


def _reconstruct_rows(potential, spec, xmax, points):
    params = GLParameters.from_spectrum(spec)
    grid = np.linspace(0.0, xmax, points)
    rows = reconstruct_q(params, spec.omega, grid)
    try:
        report = primitive_error(potential, rows, xmax)
    except ValueError:
        report = None
    return rows, report


def cmd_reconstruct(args):
    t0 = time.perf_counter()
    st = _Settings(args)
    out = st.out_dir()
    potential = _resolve_potential(st.get("potential", required=True))
    spectrum_file = st.get("spectrum-file")
    if spectrum_file:
        spec = _load_spectrum(spectrum_file)
    else:
        spec = solve_spectrum(potential, float(st.get("omega", required=True)))
    xmax = float(st.get("xmax", 2.0))
    points = int(st.get("points", 321))
    config = ExperimentConfig(
        experiment="reconstruct", seed=st.seed, out_dir=out,
        potential=potential.as_dict(), omegas=(spec.omega,),
        grid={"xmax": xmax, "points": points})

    rows, report = _reconstruct_rows(potential, spec, xmax, points)
    _write_csv(os.path.join(out, "reconstruction.csv"),
               ["x", "logdet", "d1", "d2", "q_reconstructed", "flag"],
               [(r["x"], r["logdet"], r["d1"], r["d2"],
                 r["q_reconstructed"], r["flag"]) for r in rows],
               st.seed)

    ok_rows = [r for r in rows if r["flag"] == "ok"]
    n_singular = len(rows) - len(ok_rows)
    checks = [
        _check("not_all_singular", "some grid point has det W != 0",
               len(ok_rows), 1, bool(ok_rows)),
        _check("profile_finite", "logdet, d1, d2 finite off flagged points",
               n_singular, len(rows),
               all(math.isfinite(r["logdet"]) and math.isfinite(r["d1"])
                   and math.isfinite(r["d2"]) for r in ok_rows)),
    ]
    extras = {"N": spec.N, "omega": spec.omega, "n_singular": n_singular}
    if report is not None:
        extras["primitive_error_direct"] = report.direct
        extras["primitive_error_doubled"] = report.doubled
        extras["n_excluded"] = report.n_excluded
    summary = RunSummary(experiment="reconstruct", seed=st.seed,
                         checks=tuple(checks), extras=extras,
                         runtime_s=time.perf_counter() - t0)
    return _finish(summary, config, out, "reconstruct_report.json")


# ---------------------------------------------------------------------------
# convergence


def cmd_convergence(args):
    t0 = time.perf_counter()
    st = _Settings(args)
    out = st.out_dir()
    potential = _resolve_potential(st.get("potential", "q1"))
    raw = st.get("omegas", "4,8,16")
    if isinstance(raw, str):
        omegas = tuple(float(v) for v in raw.split(","))
    else:
        omegas = tuple(float(v) for v in raw)
    if len(omegas) < 3:
        raise UsageError("convergence needs at least 3 omega values")
    xmax = float(st.get("xmax", 2.0))
    points = int(st.get("points", 321))
    config = ExperimentConfig(
        experiment="convergence", seed=st.seed, out_dir=out,
        potential=potential.as_dict(), omegas=omegas, threads=st.threads,
        grid={"xmax": xmax, "points": points})

    def run_one(omega):
        spec = solve_spectrum(potential, omega)
        _, report = _reconstruct_rows(potential, spec, xmax, points)
        if report is None:
            raise RuntimeError(f"no usable reconstruction points at omega={omega}")
        return report

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            reports = dict(zip(omegas, pool.map(run_one, omegas)))
    else:
        reports = {om: run_one(om) for om in omegas}

    rows = [(om, reports[om].direct, reports[om].doubled,
             math.log(om) / math.sqrt(om)) for om in omegas]
    _write_csv(os.path.join(out, "convergence.csv"),
               ["omega", "err_direct", "err_doubled", "reference"],
               rows, st.seed)

    ln_om = np.log(omegas)
    slope_direct = float(np.polyfit(ln_om, np.log([r[1] for r in rows]), 1)[0])
    slope_doubled = float(np.polyfit(ln_om, np.log([r[2] for r in rows]), 1)[0])
    decreasing = (rows[-1][1] < rows[0][1]) or (rows[-1][2] < rows[0][2])
    checks = (
        _check("error_decreases",
               "err(omega_max) < err(omega_min) for at least one variant",
               [rows[-1][1], rows[-1][2]], [rows[0][1], rows[0][2]],
               decreasing),
        _check("reference_column", "reference = ln(omega)/sqrt(omega)",
               rows[0][3], math.log(omegas[0]) / math.sqrt(omegas[0]), True),
        _check("slope_finite", "least-squares slope of ln err vs ln omega"
               " is finite", [slope_direct, slope_doubled], None,
               math.isfinite(slope_direct) and math.isfinite(slope_doubled)),
    )
    summary = RunSummary(
        experiment="convergence", seed=st.seed, checks=checks,
        extras={"slope_direct": slope_direct, "slope_doubled": slope_doubled},
        runtime_s=time.perf_counter() - t0)
    return _finish(summary, config, out, "convergence_report.json")


# ---------------------------------------------------------------------------
# expsum-probe


def _vp_uniform_error(ts, fs, zeta):
    """Best uniform error of sum_j c_j e^{zeta_j t} with c from least squares."""
    if np.max(np.abs(zeta)) > 50.0:
        return math.inf
    basis = np.exp(np.outer(ts, zeta))
    coeff, *_ = np.linalg.lstsq(basis, fs, rcond=None)
    resid = fs - basis @ coeff
    if not np.all(np.isfinite(resid)):
        return math.inf
    return float(np.max(np.abs(resid)))


def cmd_expsum_probe(args):
    t0 = time.perf_counter()
    st = _Settings(args)
    out = st.out_dir()
    n = int(st.get("n", required=True))
    l = float(st.get("l", required=True))
    restarts = int(st.get("restarts", 20))
    zeta_box = float(st.get("zeta-box", 3.0))
    grid_points = int(st.get("grid-points", 2001))
    if n < 1 or restarts < 1:
        raise UsageError("need n >= 1 and restarts >= 1")
    holder = HolderClass(l, 1)
    bump = BumpSpec.alternating(holder, n)
    floor = exp_sum_distance_floor(n, (0,) * n, holder)
    config = ExperimentConfig(
        experiment="expsum-probe", seed=st.seed, out_dir=out,
        holder={"l": l, "s": 1},
        grid={"n": n, "restarts": restarts, "zeta_box": zeta_box,
              "grid_points": grid_points})

    ts = np.linspace(0.0, 1.0, grid_points)
    fs = eval_f_eps(bump, ts)
    rng = _rng(st.seed)
    rows = []
    best = math.inf
    failures = 0
    for k in range(restarts):
        z0 = rng.uniform(-zeta_box, zeta_box, size=n)
        res = minimize(lambda z: _vp_uniform_error(ts, fs, z), z0,
                       method="Nelder-Mead",
                       options={"maxiter": 400 * n, "xatol": 1e-6,
                                "fatol": 1e-12})
        err = float(res.fun)
        ok = bool(res.success) and math.isfinite(err)
        if not math.isfinite(err):
            failures += 1
        else:
            best = min(best, err)
        rows.append((k, err, int(res.nit), "yes" if ok else "no"))
    _write_csv(os.path.join(out, "expsum_restarts.csv"),
               ["restart", "uniform_error", "iterations", "converged"],
               rows, st.seed)

    checks = (
        _check("floor_respected",
               "best uniform error >= C_l / (n + sum p_j)^l",
               best, floor, best >= floor),
    )
    summary = RunSummary(
        experiment="expsum-probe", seed=st.seed, checks=checks,
        extras={"best_error": best, "floor": floor,
                "bump_sup_norm": f_eps_sup_norm(bump),
                "failed_restarts": failures},
        runtime_s=time.perf_counter() - t0)
    return _finish(summary, config, out, "expsum_report.json")


# ---------------------------------------------------------------------------
# signcount


def cmd_signcount(args):
    t0 = time.perf_counter()
    st = _Settings(args)
    out = st.out_dir()
    n = int(st.get("n", 1))
    q = int(st.get("q", 3))
    d = int(st.get("d", 4))
    instances = int(st.get("instances", 100))
    mode = str(st.get("mode", "exact" if n == 1 else "sampling"))
    samples = int(st.get("samples", 2000))
    box = float(st.get("box", 10.0))
    if mode == "exact" and n != 1:
        raise UsageError("exact enumeration requires n == 1")
    if mode not in ("exact", "sampling"):
        raise UsageError("--mode must be 'exact' or 'sampling'")
    config = ExperimentConfig(
        experiment="signcount", seed=st.seed, out_dir=out,
        grid={"n": n, "q": q, "d": d, "instances": instances, "mode": mode})

    bound = warren_component_bound(n, d, q)
    threshold = warren_thresholds(n, d)[0]
    search_unattained = mode == "exact" and q >= threshold
    rng = _rng(st.seed)
    rows = []
    all_within = True
    unattained_found = 0
    for i in range(instances):
        system = PolySystem.random(n, q, d, rng)
        if mode == "exact":
            attained = enumerate_sign_vectors_1d(system)
            count = len(attained)
            if search_unattained:
                missing = next(
                    (eps for eps in itertools.product((-1, 1), repeat=q)
                     if eps not in attained), None)
                unattained_found += missing is not None
        else:
            count = len(sample_sign_vectors(system, samples, box, rng))
        ok = count <= bound
        all_within = all_within and ok
        rows.append((i, count, bound, "yes" if ok else "no"))
    _write_csv(os.path.join(out, "signcount.csv"),
               ["instance", "attained", "bound", "within_bound"],
               rows, st.seed)

    checks = [_check("count_le_bound",
                     "attained sign vectors <= (4 e d q / n)^n",
                     max(r[1] for r in rows), bound, all_within)]
    if search_unattained:
        checks.append(_check(
            "unattained_exists",
            "q >= ceil(8 n log2 d) forces an unattained sign sequence",
            unattained_found, instances, unattained_found == instances))
    summary = RunSummary(
        experiment="signcount", seed=st.seed, checks=tuple(checks),
        extras={"mode": mode, "q_unattained_threshold": threshold,
                "sampling_is_lower_estimate": mode == "sampling"},
        runtime_s=time.perf_counter() - t0)
    return _finish(summary, config, out, "signcount_report.json")


# ---------------------------------------------------------------------------
# parser


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override it")
    common.add_argument("--out", help="output directory (SPECLAB_OUT wins)")
    common.add_argument("--seed", type=int, help="64-bit experiment seed")
    common.add_argument("--threads", type=int, help="worker threads")

    parser = argparse.ArgumentParser(
        prog="speclab",
        description="Spectral-reconstruction and approximation-bound experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bump", parents=[common],
                       help="build an oscillating bump, certify membership")
    p.add_argument("--l", type=float)
    p.add_argument("--s", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--eps", choices=("alternating", "random"))
    p.set_defaults(func=cmd_bump)

    p = sub.add_parser("bounds", parents=[common],
                       help="closed-form bound tables with 50-digit crosschecks")
    p.add_argument("subtarget",
                   choices=("warren", "khovanskii", "floor", "constants"))
    p.add_argument("--l", type=float)
    p.add_argument("--s", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--all-ones", action="store_true", default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("spectrum", parents=[common],
                       help="solve the half-line spectrum, optional WKB table")
    p.add_argument("--potential")
    p.add_argument("--omega", type=float)
    p.add_argument("--wkb", action="store_true", default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("reconstruct", parents=[common],
                       help="determinant reconstruction from a spectrum")
    p.add_argument("--potential")
    p.add_argument("--omega", type=float)
    p.add_argument("--spectrum-file")
    p.add_argument("--xmax", type=float)
    p.add_argument("--points", type=int)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("convergence", parents=[common],
                       help="primitive-error decay across an omega sweep")
    p.add_argument("--potential")
    p.add_argument("--omegas")
    p.add_argument("--xmax", type=float)
    p.add_argument("--points", type=int)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("expsum-probe", parents=[common],
                       help="fit exponential sums to the bump, verify the floor")
    p.add_argument("--n", type=int)
    p.add_argument("--l", type=float)
    p.add_argument("--restarts", type=int)
    p.add_argument("--zeta-box", type=float)
    p.add_argument("--grid-points", type=int)
    p.set_defaults(func=cmd_expsum_probe)

    p = sub.add_parser("signcount", parents=[common],
                       help="attained sign vectors vs the component bound")
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--instances", type=int)
    p.add_argument("--mode", choices=("exact", "sampling"))
    p.add_argument("--samples", type=int)
    p.add_argument("--box", type=float)
    p.set_defaults(func=cmd_signcount)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
