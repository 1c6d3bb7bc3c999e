"""Command-line interface.

Three subcommands:

    qjd poly      construct an eigenfunction and print its expansions
    qjd verify    run a named verification suite, report every residual
    qjd simulate  run the jump process and write trajectory/measure files

All reports are deterministic JSON (sorted keys, no timestamps), so a rerun
with the same flags is byte-identical.  Every numeric entry carries its
provenance: {"exact": "p/q", "float": x} for exact rationals, {"exact":
null, "float": x} for float-precision values, next to the tolerance it is
judged against.  With --out DIR, delimited CSV files and rendered PNG
figures are written alongside the JSON report.

Exit codes: 0 success, 1 configuration error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import dynamics
from .bigqjacobi import (
    EigenvalueCollisionError,
    StabilityError,
    big_qjacobi_poly,
    family,
    mu_N,
    mu_infinity,
    phi_symfunc,
    quadratic_form_bounds,
)
from .macdonald import macdonald_stability_check
from .qalgebra import Params, Partition, as_partition, make_params
from .statespace import State, state_from_str, state_to_str
from .symfunc import cone_partitions, partition_sort_key

_SUITES = (
    "eigen",
    "ct",
    "stability",
    "macdonald",
    "pmp",
    "reversibility",
    "orthogonality",
    "normlimit",
    "semigroup",
    "resolvent",
    "positivity",
    "spectral",
    "uniqueness",
    "bounds",
    "simulation",
    "all",
)


class ConfigError(Exception):
    """A command-line or parameter constraint violation."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: A003 - argparse API
        raise ConfigError(message)


def _fraction(text: str, flag: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{flag} must be a rational number like 1/4, got {text!r}") from exc


_COMPLEX_RE = re.compile(r"([+-]?[0-9/.]+)([+-][0-9/.]+)\*?[ij]")


def _complex_pair(text: str, flag: str) -> Tuple[Fraction, Fraction]:
    m = _COMPLEX_RE.fullmatch(text.replace(" ", ""))
    if not m:
        raise ConfigError(f"{flag} must look like 1/4+1/2i, got {text!r}")
    return _fraction(m.group(1), flag), _fraction(m.group(2), flag)


@dataclass
class RunConfig:
    """Validated run configuration shared by the subcommands."""

    params: Params
    lam: Partition
    N: Optional[int]
    K: int
    horizon: float
    seed: int
    out: Optional[Path]
    tol: Optional[float]
    trials: int
    min_events: int
    threads: int
    check_stability: bool
    start: Optional[State]
    minus: int
    max_events: Optional[int]
    suite: str

    @staticmethod
    def from_args(args: argparse.Namespace) -> "RunConfig":
        q = _fraction(args.q, "--q")
        t = _fraction(args.t, "--t")
        a = _fraction(args.a, "--a")
        b = _fraction(args.b, "--b")
        g_re, g_im = _complex_pair(args.gamma, "--gamma")
        d_re, d_im = _complex_pair(args.delta, "--delta")
        if g_im == 0:
            raise ConfigError("--gamma must have a nonzero imaginary part")
        if g_re != d_re or g_im != -d_im:
            raise ConfigError("--gamma and --delta must be complex conjugates of each other")
        try:
            params = make_params(q, t, a, b, 2 * g_re, g_re * g_re + g_im * g_im)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        try:
            lam = as_partition(
                tuple(int(p) for p in args.lam.split(",") if p.strip() != "")
            )
        except ValueError as exc:
            raise ConfigError(f"--lambda: {exc}") from exc
        N = getattr(args, "N", None)
        if N is not None and N < 1:
            raise ConfigError(f"--N must satisfy N >= 1, got {N}")
        K = getattr(args, "K", 8)
        if K is None:
            K = 8
        if K < 2:
            raise ConfigError(f"--K must satisfy K >= 2, got {K}")
        horizon = float(getattr(args, "horizon", 10.0))
        if not (math.isfinite(horizon) and horizon >= 0):
            raise ConfigError(f"--horizon must be a finite number >= 0, got {horizon}")
        tol = getattr(args, "tol", None)
        if tol is not None:
            tol = float(tol)
            if not (math.isfinite(tol) and tol > 0):
                raise ConfigError(f"--tol must be a positive number, got {tol}")
        trials = getattr(args, "trials", 200)
        if trials < 1:
            raise ConfigError(f"--trials must be >= 1, got {trials}")
        min_events = getattr(args, "min_events", 100_000)
        if min_events < 1:
            raise ConfigError(f"--min-events must be >= 1, got {min_events}")
        threads_text = os.environ.get("QJD_THREADS", "1")
        try:
            threads = int(threads_text)
        except ValueError as exc:
            raise ConfigError(f"QJD_THREADS must be a positive integer, got {threads_text!r}") from exc
        if threads < 1:
            raise ConfigError(f"QJD_THREADS must be a positive integer, got {threads}")
        start_text = getattr(args, "start", None)
        start = None
        if start_text is not None:
            try:
                start = state_from_str(start_text)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        minus = getattr(args, "minus", 0)
        if minus < 0:
            raise ConfigError(f"--minus must be >= 0, got {minus}")
        max_events = getattr(args, "events", None)
        if max_events is not None and max_events < 1:
            raise ConfigError(f"--events must be >= 1, got {max_events}")
        return RunConfig(
            params=params,
            lam=lam,
            N=N,
            K=K,
            horizon=horizon,
            seed=getattr(args, "seed", 715),
            out=Path(args.out) if getattr(args, "out", None) else None,
            tol=tol,
            trials=trials,
            min_events=min_events,
            threads=threads,
            check_stability=getattr(args, "check_stability", False),
            start=start,
            minus=minus,
            max_events=max_events,
            suite=getattr(args, "suite", ""),
        )


def _emit(obj: dict, out: Optional[Path], name: str = "report.json") -> None:
    text = json.dumps(obj, sort_keys=True, indent=2)
    sys.stdout.write(text + "\n")
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text + "\n")


def _run_tasks(tasks: Sequence[Callable[[], dict]], threads: int) -> List[dict]:
    if threads <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [f.result() for f in futures]  # submission order keeps reports deterministic


def _term_list(coeffs: Dict[Partition, Fraction]) -> List[dict]:
    return [
        {"partition": list(lam), "coefficient": dynamics.exact_entry(c)}
        for lam, c in sorted(coeffs.items(), key=lambda kv: partition_sort_key(kv[0]))
    ]


# ---------------------------------------------------------------------------
# Figure rendering (lazy matplotlib, file output only).


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _render_residuals(reports: Sequence[dict], path: Path) -> None:
    plt = _pyplot()
    labels = []
    residuals = []
    tolerances = []
    for r in reports:
        label = r.get("check", "?")
        if r.get("N"):
            label += f" N={r['N']}"
        labels.append(label)
        res = r.get("max_residual") or {"float": 0.0}
        residuals.append(max(abs(res["float"]), 1e-18))
        tol = r.get("tolerance") or {"float": 0.0}
        tolerances.append(max(abs(tol["float"]), 1e-18))
    fig, ax = plt.subplots(figsize=(max(6.0, 0.9 * len(labels)), 4.0))
    xs = range(len(labels))
    ax.bar(xs, residuals, color="#33658a", label="max residual")
    ax.scatter(xs, tolerances, color="#f26419", marker="_", s=400, label="tolerance")
    ax.set_yscale("log")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("residual (floored at 1e-18)")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _render_measure(
    weights: Dict[State, float],
    empirical: Optional[Dict[State, float]],
    path: Path,
    top: int = 24,
) -> None:
    plt = _pyplot()
    ranked = sorted(weights.items(), key=lambda kv: -kv[1])[:top]
    labels = [state_to_str(s) for s, _ in ranked]
    exact_vals = [w for _, w in ranked]
    fig, ax = plt.subplots(figsize=(max(6.0, 0.5 * len(ranked)), 4.5))
    xs = range(len(ranked))
    width = 0.4 if empirical is not None else 0.8
    ax.bar([x - width / 2 for x in xs], exact_vals, width=width, color="#33658a", label="exact")
    if empirical is not None:
        emp_vals = [empirical.get(s, 0.0) for s, _ in ranked]
        ax.bar([x + width / 2 for x in xs], emp_vals, width=width, color="#f6ae2d", label="empirical")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=6)
    ax.set_ylabel("stationary weight")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _render_coefficients(terms: Sequence[dict], path: Path) -> None:
    plt = _pyplot()
    labels = ["(" + ",".join(str(p) for p in t["partition"]) + ")" for t in terms]
    values = [max(abs(t["coefficient"]["float"]), 1e-18) for t in terms]
    fig, ax = plt.subplots(figsize=(max(6.0, 0.5 * len(terms)), 4.0))
    xs = range(len(terms))
    ax.bar(xs, values, color="#33658a")
    ax.set_yscale("log")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=7)
    ax.set_ylabel("|coefficient|")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


# ---------------------------------------------------------------------------
# Subcommands.


def cmd_poly(cfg: RunConfig) -> int:
    """Construct the eigenfunction for --lambda and print its expansions."""
    p = cfg.params
    if cfg.N is not None:
        phi = big_qjacobi_poly(cfg.lam, p, cfg.N)
        mac = family(p, cfg.N).phi_macdonald_coeffs(cfg.lam)
        report = {
            "lambda": list(cfg.lam),
            "N": cfg.N,
            "params": dynamics.params_dict(p),
            "eigenvalue": dynamics.exact_entry(mu_N(cfg.lam, p, cfg.N)),
            "monomial_terms": _term_list(dict(phi.coeffs)),
            "macdonald_terms": _term_list(mac),
        }
        if cfg.check_stability:
            stable = dynamics.intertwining_check(cfg.lam, p, cfg.N)
            report["stability"] = "pass" if stable else "fail"
    else:
        expansion = phi_symfunc(cfg.lam, p)
        report = {
            "lambda": list(cfg.lam),
            "N": None,
            "params": dynamics.params_dict(p),
            "eigenvalue": dynamics.exact_entry(mu_infinity(cfg.lam, p)),
            "macdonald_terms": _term_list(
                {as_partition(k): Fraction(v) for k, v in expansion.coeffs.items()}
            ),
        }
    _emit(report, cfg.out, "poly.json")
    if cfg.out is not None:
        terms = report.get("monomial_terms") or report["macdonald_terms"]
        with (cfg.out / "coefficients.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["partition", "num", "den", "float"])
            for term in terms:
                c = Fraction(term["coefficient"]["exact"])
                writer.writerow(
                    [
                        " ".join(str(x) for x in term["partition"]),
                        c.numerator,
                        c.denominator,
                        term["coefficient"]["float"],
                    ]
                )
        _render_coefficients(terms, cfg.out / "coefficients.png")
    if cfg.check_stability and cfg.N is not None and report.get("stability") == "fail":
        return 2
    return 0


def _suite_tasks(cfg: RunConfig) -> List[Callable[[], dict]]:
    p = cfg.params
    seed = cfg.seed
    suite = cfg.suite

    def eigen_tasks(max_size: int = 4, levels: Sequence[int] = (1, 2, 3)) -> List[Callable[[], dict]]:
        tasks: List[Callable[[], dict]] = [
            lambda: dynamics.univariate_consistency_check(p)
        ]
        for n in levels:
            tasks.append(lambda n=n: dynamics.eigen_check(p, n, max_size))
        return tasks

    def stability_tasks(max_size: int = 3, levels: Sequence[int] = (1, 2, 3)) -> List[Callable[[], dict]]:
        tasks = []
        for n in levels:
            for lam in cone_partitions(max_size, n):
                if lam == ():
                    continue

                def task(lam=lam, n=n):
                    ok = dynamics.intertwining_check(lam, p, n)
                    return {
                        "check": "intertwining",
                        "params": dynamics.params_dict(p),
                        "N": n,
                        "K": None,
                        "lam": list(lam),
                        "status": "pass" if ok else "fail",
                        "max_residual": dynamics.exact_entry(0 if ok else 1),
                        "tolerance": dynamics.exact_entry(0),
                        "seed": None,
                    }

                tasks.append(task)
        return tasks

    def macdonald_tasks(max_size: int = 3) -> List[Callable[[], dict]]:
        tasks = []
        for lam in cone_partitions(max_size, max_size):
            if lam == ():
                continue

            def task(lam=lam):
                ok = macdonald_stability_check(lam, max(sum(lam), 1), p.q, p.t)
                return {
                    "check": "macdonald_stability",
                    "params": dynamics.params_dict(p),
                    "N": max(sum(lam), 1),
                    "K": None,
                    "lam": list(lam),
                    "status": "pass" if ok else "fail",
                    "max_residual": dynamics.exact_entry(0 if ok else 1),
                    "tolerance": dynamics.exact_entry(0),
                    "seed": None,
                }

            tasks.append(task)
        return tasks

    n = cfg.N
    k = cfg.K
    if suite == "eigen":
        return eigen_tasks()
    if suite == "ct":
        return [lambda: dynamics.constant_term_check(p, n or 5)]
    if suite == "stability":
        return stability_tasks()
    if suite == "macdonald":
        return macdonald_tasks()
    if suite == "pmp":
        return [lambda: dynamics.pmp_test(p, n or 2, k, cfg.trials, seed)]
    if suite == "reversibility":
        return [lambda: dynamics.reversibility_check(p, n or 2, min(k, 6))]
    if suite == "orthogonality":
        return [lambda: dynamics.orthogonality_check(p, n or 2, k, max_size=3)]
    if suite == "normlimit":
        return [
            lambda: dynamics.norm_limit_check(
                cfg.lam or (1,), p, (2, 3, 4), k, cfg.tol or Fraction(1, 100)
            )
        ]
    if suite == "semigroup":
        return [lambda: dynamics.semigroup_composition_check(p, n or 2, rel_tol=cfg.tol or 1e-12)]
    if suite == "resolvent":
        return [
            lambda: dynamics.resolvent_approx_check(
                dynamics._test_polynomial(n or 2), 1.0, (10, 100, 1000, 10000), p, n or 2, min(k, 8)
            )
        ]
    if suite == "positivity":
        return [lambda: dynamics.semigroup_positivity_check(p, n or 2, min(k, 6), seed=seed)]
    if suite == "spectral":
        return [lambda: dynamics.spectral_consistency_check(p, n or 2)]
    if suite == "uniqueness":
        return [lambda: dynamics.functional_uniqueness_check(p, 3)]
    if suite == "bounds":

        def bounds_task() -> dict:
            lower, upper = quadratic_form_bounds(p.q, p.t)
            return {
                "check": "quadratic_form_bounds",
                "params": dynamics.params_dict(p),
                "N": None,
                "K": None,
                "status": "pass",
                "lower": {
                    "exact": str(lower.value) if lower.is_exact else None,
                    "float": float((lower.lo + lower.hi) / 2),
                },
                "upper": {
                    "exact": str(upper.value) if upper.is_exact else None,
                    "float": float((upper.lo + upper.hi) / 2),
                },
                "max_residual": dynamics.exact_entry(0),
                "tolerance": dynamics.exact_entry(0),
                "seed": None,
            }

        return [bounds_task]
    if suite == "simulation":
        return [
            lambda: dynamics.empirical_vs_stationary(
                p, n or 1, k, cfg.min_events, seed, cfg.tol or 0.05
            )
        ]
    if suite == "all":
        tasks = eigen_tasks(max_size=3, levels=(1, 2))
        tasks.append(lambda: dynamics.constant_term_check(p, 3))
        tasks.extend(stability_tasks(max_size=2, levels=(1, 2)))
        tasks.append(lambda: dynamics.spectral_consistency_check(p, 2, 2))
        tasks.append(lambda: dynamics.reversibility_check(p, 1, 6))
        tasks.append(lambda: dynamics.functional_uniqueness_check(p, 3))
        tasks.append(lambda: dynamics.semigroup_composition_check(p, 2))
        tasks.append(lambda: dynamics.pmp_test(p, 1, 8, 40, seed))
        return tasks
    raise ConfigError(f"unknown suite {suite!r}; choose from {', '.join(_SUITES)}")


def cmd_verify(cfg: RunConfig) -> int:
    """Run a verification suite; report every residual with its tolerance."""
    tasks = _suite_tasks(cfg)
    reports = _run_tasks(tasks, cfg.threads)
    status = "pass" if all(r["status"] == "pass" for r in reports) else "fail"
    summary = {"suite": cfg.suite, "status": status, "reports": reports}
    _emit(summary, cfg.out, "report.json")
    if cfg.out is not None:
        with (cfg.out / "residuals.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["check", "N", "K", "status", "max_residual", "tolerance"])
            for r in reports:
                res = r.get("max_residual") or {"float": 0.0}
                tol = r.get("tolerance") or {"float": 0.0}
                writer.writerow(
                    [r.get("check"), r.get("N"), r.get("K"), r.get("status"), res["float"], tol["float"]]
                )
        _render_residuals(reports, cfg.out / "residuals.png")
    return 0 if status == "pass" else 2


def cmd_simulate(cfg: RunConfig) -> int:
    """Simulate the jump process; write trajectory and measure files."""
    p = cfg.params
    n = cfg.N if cfg.N is not None else 2
    if cfg.start is not None:
        start = cfg.start
        if start.capacity != n:
            raise ConfigError(
                f"--start capacity {start.capacity} disagrees with --N {n}"
            )
    else:
        if cfg.minus > n:
            raise ConfigError(f"--minus must be <= N, got {cfg.minus} > {n}")
        start = dynamics.ground_state(n, cfg.minus)
    try:
        traj = dynamics.simulate(
            start, p, n, cfg.horizon, cfg.K, cfg.seed, max_events=cfg.max_events
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    mt = dynamics.stationary_measure(p, n, cfg.K)
    occupation = dynamics.occupation_measure(traj)
    comp_key = (len(start.plus), len(start.minus))
    comp_mass = mt.component_masses[comp_key]
    conditional = {
        s: float(w / comp_mass)
        for s, w in mt.weights.items()
        if (len(s.plus), len(s.minus)) == comp_key
    }
    tv = dynamics.tv_distance(occupation, conditional)
    report = {
        "check": "simulate",
        "params": dynamics.params_dict(p),
        "N": n,
        "K": cfg.K,
        "horizon": cfg.horizon,
        "seed": cfg.seed,
        "start": state_to_str(start),
        "events": traj.n_jumps,
        "end_time": traj.end_time,
        "truncated": traj.truncated,
        "tv_to_component_stationary": dynamics.float_entry(tv),
        "tolerance": dynamics.float_entry(cfg.tol) if cfg.tol is not None else None,
        "measure_method": mt.method,
        "tail_bound": dynamics.exact_entry(mt.tail_bound) if mt.tail_bound is not None else None,
        "status": "pass",
    }
    _emit(report, cfg.out, "report.json")
    if cfg.out is not None:
        with (cfg.out / "trajectory.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", "state"])
            for when, s in traj.events:
                writer.writerow([repr(when), state_to_str(s)])
        with (cfg.out / "measure.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["state", "weight_num", "weight_den", "weight_float"])
            for s in sorted(mt.weights, key=state_to_str):
                w = mt.weights[s]
                writer.writerow([state_to_str(s), w.numerator, w.denominator, float(w)])
        _render_measure(conditional, occupation, cfg.out / "occupation.png")
    return 0


# ---------------------------------------------------------------------------
# Parser wiring.


def build_parser() -> _Parser:
    parser = _Parser(prog="qjd", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--q", default="1/4", help="rational q in (0, 1)")
        sp.add_argument("--t", default="1/5", help="rational t in (0, 1)")
        sp.add_argument("--a", default="1/2", help="positive rational lattice scale a")
        sp.add_argument("--b", default="-1/3", help="negative rational lattice scale b")
        sp.add_argument("--gamma", default="1/4+1/2i", help="complex parameter, e.g. 1/4+1/2i")
        sp.add_argument("--delta", default="1/4-1/2i", help="conjugate of --gamma")
        sp.add_argument("--seed", type=int, default=715, help="random seed")
        sp.add_argument("--out", default=None, help="directory for JSON/CSV/figure output")
        sp.add_argument("--tol", default=None, help="override tolerance where applicable")

    poly = sub.add_parser("poly", help="construct an eigenfunction")
    add_common(poly)
    poly.add_argument("--lambda", dest="lam", default="", help="partition, e.g. 2,1 (empty for the constant)")
    poly.add_argument("--N", type=int, default=None, help="level; omit for the level-free expansion")
    poly.add_argument(
        "--check-stability",
        action="store_true",
        help="also verify the level-(N -> N+1) coefficient stability at shifted parameters",
    )

    verify = sub.add_parser("verify", help="run a verification suite")
    add_common(verify)
    verify.add_argument("suite", choices=_SUITES, help="suite name")
    verify.add_argument("--lambda", dest="lam", default="1", help="partition for norm-limit style suites")
    verify.add_argument("--N", type=int, default=None, help="level override")
    verify.add_argument("--K", type=int, default=10, help="truncation window")
    verify.add_argument("--trials", type=int, default=200, help="randomized trials where applicable")
    verify.add_argument("--min-events", dest="min_events", type=int, default=100_000, help="simulation events")

    simulate = sub.add_parser("simulate", help="simulate the jump process")
    add_common(simulate)
    simulate.add_argument("--lambda", dest="lam", default="", help=argparse.SUPPRESS)
    simulate.add_argument("--N", type=int, default=2, help="particle count")
    simulate.add_argument("--K", type=int, default=8, help="truncation window")
    simulate.add_argument("--horizon", type=float, default=10.0, help="time horizon (0 = initial state only)")
    simulate.add_argument("--start", default=None, help="start state string, e.g. N=2;+[1,2];-[];z=0")
    simulate.add_argument("--minus", type=int, default=0, help="negative-side particles of the default start")
    simulate.add_argument("--events", type=int, default=None, help="optional cap on jump count")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig.from_args(args)
        if args.command == "poly":
            return cmd_poly(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        return cmd_simulate(cfg)
    except ConfigError as exc:
        sys.stdout.write(
            json.dumps({"status": "config_error", "error": str(exc)}, sort_keys=True) + "\n"
        )
        return 1
    except ValueError as exc:
        sys.stdout.write(
            json.dumps({"status": "config_error", "error": str(exc)}, sort_keys=True) + "\n"
        )
        return 1
    except (EigenvalueCollisionError, StabilityError) as exc:
        sys.stdout.write(
            json.dumps(
                {"status": "error", "error": str(exc), "kind": type(exc).__name__},
                sort_keys=True,
            )
            + "\n"
        )
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
