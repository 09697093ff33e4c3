"""Command-line driver.

Subcommands:

* ``gnlab space --space DESC``          — geometric facts as JSON
* ``gnlab check --space DESC --suite S`` — run a suite of inequality
  checks, writing one JSON report per check plus a summary
* ``gnlab plotdata --reports DIR``      — regenerate plot-ready CSVs
  from a finished run (the run config is embedded in the summary)

Report files are deterministic: given the same space, suite, seed and
grids they are byte-identical.  Wall-clock data and library versions go
to a separate metadata.json that takes no part in reproducibility.

Exit codes: 0 on success, 2 on validation problems (unknown suite, bad
space descriptor, malformed graph file, missing reports), 1 on internal
errors.
"""

import argparse
import datetime
import json
import os
import sys
import traceback

import numpy as np

from . import __version__
from .corpus import generate
from .funcnorms import gradient_modulus, lp_norm
from .heat import Semigroup
from .ineq import (
    REPORT_SCHEMA,
    CheckReport,
    check_gn,
    check_gn_weak,
    check_heat_residual_symmetrization,
    check_lorentz_gn,
    check_nonlinear_gn,
    check_oscillation,
    check_poincare,
    check_pseudo_poincare_avg,
    check_pseudo_poincare_heat,
    check_sobolev_recovery,
    check_symmetrization_besov,
    check_symmetrization_heat_profile,
    check_symmetrization_morrey,
    _py,
)
from .kprime import equivalence_report
from .space import build_builtin, build_from_file, doubling_constant, doubling_profile, growth_exponent

SUITES = (
    "hypotheses",
    "symmetrization",
    "gn",
    "sobolev",
    "lorentz",
    "nonlinear",
    "kfunc",
    "core",
)

RUN_FILE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["version", "run_config", "report"],
    "properties": {
        "version": {"type": "string"},
        "run_config": {"type": "object"},
        "report": REPORT_SCHEMA,
    },
    "additionalProperties": False,
}


def _build_space(descriptor):
    if ":" in descriptor:
        return build_builtin(descriptor)
    return build_from_file(descriptor)


def _doubling_report(space):
    constant, witness = doubling_constant(space)
    r_hi = min(max(space.diameter // 2, 1), 8)
    radii, ratios = doubling_profile(space, r_max=r_hi)
    increasing = bool(np.all(np.diff(ratios) >= -1e-12)) and len(ratios) > 1
    divergent = increasing and ratios[-1] >= 2.0 * ratios[0]
    return CheckReport(
        name="doubling",
        params={"r_max": int(r_hi)},
        constant=constant,
        witness=witness,
        n_samples=0,
        n_skipped=0,
        range_note="ratios mu(B(x,2r))/mu(B(x,r)) for r=1..%d" % r_hi,
        samples=[],
        aux={
            "profile_r": [int(r) for r in radii],
            "profile_ratio": [float(v) for v in ratios],
            "divergent": divergent,
        },
    )


def _growth_report(space):
    if space.diameter >= 2:
        fit = growth_exponent(space)
    else:
        fit = {"sigma": 0.0, "c": float(space.mu.min()), "radii": [1], "residual": 0.0}
    return CheckReport(
        name="growth_fit",
        params={},
        constant=fit["sigma"],
        witness={},
        n_samples=0,
        n_skipped=0,
        range_note="least-squares fit of log min-ball-volume vs log r",
        samples=[],
        aux=fit,
    )


def _fitted_sigma(space):
    if space.diameter >= 2:
        return max(growth_exponent(space)["sigma"], 1.0)
    return 1.0


def _kfunc_report(space, corpus, sg, q):
    grid = sg.t_grid
    picks = sorted(set([0, len(grid) // 3, (2 * len(grid)) // 3, len(grid) - 1]))
    ts = [float(grid[i]) for i in picks]
    best = (0.0, {})
    min_ratio = np.inf
    rows = []
    for j, f in enumerate(list(corpus)[:6]):
        rep = equivalence_report(space, f, q, ts)
        for t, lo, up, ra in zip(rep["t"], rep["lower"], rep["upper"], rep["ratio"]):
            rows.append(
                {
                    "sample": corpus.labels[j],
                    "t": t,
                    "lower": lo,
                    "upper": up,
                    "ratio": ra,
                }
            )
            min_ratio = min(min_ratio, ra)
            if ra > best[0]:
                best = (ra, {"sample": corpus.labels[j], "t": t})
    return CheckReport(
        name="kfunctional_sandwich",
        params={"q": q},
        constant=best[0],
        witness=best[1],
        n_samples=min(6, len(corpus)),
        n_skipped=0,
        range_note="trade-off parameters %s" % (ts,),
        samples=rows,
        aux={"min_ratio": float(min_ratio) if rows else 0.0},
    )


def _run_suite(suite, space, corpus, sg, a):
    checks = []
    if suite in ("hypotheses", "core"):
        checks.append(_doubling_report(space))
        checks.append(_growth_report(space))
        checks.append(
            check_poincare(space, corpus, q=2, r_max=a.r_max, eigen=True)
        )
        checks.append(check_pseudo_poincare_heat(space, corpus, sg, q=a.q))
        checks.append(check_pseudo_poincare_avg(space, corpus, q=a.q, r_max=a.r_max))
    if suite in ("symmetrization", "core"):
        checks.append(
            check_symmetrization_besov(
                space, corpus, sg, q=a.q, alpha=a.alpha, s_points=a.s_points
            )
        )
        checks.append(
            check_symmetrization_morrey(
                space, corpus, sg, q=a.q, alpha=a.alpha, s_points=a.s_points
            )
        )
        checks.append(
            check_symmetrization_heat_profile(
                space, corpus, sg, q=a.q, alpha=a.alpha, s_points=a.s_points
            )
        )
        checks.append(
            check_heat_residual_symmetrization(
                space, corpus, sg, q=a.q, s_points=a.s_points
            )
        )
    if suite in ("gn", "core"):
        checks.append(check_gn(space, corpus, sg, p=a.p, l=a.l, local=False))
        checks.append(check_gn(space, corpus, sg, p=a.p, l=a.l, local=True))
        checks.append(check_gn_weak(space, corpus, sg, q=a.p, l=a.l))
    if suite == "sobolev":
        ts = sg.t_grid[(sg.t_grid >= 1.0) & (sg.t_grid <= 256.0)]
        if len(ts) < 2:
            ts = sg.t_grid
        checks.append(
            check_sobolev_recovery(space, corpus, sg, q=a.q, nu=a.nu, ts=ts)
        )
    if suite == "lorentz":
        sigma = _fitted_sigma(space)
        p_lor = a.p if a.p > a.q else a.q + 0.5
        if sigma <= p_lor:
            sigma = p_lor + 0.5
        checks.append(
            check_lorentz_gn(space, corpus, p=p_lor, q=a.q, sigma=sigma, theta=0.0)
        )
    if suite == "nonlinear":
        checks.append(
            check_nonlinear_gn(space, corpus, sg, p=max(2.0, a.p), q=1.0)
        )
    if suite == "kfunc":
        checks.append(_kfunc_report(space, corpus, sg, q=a.q))
        checks.append(
            check_oscillation(
                space, corpus, q=a.q, sigma=_fitted_sigma(space), s_points=a.s_points
            )
        )
    return checks


def _dump(obj):
    return json.dumps(_py(obj), sort_keys=True, indent=2) + "\n"


def cmd_space(a):
    space = _build_space(a.space)
    constant, witness = doubling_constant(space)
    info = {
        "name": space.name,
        "n_vertices": space.n,
        "n_edges": space.n_edges,
        "diameter": space.diameter,
        "total_measure": space.total_measure,
        "doubling_constant": constant,
        "doubling_witness": witness,
    }
    if space.diameter >= 2:
        info["growth_fit"] = growth_exponent(space)
    text = _dump(info)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_check(a):
    if a.suite not in SUITES:
        sys.stderr.write(
            "error: unknown suite %r (choose from %s)\n" % (a.suite, ", ".join(SUITES))
        )
        return 2
    space = _build_space(a.space)
    sg = Semigroup(space, t_min=a.t_min, t_max=a.t_max)
    corpus = generate(space, a.samples, a.seed, sg=sg)
    config = {
        "space": a.space,
        "suite": a.suite,
        "seed": a.seed,
        "samples": a.samples,
        "q": a.q,
        "p": a.p,
        "l": a.l,
        "alpha": a.alpha,
        "s_points": a.s_points,
        "r_max": a.r_max,
        "nu": a.nu,
        "t_min": sg.t_min,
        "t_max": sg.t_max,
    }
    checks = _run_suite(a.suite, space, corpus, sg, a)
    os.makedirs(a.out, exist_ok=True)
    index = []
    for rep in checks:
        fname = "report_%s.json" % rep.name
        payload = {
            "version": __version__,
            "run_config": config,
            "report": rep.to_dict(),
        }
        with open(os.path.join(a.out, fname), "w") as fh:
            fh.write(_dump(payload))
        index.append({"name": rep.name, "constant": rep.constant, "file": fname})
        sys.stdout.write(
            "%s: constant=%r samples=%d skipped=%d\n"
            % (rep.name, rep.constant, rep.n_samples, rep.n_skipped)
        )
    with open(os.path.join(a.out, "summary.json"), "w") as fh:
        fh.write(_dump({"version": __version__, "run_config": config, "checks": index}))
    with open(os.path.join(a.out, "metadata.json"), "w") as fh:
        json.dump(
            {
                "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
                "python": sys.version,
                "numpy": np.__version__,
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    return 0


def cmd_plotdata(a):
    summary_path = os.path.join(a.reports, "summary.json")
    if not os.path.isfile(summary_path):
        sys.stderr.write("no summary.json under %s\n" % a.reports)
        return 2
    with open(summary_path) as fh:
        summary = json.load(fh)
    cfg = summary["run_config"]
    space = _build_space(cfg["space"])
    sg = Semigroup(space, t_min=cfg["t_min"], t_max=cfg["t_max"])
    corpus = generate(space, cfg["samples"], cfg["seed"], sg=sg)
    out = a.out or os.path.join(a.reports, "plotdata")
    os.makedirs(out, exist_ok=True)
    from .rearrange import decreasing_rearrangement

    for j, f in enumerate(list(corpus)[:8]):
        sf = decreasing_rearrangement(space, f)
        label = corpus.labels[j]
        with open(os.path.join(out, "rearrangement_%s.csv" % label), "w") as fh:
            fh.write("t_start,t_end,value\n")
            for t0, t1, v in sf.to_rows():
                fh.write("%r,%r,%r\n" % (t0, t1, v))
        s_grid = np.geomspace(float(space.mu.min()), space.total_measure, 64)
        with open(os.path.join(out, "running_average_%s.csv" % label), "w") as fh:
            fh.write("s,value\n")
            for s, val in zip(s_grid, sf.double_star(s_grid)):
                fh.write("%r,%r\n" % (float(s), float(val)))
    heat_report = os.path.join(a.reports, "report_pseudo_poincare_heat.json")
    if os.path.isfile(heat_report):
        with open(heat_report) as fh:
            rep = json.load(fh)["report"]
        with open(os.path.join(out, "ratio_vs_t.csv"), "w") as fh:
            fh.write("sample,t,ratio\n")
            for row in rep["samples"]:
                fh.write("%s,%r,%r\n" % (row["sample"], row["t"], row["ratio"]))
    if sg.dense:
        with open(os.path.join(out, "kernel_decay.csv"), "w") as fh:
            fh.write("t,kernel_sup\n")
            for t in sg.t_grid:
                fh.write("%r,%r\n" % (float(t), sg.kernel_sup(t)))
    # gradient profile of the first sample, for quick sanity plots
    if len(corpus):
        f = corpus.functions[0]
        g = gradient_modulus(space, f)
        with open(os.path.join(out, "gradient_profile.csv"), "w") as fh:
            fh.write("vertex,f,grad\n")
            for vid, fv, gv in zip(space.ids, f, g):
                fh.write("%s,%r,%r\n" % (vid, float(fv), float(gv)))
    sys.stdout.write("plot data written to %s\n" % out)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="gnlab",
        description="empirical functional-inequality laboratory on weighted graphs",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("space", help="print geometric facts about a space")
    sp.add_argument("--space", required=True, help="builtin descriptor or graph file")
    sp.add_argument("--out", default=None, help="write JSON here instead of stdout")
    sp.set_defaults(fn=cmd_space)

    ck = sub.add_parser("check", help="run a suite of inequality checks")
    ck.add_argument("--space", required=True, help="builtin descriptor or graph file")
    ck.add_argument("--suite", required=True, help="|".join(SUITES))
    ck.add_argument("--seed", type=int, default=0)
    ck.add_argument("--samples", type=int, default=12)
    ck.add_argument("--out", default="gnlab_reports")
    ck.add_argument("--q", type=float, default=1.0)
    ck.add_argument("--p", type=float, default=1.0)
    ck.add_argument("--l", type=float, default=2.0)
    ck.add_argument("--alpha", type=float, default=-1.0)
    ck.add_argument("--s-points", type=int, default=32)
    ck.add_argument("--r-max", type=int, default=4)
    ck.add_argument("--nu", type=float, default=2.0)
    ck.add_argument("--t-min", type=float, default=1.0 / 16.0)
    ck.add_argument("--t-max", type=float, default=None)
    ck.set_defaults(fn=cmd_check)

    pd = sub.add_parser("plotdata", help="emit CSV curves from a finished run")
    pd.add_argument("--reports", required=True)
    pd.add_argument("--out", default=None)
    pd.set_defaults(fn=cmd_plotdata)
    return ap


def main(argv=None):
    ap = build_parser()
    a = ap.parse_args(argv)
    try:
        return a.fn(a)
    except ValueError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
