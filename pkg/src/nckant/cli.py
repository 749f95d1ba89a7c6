"""Command-line front end.

Subcommands: distance, wasserstein, dual, wd, quotient, cost-matrix, model,
verify.  Exit codes: 0 success, 1 validation error, 2 solver did not reach
its tolerance (the result is still printed with its honest gap), 3 infeasible
program.  The seed falls back to the NCKANT_SEED environment variable.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import models, transport, verify as verify_mod, wd as wd_mod
from .errors import InfeasibleError, NotApplicableError, ValidationError
from .spectral import SolverOptions, distance_to_json, spectral_distance
from .triple import density_state, triple_from_json, triple_to_json

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NO_CONVERGENCE = 2
EXIT_INFEASIBLE = 3


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(obj, out: str | None) -> None:
    text = _dump(obj)
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text)


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("NCKANT_SEED", "0"))


def _solver_options(args) -> SolverOptions:
    return SolverOptions(tol=args.tol, max_iter=args.max_iter,
                         restarts=args.restarts, seed=_resolve_seed(args))


def _echo_config(args) -> int:
    cfg = {
        "tol": args.tol,
        "max_iter": args.max_iter,
        "restarts": args.restarts,
        "seed": _resolve_seed(args),
    }
    if getattr(args, "sample_size", None) is not None:
        cfg["sample_size"] = args.sample_size
    _emit(cfg, getattr(args, "out", None))
    return EXIT_OK


def _add_common(sub, sample_size=False):
    sub.add_argument("--tol", type=float, default=1e-4, help="solver tolerance")
    sub.add_argument("--max-iter", type=int, default=50000, dest="max_iter")
    sub.add_argument("--restarts", type=int, default=8)
    sub.add_argument("--seed", type=int, default=None,
                     help="falls back to NCKANT_SEED, then 0")
    sub.add_argument("--out", default=None, help="write the JSON result here")
    sub.add_argument("--echo-config", action="store_true", dest="echo_config",
                     help="print the resolved numeric settings and exit")
    if sample_size:
        sub.add_argument("--sample-size", type=int, default=None, dest="sample_size",
                         help="shorthand for --sample fib:N")


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# Input grammars
# ---------------------------------------------------------------------------

def _parse_bloch(text: str) -> np.ndarray:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise ValidationError(f"expected three Bloch coordinates, got {text!r}")
    return np.array(parts)


def _parse_state(spec: str):
    if spec == "delta1":
        return models.two_point_state(1.0)
    if spec == "delta2":
        return models.two_point_state(0.0)
    if spec.startswith("mixed:"):
        return models.two_point_state(float(spec.split(":", 1)[1]))
    if spec.startswith("bloch:"):
        return models.bloch_to_density(_parse_bloch(spec.split(":", 1)[1]))
    if os.path.exists(spec):
        return models.load_state(_load_json(spec))
    raise ValidationError(f"cannot parse state spec {spec!r}")


def _parse_marginal(spec: str, size: int) -> np.ndarray:
    if spec.startswith("dirac:"):
        return transport.dirac_vector(int(spec.split(":", 1)[1]), size)
    if spec == "uniform":
        return np.full(size, 1.0 / size)
    if spec.startswith("w:"):
        return transport.as_probability_vector(
            [float(x) for x in spec[2:].split(",")], size)
    if os.path.exists(spec):
        if spec.endswith(".csv"):
            return transport.marginal_from_csv(spec, size)
        return transport.as_probability_vector(_load_json(spec), size)
    raise ValidationError(f"cannot parse marginal spec {spec!r}")


def _load_space(spec: str) -> transport.FiniteCostSpace:
    if os.path.exists(spec):
        return transport.load_cost_space(spec)
    return transport.make_cost_space(spec)


def _model_triple(args):
    if args.model == "two-point":
        return models.two_point_triple(complex(args.m), with_grading=args.grading)
    if args.model == "m2-diagonal":
        return models.m2_diagonal_triple(args.d1, args.d2)
    raise ValidationError(f"model {args.model!r} does not define a Dirac operator")


def _build_sample(args, opts):
    points = wd_mod.sphere_sample_points(
        args.sample if args.sample else f"fib:{args.sample_size or 50}")
    if args.model == "m2-moyal":
        return wd_mod.moyal_sample(points, models.MoyalCostParams(args.theta))
    if args.model == "m2-diagonal":
        t = models.m2_diagonal_triple(args.d1, args.d2)
        states = [models.bloch_to_density(p) for p in points]
        return wd_mod.pure_sample_cost_matrix(t, states, opts)
    if args.model == "two-point":
        t = models.two_point_triple(complex(args.m))
        return wd_mod.pure_sample_cost_matrix(
            t, [models.two_point_state(1.0), models.two_point_state(0.0)], opts)
    raise ValidationError(f"no sample rule for model {args.model!r}")


def _sample_basis(args):
    if args.model == "two-point":
        return models.two_point_triple(complex(args.m)).algebra_basis
    return models.m2_algebra()


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_distance(args) -> int:
    if args.echo_config:
        return _echo_config(args)
    opts = _solver_options(args)
    if args.model == "m2-moyal":
        p = _parse_state(args.state_a)
        q = _parse_state(args.state_b)
        val = models.moyal_ball_cost(models.density_to_bloch(p), models.density_to_bloch(q),
                                     models.MoyalCostParams(args.theta))
        _emit({"finite": True, "value": val, "gap": 0.0, "iterations": 0,
               "witness": None}, args.out)
        return EXIT_OK
    if args.triple:
        t = triple_from_json(_load_json(args.triple))
    else:
        t = _model_triple(args)
    rho = _parse_state(args.state_a)
    sigma = _parse_state(args.state_b)
    if args.analytic:
        if args.model == "m2-diagonal":
            res = models.m2_diagonal_distance(args.d1, args.d2,
                                              models.density_to_bloch(rho),
                                              models.density_to_bloch(sigma))
        elif args.model == "two-point":
            lam_a = float(rho.matrix[0, 0].real)
            lam_b = float(sigma.matrix[0, 0].real)
            value = abs(lam_a - lam_b) * models.two_point_distance(complex(args.m))
            _emit({"finite": bool(np.isfinite(value)),
                   "value": value if np.isfinite(value) else None,
                   "gap": 0.0, "iterations": 0, "witness": None}, args.out)
            return EXIT_OK
        else:
            raise ValidationError("--analytic needs a catalogue model")
    else:
        res = spectral_distance(t, rho, sigma, opts)
    _emit(distance_to_json(res), args.out)
    return EXIT_OK if res.converged or not res.finite else EXIT_NO_CONVERGENCE


def cmd_wasserstein(args) -> int:
    if args.echo_config:
        return _echo_config(args)
    space = _load_space(args.space)
    mu = _parse_marginal(args.mu, space.size)
    nu = _parse_marginal(args.nu, space.size)
    plan = transport.wasserstein_primal(space, mu, nu)
    finite = bool(np.isfinite(plan.value))
    _emit({"value": plan.value if finite else "inf", "finite": finite,
           "support": int(np.sum(plan.plan > 1e-12)) if plan.plan is not None else 0},
          args.out)
    if args.plan_out and plan.plan is not None:
        transport.plan_to_csv(plan, space, args.plan_out)
    return EXIT_OK


def cmd_dual(args) -> int:
    if args.echo_config:
        return _echo_config(args)
    space = _load_space(args.space)
    mu = _parse_marginal(args.mu, space.size)
    nu = _parse_marginal(args.nu, space.size)
    witness = transport.kantorovich_dual(space, mu, nu)
    finite = bool(np.isfinite(witness.value))
    _emit({
        "value": witness.value if finite else "inf",
        "finite": finite,
        "potential": [float(x) for x in witness.potential] if witness.potential is not None else None,
        "copotential": [float(x) for x in witness.copotential] if witness.copotential is not None else None,
    }, args.out)
    return EXIT_OK


def cmd_wd(args) -> int:
    if args.echo_config:
        return _echo_config(args)
    opts = _solver_options(args)
    if args.sample and os.path.exists(args.sample):
        sample = wd_mod.load_sample(args.sample)
        if args.model:
            basis = _sample_basis(args)
        elif sample.label.startswith("two-point"):
            basis = models.two_point_triple(1.0).algebra_basis
        else:
            basis = models.m2_algebra()
    else:
        sample = _build_sample(args, opts)
        basis = _sample_basis(args)
    phi = _parse_state(args.phi)
    psi = _parse_state(args.psi)
    res = wd_mod.wd_distance(sample, basis, phi, psi)
    _emit({"finite": res.finite, "value": res.value if res.finite else None,
           "witness": [float(x) for x in res.witness] if res.witness is not None else None},
          args.out)
    return EXIT_OK


def cmd_quotient(args) -> int:
    if args.echo_config:
        return _echo_config(args)
    opts = _solver_options(args)
    if args.sample and os.path.exists(args.sample):
        sample = wd_mod.load_sample(args.sample)
    else:
        sample = _build_sample(args, opts)
    bp = _parse_bloch(args.phi.removeprefix("bloch:"))
    bq = _parse_bloch(args.psi.removeprefix("bloch:"))
    value = wd_mod.quotient_transport(sample, bp, bq)
    _emit({"value": value}, args.out)
    return EXIT_OK


def cmd_cost_matrix(args) -> int:
    if args.echo_config:
        return _echo_config(args)
    opts = _solver_options(args)
    sample = _build_sample(args, opts)
    base = Path(args.out) if args.out else Path("cost-matrix")
    if base.suffix == ".json":
        base = base.with_suffix("")
    _emit(wd_mod.sample_to_json(sample), str(base) + ".json")
    with open(str(base) + ".csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in sample.costs:
            writer.writerow([("inf" if not np.isfinite(x) else repr(float(x))) for x in row])
    if args.plot:
        from . import plots
        plots.save_cost_heatmap(sample.costs, str(base) + ".png",
                                title=f"pairwise cost: {sample.label}")
    return EXIT_OK


def cmd_model(args) -> int:
    if args.echo_config:
        return _echo_config(args)
    if args.model in ("two-point", "m2-diagonal"):
        t = _model_triple(args)
        _emit(triple_to_json(t), args.out)
        return EXIT_OK
    if args.model == "m2-moyal":
        _emit({"model": "m2-moyal", "theta": args.theta,
               "cost": "sqrt(theta/2) * {cos(a) dEc if a <= pi/4; dEc/(2 sin a) if a >= pi/4}"},
              args.out)
        return EXIT_OK
    if args.model == "two-sheet":
        base = _load_space(args.space or "cycle:15")
        if args.single_sheet:
            cost = np.sqrt(base.cost ** 2 + args.inv_m ** 2)
            space = transport.explicit_space(cost, points=base.points, metric=False)
        else:
            space = transport.two_sheet_space(base, args.inv_m)
        _emit(transport.cost_space_to_json(space), args.out)
        return EXIT_OK
    raise ValidationError(f"unknown model {args.model!r}")


def cmd_verify(args) -> int:
    if args.echo_config:
        return _echo_config(args)
    report = verify_mod.run_verification(seed=_resolve_seed(args))
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"[{status}] {c.id}: computed {c.computed:.3e} vs tolerance {c.tolerance:.1e}")
    print(f"overall: {'PASS' if report.overall else 'FAIL'}")

    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.json").write_text(_dump(verify_mod.report_to_json(report)))
        with open(out_dir / "report.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "description", "anchor", "expected", "computed",
                             "tolerance", "pass", "seconds"])
            for c in report.checks:
                writer.writerow([c.id, c.description, c.anchor, c.expected,
                                 c.computed, c.tolerance, c.passed, round(c.seconds, 3)])
        if args.plot:
            from . import plots
            plots.save_check_chart(report, out_dir / "checks.png")
            plots.save_ball_cost_sections(2.0, out_dir / "ball_cost.png")
            sizes, values, direct = verify_mod.refinement_curve(seed=_resolve_seed(args))
            plots.save_refinement_curve(sizes, values, direct,
                                        out_dir / "refinement.png")
    return EXIT_OK if report.overall else EXIT_VALIDATION


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nckant",
        description="spectral and transport distances on finite geometries")
    subs = parser.add_subparsers(dest="command", required=True)

    def add_model_flags(sub):
        sub.add_argument("--model", default=None,
                         choices=["two-point", "m2-diagonal", "m2-moyal", "two-sheet"])
        sub.add_argument("--m", default="1", help="two-point Dirac entry (complex)")
        sub.add_argument("--grading", action="store_true")
        sub.add_argument("--d1", type=float, default=1.0)
        sub.add_argument("--d2", type=float, default=3.0)
        sub.add_argument("--theta", type=float, default=2.0)
        sub.add_argument("--inv-m", type=float, default=0.3, dest="inv_m")

    p = subs.add_parser("distance", help="spectral distance between two states")
    add_model_flags(p)
    p.add_argument("--triple", default=None, help="triple JSON file (overrides --model)")
    p.add_argument("--state-a", required=True, dest="state_a")
    p.add_argument("--state-b", required=True, dest="state_b")
    p.add_argument("--analytic", action="store_true", help="use the catalogue closed form")
    _add_common(p)
    p.set_defaults(fn=cmd_distance)

    p = subs.add_parser("wasserstein", help="optimal transport value on a cost space")
    p.add_argument("--space", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--plan-out", default=None, dest="plan_out", help="plan CSV path")
    _add_common(p)
    p.set_defaults(fn=cmd_wasserstein)

    p = subs.add_parser("dual", help="dual potentials on a cost space")
    p.add_argument("--space", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_dual)

    p = subs.add_parser("wd", help="constrained-supremum distance over a pure-state sample")
    add_model_flags(p)
    p.add_argument("--sample", default=None,
                   help="sample grammar (fib:N+poles+p:x,y,z) or sample JSON path")
    p.add_argument("--phi", required=True)
    p.add_argument("--psi", required=True)
    _add_common(p, sample_size=True)
    p.set_defaults(fn=cmd_wd)

    p = subs.add_parser("quotient", help="cheapest sampled transport between representing measures")
    add_model_flags(p)
    p.add_argument("--sample", default=None)
    p.add_argument("--phi", required=True, help="barycenter, bloch:x,y,z")
    p.add_argument("--psi", required=True, help="barycenter, bloch:x,y,z")
    _add_common(p, sample_size=True)
    p.set_defaults(fn=cmd_quotient)

    p = subs.add_parser("cost-matrix", help="pairwise costs of a pure-state sample")
    add_model_flags(p)
    p.add_argument("--sample", default=None)
    p.add_argument("--plot", action=argparse.BooleanOptionalAction, default=True)
    _add_common(p, sample_size=True)
    p.set_defaults(fn=cmd_cost_matrix)

    p = subs.add_parser("model", help="materialize a catalogue model to JSON")
    add_model_flags(p)
    p.add_argument("--space", default=None, help="base space for the two-sheet model")
    p.add_argument("--single-sheet", action="store_true", dest="single_sheet",
                   help="emit the projected one-sheet cost (nonzero diagonal)")
    _add_common(p)
    p.set_defaults(fn=cmd_model)

    p = subs.add_parser("verify", help="run the verification suite")
    p.add_argument("--plot", action=argparse.BooleanOptionalAction, default=True)
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, NotApplicableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
