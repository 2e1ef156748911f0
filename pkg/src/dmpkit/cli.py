"""Command-line front door: fit, rollout, correct, generate, set-goal, set-tau.

Exit codes: 0 success, 1 usage error, 2 data or parse error, 3 numeric or
solver error. Diagnostics go to stderr; data goes to files only, with no
timestamps, so identical invocations produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .blend import BlendConfig
from .correction import CorrectionRequest, correct
from .dmp import (
    DEFAULT_ALPHA_X,
    DEFAULT_ALPHA_Z,
    DEFAULT_BETA_Z,
    DEFAULT_DT,
    DEFAULT_N_BASIS,
    fit,
    rollout,
    set_goal,
    set_tau,
)
from .errors import InstabilityError, ParseError, SolverError

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # route argparse failures to exit code 1
        raise _UsageError(message)


def _auto_or_float(text: str) -> float | None:
    if text == "auto":
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {text!r}") from None


def _comma_floats(text: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_gain_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n-basis", type=int, default=DEFAULT_N_BASIS)
    sub.add_argument("--alpha-z", type=float, default=DEFAULT_ALPHA_Z)
    sub.add_argument("--beta-z", type=float, default=DEFAULT_BETA_Z)
    sub.add_argument("--alpha-x", type=float, default=DEFAULT_ALPHA_X)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dmpkit", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    p_fit = commands.add_parser("fit", help="fit a primitive to a demonstration CSV")
    p_fit.add_argument("--demo", required=True)
    p_fit.add_argument("--out", required=True)
    p_fit.add_argument("--tau", type=_auto_or_float, default="auto",
                       help="time constant in seconds, or 'auto' for the demo duration")
    p_fit.add_argument("--context", default="", help="free-form note stored with the primitive")
    _add_gain_flags(p_fit)
    p_fit.set_defaults(func=_cmd_fit)

    p_roll = commands.add_parser("rollout", help="integrate a primitive to a trajectory CSV")
    p_roll.add_argument("--dmp", required=True)
    p_roll.add_argument("--out", required=True)
    p_roll.add_argument("--start", type=_comma_floats, default=None)
    p_roll.add_argument("--dt", type=float, default=DEFAULT_DT)
    p_roll.add_argument("--duration", type=_auto_or_float, default="auto",
                        help="seconds, or 'auto' for 1.5 * tau")
    p_roll.set_defaults(func=_cmd_rollout)

    p_corr = commands.add_parser("correct", help="merge a corrective demonstration into a deficient trajectory")
    p_corr.add_argument("--deficient", required=True)
    p_corr.add_argument("--corrective", required=True)
    p_corr.add_argument("--cut", type=int, required=True,
                        help="0-based index of the first retained corrective sample")
    p_corr.add_argument("--out-dmp", required=True)
    p_corr.add_argument("--out-merged", required=True)
    p_corr.add_argument("--lambda", dest="lam", type=float, default=1.0)
    _add_gain_flags(p_corr)
    p_corr.set_defaults(func=_cmd_correct)

    p_gen = commands.add_parser("generate", help="write a synthetic deficient/corrective pair")
    p_gen.add_argument("--scenario", required=True, choices=["overshoot", "undershoot", "obstacle-dip"])
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--out-dir", required=True)
    p_gen.add_argument("--dims", type=int, default=2)
    p_gen.add_argument("--duration", type=float, default=2.0)
    p_gen.add_argument("--noise", type=float, default=0.05)
    p_gen.set_defaults(func=_cmd_generate)

    p_goal = commands.add_parser("set-goal", help="rewrite the goal of a stored primitive")
    p_goal.add_argument("--dmp", required=True)
    p_goal.add_argument("--goal", type=_comma_floats, required=True)
    p_goal.add_argument("--out", required=True)
    p_goal.set_defaults(func=_cmd_set_goal)

    p_tau = commands.add_parser("set-tau", help="rewrite the time constant of a stored primitive")
    p_tau.add_argument("--dmp", required=True)
    p_tau.add_argument("--tau", type=float, required=True)
    p_tau.add_argument("--out", required=True)
    p_tau.set_defaults(func=_cmd_set_tau)

    return parser


def _cmd_fit(args: argparse.Namespace) -> int:
    demo = io.load_trajectory(args.demo)
    params = fit(
        demo,
        n_basis=args.n_basis,
        tau=args.tau,
        alpha_z=args.alpha_z,
        beta_z=args.beta_z,
        alpha_x=args.alpha_x,
        metadata=args.context,
    )
    io.save_dmp(params, args.out)
    print(f"fit: {demo.n_samples} samples, {demo.dims} dims -> {args.out}", file=sys.stderr)
    return 0


def _cmd_rollout(args: argparse.Namespace) -> int:
    params = io.load_dmp(args.dmp)
    traj = rollout(params, y_start=args.start, dt=args.dt, duration=args.duration)
    io.save_trajectory(traj, args.out)
    print(f"rollout: {traj.n_samples} samples over {traj.duration:.3f} s -> {args.out}", file=sys.stderr)
    return 0


def _cmd_correct(args: argparse.Namespace) -> int:
    deficient = io.load_trajectory(args.deficient)
    corrective = io.load_trajectory(args.corrective)
    request = CorrectionRequest(
        deficient=deficient,
        corrective=corrective,
        corrective_cut=args.cut,
        blend=BlendConfig(lam=args.lam),
        n_basis=args.n_basis,
        alpha_z=args.alpha_z,
        beta_z=args.beta_z,
        alpha_x=args.alpha_x,
    )
    outcome = correct(request)
    io.save_dmp(outcome.modified_dmp, args.out_dmp)
    io.save_trajectory(outcome.merged, args.out_merged)
    diag = outcome.diagnostics
    print(
        f"correct: retained prefix M={outcome.split.deficient_cut + 1}, "
        f"d_m={outcome.split.min_distance:.6g}, "
        f"max step={diag.max_step:.6g}, "
        f"junction max |d2|={diag.junction_max_second_diff:.6g}, "
        f"blend solve {1e3 * diag.blend_solve_seconds:.3f} ms",
        file=sys.stderr,
    )
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    spec = io.ScenarioSpec(kind=args.scenario, dims=args.dims, duration=args.duration, noise=args.noise)
    deficient, corrective, cut = io.generate_scenario(spec, args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    io.save_trajectory(deficient, out_dir / "deficient.csv")
    io.save_trajectory(corrective, out_dir / "corrective.csv")
    manifest = {
        "kind": spec.kind,
        "seed": args.seed,
        "dims": spec.dims,
        "duration": spec.duration,
        "noise": spec.noise,
        "corrective_cut": cut,
        "corrected_goal": corrective.samples[-1].tolist(),
    }
    (out_dir / "scenario.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"generate: {spec.kind} seed {args.seed} -> {out_dir}", file=sys.stderr)
    return 0


def _cmd_set_goal(args: argparse.Namespace) -> int:
    params = io.load_dmp(args.dmp)
    io.save_dmp(set_goal(params, args.goal), args.out)
    return 0


def _cmd_set_tau(args: argparse.Namespace) -> int:
    params = io.load_dmp(args.dmp)
    io.save_dmp(set_tau(params, args.tau), args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (InstabilityError, SolverError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
