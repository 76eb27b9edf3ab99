"""Command-line front end: train, evaluate, run, grad-check.

Each command loads a JSON config (or a bundled preset name), applies any
command-line overrides, and writes its artifacts into the config's output
directory: CSV series and JSON summaries, with companion PNG figures
rendered next to them.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import (
    ConfigError,
    ExperimentConfig,
    config_echo,
    load_config,
    test_samples,
    training_samples,
    with_overrides,
)
from .gradient import fd_relative_error
from .learn import evaluate, train
from .model import ControlField, QuantumSystem, UncertaintySample, UncertaintySpec, sine_control, zero_control
from .plots import (
    save_control_fields,
    save_fidelity_histogram,
    save_fidelity_scatter,
    save_training_curve,
)
from .reports import (
    read_control_csv,
    write_control_csv,
    write_evaluation_csv,
    write_summary,
    write_training_log,
)

__all__ = ["main", "cmd_train", "cmd_evaluate", "cmd_run", "cmd_gradcheck"]

GRAD_TOLERANCE = 1e-4


def _initial_control(cfg: ExperimentConfig) -> ControlField:
    m = cfg.system.n_controls
    if cfg.control_init == "sin":
        return sine_control(m, cfg.control_slices, cfg.control_duration)
    if cfg.control_init == "zero":
        return zero_control(m, cfg.control_slices, cfg.control_duration)
    control = read_control_csv(cfg.control_init, cfg.control_duration)
    _check_control_shape(cfg, control, cfg.control_init)
    return control


def _check_control_shape(cfg: ExperimentConfig, control: ControlField, origin) -> None:
    if control.n_slices != cfg.control_slices:
        raise ValueError(
            f"control file {origin} has {control.n_slices} rows, config expects {cfg.control_slices}"
        )
    if control.n_channels != cfg.system.n_controls:
        raise ValueError(
            f"control file {origin} has {control.n_channels} channels, "
            f"system has {cfg.system.n_controls}"
        )


def cmd_train(cfg: ExperimentConfig) -> dict:
    """Train on the config's sample grid and write the training artifacts."""
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    samples = training_samples(cfg)
    init = _initial_control(cfg)
    record = train(cfg.system, cfg.uncertainty, samples, init, cfg.training)
    write_training_log(out / "training_log.csv", record.j_history)
    write_control_csv(out / "control_initial.csv", init)
    write_control_csv(out / "control_final.csv", record.final_control)
    summary = {
        "config": config_echo(cfg),
        "seed": cfg.evaluation.seed,
        "n_training_samples": len(samples),
        "iterations_run": record.iterations_run,
        "final_J_N": float(record.j_history[-1]),
        "stop_reason": record.stop_reason,
    }
    write_summary(out / "train_summary.json", summary)
    save_training_curve(out / "training_curve.png", record.j_history)
    save_control_fields(out / "control_fields.png", init, record.final_control)
    return summary


def cmd_evaluate(cfg: ExperimentConfig, control_path: str | Path | None = None) -> dict:
    """Evaluate a trained control file on seeded random samples."""
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    if control_path is None:
        control_path = out / "control_final.csv"
    control = read_control_csv(control_path, cfg.control_duration)
    _check_control_shape(cfg, control, control_path)
    samples = test_samples(cfg)
    report = evaluate(cfg.system, cfg.uncertainty, control, samples, cfg.histogram_bins)
    write_evaluation_csv(out / "evaluation.csv", report.samples, report.fidelities)
    summary = {
        "config": config_echo(cfg),
        "seed": cfg.evaluation.seed,
        "count": cfg.evaluation.count,
        "mean_fidelity": report.mean_fidelity,
        "min_fidelity": report.min_fidelity,
        "max_fidelity": report.max_fidelity,
        "histogram": {
            "bin_edges": [float(e) for e in report.histogram_edges],
            "counts": [int(c) for c in report.histogram_counts],
        },
    }
    write_summary(out / "eval_summary.json", summary)
    save_fidelity_scatter(out / "fidelity_per_sample.png", report.fidelities, report.mean_fidelity)
    save_fidelity_histogram(out / "fidelity_histogram.png", report.histogram_edges, report.histogram_counts)
    return summary


def cmd_run(cfg: ExperimentConfig) -> tuple[dict, dict]:
    """Train, then evaluate the control file the training wrote."""
    train_summary = cmd_train(cfg)
    eval_summary = cmd_evaluate(cfg)
    return train_summary, eval_summary


def _random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def _random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def cmd_gradcheck(cfg: ExperimentConfig, seed: int = 0, step: float = 1e-6) -> int:
    """Compare analytic and finite-difference gradients; 0 exit iff they agree.

    Runs 20 randomized three-level instances with short controls, then the
    config's own system at its initial control under a nominal and an
    extreme uncertainty sample. Prints the worst relative mismatch; the
    pass threshold is 1e-4.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    check_spec = UncertaintySpec(0.3, 0.3, "cosine", "cosine")
    for i in range(20):
        d = 3
        m = 1 + i % 4
        q = 10 if i % 2 else 5
        system = QuantumSystem(
            h0=_random_hermitian(rng, d),
            controls=np.array([_random_hermitian(rng, d) for _ in range(m)]),
            psi0=_random_state(rng, d),
            psi_target=_random_state(rng, d),
        )
        sample = UncertaintySample.modulated(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
        control = ControlField(2.0, q, rng.uniform(-1.0, 1.0, (m, q)))
        err = fd_relative_error(system, sample, check_spec, control, step)
        worst = max(worst, err)
        print(f"random instance {i + 1:2d} (M={m}, Q={q:2d}): max relative error {err:.3e}")

    init = _initial_control(cfg)
    for label, sample in (
        ("nominal", UncertaintySample.modulated(0.0, 0.0)),
        (
            "extreme",
            UncertaintySample.modulated(
                cfg.uncertainty.omega_bound,
                0.0 if cfg.uncertainty.f_form == "constant_one" else cfg.uncertainty.theta_bound,
            ),
        ),
    ):
        err = fd_relative_error(cfg.system, sample, cfg.uncertainty, init, step)
        worst = max(worst, err)
        print(f"config system, {label} sample: max relative error {err:.3e}")

    passed = worst <= GRAD_TOLERANCE
    print(f"worst relative error {worst:.3e} ({'PASS' if passed else 'FAIL'} at {GRAD_TOLERANCE:.0e})")
    return 0 if passed else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slcq",
        description="Robust quantum control: train on sampled uncertainties, test on random ones.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--config",
            required=True,
            help="config JSON path or a preset name (vtype_exp1, vtype_exp2)",
        )
        p.add_argument("--output-dir", help="override the config's output directory")

    p_train = sub.add_parser("train", help="train a robust control on the sampled grid")
    add_common(p_train)
    p_train.add_argument("--seed", type=int, help="override the evaluation seed recorded in summaries")
    p_train.add_argument("--eta", type=float, help="override the learning rate")
    p_train.add_argument("--iterations", type=int, help="override the iteration cap")

    p_eval = sub.add_parser("evaluate", help="evaluate a trained control on random samples")
    add_common(p_eval)
    p_eval.add_argument("--seed", type=int, help="override the test-sample seed")
    p_eval.add_argument("--control", help="control CSV to evaluate (default: <output-dir>/control_final.csv)")

    p_run = sub.add_parser("run", help="train, then evaluate the result")
    add_common(p_run)
    p_run.add_argument("--seed", type=int, help="override the test-sample seed")
    p_run.add_argument("--eta", type=float, help="override the learning rate")
    p_run.add_argument("--iterations", type=int, help="override the iteration cap")

    p_check = sub.add_parser("grad-check", help="verify the analytic gradient against finite differences")
    p_check.add_argument(
        "--config",
        required=True,
        help="config JSON path or a preset name (vtype_exp1, vtype_exp2)",
    )
    p_check.add_argument("--seed", type=int, default=0, help="seed for the random instances")
    p_check.add_argument("--step", type=float, default=1e-6, help="finite-difference step")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "grad-check":
            return cmd_gradcheck(cfg, seed=args.seed, step=args.step)
        cfg = with_overrides(
            cfg,
            output_dir=args.output_dir,
            seed=getattr(args, "seed", None),
            eta=getattr(args, "eta", None),
            iterations=getattr(args, "iterations", None),
        )
        if args.command == "train":
            summary = cmd_train(cfg)
            print(
                f"training stopped after {summary['iterations_run']} updates "
                f"({summary['stop_reason']}); final ensemble performance "
                f"{summary['final_J_N']:.6f}"
            )
        elif args.command == "evaluate":
            summary = cmd_evaluate(cfg, control_path=args.control)
            print(
                f"evaluated {summary['count']} samples: mean fidelity "
                f"{summary['mean_fidelity']:.6f} (min {summary['min_fidelity']:.6f}, "
                f"max {summary['max_fidelity']:.6f})"
            )
        elif args.command == "run":
            train_summary, eval_summary = cmd_run(cfg)
            print(
                f"training stopped after {train_summary['iterations_run']} updates "
                f"({train_summary['stop_reason']}); final ensemble performance "
                f"{train_summary['final_J_N']:.6f}"
            )
            print(
                f"evaluated {eval_summary['count']} samples: mean fidelity "
                f"{eval_summary['mean_fidelity']:.6f} (min {eval_summary['min_fidelity']:.6f}, "
                f"max {eval_summary['max_fidelity']:.6f})"
            )
        print(f"artifacts written to {cfg.output_dir}")
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
