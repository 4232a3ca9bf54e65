"""Command-line front end.

Subcommands: sweep, measure, generate, train-eval, generalize, importance,
pipeline, benchmark.  Exit codes: 0 success, 2 configuration error,
3 computation error, 4 validation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__, _kernels
from .data import (SamplingSpec, generate_dataset, log_feature_grid,
                   read_dataset, write_dataset)
from .errors import (ComputationError, ConfigError, GridmodeError,
                     ValidationFailure)
from .learn import (LEARNER_NAMES, Hyperparams, cross_validate,
                    evaluate_generalization, load_model, run_split_pipeline,
                    save_model, top_importances)
from .measure import (default_protocol, format_admittance_table,
                      measure_admittance, validate_measurement)
from .models.descriptor import (format_bode, load_descriptor,
                                model_from_descriptor, save_descriptor,
                                scenario)
from .models.statespace import sweep_admittance
from .perunit import StructureId

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3
EXIT_VALIDATION = 4


def _ensure_out(path: str, force: bool) -> None:
    if os.path.exists(path) and not force:
        raise ConfigError(f"output {path} exists; pass --force to overwrite")


def _write_text(path: str, text: str, force: bool) -> None:
    _ensure_out(path, force)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _model_from_args(args):
    if args.descriptor:
        desc = load_descriptor(args.descriptor)
    elif args.scenario:
        desc = scenario(args.scenario)
    else:
        raise ConfigError("need --descriptor FILE or --scenario NAME")
    return model_from_descriptor(desc), desc


def _outdir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


def cmd_sweep(args) -> int:
    model, desc = _model_from_args(args)
    if args.points < 2 or args.f_lo <= 0 or args.f_hi <= args.f_lo:
        raise ConfigError("need --points >= 2 and 0 < f-lo < f-hi")
    grid = np.geomspace(args.f_lo, args.f_hi, args.points)
    spectrum = sweep_admittance(model, grid)
    out = _outdir(args)
    _write_text(os.path.join(out, "bode.csv"), format_bode(spectrum), args.force)
    save_descriptor(desc, os.path.join(out, "model.json"))
    print(f"wrote {os.path.join(out, 'bode.csv')} ({args.points} rows)")
    return EXIT_OK


def cmd_measure(args) -> int:
    cfg = _load_config(args.config)
    model, desc = _model_from_args(args)
    protocol = default_protocol(
        amplitude=cfg.get("amplitude", args.amplitude),
        include_hf=cfg.get("include_hf", not args.no_hf),
        periods_discard=cfg.get("periods_discard", 2),
        periods_average=cfg.get("periods_average", 4),
        shunt_r=cfg.get("shunt_r", 20.0))
    band = tuple(cfg.get("band", (args.band_lo, args.band_hi)))
    t0 = time.time()
    spectrum, info = measure_admittance(model, protocol)
    report = validate_measurement(spectrum, model, band=band,
                                  tol_mag_db=cfg.get("tol_mag_db", args.tol_mag_db),
                                  tol_phase_deg=cfg.get("tol_phase_deg",
                                                        args.tol_phase_deg))
    out = _outdir(args)
    _write_text(os.path.join(out, "admittance.csv"),
                format_admittance_table(spectrum), args.force)
    _write_text(os.path.join(out, "validation.txt"), report.to_text(), args.force)
    save_descriptor(desc, os.path.join(out, "model.json"))
    dropped = {k: int(v.size) for k, v in info.items()}
    print(f"measured {len(spectrum)} bins in {time.time() - t0:.1f}s; "
          f"dropped per band: {dropped}")
    print(f"validation: {'PASS' if report.passed else 'FAIL'} "
          f"({report.pass_fraction:.1%} of bins within "
          f"{report.tol_mag_db} dB / {report.tol_phase_deg} deg)")
    return EXIT_OK if report.passed else EXIT_VALIDATION


def _sampling_spec_from(args, cfg) -> SamplingSpec:
    counts = cfg.get("counts")
    if counts is None:
        per = args.samples_per_structure
        counts = {s: per for s in ("vcGFM", "ccGFM", "pvGFL", "pqGFL")}
    holdout = cfg.get("holdout_counts", {"viGFL": args.holdout_samples})
    return SamplingSpec(
        master_seed=cfg.get("master_seed", args.seed),
        counts={StructureId.parse(k): v for k, v in counts.items()},
        holdout_counts={StructureId.parse(k): v for k, v in holdout.items()},
        gfl_intervals={k: tuple(v) for k, v in cfg.get("gfl_intervals", {}).items()},
        gfm_intervals={k: tuple(v) for k, v in cfg.get("gfm_intervals", {}).items()})


def cmd_generate(args) -> int:
    cfg = _load_config(args.config)
    spec = _sampling_spec_from(args, cfg)
    grid = log_feature_grid(n=cfg.get("grid_points", args.grid_points))
    out = _outdir(args)
    pool_path = os.path.join(out, "pool.csv")
    hold_path = os.path.join(out, "holdout.csv")
    _ensure_out(pool_path, args.force)
    _ensure_out(hold_path, args.force)

    t0 = time.time()
    pool, rep_pool = generate_dataset(spec, sorted(spec.counts), grid,
                                      threads=args.threads)
    holdout, rep_hold = generate_dataset(spec, sorted(spec.holdout_counts), grid,
                                         threads=args.threads, holdout=True)
    write_dataset(pool, pool_path)
    write_dataset(holdout, hold_path)
    report = rep_pool.to_text() + rep_hold.to_text()
    _write_text(os.path.join(out, "generation_report.txt"), report, args.force)
    print(f"generated {len(pool)} pool + {len(holdout)} holdout samples "
          f"in {time.time() - t0:.1f}s")
    return EXIT_OK


def _parse_learners(text: str):
    names = [n.strip() for n in text.split(",") if n.strip()]
    for n in names:
        if n not in LEARNER_NAMES:
            raise ConfigError(f"unknown learner '{n}'; valid: "
                              f"{', '.join(LEARNER_NAMES)}")
    return names


def _hyperparams(cfg) -> Hyperparams:
    fields = {k: v for k, v in cfg.get("hyperparams", {}).items()}
    return Hyperparams(**fields)


def cmd_train_eval(args) -> int:
    cfg = _load_config(args.config)
    ds = read_dataset(args.dataset)
    names = _parse_learners(args.learners)
    hp = _hyperparams(cfg)
    out = _outdir(args)
    models_dir = os.path.join(out, "models")
    os.makedirs(models_dir, exist_ok=True)

    rows = []
    for name in names:
        t0 = time.time()
        model, scaler, report = run_split_pipeline(ds, name, hp, seed=args.seed,
                                                   threads=args.threads)
        cv_mean = cv_std = None
        if args.cv_runs > 0:
            cv_mean, cv_std, _ = cross_validate(ds, name, hp, runs=args.cv_runs,
                                                seed=args.seed,
                                                threads=args.threads)
            report.cv_mean, report.cv_std = cv_mean, cv_std
        model_path = os.path.join(models_dir, f"{name}.npz")
        _ensure_out(model_path, args.force)
        save_model(model_path, name, model, scaler,
                   feature_names=ds.feature_names)
        _write_text(os.path.join(out, f"report_{name}.txt"), report.to_text(),
                    args.force)
        rows.append({"learner": name, "accuracy": report.accuracy,
                     "cv_mean": cv_mean, "cv_std": cv_std,
                     "seconds": round(time.time() - t0, 2)})
        cv_txt = f" cv={cv_mean:.4f}+-{cv_std:.4f}" if cv_mean is not None else ""
        print(f"{name}: accuracy={report.accuracy:.4f}{cv_txt} "
              f"({rows[-1]['seconds']}s)")

    table = ["learner, accuracy, cv_mean, cv_std"]
    for r in rows:
        cvm = f"{r['cv_mean']:.6f}" if r["cv_mean"] is not None else "-"
        cvs = f"{r['cv_std']:.6f}" if r["cv_std"] is not None else "-"
        table.append(f"{r['learner']}, {r['accuracy']:.6f}, {cvm}, {cvs}")
    _write_text(os.path.join(out, "comparison.txt"), "\n".join(table) + "\n",
                args.force)
    _write_text(os.path.join(out, "comparison.json"),
                json.dumps(rows, indent=2, sort_keys=True) + "\n", args.force)
    return EXIT_OK


def cmd_generalize(args) -> int:
    holdout = read_dataset(args.holdout)
    if len(holdout) == 0:
        raise ConfigError("holdout dataset is empty")
    files = sorted(f for f in os.listdir(args.models) if f.endswith(".npz"))
    if not files:
        raise ConfigError(f"no model files in {args.models}")
    out = _outdir(args)
    rows = []
    for fname in files:
        name, model, scaler = load_model(os.path.join(args.models, fname))
        report = evaluate_generalization(model, scaler, holdout, name)
        rows.append({"learner": name, "generalization": report.accuracy})
        _write_text(os.path.join(out, f"generalization_{name}.txt"),
                    report.to_text(), args.force)
        print(f"{name}: generalization={report.accuracy:.4f}")
    table = ["learner, generalization"]
    for r in sorted(rows, key=lambda r: r["learner"]):
        table.append(f"{r['learner']}, {r['generalization']:.6f}")
    _write_text(os.path.join(out, "generalization.txt"),
                "\n".join(table) + "\n", args.force)
    _write_text(os.path.join(out, "generalization.json"),
                json.dumps(rows, indent=2, sort_keys=True) + "\n", args.force)
    return EXIT_OK


def cmd_importance(args) -> int:
    name, model, _scaler, feature_names = load_model(args.model,
                                                     with_names=True)
    if feature_names is None:
        raise ConfigError("model file carries no feature names")
    pairs = top_importances(name, model, feature_names, k=args.top)
    out = _outdir(args)
    lines = ["feature, weight"]
    lines += [f"{f}, {w:.6f}" for f, w in pairs]
    _write_text(os.path.join(out, f"importance_{name}.txt"),
                "\n".join(lines) + "\n", args.force)
    for f, w in pairs:
        print(f"{f}: {w:.4f}")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    out = _outdir(args)
    ns = argparse.Namespace(**vars(args))
    ns.out = os.path.join(out, "dataset")
    cmd_generate(ns)

    ns = argparse.Namespace(**vars(args))
    ns.dataset = os.path.join(out, "dataset", "pool.csv")
    ns.learners = args.learners
    ns.out = os.path.join(out, "training")
    cmd_train_eval(ns)

    ns = argparse.Namespace(**vars(args))
    ns.models = os.path.join(out, "training", "models")
    ns.holdout = os.path.join(out, "dataset", "holdout.csv")
    ns.out = os.path.join(out, "generalization")
    cmd_generalize(ns)

    for learner in ("dt", "rf"):
        model_path = os.path.join(out, "training", "models", f"{learner}.npz")
        if os.path.exists(model_path):
            ns = argparse.Namespace(**vars(args))
            ns.model = model_path
            ns.top = args.top
            ns.out = os.path.join(out, "importance")
            cmd_importance(ns)
    print(f"pipeline outputs under {out}")
    return EXIT_OK


def cmd_benchmark(args) -> int:
    from .benchmark import run_benchmark
    text = run_benchmark(lti_steps=args.lti_steps, tree_rows=args.tree_rows,
                         tree_cols=args.tree_cols)
    print(text, end="")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write_text(os.path.join(args.out, "benchmark.txt"), text, args.force)
    return EXIT_OK


def _add_common(p, seed=True):
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--force", action="store_true",
                   help="overwrite existing outputs")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--config", default=None, help="JSON config file")
    if seed:
        p.add_argument("--seed", type=int, default=2024)


def _add_model_source(p):
    p.add_argument("--descriptor", default=None, help="model descriptor JSON")
    p.add_argument("--scenario", default=None,
                   help="named scenario (table1-vcgfm, scr15-<structure>)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gridmode",
        description="Converter admittance workbench: models, PRBS "
                    "measurement, datasets, control-mode classification")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="analytic admittance Bode data")
    _add_model_source(p)
    p.add_argument("--f-lo", type=float, default=1.0)
    p.add_argument("--f-hi", type=float, default=10000.0)
    p.add_argument("--points", type=int, default=200)
    _add_common(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("measure", help="PRBS measurement + validation")
    _add_model_source(p)
    p.add_argument("--band-lo", type=float, default=1.0)
    p.add_argument("--band-hi", type=float, default=1000.0)
    p.add_argument("--tol-mag-db", type=float, default=1.0)
    p.add_argument("--tol-phase-deg", type=float, default=5.0)
    p.add_argument("--amplitude", type=float, default=0.02)
    p.add_argument("--no-hf", action="store_true",
                   help="skip the 1-10 kHz band")
    _add_common(p)
    p.set_defaults(fn=cmd_measure)

    p = sub.add_parser("generate", help="sample labeled datasets")
    p.add_argument("--samples-per-structure", type=int, default=2500)
    p.add_argument("--holdout-samples", type=int, default=2500)
    p.add_argument("--grid-points", type=int, default=100)
    _add_common(p)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("train-eval", help="train learners, cross-validate")
    p.add_argument("--dataset", required=True)
    p.add_argument("--learners", default=",".join(LEARNER_NAMES))
    p.add_argument("--cv-runs", type=int, default=100)
    _add_common(p)
    p.set_defaults(fn=cmd_train_eval)

    p = sub.add_parser("generalize", help="evaluate stored models on a holdout")
    p.add_argument("--models", required=True, help="directory of .npz models")
    p.add_argument("--holdout", required=True, help="holdout dataset CSV")
    _add_common(p)
    p.set_defaults(fn=cmd_generalize)

    p = sub.add_parser("importance", help="top-k feature importances")
    p.add_argument("--model", required=True, help="tree-based model file")
    p.add_argument("--top", type=int, default=5)
    _add_common(p, seed=False)
    p.set_defaults(fn=cmd_importance)

    p = sub.add_parser("pipeline",
                       help="generate -> train-eval -> generalize -> importance")
    p.add_argument("--samples-per-structure", type=int, default=2500)
    p.add_argument("--holdout-samples", type=int, default=2500)
    p.add_argument("--grid-points", type=int, default=100)
    p.add_argument("--learners", default=",".join(LEARNER_NAMES))
    p.add_argument("--cv-runs", type=int, default=100)
    p.add_argument("--top", type=int, default=5)
    _add_common(p)
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("benchmark", help="compiled vs pure-python kernels")
    p.add_argument("--lti-steps", type=int, default=200000)
    p.add_argument("--tree-rows", type=int, default=4000)
    p.add_argument("--tree-cols", type=int, default=400)
    p.add_argument("--out", default=None)
    p.add_argument("--force", action="store_true")
    p.set_defaults(fn=cmd_benchmark)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationFailure as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ComputationError, GridmodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
