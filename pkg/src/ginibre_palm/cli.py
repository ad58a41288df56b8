"""Command line driver: samplers, experiments, and the identity suite.

Exit codes are fixed for scripting: 0 success, 1 identity-suite failure,
2 usage error, 3 runtime failure, 4 singular pair (anchor tuples of
different lengths, between which no density exists).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from . import verify as verify_mod
from .core import Configuration
from .errors import (
    AnchorCollisionError,
    BudgetExceededError,
    ConvergenceFailureError,
    DimensionMismatchError,
    PalmDegeneracyError,
    RejectionBudgetError,
)
from .kernel import z_ratio
from .rn_density import expectation_consistency, rn_density
from .sampler import (
    make_rng,
    sample_ginibre_n,
    sample_palm_ginibre_n,
    sample_radial_palm,
)
from .statistics import estimate, f_T

DEFAULT_SAMPLES = 100


def parse_anchors(text: str):
    """Semicolon-separated complex numbers like 0.5-1.2i; spaces ignored."""
    cleaned = text.replace(" ", "").replace("\t", "")
    if not cleaned:
        return ()
    out = []
    for token in cleaned.split(";"):
        try:
            out.append(complex(token.replace("i", "j")))
        except ValueError:
            raise ValueError(f"cannot parse anchor token {token!r}") from None
    return tuple(out)


def _load_key_value_config(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {line!r}")
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


_CONFIG_CASTS = {
    "n": int,
    "ell": int,
    "samples": int,
    "seed": int,
    "workers": int,
    "simulate_n": int,
    "r_max": int,
    "tmax": float,
    "T": float,
    "tol": float,
    "anchors": str,
    "anchors_x": str,
    "anchors_y": str,
    "out": str,
    "summary": str,
    "config_file": str,
    "only": str,
    "report": str,
    "check_expectation": lambda s: s.lower() in ("1", "true", "yes"),
}


def _merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Fill flags still at None from the key=value config file, if any."""
    if not getattr(args, "config", None):
        return
    try:
        values = _load_key_value_config(args.config)
    except OSError as exc:
        parser.error(str(exc))
    for key, raw in values.items():
        if not hasattr(args, key) or key == "config":
            parser.error(f"unknown config key {key!r}")
        if getattr(args, key) is None or getattr(args, key) is False:
            cast = _CONFIG_CASTS.get(key, str)
            try:
                setattr(args, key, cast(raw))
            except ValueError:
                parser.error(f"bad value for config key {key!r}: {raw!r}")


def _require(parser, args, *names):
    for name in names:
        if getattr(args, name) is None:
            parser.error(f"argument --{name.replace('_', '-')} is required")


class _Output:
    """A file path or stdout, usable as a context manager either way."""

    def __init__(self, path):
        self.path = path

    def __enter__(self):
        self.fh = open(self.path, "w", newline="") if self.path else sys.stdout
        return self.fh

    def __exit__(self, *exc):
        if self.path:
            self.fh.close()
        return False


def _emit_json(payload: dict, path) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _worker_counts(total: int, workers: int):
    base, extra = divmod(total, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


# -- sample ------------------------------------------------------------


def _sample_batch(kind, n, ell, anchors, tmax, seed, stream_id, count):
    rng = make_rng(seed, stream_id)
    rows = []
    for _ in range(count):
        if kind == "ginibre":
            rows.append([(p.real, p.imag) for p in sample_ginibre_n(n, rng).points])
        elif kind == "palm":
            rows.append(
                [(p.real, p.imag) for p in sample_palm_ginibre_n(n, anchors, rng).points]
            )
        else:
            rows.append(list(sample_radial_palm(ell, tmax, rng).values))
    return rows


def _parallel_batches(fn_args, workers):
    total_args = []
    for stream_id, count in enumerate(_worker_counts(fn_args[7], workers)):
        total_args.append(fn_args[:6] + (stream_id, count))
    if workers == 1:
        return [_sample_batch(*total_args[0])]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_sample_batch, *a) for a in total_args]
        return [f.result() for f in futures]


def cmd_sample(args, parser) -> int:
    _merge_config(args, parser)
    kind = args.kind
    if kind in ("ginibre", "palm"):
        _require(parser, args, "n")
    if kind == "palm":
        _require(parser, args, "anchors")
    if kind == "radial":
        _require(parser, args, "ell", "tmax")
    samples = args.samples if args.samples is not None else DEFAULT_SAMPLES
    seed = args.seed if args.seed is not None else 0
    workers = args.workers if args.workers is not None else 1
    if workers < 1 or samples < 1:
        parser.error("--samples and --workers must be positive")
    anchors = None
    if kind == "palm":
        try:
            anchors = parse_anchors(args.anchors)
        except ValueError as exc:
            parser.error(str(exc))
        if args.n <= len(anchors):
            parser.error("--n must exceed the number of anchors")
    batches = _parallel_batches(
        (kind, args.n, args.ell, anchors, args.tmax, seed, 0, samples), workers
    )
    with _Output(args.out) as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id", "re", "im"] if kind != "radial" else ["sample_id", "radius_sq"])
        sample_id = 0
        for batch in batches:
            for row in batch:
                if kind == "radial":
                    for value in row:
                        writer.writerow([sample_id, repr(float(value))])
                else:
                    for re, im in row:
                        writer.writerow([sample_id, repr(float(re)), repr(float(im))])
                sample_id += 1
    return 0


# -- ft ----------------------------------------------------------------


def _ft_batch(ell, t_big, seed, stream_id, count):
    rng = make_rng(seed, stream_id)
    return [f_T(sample_radial_palm(ell, t_big, rng), t_big) for _ in range(count)]


def cmd_ft(args, parser) -> int:
    _merge_config(args, parser)
    _require(parser, args, "ell", "T")
    samples = args.samples if args.samples is not None else DEFAULT_SAMPLES
    seed = args.seed if args.seed is not None else 0
    workers = args.workers if args.workers is not None else 1
    if samples < 2:
        parser.error("--samples must be at least 2")
    if workers < 1:
        parser.error("--workers must be positive")
    counts = _worker_counts(samples, workers)
    if workers == 1:
        chunks = [_ft_batch(args.ell, args.T, seed, 0, samples)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_ft_batch, args.ell, args.T, seed, sid, cnt)
                for sid, cnt in enumerate(counts)
            ]
            chunks = [f.result() for f in futures]
    values = [v for chunk in chunks for v in chunk]
    est = estimate(values, seed=seed)
    ell_hat = max(0, round(-est.mean))
    with _Output(args.out) as fh:
        writer = csv.writer(fh)
        writer.writerow(["T", "ell", "n_samples", "mean_fT", "var_fT", "std_err", "ell_hat"])
        writer.writerow(
            [
                repr(float(args.T)),
                args.ell,
                est.n_samples,
                repr(est.mean),
                repr(est.variance),
                repr(est.std_error),
                ell_hat,
            ]
        )
    summary = {
        "T": float(args.T),
        "ell": int(args.ell),
        "n_samples": est.n_samples,
        "mean_fT": est.mean,
        "var_fT": est.variance,
        "std_err": est.std_error,
        "ell_hat": int(ell_hat),
        "seed": int(seed),
    }
    _emit_json(summary, args.summary)
    return 0


# -- rn ----------------------------------------------------------------


def _read_config_points(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        needed = {"sample_id", "re", "im"}
        if reader.fieldnames is None or not needed.issubset(reader.fieldnames):
            raise ValueError(f"{path} is not a sample CSV with sample_id,re,im columns")
        first_id = None
        pts = []
        for row in reader:
            if first_id is None:
                first_id = row["sample_id"]
            if row["sample_id"] != first_id:
                break
            pts.append(complex(float(row["re"]), float(row["im"])))
    return pts


def cmd_rn(args, parser) -> int:
    _merge_config(args, parser)
    _require(parser, args, "anchors_x", "anchors_y")
    try:
        x = parse_anchors(args.anchors_x)
        y = parse_anchors(args.anchors_y)
    except ValueError as exc:
        parser.error(str(exc))
    if (args.config_file is None) == (args.simulate_n is None):
        parser.error("exactly one of --config-file or --simulate-n is required")
    seed = args.seed if args.seed is not None else 0
    zr = z_ratio(x, y)
    if args.config_file is not None:
        points = _read_config_points(args.config_file)
    else:
        if args.simulate_n <= len(y):
            parser.error("--simulate-n must exceed the anchor count")
        points = sample_palm_ginibre_n(args.simulate_n, y, make_rng(seed, 0)).points
    config = Configuration(points)
    tol = args.tol if args.tol is not None else 1e-3
    density, diag = rn_density(config, x, y, r_max=args.r_max, tol=tol)
    with _Output(args.out) as fh:
        writer = csv.writer(fh)
        writer.writerow(["r", "b_r", "shell_delta_log", "cum_log", "density_partial"])
        cum = 0.0
        for r, delta in diag.log_increments:
            cum += delta
            writer.writerow(
                [r, 2**r, repr(float(delta)), repr(cum), repr(math.exp(cum) / zr)]
            )
    summary = {
        "density": density,
        "converged": bool(diag.converged),
        "r_stop": int(diag.r_stop),
        "z_ratio": zr,
    }
    if args.check_expectation:
        _require(parser, args, "n")
        mc_samples = args.samples if args.samples is not None else 200
        mc, exact = expectation_consistency(args.n, x, y, mc_samples, make_rng(seed, 1))
        summary["expectation_check"] = {
            "mc_mean": mc.mean,
            "std_error": mc.std_error,
            "exact": exact,
            "abs_error": abs(mc.mean - exact),
            "within_3se": bool(abs(mc.mean - exact) <= 3.0 * mc.std_error),
            "n_samples": mc.n_samples,
        }
    _emit_json(summary, args.summary)
    return 0


# -- verify ------------------------------------------------------------


def cmd_verify(args, parser) -> int:
    _merge_config(args, parser)
    report = verify_mod.run_verify(only=args.only)
    for block in report["blocks"]:
        status = "PASS" if block["passed"] else "FAIL"
        print(
            f"{block['name']}: {status} "
            f"(max_error {block['max_error']:.3e}, tolerance {block['tolerance']:.1e}, "
            f"{block['cases']} cases)"
        )
    if args.report:
        _emit_json(report, args.report)
    return 0 if report["passed"] else 1


# -- parser ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ginibre-palm",
        description="Samplers and identity checks for conditioned planar ensembles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", default=None, help="key=value file supplying defaults")

    p_sample = sub.add_parser("sample", help="draw configurations, write CSV")
    p_sample.add_argument("kind", choices=("ginibre", "palm", "radial"))
    p_sample.add_argument("--n", type=int, default=None)
    p_sample.add_argument("--ell", type=int, default=None)
    p_sample.add_argument("--tmax", type=float, default=None)
    p_sample.add_argument("--anchors", default=None)
    p_sample.add_argument("--samples", type=int, default=None)
    p_sample.add_argument("--workers", type=int, default=None)
    p_sample.add_argument("--out", default=None)
    common(p_sample)
    p_sample.set_defaults(func=cmd_sample)

    p_ft = sub.add_parser("ft", help="detector statistic experiment")
    p_ft.add_argument("--ell", type=int, default=None)
    p_ft.add_argument("--T", type=float, default=None)
    p_ft.add_argument("--samples", type=int, default=None)
    p_ft.add_argument("--workers", type=int, default=None)
    p_ft.add_argument("--out", default=None)
    p_ft.add_argument("--summary", default=None)
    common(p_ft)
    p_ft.set_defaults(func=cmd_ft)

    p_rn = sub.add_parser("rn", help="density between two conditionings")
    p_rn.add_argument("--anchors-x", dest="anchors_x", default=None)
    p_rn.add_argument("--anchors-y", dest="anchors_y", default=None)
    p_rn.add_argument("--config-file", dest="config_file", default=None)
    p_rn.add_argument("--simulate-n", dest="simulate_n", type=int, default=None)
    p_rn.add_argument("--r-max", dest="r_max", type=int, default=None)
    p_rn.add_argument("--tol", type=float, default=None)
    p_rn.add_argument("--check-expectation", dest="check_expectation", action="store_true")
    p_rn.add_argument("--n", type=int, default=None)
    p_rn.add_argument("--samples", type=int, default=None)
    p_rn.add_argument("--out", default=None)
    p_rn.add_argument("--summary", default=None)
    common(p_rn)
    p_rn.set_defaults(func=cmd_rn)

    p_verify = sub.add_parser("verify", help="run the identity suite")
    p_verify.add_argument("--only", choices=verify_mod.BLOCK_NAMES, default=None)
    p_verify.add_argument("--report", default=None)
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except DimensionMismatchError as exc:
        print(f"error: singular pair: {exc}", file=sys.stderr)
        return 4
    except (
        AnchorCollisionError,
        BudgetExceededError,
        ConvergenceFailureError,
        PalmDegeneracyError,
        RejectionBudgetError,
        OSError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
