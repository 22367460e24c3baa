"""Command line pipeline: generate, summarize, merge, evaluate, bound.

Exit status is 0 on success, 1 on a runtime failure and 2 on a usage error.
"""

import argparse
import csv
import datetime as dt
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .datagen import GumbelSpec, day_seed, generate_gumbel, ingest_tsv, write_tsv
from .exceptions import DomainError, SummaryError
from .histogram import build_exact
from .merge import (
    assemble_pre_histogram,
    merge_to_beta,
    min_t_for_error,
    theoretical_bound,
)
from .metrics import evaluate
from .sampling import SampleSpec, build_sampled_histogram, sample_partitions
from .store import Catalog, PartitionSummary, read_summary, select_interval, write_summary

log = logging.getLogger("histomerge")

CSV_HEADER = ["method", "t", "beta", "days", "mu_b", "mu_s", "bound", "bound_ok", "runtime_ms"]
WORKERS_ENV = "HISTOMERGE_WORKERS"


class UsageError(Exception):
    pass


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _int_list(text):
    return [_positive_int(p) for p in text.split(",") if p.strip()]


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _default_workers():
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return 1
    try:
        return _positive_int(raw)
    except argparse.ArgumentTypeError:
        log.warning("ignoring invalid %s=%r", WORKERS_ENV, raw)
        return 1


def _fmt_number(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    return repr(float(x))


def _tsv_inputs(paths):
    files = []
    for p in map(Path, paths):
        if p.is_dir():
            files.extend(sorted(p.glob("*.tsv")))
        else:
            files.append(p)
    return files


def _label_of(path):
    return Path(path).name.removesuffix(".tsv")


# -- generate -----------------------------------------------------------------


def cmd_generate(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    start = dt.date.fromisoformat(args.start)
    for day in range(args.days):
        label = (start + dt.timedelta(days=day)).isoformat()
        spec = GumbelSpec(
            count=args.per_day,
            loc=args.loc,
            scale=args.scale,
            seed=day_seed(args.seed, day),
            quantize=args.quantize,
        )
        path = write_tsv(out / f"{label}.tsv", generate_gumbel(spec))
        log.info("wrote %s", path)
    return 0


# -- summarize ----------------------------------------------------------------


def _summarize_one(path, t, value_column, partition_id, out, overwrite):
    values, skipped = ingest_tsv(path, value_column)
    hist = build_exact(values, t)
    summary = PartitionSummary.from_histogram(hist, _label_of(path), partition_id)
    return str(write_summary(summary, out, overwrite=overwrite)), skipped


def cmd_summarize(args):
    files = _tsv_inputs(args.inputs)
    if not files:
        raise UsageError("no input partitions found")
    jobs = [(str(f), args.t, args.value_column, args.partition_id, args.out, args.overwrite)
            for f in files]
    failures = 0
    if args.workers == 1:
        results = []
        for job in jobs:
            try:
                results.append(_summarize_one(*job))
            except Exception as exc:  # reported per partition
                results.append(exc)
    else:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            futures = [pool.submit(_summarize_one, *job) for job in jobs]
            results = []
            for fut in futures:
                try:
                    results.append(fut.result())
                except Exception as exc:
                    results.append(exc)
    for job, res in zip(jobs, results):
        if isinstance(res, Exception):
            failures += 1
            print(f"error: {job[0]}: {res}", file=sys.stderr)
        else:
            log.info("summarized %s -> %s (skipped %d)", job[0], res[0], res[1])
    return 1 if failures else 0


# -- merge --------------------------------------------------------------------


def _select(catalog, from_label, to_label):
    labels = catalog.labels
    if not labels:
        raise DomainError(f"catalog {catalog.directory} holds no summaries")
    return select_interval(catalog, from_label or labels[0], to_label or labels[-1])


def cmd_merge(args):
    catalog = Catalog(args.catalog)
    chosen = _select(catalog, args.from_label, args.to_label)
    label = f"{args.from_label or chosen[0].label}..{args.to_label or chosen[-1].label}"
    pre = assemble_pre_histogram(chosen)
    hist, plan = merge_to_beta(pre, args.beta)
    bound = theoretical_bound(pre.total, pre.source_buckets, beta=args.beta)
    merged = PartitionSummary.from_histogram(hist, label, "merged")

    out = Path(args.out) if args.out else Path(merged.filename)
    if out.exists() and not args.overwrite:
        raise SummaryError(f"{out} already exists (use --overwrite)")
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = out.with_name(f".tmp-{out.name}")
    tmp.write_text(merged.to_json(), encoding="utf-8")
    os.replace(tmp, out)

    print(f"output={out}")
    print(f"partitions={pre.n_sources}")
    print(f"n={pre.total}")
    print(f"t={pre.source_buckets}")
    print(f"beta={args.beta}")
    print(f"epsilon_max={_fmt_number(bound.epsilon_max)}")
    print(f"epsilon_max_fraction_of_ideal={_fmt_number(bound.as_fraction_of_ideal)}")
    if plan.empty_groups:
        print(f"empty_groups={len(plan.empty_groups)}")
    return 0


# -- evaluate -----------------------------------------------------------------


def _load_partitions(args):
    files = _tsv_inputs(args.inputs)
    if args.from_label:
        files = [f for f in files if _label_of(f) >= args.from_label]
    if args.to_label:
        files = [f for f in files if _label_of(f) <= args.to_label]
    if not files:
        raise DomainError("no raw partitions selected")
    files.sort(key=_label_of)
    return [ingest_tsv(f, args.value_column).values for f in files]


def _row(method, t, beta, days, report, runtime_ms):
    return {
        "method": method,
        "t": t,
        "beta": beta,
        "days": days,
        "mu_b": repr(report.mu_b),
        "mu_s": repr(report.mu_s),
        "bound": _fmt_number(report.bound.epsilon_max),
        "bound_ok": str(report.bound_satisfied).lower(),
        "runtime_ms": f"{runtime_ms:.3f}",
    }


def _merge_row(parts, t, beta):
    summaries = [build_exact(p, t) for p in parts]
    start = time.perf_counter()
    hist, _ = merge_to_beta(assemble_pre_histogram(summaries), beta)
    elapsed = (time.perf_counter() - start) * 1000
    return hist, elapsed


def _tuple_row(parts, t, beta, seed):
    samples = sample_partitions(parts, SampleSpec(t, seed))
    start = time.perf_counter()
    hist = build_sampled_histogram(samples, beta, int(sum(p.size for p in parts)))
    elapsed = (time.perf_counter() - start) * 1000
    return hist, elapsed


def _averaged(reports):
    if len(reports) == 1:
        return reports[0]
    first = reports[0]
    return type(first)(
        mu_b=float(np.mean([r.mu_b for r in reports])),
        mu_s=float(np.mean([r.mu_s for r in reports])),
        per_bucket_size_dev=first.per_bucket_size_dev,
        bound=first.bound,
        bound_satisfied=all(r.bound_satisfied for r in reports),
    )


def evaluation_rows(parts, ts, beta, methods, days_list, seed=0, repeats=1):
    """CSV rows for every (method, t, days) combination."""
    rows = []
    for days in days_list:
        if days > len(parts):
            raise DomainError(f"interval of {days} days exceeds the {len(parts)} partitions")
        sub = parts[:days]
        for t in ts:
            if t < beta:
                raise DomainError(f"t={t} is smaller than beta={beta}")
            for method in methods:
                if method == "merge":
                    hist, ms = _merge_row(sub, t, beta)
                    rows.append(_row(method, t, beta, days, evaluate(hist, sub, t), ms))
                else:
                    reports, total_ms = [], 0.0
                    for r in range(repeats):
                        hist, ms = _tuple_row(sub, t, beta, seed + r)
                        reports.append(evaluate(hist, sub, t))
                        total_ms += ms
                    rows.append(_row(method, t, beta, days, _averaged(reports), total_ms / repeats))
    return rows


def cmd_evaluate(args):
    if not args.t:
        raise UsageError("evaluate needs --t (summary or sample size)")
    if not args.merged and args.beta is None:
        raise UsageError("evaluate needs --beta unless --merged is given")
    parts = _load_partitions(args)
    if args.merged:
        summary = read_summary(args.merged)
        rows = []
        for t in args.t:
            report = evaluate(summary.histogram, parts, t)
            rows.append(_row("merge", t, summary.t, len(parts), report, 0.0))
    else:
        days_list = args.days or [len(parts)]
        rows = evaluation_rows(parts, args.t, args.beta, args.methods, days_list,
                               seed=args.seed, repeats=args.repeats)

    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            fh.close()
    return 0


# -- bound --------------------------------------------------------------------


def cmd_bound(args):
    if (args.t is None) == (args.max_error is None):
        raise UsageError("give exactly one of --t (with --n) or --max-error")
    if args.max_error is not None:
        if not 0 < args.max_error <= 1:
            raise UsageError(f"--max-error must be in (0, 1], got {args.max_error}")
        print(min_t_for_error(args.beta, args.max_error))
        return 0
    if args.n is None:
        raise UsageError("--t requires --n (the total number of values)")
    print(_fmt_number(theoretical_bound(args.n, args.t, beta=args.beta).epsilon_max))
    return 0


# -- parser -------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="histomerge",
        description="Build, merge and evaluate equi-depth histograms of partitioned data.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write Gumbel-distributed daily TSV partitions")
    p.add_argument("--days", type=_positive_int, required=True)
    p.add_argument("--per-day", type=_positive_int, required=True)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--start", default="2015-01-01", help="label of the first day (ISO date)")
    p.add_argument("--loc", type=float, default=0.0)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--quantize", type=float, default=1000.0,
                   help="multiplier applied before rounding draws to integers")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("summarize", help="build one exact T-bucket summary per partition")
    p.add_argument("inputs", nargs="+", help="TSV files or directories of *.tsv")
    p.add_argument("--t", type=_positive_int, required=True)
    p.add_argument("--out", required=True, help="catalog directory")
    p.add_argument("--value-column", type=_positive_int, default=4)
    p.add_argument("--partition-id", default="part")
    p.add_argument("--workers", type=_positive_int, default=None,
                   help=f"parallel partitions (default ${WORKERS_ENV} or 1)")
    p.add_argument("--overwrite", action="store_true")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("merge", help="merge the summaries of a label interval")
    p.add_argument("--catalog", default=".", help="directory of .edh.json summaries")
    p.add_argument("--from", dest="from_label")
    p.add_argument("--to", dest="to_label")
    p.add_argument("--beta", type=_positive_int, required=True)
    p.add_argument("--out", help="output file (default <from>..<to>__merged.edh.json)")
    p.add_argument("--overwrite", action="store_true")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("evaluate", help="compare merge and sampling against the exact histogram")
    p.add_argument("inputs", nargs="+", help="raw TSV partitions or directories")
    p.add_argument("--t", type=_int_list, action="extend",
                   help="summary/sample size; repeat or comma-separate for a sweep")
    p.add_argument("--beta", type=_positive_int)
    p.add_argument("--methods", type=lambda s: s.split(","), default=["merge", "tuple"])
    p.add_argument("--days", type=_int_list, help="interval lengths, e.g. 1,7,14,21,31")
    p.add_argument("--from", dest="from_label")
    p.add_argument("--to", dest="to_label")
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--repeats", type=_positive_int, default=1,
                   help="seeds averaged for the sampling baseline")
    p.add_argument("--merged", help="evaluate this merged summary instead of rebuilding")
    p.add_argument("--value-column", type=_positive_int, default=4)
    p.add_argument("--out", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bound", help="error bound for T, or minimum T for an error target")
    p.add_argument("--beta", type=_positive_int, required=True)
    p.add_argument("--t", type=_positive_int)
    p.add_argument("--n", type=_nonneg_int)
    p.add_argument("--max-error", type=_fraction)
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if getattr(args, "workers", 1) is None:
        args.workers = _default_workers()
    if args.command == "evaluate":
        bad = [m for m in args.methods if m not in ("merge", "tuple")]
        if bad:
            parser.error(f"unknown method(s): {', '.join(bad)}")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (DomainError, SummaryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
