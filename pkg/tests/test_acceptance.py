"""Exit criteria for the merge method, each reported as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the lines
inline; they are also repeated in the terminal summary).
"""

import math
import time

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from histomerge import (
    Histogram,
    PartitionSummary,
    SampleSpec,
    assemble_pre_histogram,
    boundary_error,
    build_exact,
    build_sampled_histogram,
    exact_union_histogram,
    merge_summaries,
    merge_to_beta,
    read_summary,
    sample_partition,
    size_error,
    write_summary,
)
from histomerge.cli import main
from histomerge.datagen import GumbelSpec, day_seed, generate_gumbel, write_tsv
from histomerge.sampling import sample_partitions

from .conftest import P1, P2

N_INSTANCES = 1200


def _instances(seed=20160101):
    """k in [1, 10], T in [2, 256], sizes in [T, 10^4]; uniform and Gumbel values."""
    rng = np.random.default_rng(seed)
    for idx in range(N_INSTANCES):
        k = int(rng.integers(1, 11))
        t = int(rng.integers(2, 257))
        beta = int(rng.integers(1, t + 1))
        skewed = idx % 2 == 1
        parts = []
        for _ in range(k):
            n = int(rng.integers(t, 10**4 + 1))
            if skewed:
                x = rng.gumbel(rng.uniform(-5, 5), rng.uniform(0.1, 10), n)
                parts.append(np.rint(x * 1000).astype(np.int64))
            else:
                parts.append(rng.integers(-(10**6), 10**6, n))
        yield k, t, beta, [build_exact(p, t) for p in parts]


def test_c1_worked_example(acceptance):
    h1 = Histogram([2, 7, 18, 25], [4, 4, 4, 0])
    h2 = Histogram([3, 15, 24, 30], [5, 5, 5, 0])
    assert build_exact(P1, 3) == h1 and build_exact(P2, 3) == h2

    timings = []
    for _ in range(50):
        start = time.perf_counter()
        pre = assemble_pre_histogram([h1, h2])
        merged, _ = merge_to_beta(pre, 3)
        timings.append(time.perf_counter() - start)
    best_ms = min(timings) * 1000

    ok = (
        pre.approx_cumulative.tolist() == [4, 9, 13, 18, 22, 27, 27]
        and merged.pairs() == [(2, 9), (7, 9), (18, 9), (30, 0)]
        and best_ms < 1.0
    )
    acceptance("C1 worked example", ok, f"H*={merged.pairs()} in {best_ms:.3f} ms")
    assert ok


def test_c2_bucket_size_bound(acceptance):
    start = time.perf_counter()
    violations = count = 0
    worst = 0.0
    for _, t, beta, hists in _instances():
        h, bound = merge_summaries(hists, beta)
        n = h.total
        # |a - N/beta| < 2N/T  <=>  |a*beta - N| * T < 2 * N * beta
        dev = np.abs(h.sizes[:-1] * beta - n) * t
        violations += int(np.sum(dev >= 2 * n * beta))
        worst = max(worst, float(dev.max()) / (2 * n * beta))
        count += 1
    elapsed = time.perf_counter() - start
    ok = count >= 1000 and violations == 0 and elapsed < 60
    acceptance(
        "C2 per-bucket size bound", ok,
        f"{count} instances, {violations} violations, worst dev/bound={worst:.3f}, {elapsed:.1f} s",
    )
    assert ok


def test_c3_bucket_range_bound(acceptance):
    start = time.perf_counter()
    violations = count = ranges = 0
    for _, t, beta, hists in _instances():
        h, _ = merge_summaries(hists, beta)
        n = h.total
        c = np.concatenate(([0], np.cumsum(h.sizes[:-1])))
        i, j = np.triu_indices(beta + 1, k=1)
        r = c[j] - c[i]
        m = j - i
        dev = np.abs(r * beta - m * n) * t
        violations += int(np.sum(dev >= 2 * n * beta))
        ranges += r.size
        count += 1
    elapsed = time.perf_counter() - start
    ok = count >= 1000 and violations == 0 and elapsed < 120
    acceptance(
        "C3 bucket-range bound", ok,
        f"{count} instances, {ranges} ranges, {violations} violations, {elapsed:.1f} s",
    )
    assert ok


def test_c4_five_percent_rule(acceptance):
    start = time.perf_counter()
    values = generate_gumbel(GumbelSpec(count=10**6, seed=4))
    parts = np.array_split(values, 8)
    n = values.size
    details, ok = [], True
    for beta in (3, 10, 254):
        t = 40 * beta
        h, _ = merge_summaries([build_exact(p, t) for p in parts], beta)
        # max |a - N/beta| <= 0.05 * N/beta  <=>  20 * |a*beta - N| <= N
        worst = int(np.max(np.abs(h.sizes[:-1] * beta - n)))
        ok &= 20 * worst <= n
        details.append(f"beta={beta}: {worst / beta:.2f} <= {0.05 * n / beta:.2f}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 30
    acceptance("C4 40*beta <= T gives 5% error", ok, "; ".join(details) + f"; {elapsed:.1f} s")
    assert ok


def test_c5_oracle_equivalence(acceptance, tmp_path):
    rng = np.random.default_rng(5)
    ok = True
    for trial in range(20):
        t = int(rng.integers(1, 300))
        values = rng.integers(-(10**9), 10**9, int(rng.integers(t, 5 * t + 1)))
        summary = PartitionSummary.from_histogram(build_exact(values, t), f"d{trial:02d}", "p")
        src = write_summary(summary, tmp_path / "src")
        merged, _ = merge_summaries([read_summary(src)], t)
        again = PartitionSummary.from_histogram(merged, summary.label, summary.partition_id)
        out = write_summary(again, tmp_path / "out")
        ok &= out.read_bytes() == src.read_bytes()

        beta = int(rng.integers(1, t + 1))
        sample = sample_partition(values, SampleSpec(values.size, trial))
        ok &= build_sampled_histogram([sample], beta, values.size) == build_exact(values, beta)
    acceptance("C5 oracle equivalence", ok, "k=1 merge byte-identical; full sample == exact")
    assert ok


@pytest.mark.slow
def test_c6_desk_scale_comparison(acceptance):
    start = time.perf_counter()
    days = [generate_gumbel(GumbelSpec(count=10**5, seed=day_seed(2015, d))) for d in range(31)]
    n = sum(d.size for d in days)
    beta = 254
    exact = exact_union_histogram(days, beta)
    ok_a = ok_b = True
    lines, merge_errors = [], []
    for exp in range(1, 7):
        t = beta * 2**exp
        merged, bound = merge_summaries([build_exact(d, t) for d in days], beta)
        mu_b_merge = boundary_error(merged, exact)
        rms_dev = size_error(merged, n) * n / beta
        ok_a &= rms_dev <= float(bound.epsilon_max)

        mu_b_tuple = float(np.mean([
            boundary_error(
                build_sampled_histogram(sample_partitions(days, SampleSpec(t, seed)), beta, n), exact
            )
            for seed in range(5)
        ]))
        ok_b &= mu_b_merge <= mu_b_tuple
        merge_errors.append(mu_b_merge)
        lines.append(f"T={t}: mu_b {mu_b_merge:.2e} vs {mu_b_tuple:.2e}")
    # trend: the merged boundary error shrinks as T grows
    ok_trend = merge_errors[-1] < merge_errors[0]
    elapsed = time.perf_counter() - start
    ok = ok_a and ok_b and ok_trend and elapsed < 600
    acceptance(
        "C6 desk-scale merge vs tuple", ok,
        f"(a)={ok_a} (b)={ok_b} trend={ok_trend}; " + ", ".join(lines) + f"; {elapsed:.1f} s",
    )
    assert ok


def test_c7_metric_correctness(acceptance):
    h_star = Histogram([2, 7, 18, 30], [9, 9, 9, 0])
    h_exact = exact_union_histogram([P1, P2], 3)
    mu_b = boundary_error(h_star, h_exact)
    expected = (3 / 28) * math.sqrt(34 / 4)
    mu_s = size_error(h_star, 27)
    ok = abs(mu_b - expected) <= 1e-12 and mu_s == 0
    acceptance("C7 metric correctness", ok, f"mu_b={mu_b!r} (expected {expected!r}), mu_s={mu_s}")
    assert ok


_round_trips = []


@st.composite
def _summaries(draw):
    values = draw(st.lists(st.integers(-(2**63), 2**63 - 1), min_size=1, max_size=80))
    t = draw(st.integers(1, len(values)))
    label = draw(st.from_regex(r"[0-9]{4}-[0-9]{2}-[0-9]{2}", fullmatch=True))
    pid = draw(st.from_regex(r"[a-z][a-z0-9_-]{0,11}", fullmatch=True))
    return PartitionSummary.from_histogram(build_exact(values, t), label, pid)


@settings(max_examples=1000, deadline=None, database=None,
          suppress_health_check=[HealthCheck.function_scoped_fixture, HealthCheck.too_slow])
@given(_summaries())
def _round_trip_property(tmp_dir, s):
    path = write_summary(s, tmp_dir, overwrite=True)
    back = read_summary(path)
    _round_trips.append(back == s and back.to_json().encode() == path.read_bytes())


def test_c8_round_trip_and_determinism(acceptance, tmp_path):
    _round_trips.clear()
    _round_trip_property(tmp_path / "rt")
    rt_ok = len(_round_trips) >= 1000 and all(_round_trips)

    raw = tmp_path / "raw"
    raw.mkdir()
    for d in range(12):
        write_tsv(raw / f"2015-01-{d + 1:02d}.tsv",
                  generate_gumbel(GumbelSpec(count=20000, seed=day_seed(8, d))))
    for workers in (1, 8):
        code = main(["summarize", str(raw), "--t", "1016", "--workers", str(workers),
                     "--out", str(tmp_path / f"w{workers}")])
        assert code == 0
    one = sorted((tmp_path / "w1").iterdir())
    eight = sorted((tmp_path / "w8").iterdir())
    det_ok = [p.name for p in one] == [p.name for p in eight] and all(
        a.read_bytes() == b.read_bytes() for a, b in zip(one, eight)
    ) and len(one) == 12

    ok = rt_ok and det_ok
    acceptance(
        "C8 round trip and determinism", ok,
        f"{len(_round_trips)} round trips ok={rt_ok}; workers 1 vs 8 identical={det_ok}",
    )
    assert ok
