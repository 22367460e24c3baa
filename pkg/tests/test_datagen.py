import math

import numpy as np
import pytest

from histomerge import DomainError, GumbelSpec, generate_gumbel, ingest_tsv
from histomerge.datagen import day_seed, gumbel_draws, gumbel_inverse_cdf, write_tsv

EULER_GAMMA = 0.5772156649015329


def test_inverse_cdf_fixed_point():
    assert gumbel_inverse_cdf(1 / math.e, loc=3.5, scale=2.0) == pytest.approx(3.5)
    assert gumbel_inverse_cdf(1 / math.e) == pytest.approx(0.0, abs=1e-15)


def test_inverse_cdf_matches_cdf():
    x = gumbel_inverse_cdf(np.array([0.1, 0.5, 0.9]), loc=1.0, scale=3.0)
    cdf = np.exp(-np.exp(-(x - 1.0) / 3.0))
    assert cdf == pytest.approx([0.1, 0.5, 0.9])


def test_inverse_cdf_domain():
    with pytest.raises(DomainError):
        gumbel_inverse_cdf([0.0, 0.5])


def test_gumbel_mean():
    x = gumbel_draws(GumbelSpec(count=10**6, seed=11))
    assert abs(x.mean() - EULER_GAMMA) < 0.01
    q = generate_gumbel(GumbelSpec(count=10**6, seed=11))
    assert abs(q.mean() / 1000 - EULER_GAMMA) < 0.01


def test_gumbel_deterministic():
    spec = GumbelSpec(count=1000, loc=2.0, scale=0.5, seed=3)
    a, b = generate_gumbel(spec), generate_gumbel(spec)
    assert a.dtype == np.int64 and a.size == 1000
    assert np.array_equal(a, b)
    assert not np.array_equal(a, generate_gumbel(GumbelSpec(count=1000, seed=4)))


@pytest.mark.parametrize(
    "kwargs", [dict(count=0), dict(count=5, scale=0.0), dict(count=5, scale=-1), dict(count=5, quantize=0)]
)
def test_gumbel_spec_validation(kwargs):
    with pytest.raises(DomainError):
        GumbelSpec(**kwargs)


def test_day_seeds_differ():
    seeds = {day_seed(7, d) for d in range(100)}
    assert len(seeds) == 100
    assert day_seed(7, 3) == day_seed(7, 3)


def test_ingest_pageview_line(tmp_path):
    f = tmp_path / "p.tsv"
    f.write_text("en Main_Page 42 1234\nde Haupt\t7\t99\n")
    values, skipped = ingest_tsv(f, 4)
    assert values.tolist() == [1234, 99]
    assert skipped == 0
    assert ingest_tsv(f, 3).values.tolist() == [42, 7]


def test_ingest_empty_file(tmp_path):
    f = tmp_path / "empty.tsv"
    f.write_text("")
    with pytest.raises(DomainError):
        ingest_tsv(f)


def test_ingest_skips_malformed(tmp_path):
    lines = [f"en page{i} 1 {i}" for i in range(99)]
    lines.insert(50, "garbage line")
    f = tmp_path / "x.tsv"
    f.write_text("\n".join(lines) + "\n")
    values, skipped = ingest_tsv(f, 4)
    assert values.size == 99
    assert skipped == 1


def test_ingest_missing_file(tmp_path):
    with pytest.raises(OSError):
        ingest_tsv(tmp_path / "nope.tsv")


def test_ingest_skips_out_of_range(tmp_path):
    f = tmp_path / "big.tsv"
    f.write_text(f"a b 1 {2**64}\na b 1 -5\n")
    values, skipped = ingest_tsv(f)
    assert values.tolist() == [-5] and skipped == 1


def test_tsv_round_trip(tmp_path):
    values = generate_gumbel(GumbelSpec(count=5000, seed=1))
    path = write_tsv(tmp_path / "d.tsv", values)
    back, skipped = ingest_tsv(path, 4)
    assert skipped == 0
    assert np.array_equal(back, values)
