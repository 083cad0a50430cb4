"""End-to-end checks, one per shipped guarantee.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion.  Expected values come from closed forms frozen in the unit-test
modules; tolerances are stated inline.
"""

import itertools
from dataclasses import replace

import pytest

from ftmux.cli import main
from ftmux.config import REFERENCE_LOSS_PERCENT, Variant, preset
from ftmux.loss import loss_percent
from ftmux.montecarlo import McSettings, mc_estimate, mc_optimal_m
from ftmux.rates import (
    epsilon_m,
    improvement_ratio,
    lossless_rate,
    lossless_success,
    lossy_rate,
    lossy_success,
    optimal_m,
)
from ftmux.scheduling import brute_force_success

LOSSLESS_N4_M10_P01 = 0.17996241698398546
FIXED_OPT_RATE_LOSSLESS_N4_P01 = 0.007506273741128616  # at m=22, no loss


def _ok(number, name):
    print(f"ACCEPTANCE {number:02d} {name}: PASS")


def test_acceptance_01_loss_table_consistency():
    for label, db, expected_pct in REFERENCE_LOSS_PERCENT:
        derived = loss_percent(db)
        assert abs(derived - expected_pct) <= 0.05, (label, derived, expected_pct)
    _ok(1, "loss-table consistency (±0.05 points)")


def test_acceptance_02_single_bin_closed_form():
    for p in (0.01, 0.1, 0.5):
        for n in range(1, 11):
            rate = lossless_rate(p, 1, n).rate_per_bin
            assert rate == pytest.approx(p ** n / n, rel=1e-12)
    _ok(2, "m=1 rate equals p^n/n (rel 1e-12)")


def test_acceptance_03_epsilon_guarantee():
    for p, n, eps in itertools.product(
            (0.01, 0.05, 0.1, 0.3), (1, 4, 8, 16), (0.5, 0.1, 0.01)):
        m = epsilon_m(p, n, eps)
        assert lossless_success(p, m, n) >= 1 - eps, (p, n, eps, m)
    _ok(3, "guaranteed-success batch size delivers >= 1-eps")


def test_acceptance_04_headline_point():
    cfg = preset("one-loop-default", n=8)  # p=0.1, 10 ns bins
    m_star, best = optimal_m(cfg, 300, "lossy")
    assert 1 <= m_star <= 300
    assert 1000 / 2.5 <= best.rate_hz <= 1000 * 2.5
    ratio = best.rate_per_bin / cfg.p ** 8
    assert 2000 / 2.5 <= ratio <= 2000 * 2.5
    _ok(4, f"headline n=8 point ({best.rate_hz:.0f} Hz, {ratio:.0f}x) in band")


def test_acceptance_05_enumeration_oracle_equivalence():
    for p in (0.1, 0.5):
        for n, m in itertools.product((1, 2), (1, 2, 3)):
            cfg = replace(preset("one-loop-default", m=m, n=n), p=p)
            exact = brute_force_success(cfg)
            assert exact.p_lossless == pytest.approx(
                lossless_success(p, m, n), rel=1e-12, abs=1e-15)
            assert exact.p_lossy == pytest.approx(
                lossy_success(cfg), rel=1e-12, abs=1e-15)
    _ok(5, "enumeration matches closed forms (rel 1e-12)")


def test_acceptance_06_monte_carlo_consistency():
    cfg = preset("one-loop-default", m=10, n=4)
    est = mc_estimate(cfg, McSettings(samples=1_000_000, seed=0))
    assert abs(est.lossless.success_prob - LOSSLESS_N4_M10_P01) < 4 * est.lossless.stderr
    assert abs(est.lossy.success_prob - lossy_success(cfg)) < 4 * est.lossy.stderr
    _ok(6, "10^6-sample estimates within 4 stderr of closed forms")


def test_acceptance_07_partial_variant_improvement():
    cfg = preset("lossless", n=4, variant=Variant.PARTIAL)  # p=0.1, unlimited
    m_star, est = mc_optimal_m(cfg, McSettings(samples=200_000, seed=1), m_max=8)
    stderr = est.lossy.rate_stderr_per_bin(cfg.batches)
    assert est.lossy.rate_per_bin >= FIXED_OPT_RATE_LOSSLESS_N4_P01 - 3 * stderr
    _ok(7, f"partial variant (m*={m_star}) at least matches the fixed optimum")


def test_acceptance_08_small_p_advantage():
    cfg = preset("three-loop-default", n=4)
    low = improvement_ratio(replace(cfg, p=0.02), 300)
    high = improvement_ratio(replace(cfg, p=0.1), 300)
    assert low > high
    _ok(8, f"three-loop ratio grows as p shrinks ({low:.1f} > {high:.1f})")


def test_acceptance_09_unimodal_rate_curves():
    for n in (4, 6, 8):
        cfg = preset("one-loop-default", n=n)
        rates = [lossy_rate(replace(cfg, m=m)).rate_per_bin for m in range(1, 301)]
        peak = rates.index(max(rates))
        assert all(rates[i] < rates[i + 1] for i in range(peak))
        assert all(rates[i] > rates[i + 1] for i in range(peak, len(rates) - 1))
    _ok(9, "lossy rate over m in [1,300] is unimodal for n in {4,6,8}")


def test_acceptance_10_deterministic_csv(tmp_path):
    args = ["mc-partial", "--n", "4", "--m-max", "6",
            "--samples", "20000", "--seed", "5"]
    paths = [tmp_path / name for name in ("run1.csv", "run2.csv", "run3.csv")]
    assert main(args + ["--workers", "1", "--out", str(paths[0])]) == 0
    assert main(args + ["--workers", "1", "--out", str(paths[1])]) == 0
    assert main(args + ["--workers", "4", "--out", str(paths[2])]) == 0
    first = paths[0].read_bytes()
    assert paths[1].read_bytes() == first
    assert paths[2].read_bytes() == first
    _ok(10, "seeded sweep CSV is byte-identical across runs and workers")
