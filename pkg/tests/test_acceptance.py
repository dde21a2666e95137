"""The nine acceptance criteria at their stated tolerances.

Runs under pytest (a PASS/FAIL line per criterion is printed in the
terminal summary) or directly: ``python3 tests/test_acceptance.py``.
"""

import sys
import tempfile
import time
from pathlib import Path

if __package__ in (None, ""):
    sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
    from tests.acceptance_log import report
else:
    from .acceptance_log import report

from oscillint import acceptance
from oscillint.cli import compare_runs, main
from oscillint.config import load_config

CFG = load_config()
_BESOV = {}


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def _besov_report():
    if "rep" not in _BESOV:
        _BESOV["rep"] = acceptance.besov(CFG)
    return _BESOV["rep"]


def test_criterion_1_asymptotic_formula_discrepancy():
    c = CFG["lemma1"]
    assert c["ladder"] == [16, 32, 64, 128] and (c["n_r"], c["n_theta"]) == (64, 64)
    (ok, d, _), secs = _timed(acceptance.lemma1, CFG)
    ok = ok and secs < 300
    sups = ", ".join(f"{k}: {v:.4g}" for k, v in d["sups"].items())
    report(1, "asymptotic formula", ok, f"sups {sups}; decreasing={d['strictly_decreasing']}; {secs:.1f}s")
    assert d["strictly_decreasing"]
    assert d["sups"]["128"] < 0.1
    assert secs < 300


def test_criterion_2_kernel_cross_oracle():
    c = CFG["kernel"]
    assert c["ladder"] == [16, 32, 64] and c["n_points"] == 100 and c["tolerance"] == 1e-3
    (ok, d, _), secs = _timed(acceptance.kernel, CFG)
    ok = ok and secs < 600
    errs = ", ".join(f"{k}: {d[k]['max_error']:.2e}" for k in ("16", "32", "64"))
    report(2, "kernel cross-oracle", ok, f"max errors {errs}; {secs:.1f}s")
    assert all(d[k]["max_error"] <= 1e-3 for k in ("16", "32", "64"))
    assert secs < 600


def test_criterion_3_lp_exponent():
    c = CFG["opnorm"]
    assert c["slope_tolerance"] == 0.15 and c["min_r_squared"] == 0.98
    ok, d, _ = acceptance.opnorm(CFG)
    summary = "; ".join(f"p={p}: slope {v['slope']:.3f} R2 {v['r_squared']:.4f}" for p, v in d.items())
    report(3, "L_p exponent", ok, summary)
    assert abs(d["1"]["slope"] - 1.0) <= 0.15 and d["1"]["r_squared"] >= 0.98
    assert abs(d["1.33333"]["slope"] - 0.5) <= 0.15 and d["1.33333"]["r_squared"] >= 0.98


def test_criterion_4_stationary_phase():
    c = CFG["statphase"]
    assert c["ladder"] == [8, 16] and c["ratio_window"] == [0.3, 0.8] and c["slope_tolerance"] == 0.1
    (ok, d, _), secs = _timed(acceptance.statphase, CFG)
    ok = ok and secs < 900
    summary = "; ".join(f"dir {k}: ratio {v['error_ratios'][0]:.3f} slope {v['leading_slope']:.3f}"
                        for k, v in d.items())
    report(4, "stationary phase", ok, f"{summary}; {secs:.1f}s")
    for v in d.values():
        assert all(0.3 <= r <= 0.8 for r in v["error_ratios"])
        assert abs(v["leading_slope"] + 0.5) <= 0.1
    assert secs < 900


def test_criterion_5_parallelepiped_magnitude():
    assert CFG["parallelepiped"]["ladder"] == [8, 16] and CFG["parallelepiped"]["max_factor"] == 2.0
    ok, d, _ = acceptance.parallelepiped(CFG)
    mins = ", ".join(f"{k}: {v:.3f}" for k, v in d["min_scaled_magnitude"].items())
    lips = ", ".join(f"{k}: {v:.3f}" for k, v in d["phase_lipschitz"].items())
    report(5, "parallelepiped", ok, f"min |K| lam^1.5 {mins} (factor {d['factor']:.3f}); phase gradient {lips}")
    assert d["factor"] <= 2.0
    assert max(d["phase_lipschitz"].values()) <= acceptance.LIPSCHITZ_CAP


def test_criterion_6_besov_scaling():
    assert CFG["besov"]["ladder"] == [16, 32, 64, 128]
    ok, d, _ = _besov_report()
    report(6, "Besov scaling", ok, f"slope {d['slope']:.4f}, prefactor spread {d['prefactor_spread']:.4f}")
    assert abs(d["slope"] - 1.0) <= 0.15
    assert d["prefactor_spread"] <= 2.0


def test_criterion_7_interpolation_inequality():
    assert CFG["besov"]["random_spectra"] == 1000
    ok, d, _ = acceptance.interpolation(CFG, _besov_report()[2])
    report(7, "interpolation", ok,
           f"C = {d['constant']:.4f}, random max {d['random_max_ratio']:.4f}, "
           f"ladder max {max(d['ladder_ratios'].values()):.4f}, equality deviation {d['max_equality_deviation']:.1e}")
    assert d["random_max_ratio"] <= d["constant"]
    assert all(v <= d["constant"] for v in d["ladder_ratios"].values())
    assert d["max_equality_deviation"] <= 1e-12


def test_criterion_8_sequence_inequality():
    c = CFG["seq_ineq"]
    assert c["trials"] == 100_000 and len(c["A"]) == 4
    (ok, d, _), secs = _timed(acceptance.sequence, CFG)
    ok = ok and secs < 60
    summary = "; ".join(f"A={k}: max {v['max_ratio']:.4f} <= C {v['constant']:.4f}"
                        for k, v in d.items() if isinstance(v, dict))
    report(8, "sequence inequality", ok, f"{summary}; spikes exact={d['single_spike_exact']}; {secs:.1f}s")
    assert all(v["holds"] for v in d.values() if isinstance(v, dict))
    assert d["single_spike_exact"]
    assert secs < 60


def test_criterion_9_determinism():
    with tempfile.TemporaryDirectory() as tmp:
        a, b = Path(tmp) / "a", Path(tmp) / "b"
        codes = [main(["all", "--out", str(a)]), main(["all", "--out", str(b)])]
        diffs = compare_runs(a, b)
        n = sum(1 for p in a.iterdir() if p.suffix in (".json", ".csv"))
    ok = codes == [0, 0] and not diffs
    report(9, "determinism", ok, f"exit codes {codes}; {n} JSON/CSV files compared; differing: {diffs or 'none'}")
    assert codes == [0, 0]
    assert diffs == []


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((k, v) for k, v in dict(globals()).items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
