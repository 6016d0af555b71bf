"""One test per acceptance criterion; each prints a PASS/FAIL line.

Tolerances and runtime budgets are pinned below.
"""

import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from padic_hausdorff.norms import (distribution, haar_integral, lebesgue_norm, lorentz_norm,
                                   rearrangement, weak_norm)
from padic_hausdorff.operators import hausdorff_apply
from padic_hausdorff.oracle import (SampleConfig, check_shift_invariance, mc_hausdorff_point,
                                    mc_integral, radial_integrand, random_point,
                                    sample_lipschitz_ratios)
from padic_hausdorff.padic import PVector, ball_measure, sphere_measure
from padic_hausdorff.params import SpaceParams
from padic_hausdorff.radial import (PowerCutoff, RadialFunction, RadialSymbol, Tabulated,
                                    TwoSidedPower, indicator_ball, indicator_sphere,
                                    lipschitz_seminorm)
from padic_hausdorff.verify import SuiteConfig, Trial, evaluate_weak, run_suites

from conftest import random_functions, record_criterion

REL_EXACT = 1e-12
RATIO_TOL = 1e-9
STABILITY_TOL = 0.05
COINCIDENCE_TOL = 1e-12
SEED = 7
BUDGET = {1: 1.0, 2: 1.0, 3: 30.0, 4: 30.0, 5: 60.0, 6: 60.0, 8: 120.0}


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_criterion_01_measures():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100):
        p, n, g = int(rng.choice([2, 3, 5, 7])), int(rng.integers(1, 4)), int(rng.integers(-40, 41))
        worst = max(worst, rel(ball_measure(g, n, p), float(p) ** (n * g)),
                    rel(sphere_measure(g, n, p), float(p) ** (n * g) * (1 - p ** -n)))
        alpha = float(rng.uniform(-0.9, 2.0)) * n
        T = int(rng.integers(0, 30))
        parts = [sphere_measure(k, n, p, alpha) for k in range(g - T, g + 1)]
        parts.append(ball_measure(g - T - 1, n, p, alpha))
        worst = max(worst, rel(math.fsum(parts), ball_measure(g, n, p, alpha)))
    dt = time.perf_counter() - t0
    ok = worst <= REL_EXACT and dt < BUDGET[1]
    record_criterion(1, ok, f"max rel err {worst:.2e} (tol {REL_EXACT:g}), {dt:.3f}s")
    assert ok


def test_criterion_02_worked_instance():
    t0 = time.perf_counter()
    f = indicator_sphere(0, 2, 1)
    out = hausdorff_apply(PowerCutoff(0.0), 0.0, f, (-6, 3))
    exact = all(out.eval_shell(l) == (0.5 if l <= 0 else 0.0) for l in range(-30, 10))
    exact = exact and out.tail_value == 0.5
    t = Trial("thm4", 0, SpaceParams(2, 1, q=2.0, r=2.0), PowerCutoff(0.0), f, f, "manual")
    rec = evaluate_weak(t, SuiteConfig())
    dt = time.perf_counter() - t0
    ok = (exact and rel(rec.lhs, 0.5) <= REL_EXACT and rel(rec.rhs, 0.5 ** 0.5) <= REL_EXACT
          and rec.passed and dt < BUDGET[2])
    record_criterion(2, ok, f"Hf = 0.5 chi_B0 exact={exact}, lhs={rec.lhs:.6f}, "
                            f"rhs={rec.rhs:.6f}, {dt:.3f}s")
    assert ok


def _weak_suite(number, suite, extra_check):
    t0 = time.perf_counter()
    res = run_suites(SuiteConfig(suites=(suite,), trials=200, seed=SEED))[suite]
    dt = time.perf_counter() - t0
    s = res.summary
    live = [r for r in res.records if not r.skipped]
    worst = max(r.ratio for r in live if not r.degenerate)
    extra_ok, extra_msg = extra_check(res.records)
    ok = (s["trials"] == 200 and s["failed"] == 0 and worst <= 1 + RATIO_TOL
          and s["majorant_failures"] == 0 and s["skip_fraction"] < 0.1 and extra_ok
          and dt < BUDGET[number])
    record_criterion(number, ok, f"{suite}: 200 trials, max ratio {worst:.6f} "
                                 f"(<= 1+{RATIO_TOL:g}), skipped {s['skipped']}, "
                                 f"{extra_msg}, {dt:.2f}s")
    return ok


def test_criterion_03_thm3_suite():
    def edge(records):
        e = [r for r in records if "edge_weak_norm" in r.extra]
        good = all(rel(r.lhs, r.extra["edge_weak_norm"]) <= REL_EXACT and r.passed for r in e)
        return bool(e) and good, f"{len(e)} edge trials"
    assert _weak_suite(3, "thm3", edge)


def test_criterion_04_thm4_suite():
    def beta(records):
        k = sum(r.params["beta"] > 0 for r in records)
        return k > 0, f"{k} with beta > 0"
    assert _weak_suite(4, "thm4", beta)


def test_criterion_05_thm5_suite():
    def symbols(records):
        kinds = {r.symbol_kind for r in records}
        const = [r for r in records if r.symbol_kind == "constant"]
        ok = {"power", "tabulated", "constant"} <= kinds and all(
            r.degenerate and r.passed for r in const)
        return ok, f"{len(const)} constant-b degenerate passes"
    assert _weak_suite(5, "thm5", symbols)


def test_criterion_06_strong_suites():
    t0 = time.perf_counter()
    results = run_suites(SuiteConfig(suites=("thm4_strong", "thm5_strong"), strong_trials=100,
                                     seed=SEED))
    dt = time.perf_counter() - t0
    ok = dt < BUDGET[6]
    parts = []
    for name, res in sorted(results.items()):
        s = res.summary
        finite = all(math.isfinite(r.ratio) and math.isfinite(r.extra["ratio_enlarged"])
                     for r in res.records if not r.skipped)
        worst_change = max(v["relative_change"] for v in s["per_s"].values())
        ok = (ok and finite and s["failed"] == 0 and s["trials"] == 100
              and worst_change <= STABILITY_TOL
              and s["max_weak_coincidence_gap"] <= COINCIDENCE_TOL
              and set(s["per_s"]) == {"1.0", "2.0", "q", "7.0", "inf"})
        parts.append(f"{name}: finite={finite} max change {worst_change:.2%} "
                     f"s=inf gap {s['max_weak_coincidence_gap']:.1e}")
    record_criterion(6, ok, "; ".join(parts) + f", {dt:.2f}s")
    assert ok


def test_criterion_07_norm_identities():
    worst, equi = 0.0, True
    for i, f in enumerate(random_functions(100, seed=SEED, signed=True, tail_prob=0.3)):
        q = 1.0 + (i % 9) * 0.5
        alpha = (i % 5 - 1) * 0.3 * f.n
        worst = max(worst, rel(lorentz_norm(f, q, q, alpha), lebesgue_norm(f, q, alpha)),
                    rel(lorentz_norm(f, q, math.inf, alpha), weak_norm(f, q, alpha)))
        fs = rearrangement(f, alpha)
        for lam in (0.0, *fs.values):
            equi = equi and fs.measure_above(lam) == distribution(f, lam, alpha)
    ok = worst <= REL_EXACT and equi
    record_criterion(7, ok, f"max rel gap {worst:.2e} (tol {REL_EXACT:g}), "
                            f"equimeasurable at all levels={equi}")
    assert ok


def test_criterion_08_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    N = 100_000
    agree = shift_ok = 0
    for i in range(50):
        p, n = int(rng.choice([2, 3, 5])), int(rng.integers(1, 3))
        depth = 16 if p < 5 else 12
        alpha = float(rng.uniform(-0.5, 1.0)) * n
        f = RadialFunction(p, n, int(rng.integers(-4, 0)),
                           tuple(rng.uniform(0.1, 3.0, int(rng.integers(1, 5)))))
        cfg = SampleConfig(0, depth, N, seed=1000 + i)
        est, se = mc_integral(radial_integrand(f), cfg, p, n, alpha)
        agree += abs(est - haar_integral(f.restricted_to_ball(0), alpha)) <= 3 * se
        k = int(rng.integers(-3, 1))
        a = PVector.from_rationals([Fraction(p) ** -k * int(rng.integers(1, p))] +
                                   [Fraction(0)] * (n - 1), p, depth)
        rep = check_shift_invariance(radial_integrand(f), a, SampleConfig(0, depth, N // 10, i))
        shift_ok += abs(rep.z) <= 3 or rep.z == 0
    radial_ok = True
    for psi in (PowerCutoff(0.5), TwoSidedPower(0.3, 1.5), Tabulated({0: 1.0, 1: 0.5})):
        f = RadialFunction(3, 1, -2, (1.0, 0.5, 2.0))
        cfg = SampleConfig(0, 16, N // 2, 5)
        for l in (-2, -1, 0):
            (e1, s1), (e2, s2) = (mc_hausdorff_point(psi, 0.2, f, random_point(3, 1, l, seed=s),
                                                     cfg) for s in (1, 2))
            radial_ok = radial_ok and abs(e1 - e2) <= 3 * math.hypot(s1, s2) + 1e-12
    dt = time.perf_counter() - t0
    ok = agree >= 47 and shift_ok >= 47 and radial_ok and dt < BUDGET[8]
    record_criterion(8, ok, f"integrals within 3se {agree}/50, shift |z|<=3 {shift_ok}/50, "
                            f"radiality={radial_ok}, {dt:.1f}s")
    assert ok


def test_criterion_09_lipschitz():
    worst, exceed = 0.0, 0
    for p, n, delta in ((2, 1, 0.5), (3, 2, 0.3), (5, 1, 0.9)):
        b = RadialSymbol.power(delta, p, n, (-5, 4))
        worst = max(worst, abs(lipschitz_seminorm(b, delta) - 1.0))
    symbols = [(RadialSymbol.power(0.5, 2, 1, (-4, 3)), 0.5),
               (RadialSymbol(3, 1, -1, (0.2, 1.0, -0.5), 0.4, 0.4, 0.0), 0.7),
               (RadialSymbol(2, 2, -2, (0.0, 0.5, 3.0, 1.0), 0.0, 0.0, 2.0), 0.4)]
    for b, delta in symbols:
        ratios = sample_lipschitz_ratios(b, delta, 10_000, seed=SEED)
        exceed += int((ratios > lipschitz_seminorm(b, delta) * (1 + 1e-12)).sum())
    ok = worst <= REL_EXACT and exceed == 0
    record_criterion(9, ok, f"|x|^delta seminorm error {worst:.1e}, sampled ratios above "
                            f"closed form: {exceed} of 30000")
    assert ok


def test_criterion_10_determinism(tmp_path):
    paths = []
    for jobs in (1, 8):
        out = tmp_path / f"jobs{jobs}.json"
        subprocess.run([sys.executable, "-m", "padic_hausdorff.cli", "verify", "--suite", "all",
                        "--seed", str(SEED), "--jobs", str(jobs), "--out-json", str(out),
                        "--out-csv", str(tmp_path / f"jobs{jobs}.csv")],
                       check=True, capture_output=True)
        paths.append(out)
    a, b = (p.read_bytes() for p in paths)
    ok = a == b and json.loads(a)["passed"] is True
    record_criterion(10, ok, f"--jobs 1 vs --jobs 8 reports byte-identical={a == b} "
                             f"({len(a)} bytes)")
    assert ok
