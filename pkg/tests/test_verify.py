import csv
import io
import json
import math
from dataclasses import replace

import pytest

from padic_hausdorff.errors import ParameterError
from padic_hausdorff.params import SpaceParams
from padic_hausdorff.radial import (PowerCutoff, RadialFunction, RadialSymbol, Tabulated,
                                    indicator_sphere)
from padic_hausdorff.verify import (CSV_COLUMNS, SuiteConfig, Trial, all_passed, draw_trial,
                                    evaluate_strong, evaluate_weak, kernel_of, report_csv,
                                    report_json, run_suites, verify_thm3, verify_thm4_weak)

SMALL = SuiteConfig(trials=30, strong_trials=12, seed=3)


def trial(suite, params, psi, f, b=None, kind=None):
    big = f.with_window(f.k_min - 4, f.k_max + 4)
    return Trial(suite, 0, params, psi, f, big, "manual", b, kind, 0.1)


class TestWorkedInstances:
    def test_thm4_closed_form(self):
        t = trial("thm4", SpaceParams(2, 1, q=2.0, r=2.0), PowerCutoff(0.0),
                  indicator_sphere(0, 2, 1))
        rec = evaluate_weak(t, SuiteConfig())
        assert rec.lhs == pytest.approx(0.5, rel=1e-12)
        assert rec.rhs == pytest.approx(0.5 ** 0.5, rel=1e-12)
        assert rec.passed and rec.majorant_ok

    def test_thm3_unit_shell(self):
        p, n, q, lam = 3, 1, 2.0, -0.25
        t = trial("thm3", SpaceParams(p, n, q=q, lam=lam), Tabulated({0: 1.0}),
                  indicator_sphere(0, p, n))
        rec = evaluate_weak(t, SuiteConfig())
        c = 1 - p ** -n
        # H f = c χ_S0; the weak Morrey sup sits at the unit ball
        assert rec.lhs == pytest.approx(c * c ** (1 / q), rel=1e-12)
        assert rec.rhs == pytest.approx(c ** 0.5 * c ** (1 / q), rel=1e-12)
        assert rec.ratio <= 1 and rec.passed

    def test_lambda_edge(self):
        q = 2.0
        f = RadialFunction(2, 1, -1, (1.0, 3.0, 0.5))
        t = trial("thm3", SpaceParams(2, 1, q=q, lam=-1 / q), PowerCutoff(0.6), f)
        rec = evaluate_weak(t, SuiteConfig())
        assert rec.lhs == pytest.approx(rec.extra["edge_weak_norm"], rel=1e-12)
        assert rec.input_norm == pytest.approx(rec.extra["edge_lebesgue_norm"], rel=1e-12)
        assert rec.passed

    def test_thm5_two_shell(self):
        delta, q, r = 0.25, 2.0, 4.0
        params = SpaceParams(2, 1, q=q, r=r, delta=delta, gamma=0.0)
        assert params.thm5_balance_gap() == pytest.approx(0.0)
        b = RadialSymbol.power(delta, 2, 1, (-30, 30))
        t = trial("thm5", params, Tabulated({0: 1.0, 1: 1.0}), RadialFunction(2, 1, 0, (1.0, 2.0)),
                  b, "power")
        rec = evaluate_weak(t, SuiteConfig())
        assert rec.passed and not rec.degenerate and rec.majorant_ok

    def test_constant_symbol_degenerate(self):
        params = SpaceParams(3, 1, q=2.0, r=4.0, delta=0.25, gamma=0.0)
        t = trial("thm5", params, PowerCutoff(0.5), RadialFunction(3, 1, 0, (1.0,)),
                  RadialSymbol.constant(2.0, 3, 1), "constant")
        rec = evaluate_weak(t, SuiteConfig())
        assert rec.degenerate and rec.passed
        assert rec.lhs == 0 and rec.rhs == 0

    def test_strong_rows(self):
        t = trial("thm4_strong", SpaceParams(2, 1, q=2.0, r=2.0), PowerCutoff(0.5),
                  RadialFunction(2, 1, -1, (1.0, 2.0)))
        rows = evaluate_strong(t, SuiteConfig())
        assert [r.s for r in rows] == [1.0, 2.0, 2.0, 7.0, math.inf]
        for r in rows:
            assert r.passed and math.isfinite(r.ratio)
            assert r.extra["class_sup"] >= r.ratio * (1 - 1e-12)
            assert r.extra["class_sup_enlarged"] >= r.extra["class_sup"] * (1 - 1e-12)
        assert rows[-1].lhs == pytest.approx(rows[-1].extra["weak_lhs"], rel=1e-12)


@pytest.fixture(scope="module")
def results():
    return run_suites(SMALL)


class TestSuites:
    def test_all_pass(self, results):
        assert all_passed(results)
        for name, res in results.items():
            assert res.summary["failed"] == 0, name
            assert res.summary["majorant_failures"] == 0, name
            assert res.summary["skip_fraction"] < 0.1, name

    def test_counts(self, results):
        assert {r.index for r in results["thm3"].records} == set(range(30))
        assert len(results["thm5_strong"].records) == 12 * 5

    def test_parallel_matches_serial(self, results):
        assert report_json(SMALL, run_suites(SMALL, jobs=2)) == report_json(SMALL, results)

    def test_reports(self, results):
        doc = json.loads(report_json(SMALL, results))
        assert doc["passed"] is True
        assert SuiteConfig.from_dict(doc["config"]) == SMALL
        rows = list(csv.reader(io.StringIO(report_csv(results))))
        assert tuple(rows[0]) == CSV_COLUMNS
        assert len(rows) - 1 == sum(len(r.records) for r in results.values())
        rec = doc["suites"]["thm4"]["records"][0]
        assert kernel_of(rec).to_dict() == rec["kernel"]
        assert "timing" not in rec

    def test_draws_are_admissible(self):
        for i in range(40):
            t, _ = draw_trial(SMALL, "thm4", i)
            t.params.thm4_admissible()
            t, _ = draw_trial(SMALL, "thm5_strong", i)
            t.params.thm5_admissible()
            assert t.params.q < t.params.n / t.params.delta
            t, _ = draw_trial(SMALL, "thm3", i)
            t.params.thm3_admissible()

    def test_edge_and_positive_beta_drawn(self, results):
        thm3 = [r for r in results["thm3"].records if "edge_weak_norm" in r.extra]
        assert thm3
        assert any(r.params["beta"] > 0 for r in results["thm4"].records)
        kinds = {r.symbol_kind for r in results["thm5"].records}
        assert {"power", "tabulated", "constant"} <= kinds


def test_single_suite_runners():
    cfg = replace(SMALL, trials=5)
    assert len(verify_thm3(cfg)) == 5
    assert all(r.suite == "thm4" for r in verify_thm4_weak(cfg))


def test_config_validation():
    with pytest.raises(ParameterError):
        SuiteConfig(suites=("thm9",))
    with pytest.raises(ParameterError):
        SuiteConfig.from_dict({"trials": 3, "bogus": 1})
    with pytest.raises(ParameterError):
        SuiteConfig(enlarge=3)
