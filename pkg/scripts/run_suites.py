"""Run every verification suite and print a per-suite summary table.

    python3 scripts/run_suites.py --seed 7 --trials 200 --out-dir reports
"""

import argparse
import time
from dataclasses import replace
from pathlib import Path

from padic_hausdorff.verify import SuiteConfig, all_passed, run_suites, write_reports


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--strong-trials", type=int, default=100)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out-dir", default=None, help="write JSON and CSV reports here")
    args = ap.parse_args()

    cfg = SuiteConfig(trials=args.trials, strong_trials=args.strong_trials, seed=args.seed)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        cfg = replace(cfg, json_path=str(out / "verify_report.json"),
                      csv_path=str(out / "verify_report.csv"))
    t0 = time.perf_counter()
    results = run_suites(cfg, jobs=args.jobs)
    elapsed = time.perf_counter() - t0

    print(f"{'suite':<12} {'trials':>6} {'failed':>6} {'degen':>5} {'skip':>4}  max ratio")
    for name, res in sorted(results.items()):
        s = res.summary
        if "max_ratio" in s:
            stat = f"{s['max_ratio']:.6f}"
        else:
            stat = "  ".join(f"s={k}: {v['max_ratio']:.4g} ({v['relative_change']:+.1%})"
                             for k, v in s["per_s"].items())
        print(f"{name:<12} {s['trials']:>6} {s['failed']:>6} {s['degenerate']:>5} "
              f"{s['skipped']:>4}  {stat}")
    print(f"all passed: {all_passed(results)}   ({elapsed:.1f}s)")
    if args.out_dir:
        write_reports(cfg, results)
        print(f"reports in {args.out_dir}")
    return 0 if all_passed(results) else 1


if __name__ == "__main__":
    raise SystemExit(main())
