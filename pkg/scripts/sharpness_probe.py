"""How close do the weak-type bounds come to equality?

For each weak suite, runs several seeds and reports the largest ratio
lhs / rhs together with the kernel family and input shape that produced it.
A ratio of 1 means the discrete constant is attained on that input.
"""

import argparse
from collections import defaultdict

from padic_hausdorff.verify import SuiteConfig, run_suites


def main() -> int:
    ap = argparse.ArgumentParser(description="largest observed weak-type ratios")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--trials", type=int, default=200)
    args = ap.parse_args()

    best = {}
    by_family = defaultdict(float)
    for seed in range(args.seeds):
        cfg = SuiteConfig(suites=("thm3", "thm4", "thm5"), trials=args.trials, seed=seed)
        for name, res in run_suites(cfg).items():
            for r in res.records:
                if r.skipped or r.degenerate:
                    continue
                key = (name, r.kernel["family"], r.input_shape)
                by_family[key] = max(by_family[key], r.ratio)
                if r.ratio > best.get(name, (0.0,))[0]:
                    best[name] = (r.ratio, seed, r.index, r.kernel["family"], r.input_shape)

    for name, (ratio, seed, idx, fam, shape) in sorted(best.items()):
        print(f"{name}: max ratio {ratio:.12f} at seed {seed} trial {idx} ({fam}, {shape} input)")
    print()
    print(f"{'suite':<6} {'kernel':<12} {'input':<8} max ratio")
    for (name, fam, shape), ratio in sorted(by_family.items()):
        print(f"{name:<6} {fam:<12} {shape:<8} {ratio:.6f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
