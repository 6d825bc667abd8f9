"""Full Sanov scan over the odd primes up to P_MAX, with a summary table.

Usage: python scripts/sanov_scan.py [P_MAX] [OUT_STEM]
"""

import sys
import time
from pathlib import Path

from taulab.cli import emit_report
from taulab.config import default_config
from taulab.matgroup import sanov
from taulab.verify import run_girth_experiment, run_mu_growth_check


def main(p_max: int = 113, out: str = "results/sanov") -> int:
    cfg = default_config()
    cfg.p_max = p_max
    gs = sanov()
    t0 = time.perf_counter()
    rep = run_girth_experiment(gs, gs.field, 3, p_max, sampler_trials=cfg.sampler.trials, seed=cfg.sampler.seed)
    mu = run_mu_growth_check(gs, cfg.mu_r_max, cfg.mu_trials, cfg.sampler.seed)
    rep.mu_growth_pass = mu.passed
    print(f"{'p':>5} {'|V|':>9} {'girth':>5} {'bound':>6} {'lambda2':>9} {'gap':>7} {'c_samp':>7}")
    for r in rep.rows:
        print(f"{r.p:>5} {r.vertex_count:>9} {r.girth:>5} {r.bound:>6.2f} {r.lambda2:>9.5f} {r.gap:>7.4f} {r.c_sampled:>7.4f}")
    print(f"M={rep.M} C={rep.C:.10f} min gap={rep.min_gap:.6f} mu: {mu.summary()}")
    for path in emit_report(rep, "both", Path(out), cfg):
        print(f"wrote {path}")
    print(f"{'PASS' if rep.passed else 'FAIL'} in {time.perf_counter() - t0:.1f}s")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    args = sys.argv[1:]
    sys.exit(main(int(args[0]) if args else 113, args[1] if len(args) > 1 else "results/sanov"))
