"""Run a seeded fuzz campaign: classify random semiloops and cross-check every
verdict against the independent oracle.

Run: python demos/05_fuzz_campaign.py [count]
"""
import sys

from semiloop.harness import GenConfig, run_campaign

count = int(sys.argv[1]) if len(sys.argv) > 1 else 500
for cfg in (GenConfig(seed=1), GenConfig(seed=1, max_depth=2, fixed_term_depth=2, max_var_index=3)):
    print(f"config {cfg}")
    report = run_campaign(cfg, count)
    print(report.to_text(timings=True))
