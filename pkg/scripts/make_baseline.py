"""Regenerate the stored direct-quadrature baseline used by ``ncqm run ... --fast``.

Runs the quadrature suites with the default configuration on the direct
(oracle) path and stores every physical quantity by record id.
"""
import argparse
import dataclasses
import json
from pathlib import Path

from ncqm.config import parse_config
from ncqm.suites import Context, Report, SUITE_FUNCS, baseline_key, baseline_values

OUT = Path(__file__).resolve().parents[1] / "src" / "ncqm" / "data" / "direct_baseline.json"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args()
    cfg = dataclasses.replace(parse_config(), fast=False)
    report = Report("baseline", cfg)
    ctx = Context(cfg, report)
    for name in ("resolution", "quantize", "pov"):
        SUITE_FUNCS[name](ctx)
        print(f"{name}: done")
    data = {"config": baseline_key(cfg), "values": baseline_values(report)}
    args.out.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
    for r in report.records:
        print(("PASS " if r.passed else "FAIL ") + r.id)
    print(json.dumps(report.elapsed, indent=1))


if __name__ == "__main__":
    main()
