#!/usr/bin/env python3
"""Time the full analysis pipeline at municipal scale (defaults mirror the
1000-facility / 2596-hydrant / 265-shelter / 15-neighborhood corpus)."""

from __future__ import annotations

import argparse
import time

from cityscan.compliance import RegulationRule, detect_violations
from cityscan.fixture import FixtureConfig, generate_city
from cityscan.ingest import assemble_dataset
from cityscan.reports import bars_table_csv, build_heatmap_document


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--facilities", type=int, default=1000)
    parser.add_argument("--hydrants", type=int, default=2596)
    parser.add_argument("--shelters", type=int, default=265)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    hydrant_city = generate_city(FixtureConfig(seed=101, facilities=args.facilities, objects=args.hydrants))
    shelter_city = generate_city(
        FixtureConfig(seed=202, facilities=0, objects=args.shelters, object_kind="shelter")
    )

    timings = []
    for _ in range(args.repeats):
        started = time.perf_counter()
        dataset = assemble_dataset(
            hydrant_city.facilities,
            hydrant_city.objects + shelter_city.objects,
            hydrant_city.regions,
            source="benchmark",
        )
        for kind, threshold in (("hydrant", 30.0), ("shelter", 50.0)):
            report = detect_violations(dataset, RegulationRule(kind, threshold))
            build_heatmap_document(dataset, report)
            bars_table_csv(report)
        timings.append(time.perf_counter() - started)

    print(f"facilities={args.facilities} hydrants={args.hydrants} shelters={args.shelters}")
    print(f"runs: {['%.3fs' % t for t in timings]}")
    print(f"best: {min(timings):.3f}s  mean: {sum(timings) / len(timings):.3f}s")


if __name__ == "__main__":
    main()
