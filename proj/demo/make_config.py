#!/usr/bin/env python3
"""Writes intelliad.json for the demo workspace."""
import json
from pathlib import Path

# scheme -> (rss, cpu, threads, packet rate, bytes per packet) lifts
LIFTS = {
    "A1": (1.070, 1.0226, 1.10, 3.00, 3.2100),
    "A2": (1.045, 1.0950, 1.20, 4.20, 2.7000),
    "A3": (1.030, 1.0242, 1.10, 3.10, 2.9000),
    "A4": (1.055, 1.1100, 1.20, 4.00, 3.05289375),
    "A5": (1.010, 1.0400, 1.05, 1.70, 1.2765),
    "A6": (1.040, 1.5200, 1.30, 2.10, 1.4000),
    "A7": (1.065, 1.6860, 1.45, 2.40, 1.6000),
    "A8": (1.020, 1.0200, 1.10, 3.30, 2.6000),
    "A9": (1.035, 1.4300, 1.20, 1.80, 1.4056),
    "A10": (1.025, 1.0340, 1.15, 2.60, 2.4000),
    "A11": (1.050, 1.5900, 1.30, 2.50, 1.7000),
    "A12": (1.060, 1.1500, 1.35, 5.00, 3.1000),
}
FIELDS = ("rss_kb", "cpu_pct", "thread_count", "packet_rate_pps", "bytes_per_packet")


def main():
    apps = [{"id": "com.example.a%d" % i, "path": "../tests/fixtures/apps/A%d" % i,
             "kind": "tree", "scheme": "A%d" % i} for i in range(1, 13)]
    config = {
        "output_dir": "out",
        "catalog": "../data/catalog.json",
        "power_model": "../data/power_model.json",
        "keywords": "../data/keywords.json",
        "stopwords": "../data/stopwords.txt",
        "reviews": "reviews.jsonl",
        "apps": apps,
        "data_plan": {"price": 25.0, "quota_gb": 5.0},
        "embedding_dim": 16,
        "defaults": {"k": 4, "rating_cutoff": 3, "runs_expected": 4, "seed": 42},
        "simulate": {
            "runs": 4,
            "noise": 0.02,
            "duration_s": 80,
            "prototype": {"rss_kb": 42000, "cpu_pct": 12.165, "thread_count": 18,
                          "packet_rate_pps": 1.0, "bytes_per_packet": 1000,
                          "cpu_freq_khz": 998400},
            "schemes": {s: dict(zip(FIELDS, v)) for s, v in LIFTS.items()},
        },
    }
    out = Path(__file__).with_name("intelliad.json")
    out.write_text(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
