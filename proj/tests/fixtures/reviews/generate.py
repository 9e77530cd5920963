#!/usr/bin/env python3
"""Writes reviews.jsonl: complaint reviews whose per-cost-type mean ratings
are 1.152, 1.373, 1.197 and 1.198, plus distractors that must not count."""
import json
import random
from pathlib import Path

# type -> (reviews, reviews rated 2, templates hitting only that type)
PLAN = {
    "NumAds": (125, 19, ["Too many ads in this one", "So much ads everywhere",
                         "A lot of ads after every level"]),
    "MemCpu": (1000, 373, ["The ads make it laggy", "Ads use all my memory",
                           "It gets so laggy once the ads show up"]),
    "Traffic": (1000, 197, ["Ads eat my bandwidth", "Ads keep loading over wifi",
                            "Ads burn my data rate"]),
    "Battery": (500, 99, ["Ads drain my battery", "The ads eat the battery",
                          "Ads keep draining it fast"]),
}
APPS = ["com.example.a1", "com.example.a2", "com.example.a3"]


def main():
    rng = random.Random(7)
    rows = []
    for kind, (n, twos, templates) in PLAN.items():
        ratings = [2] * twos + [1] * (n - twos)
        for i, rating in enumerate(ratings):
            rows.append({"app_id": APPS[i % len(APPS)], "rating": rating,
                         "date": "2016-04-%02d" % (1 + i % 28),
                         "text": templates[i % len(templates)]})
    for i in range(60):
        rows.append({"app_id": APPS[i % 3], "rating": 3 + i % 3, "date": "2016-04-15",
                     "text": "Ads drain my battery but the app is great"})
    for i in range(40):
        rows.append({"app_id": APPS[i % 3], "rating": 1, "date": "2016-04-16",
                     "text": "Crashes on start, nothing else to say"})
    rng.shuffle(rows)
    out = Path(__file__).with_name("reviews.jsonl")
    out.write_text("".join(json.dumps(r) + "\n" for r in rows))

    for kind, (n, twos, _) in PLAN.items():
        assert round((n + twos) / n, 3) == {"NumAds": 1.152, "MemCpu": 1.373,
                                             "Traffic": 1.197, "Battery": 1.198}[kind]


if __name__ == "__main__":
    main()
