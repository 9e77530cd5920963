#!/usr/bin/env python3
"""Writes reviews.jsonl for the demo workspace: synthetic store reviews for
com.example.a1..a12, with heavier complaints for the costlier schemes."""
import json
import random
from pathlib import Path

COMPLAINTS = {
    "NumAds": ["Way too many ads, every screen has one", "So many ads I cannot use it",
               "A lot of ads for a free app", "Too much ads, I will buy the paid app",
               "Use pro version still face too much ads",
               "So many ads and I paid money for the ad block and new filters and nothing happened"],
    "MemCpu": ["Ads make the whole phone slow", "It gets laggy when the ads load",
               "Memory hog and need to add an exit button and ad blocker",
               "The ad banner makes it hang for seconds", "Ads eat my ram and cpu"],
    "Traffic": ["Ads keep downloading even without wifi", "Ads burn through my data rate",
                "With how little use the phone without WiFi, used 400MB of data rate, opening it "
                "only once. And all notifications that arrive are you just advertising. Uninstalled",
                "The ad network uses all my bandwidth"],
    "Battery": ["Ads drain my battery fast", "More ads increase more battery consumption. "
                "Settings are fake", "Battery drain is terrible since the ads arrived",
                "Why do they want your location to drain your battery and send you even more ads",
                "I have to recharge twice a day because of the ads"],
}
GENERAL = ["Annoying ads ruin it", "The ads are so annoying, tried uninstalling twice",
           "Annoying popup ads everywhere", "Would pay for a premium version without ads",
           "Ads are annoying but the app works", "Great app, ads are fine",
           "Nice app, the ads are not intrusive", "Love it, a few ads but ok"]
NEUTRAL = ["Works as expected", "Great app", "Crashes on start", "Five stars", "Useless update"]

# scheme -> relative burden per cost type (higher = more and angrier complaints)
BURDEN = {
    "A1": (1, 3, 2, 1), "A2": (3, 1, 2, 1), "A3": (1, 1, 2, 1), "A4": (3, 1, 3, 1),
    "A5": (1, 1, 1, 1), "A6": (3, 3, 1, 3), "A7": (4, 3, 2, 3), "A8": (1, 1, 2, 1),
    "A9": (1, 2, 1, 2), "A10": (2, 1, 2, 1), "A11": (2, 3, 1, 3), "A12": (4, 1, 3, 1),
}


def main():
    rng = random.Random(2016)
    rows = []
    for i in range(1, 13):
        scheme = "A%d" % i
        app = "com.example.a%d" % i
        for kind, weight in zip(COMPLAINTS, BURDEN[scheme]):
            for _ in range(4 + 3 * weight):
                rating = 1 if rng.random() < 0.2 + 0.15 * weight else 2
                if rng.random() < 0.15:
                    rating = rng.choice([3, 4, 5])
                rows.append((app, rating, rng.choice(COMPLAINTS[kind])))
        for _ in range(20):
            rows.append((app, rng.randint(1, 5), rng.choice(GENERAL)))
        for _ in range(10):
            rows.append((app, rng.randint(1, 5), rng.choice(NEUTRAL)))
    rng.shuffle(rows)
    out = Path(__file__).with_name("reviews.jsonl")
    with out.open("w") as f:
        for n, (app, rating, text) in enumerate(rows):
            day = 1 + n % 30
            f.write(json.dumps({"app_id": app, "rating": rating,
                                "date": "2016-04-%02d" % day, "text": text}) + "\n")


if __name__ == "__main__":
    main()
