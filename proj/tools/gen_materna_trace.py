#!/usr/bin/env python3
# Writes scenarios/traces/materna-sample.csv: a Materna-shaped arrival trace.
# 15 long-lived requests at 1/s, then a 50/s surge in [780, 800) whose
# requests leave in [1180, 1200]. Fixed seed, so the file is reproducible.
import csv
import random
import sys

SERVICES = ["ica", "ct", "en", "sf"]
LAMBDA_MIN = 0.001


def rows(seed=7):
    rng = random.Random(seed)
    for k in range(15):
        yield k * 1.0, "", rng.uniform(1, 20) * LAMBDA_MIN, rng.choice(SERVICES)
    for k in range(1000):
        yield 780.0 + k / 50.0, 400.0, rng.uniform(1, 20) * LAMBDA_MIN, rng.choice(SERVICES)


def main(path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["arrival", "duration", "load", "service"])
        for t, d, load, svc in rows():
            w.writerow([f"{t:.2f}", d if d == "" else f"{d:.1f}", f"{load:.6f}", svc])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "scenarios/traces/materna-sample.csv")
