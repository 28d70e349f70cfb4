#!/usr/bin/env python3
"""Write a synthetic stand-in for the Canadian daily temperature data.

365 daily grid points by 35 stations, in the dataset CSV layout read by
`fdboot ci` and `fdboot depth`. Each station gets its own annual mean,
seasonal amplitude and phase plus AR(1) day-to-day weather noise.
"""

import argparse
import math
import random


def station_curve(rng):
    mean = rng.uniform(-8.0, 10.0)
    amplitude = rng.uniform(8.0, 20.0)
    phase = rng.uniform(-10.0, 10.0)
    noise = 0.0
    values = []
    for day in range(1, 366):
        noise = 0.7 * noise + rng.gauss(0.0, 1.5)
        seasonal = -math.cos(2.0 * math.pi * (day - 15.0 - phase) / 365.0)
        values.append(round(mean + amplitude * seasonal + noise, 1))
    return values


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="tests/data/synthetic_weather.csv")
    parser.add_argument("--seed", type=int, default=35)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    curves = [station_curve(rng) for _ in range(35)]
    with open(args.out, "w", newline="\n") as f:
        f.write("t," + ",".join(f"station_{i + 1:02d}" for i in range(35)) + "\n")
        for day in range(365):
            f.write(f"{day + 1}," + ",".join(repr(c[day]) for c in curves) + "\n")


if __name__ == "__main__":
    main()
