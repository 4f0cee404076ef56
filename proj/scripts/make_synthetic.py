#!/usr/bin/env python3
"""Regenerate the example datasets in data/.

synthetic_n50_k3.csv: 50 samples, a dose predictor and three markers, two of
which carry a linear dose signal. single_marker_k1.csv: 30 samples, one marker.
Both are fully determined by the seeds below.
"""
import csv
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def write(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(r)


def synthetic_n50_k3():
    rng = np.random.default_rng(20240917)
    n = 50
    dose = rng.normal(size=n)
    m1 = 0.5 * dose + rng.normal(size=n)
    m2 = rng.normal(size=n)
    m3 = -0.3 * dose + 0.4 * m2 + rng.normal(size=n)
    rows = [
        [f"s{i + 1:02d}", f"{dose[i]:.6f}", f"{m1[i]:.6f}", f"{m2[i]:.6f}", f"{m3[i]:.6f}"]
        for i in range(n)
    ]
    write(OUT / "synthetic_n50_k3.csv", ["sample", "dose", "m1", "m2", "m3"], rows)


def single_marker_k1():
    rng = np.random.default_rng(7)
    n = 30
    age = rng.uniform(20, 70, size=n)
    marker = 0.02 * age + rng.normal(scale=0.5, size=n)
    rows = [[f"p{i + 1:02d}", f"{age[i]:.3f}", f"{marker[i]:.6f}"] for i in range(n)]
    write(OUT / "single_marker_k1.csv", ["id", "age", "marker"], rows)


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    synthetic_n50_k3()
    single_marker_k1()
