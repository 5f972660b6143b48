#!/usr/bin/env python3
"""Render the CSV outputs of pcfqfc as PNG figures.

usage: plot.py tuning.csv|histogram.csv|power_scan.csv [-o out.png]
The CSV kind is recognised from its header.
"""
import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def columns(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        sys.exit(f"{path}: no rows")
    out = {}
    for key in rows[0]:
        out[key] = [float(r[key]) if r[key] else float("nan") for r in rows]
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("-o", "--output")
    args = ap.parse_args()
    c = columns(args.csv)
    fig, ax = plt.subplots(figsize=(6, 4))
    if "lambda_t_nm" in c:
        ax.plot(c["lambda_t_nm"], c["eta"])
        ax.set_xlabel("target wavelength (nm)")
        ax.set_ylabel("sinc^2 phase-matching factor")
    elif "t_ns" in c:
        ax.semilogy(c["t_ns"], [max(v, 0.5) for v in c["counts"]], drawstyle="steps-mid")
        ax.set_xlabel("detection time (ns)")
        ax.set_ylabel("counts")
    elif "P_p_W" in c:
        ax.plot(c["P_p_W"], c["eta"])
        ax.set_xlabel("pump p peak power (W)")
        ax.set_ylabel("conversion efficiency")
    else:
        sys.exit(f"{args.csv}: unrecognised header {list(c)}")
    fig.tight_layout()
    fig.savefig(args.output or args.csv.rsplit(".", 1)[0] + ".png", dpi=150)


if __name__ == "__main__":
    main()
