"""Occupancies, channel purities and Slater rank over a log-spaced coupling range.

Writes the CSV consumed by plotting and prints a compact table.
"""

import argparse
import contextlib
import io
import os

from trapent.cli import main


def run(args):
    buf = io.StringIO()
    argv = ["sweep", "--g-min", str(args.g_min), "--g-max", str(args.g_max),
            "--points", str(args.points), "--log", "--jobs", str(args.jobs)]
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    text = buf.getvalue()
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return code, text


def summarize(text):
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    cols = ["g", "eta_0", "eta_1", "eta_2", "eta_3", "omega_0", "omega_1", "slater_rank", "slater_estimate", "error"]
    idx = [header.index(c) for c in cols]
    print(" ".join(f"{c:>11}" for c in cols))
    for line in lines[1:]:
        cells = line.split(",")
        out = []
        for i in idx:
            try:
                out.append(f"{float(cells[i]):11.4g}")
            except ValueError:
                out.append(f"{cells[i]:>11}")
        print(" ".join(out))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--g-min", type=float, default=0.1)
    p.add_argument("--g-max", type=float, default=500.0)
    p.add_argument("--points", type=int, default=40)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--output", default="sweep.csv")
    a = p.parse_args()
    code, text = run(a)
    summarize(text)
    raise SystemExit(code)
