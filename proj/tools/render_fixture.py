#!/usr/bin/env python3
"""Draw an obstacle fixture: rectangles, start, and goal."""

import argparse
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.patches as patches
import matplotlib.pyplot as plt


def read_fixture(path):
    world = {"obstacles": []}
    with open(path) as f:
        for raw in f:
            line = raw.split("#", 1)[0].split()
            if not line:
                continue
            key, vals = line[0], line[1:]
            if key in ("version", "name"):
                world[key] = vals[0]
            elif key in ("domain", "start", "goal", "goal_rect", "oracle_optimum"):
                world[key] = [float(v) for v in vals]
            else:
                world["obstacles"].append([float(v) for v in line])
    return world


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("fixture")
    ap.add_argument("-o", "--out", default=None, help="PNG path (default: <fixture>.png)")
    args = ap.parse_args()

    w = read_fixture(args.fixture)
    x0, y0, x1, y1 = w["domain"]
    fig, ax = plt.subplots(figsize=(6, 6 * (y1 - y0) / (x1 - x0)))
    for x, y, dx, dy in w["obstacles"]:
        ax.add_patch(patches.Rectangle((x, y), dx, dy, color="0.3"))
    if "goal" in w:
        gx, gy, r = w["goal"]
        ax.add_patch(patches.Circle((gx, gy), r, color="tab:green", alpha=0.6))
    if "goal_rect" in w:
        gx, gy, dx, dy = w["goal_rect"]
        ax.add_patch(patches.Rectangle((gx, gy), dx, dy, color="tab:green", alpha=0.4))
    ax.plot(*w["start"], "o", color="tab:blue")
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_aspect("equal")
    title = w.get("name", "")
    opt = w.get("oracle_optimum", [math.nan])[0]
    if math.isfinite(opt):
        title += f"  (C* = {opt:.6f})"
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(args.out or args.fixture.rsplit(".", 1)[0] + ".png", dpi=120)


if __name__ == "__main__":
    main()
