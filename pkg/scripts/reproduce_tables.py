#!/usr/bin/env python3
"""Regenerate the six reference result sets into out/ as CSV.

Each block is a single CLI invocation; see the README catalog for what each
file contains. Deterministic: rerunning overwrites byte-identical files.
"""

from pathlib import Path

from csma_game.cli import main

OUT = Path(__file__).resolve().parent.parent / "out"

RUNS = {
    "nash_free.csv": [
        "sweep", "--nd", "1,2,5", "--nw", "1,2,5", "--beta", "0.001",
        "--w-idle", "0", "--w-col", "0",
    ],
    "nash_costed.csv": [
        "sweep", "--nd", "1,2,5", "--nw", "1,2,5", "--beta", "0.001",
        "--preset", "costed", "--rescale", "per-opponent",
    ],
    "lone_network_optima.csv": [
        "optimum", "--kind", "both", "--n", "2,4,10", "--beta", "0.001",
    ],
    "nash_nudged_weights.csv": [
        "sweep", "--nd", "1,2,5", "--nw", "1,2,5", "--beta", "0.001",
        "--w-idle", "0.001,0.001", "--w-col", "150,400", "--rescale", "per-opponent",
    ],
    "stackelberg_free.csv": [
        "stackelberg", "--nd", "1,2,5", "--nw", "1,2,5", "--beta", "0.001",
        "--leader", "both",
    ],
    "stackelberg_costed.csv": [
        "stackelberg", "--nd", "1,2,5", "--nw", "1,2,5", "--beta", "0.001",
        "--preset", "costed", "--rescale", "per-opponent", "--leader", "both",
    ],
}


def run() -> None:
    OUT.mkdir(exist_ok=True)
    for name, args in RUNS.items():
        path = OUT / name
        code = main(args + ["--out", str(path)])
        if code != 0:
            raise SystemExit(f"{name}: exited with {code}")
        print(f"wrote {path}")


if __name__ == "__main__":
    run()
