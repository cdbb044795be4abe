#!/usr/bin/env python3
"""Emit plot-ready age and throughput curves over one strategy axis.

Age curves: age vs tau_d for dsrc sizes {1, 5} against wifi sizes {1, 2, 5}
with the wifi side fixed at tau_w = 0.2. Throughput curves: throughput vs
tau_w for wifi sizes {1, 5} against dsrc sizes {1, 2, 5} with tau_d = 0.2.
One CSV per curve, columns tau_d, tau_w, age, throughput.
"""

from pathlib import Path

from csma_game.cli import main

OUT = Path(__file__).resolve().parent.parent / "out"


def run() -> None:
    OUT.mkdir(exist_ok=True)
    for nd in (1, 5):
        for nw in (1, 2, 5):
            path = OUT / f"age_vs_tau_d_nd{nd}_nw{nw}.csv"
            args = ["metrics", "--nd", str(nd), "--nw", str(nw), "--tau-w", "0.2",
                    "--out", str(path)]
            if main(args) != 0:
                raise SystemExit(f"metrics run failed for nd={nd} nw={nw}")
            print(f"wrote {path}")
    for nw in (1, 5):
        for nd in (1, 2, 5):
            path = OUT / f"throughput_vs_tau_w_nd{nd}_nw{nw}.csv"
            args = ["metrics", "--nd", str(nd), "--nw", str(nw), "--tau-d", "0.2",
                    "--out", str(path)]
            if main(args) != 0:
                raise SystemExit(f"metrics run failed for nd={nd} nw={nw}")
            print(f"wrote {path}")


if __name__ == "__main__":
    run()
