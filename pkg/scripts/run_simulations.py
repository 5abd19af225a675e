"""Simulate every bundled code with its labeling and the BPSK baseline, one CSV per code."""

import argparse
from pathlib import Path

from icmod import analysis, fixtures, sim


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("sim-out"))
    ap.add_argument("--snr", default="0:12:1", help="START:STOP:STEP in dB")
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--constellation", choices=("psk", "qam"), default="psk")
    args = ap.parse_args()
    grid = sim.snr_grid(*(float(v) for v in args.snr.split(":")))
    args.out.mkdir(parents=True, exist_ok=True)
    for name, N in fixtures.available_codes():
        if args.constellation == "qam" and N < 2:
            continue
        prob, code = fixtures.problem(name), fixtures.code(name, N)
        lab, _ = analysis.analyze(prob, code, args.constellation)
        results = [sim.simulate(prob, code, lab, grid, args.trials, args.seed),
                   sim.simulate_bpsk_baseline(prob, code, grid, args.trials, args.seed)]
        path = args.out / f"{name}_N{N}_{args.constellation}.csv"
        path.write_text(sim.curves_csv(results))
        print(path)


if __name__ == "__main__":
    main()
