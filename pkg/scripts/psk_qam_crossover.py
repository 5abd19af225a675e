"""Tabulate closed-form PSK and QAM effective minimum distances against eta."""

import argparse

from icmod.constellation import dmin_psk_formula, dmin_qam_formula


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--min-n", type=int, default=3)
    ap.add_argument("--max-n", type=int, default=7)
    args = ap.parse_args()
    print("N,eta,d_psk,d_qam,better")
    for N in range(args.min_n, args.max_n + 1):
        for eta in range(1, N + 1):
            p, q = dmin_psk_formula(N, eta), dmin_qam_formula(N, eta)
            print(f"{N},{eta},{p:.4f},{q:.4f},{'psk' if p > q else 'qam'}")


if __name__ == "__main__":
    main()
