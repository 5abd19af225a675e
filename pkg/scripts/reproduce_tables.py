"""Print per-receiver distances and gains for every bundled code."""

import argparse

from icmod import analysis, fixtures


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--constellation", choices=("psk", "qam", "both"), default="both")
    args = ap.parse_args()
    kinds = ("psk", "qam") if args.constellation == "both" else (args.constellation,)
    for name, N in fixtures.available_codes():
        for kind in kinds:
            if kind == "qam" and N < 2:
                continue
            _, profs = analysis.analyze(fixtures.problem(name), fixtures.code(name, N), kind)
            print(f"## {name} N={N} {kind}")
            print(analysis.report_csv(profs), end="")
            print()
    rep = analysis.n_to_n_gap_report(fixtures.problem("five_msg"),
                                     [fixtures.code("five_msg", N) for N in (3, 4, 5)])
    print("## five_msg best/worst gap")
    for row in rep.rows:
        print(f"N={row.length} best={row.best} worst={row.worst} gap_db={row.gap_db:.2f}")


if __name__ == "__main__":
    main()
