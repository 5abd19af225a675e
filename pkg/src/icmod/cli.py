"""Command-line entry point: minrank, analyze, simulate, compare."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import analysis, sim
from .index_code import CodeError, EncodingMatrix, dumps_code, extend_code, load_code, validate
from .labeling import MAX_LABEL_N, LabelingError
from .minrank import MinrankBudgetExceeded, encoding_matrix_from_witness, max_vertices, minrank, optimal_code
from .problem import IndexCodingProblem, NotSingleUnicast, ProblemError, build_side_info_graph, load_problem

EXIT_OK = 0
EXIT_SHAPE = 2
EXIT_INVALID_CODE = 3
EXIT_RESOURCE = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    problem: Path
    code: Path | None = None
    constellation: str = "psk"
    length: int | None = None
    priority: list[str] = field(default_factory=list)
    snr: tuple[float, float, float] = (0.0, 10.0, 1.0)
    trials: int = 10_000
    seed: int = 1
    out: Path = Path("icmod-out")
    baseline: bool = False
    bandwidth_normalized: bool = True

    def __post_init__(self):
        if self.constellation not in ("psk", "qam"):
            raise ValueError(f"unknown constellation {self.constellation!r}")
        if self.snr[2] <= 0:
            raise ValueError("SNR step must be positive")
        if self.trials < 1:
            raise ValueError("trials must be positive")


def _parse_snr(text: str) -> tuple[float, float, float]:
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected START:STOP:STEP") from None
    if step <= 0:
        raise argparse.ArgumentTypeError("SNR step must be positive")
    return start, stop, step


def _parse_bool(text: str) -> bool:
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


def _parse_priority(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _load_problem(path: Path) -> IndexCodingProblem:
    try:
        return load_problem(path)
    except (ProblemError, json.JSONDecodeError, OSError) as exc:
        raise CliError(f"cannot read problem {path}: {exc}", EXIT_SHAPE) from exc


def _label_limit() -> int:
    return min(MAX_LABEL_N, max_vertices())


def resolve_code(cfg: RunConfig, problem: IndexCodingProblem) -> EncodingMatrix:
    """The code given on the command line, or one derived from the problem.

    Without ``--code`` the optimal length comes from minrank; ``--length``
    picks the uncoded identity at n, or lengthens the optimal code.
    """
    try:
        if cfg.code is not None:
            code = load_code(cfg.code)
            if cfg.length is not None and cfg.length != code.N:
                raise CliError(f"--length {cfg.length} does not match the code's N={code.N}",
                               EXIT_INVALID_CODE)
        elif cfg.length is not None and cfg.length == problem.n:
            code = EncodingMatrix.identity(problem.n)
        else:
            graph = build_side_info_graph(problem)
            _, code = optimal_code(graph)
            if cfg.length is not None:
                if not code.N <= cfg.length <= problem.n:
                    raise CliError(f"--length must lie in [{code.N}, {problem.n}]", EXIT_INVALID_CODE)
                code = extend_code(code, cfg.length)
    except NotSingleUnicast as exc:
        raise CliError(f"{exc}; pass --code", EXIT_SHAPE) from exc
    except MinrankBudgetExceeded as exc:
        raise CliError(str(exc), EXIT_RESOURCE) from exc
    except (CodeError, json.JSONDecodeError, OSError) as exc:
        raise CliError(f"bad encoding matrix: {exc}", EXIT_INVALID_CODE) from exc
    if code.n != problem.n:
        raise CliError(f"code is for n={code.n}, problem has n={problem.n}", EXIT_INVALID_CODE)
    if not validate(code, problem):
        raise CliError("encoding matrix does not let every receiver decode its demand", EXIT_INVALID_CODE)
    if code.N > _label_limit():
        raise CliError(f"N={code.N} exceeds the labeling limit {_label_limit()}", EXIT_RESOURCE)
    return code


def _analyze(cfg: RunConfig, kind: str | None = None):
    problem = _load_problem(cfg.problem)
    code = resolve_code(cfg, problem)
    try:
        lab, profiles = analysis.analyze(problem, code, kind or cfg.constellation, cfg.priority or None)
    except LabelingError as exc:
        raise CliError(str(exc), EXIT_SHAPE) from exc
    return problem, code, lab, profiles


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text)
    return path


def cmd_minrank(cfg: RunConfig) -> int:
    problem = _load_problem(cfg.problem)
    try:
        res = minrank(build_side_info_graph(problem))
    except NotSingleUnicast as exc:
        raise CliError(f"{exc}; pass --code to the other commands", EXIT_SHAPE) from exc
    except MinrankBudgetExceeded as exc:
        raise CliError(f"{exc} (trivial upper bound N <= {exc.upper_bound})", EXIT_RESOURCE) from exc
    print(res.N)
    _write(cfg.out, "code.json", dumps_code(encoding_matrix_from_witness(res.witness)))
    return EXIT_OK


def cmd_analyze(cfg: RunConfig) -> int:
    _, code, lab, profiles = _analyze(cfg)
    report = analysis.report_csv(profiles)
    _write(cfg.out, "report.csv", report)
    _write(cfg.out, "labeling.csv", lab.to_csv())
    sys.stdout.write(report)
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    problem, code, lab, profiles = _analyze(cfg)
    grid = sim.snr_grid(*cfg.snr)
    results = [sim.simulate(problem, code, lab, grid, cfg.trials, cfg.seed, cfg.bandwidth_normalized)]
    if cfg.baseline:
        results.append(sim.simulate_bpsk_baseline(problem, code, grid, cfg.trials, cfg.seed,
                                                  cfg.bandwidth_normalized))
    _write(cfg.out, "curves.csv", sim.curves_csv(results))
    top = grid[-1]
    print(f"message-error rate at {top:g} dB")
    for res in results:
        for p in res.points:
            if p.snr_db == top:
                print(f"  {res.scheme:5s} {p.receiver_id:8s} {p.rate:.3e} ({p.errors}/{p.trials})")
    return EXIT_OK


def cmd_compare(cfg: RunConfig) -> int:
    _, code, _, psk = _analyze(cfg, "psk")
    if code.N < 2:
        raise CliError("QAM needs N >= 2", EXIT_SHAPE)
    _, _, _, qam = _analyze(cfg, "qam")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "eta", "d2_psk", "d2_qam", "better", "recommended", "agrees"])
    for p, q in zip(psk, qam):
        if math.isclose(p.d_min_squared, q.d_min_squared) or math.isinf(p.d_min_squared):
            better = "tie"
        else:
            better = "psk" if p.d_min_squared > q.d_min_squared else "qam"
        rec = analysis.psk_qam_recommendation(p.eta) if p.eta >= 1 else "tie"
        agrees = better in ("tie", rec)
        w.writerow([p.receiver_id, p.eta, f"{p.d_min_squared:.2f}", f"{q.d_min_squared:.2f}",
                    better, rec, "yes" if agrees else "NO"])
    _write(cfg.out, "compare.csv", buf.getvalue())
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


COMMANDS = {"minrank": cmd_minrank, "analyze": cmd_analyze, "simulate": cmd_simulate, "compare": cmd_compare}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="icmod", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--problem", type=Path, required=True)
        p.add_argument("--out", type=Path, default=Path("icmod-out"))
        if name == "minrank":
            continue
        p.add_argument("--code", type=Path)
        p.add_argument("--constellation", choices=("psk", "qam"), default="psk")
        p.add_argument("--length", type=int)
        p.add_argument("--priority", type=_parse_priority, default=[],
                       help="comma-separated receiver ids that win eta ties, in order")
        if name == "simulate":
            p.add_argument("--snr", type=_parse_snr, default=(0.0, 10.0, 1.0), help="START:STOP:STEP in dB")
            p.add_argument("--trials", type=int, default=10_000)
            p.add_argument("--seed", type=int, default=1)
            p.add_argument("--baseline", action="store_true")
            p.add_argument("--bandwidth-normalized", type=_parse_bool, default=True)
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    keys = ("code", "constellation", "length", "priority", "snr", "trials", "seed", "baseline",
            "bandwidth_normalized")
    extra = {k: getattr(args, k) for k in keys if hasattr(args, k)}
    return RunConfig(problem=args.problem, out=args.out, **extra)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[args.command](cfg)
    except CliError as exc:
        print(f"icmod: {exc}", file=sys.stderr)
        return exc.code
    except CodeError as exc:
        print(f"icmod: {exc}", file=sys.stderr)
        return EXIT_INVALID_CODE
    except ValueError as exc:
        print(f"icmod: {exc}", file=sys.stderr)
        return EXIT_SHAPE


if __name__ == "__main__":
    sys.exit(main())
