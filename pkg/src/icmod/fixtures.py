"""Bundled worked problems and their encoding matrices."""

from __future__ import annotations

import json
from importlib import resources

from .index_code import EncodingMatrix, code_from_dict
from .problem import IndexCodingProblem, problem_from_dict

PROBLEMS = ("seven_msg", "six_msg_a", "six_msg_b", "five_msg", "four_msg")


def _read(name: str) -> dict:
    return json.loads(resources.files("icmod").joinpath("data", name).read_text())


def problem(name: str) -> IndexCodingProblem:
    if name not in PROBLEMS:
        raise KeyError(name)
    return problem_from_dict(_read(f"{name}.problem.json"))


def code(name: str, N: int) -> EncodingMatrix:
    return code_from_dict(_read(f"{name}_N{N}.code.json"))


def available_codes() -> list[tuple[str, int]]:
    out = []
    for entry in resources.files("icmod").joinpath("data").iterdir():
        stem = entry.name
        if stem.endswith(".code.json"):
            name, _, n = stem[: -len(".code.json")].rpartition("_N")
            out.append((name, int(n)))
    return sorted(out)


def problem_path(name: str):
    return resources.files("icmod").joinpath("data", f"{name}.problem.json")


def code_path(name: str, N: int):
    return resources.files("icmod").joinpath("data", f"{name}_N{N}.code.json")
