"""Bundled example matrices.

Each fixture is a plain matrix text file under ``data/``.  ``PAIRS`` lists the
``(A, B)`` instance pairs they were published as.
"""

from __future__ import annotations

from importlib import resources

from .matrix import ExactMatrix, parse_matrix

NAMES = (
    "robinson",
    "simple_toeplitz_misprinted",
    "cdw_conic",
    "monotone_anti_monge",
    "kalmanson",
    "dw_toeplitz",
    "kalmanson_robinson",
    "down_benevolent",
    "anti_monge",
    "up_benevolent",
    "cdw_example_6x6",
)

PAIRS = {
    "robinson_simple": ("robinson", "simple_toeplitz_misprinted"),
    "cdw_antimonge": ("cdw_conic", "monotone_anti_monge"),
    "kalmanson_dw": ("kalmanson", "dw_toeplitz"),
    "down_benevolent": ("kalmanson_robinson", "down_benevolent"),
    "antimonge_up_benevolent": ("anti_monge", "up_benevolent"),
}


def path(name: str):
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}")
    return resources.files(__package__).joinpath("data", f"{name}.mat")


def load(name: str) -> ExactMatrix:
    return parse_matrix(path(name).read_text(encoding="utf-8"))


def load_pair(pair: str) -> tuple[ExactMatrix, ExactMatrix]:
    a, b = PAIRS[pair]
    return load(a), load(b)
