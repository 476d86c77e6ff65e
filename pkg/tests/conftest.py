import json
from pathlib import Path

import pytest

import tvar
from tvar.cli import load_problem
from tvar.downgrade import TorusEmbedding, downgrade

PROBLEMS = Path(tvar.__file__).parent / "problems"

SWAP = [[0, 1], [1, 0]]
SWAP_ID = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
SWAP_SWAP = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]

A3_WEIGHTS = [[1, 0], [0, 1], [1, 1]]
A4_WEIGHTS = [[1, 0], [0, 1], [1, 2], [2, 1]]


def problem_text(name):
    return (PROBLEMS / name).read_text(encoding="utf-8")


def problem_json(name):
    return json.loads(problem_text(name))


def datum_from(name):
    """Run the downgrade described by a bundled problem file."""
    p = load_problem(problem_text(name), "downgrade").payload["embedding"]
    e = TorusEmbedding.build(p["F"], p["tau_hat"], p["tau_hat_prime"], p["sigma_prime"])
    return downgrade(e, p.get("projection"), p.get("cosection"))


@pytest.fixture(scope="session")
def a3():
    return downgrade(TorusEmbedding.build(A3_WEIGHTS, SWAP, SWAP_ID))


@pytest.fixture(scope="session")
def a3_reference():
    return datum_from("weil_split_a3_reference.json")


@pytest.fixture(scope="session")
def a4():
    return downgrade(TorusEmbedding.build(A4_WEIGHTS, SWAP, SWAP_SWAP))


@pytest.fixture(scope="session")
def a4_reference():
    return datum_from("weil_a4_reference.json")


@pytest.fixture(scope="session")
def diagonal():
    return datum_from("diagonal_swap_a2.json")


@pytest.fixture(scope="session")
def diagonal_a3():
    return datum_from("diagonal_swap_a3.json")
