"""Fixtures compartilhadas."""

import json
import random
from pathlib import Path

import pytest

from src.formats import parse_cycles, parse_generator_list
from src.subgroups import closure, full_group
from src.tree_automorphisms import standard_generator

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def w2():
    return full_group(2)


@pytest.fixture
def w3():
    return full_group(3)


@pytest.fixture
def a1():
    return standard_generator(1, 2)


@pytest.fixture
def a2():
    return standard_generator(2, 2)


@pytest.fixture
def cyc():
    """cyc("(1,2)", n) -> elemento."""
    return lambda text, n=2: parse_cycles(text, n)


@pytest.fixture
def group():
    """group("(1,2),(3,4)", n) -> subgrupo gerado."""
    return lambda text, n=2: closure(parse_generator_list(text, n), n)


@pytest.fixture
def markov_orders():
    return {int(k): v for k, v in json.loads((FIXTURES / "markov_orders.json").read_text()).items()}


@pytest.fixture
def reports_dir(tmp_path):
    return tmp_path / "reports"


@pytest.fixture
def markov_elements():
    """m_n em notação de ciclos, valores de regressão."""
    return {int(k): v for k, v in json.loads((FIXTURES / "markov_elements.json").read_text()).items()}
