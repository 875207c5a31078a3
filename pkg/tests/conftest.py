import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rademacher.contfrac import word_to_matrix
from rademacher.modular_group import Mat2, S, T, is_primitive

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def words(max_entry=4, max_half=3):
    return st.lists(st.integers(1, max_entry), min_size=1, max_size=2 * max_half).map(
        lambda w: tuple(w) if len(w) % 2 == 0 else tuple(w) + (1,))


def primitive_words(max_entry=4, max_half=3):
    return words(max_entry, max_half).filter(lambda w: is_primitive(word_to_matrix(w)))


@st.composite
def sl2(draw, length=5, power=3):
    """Products of ``T^k`` and ``S``."""
    g = Mat2(1, 0, 0, 1)
    for _ in range(draw(st.integers(0, length))):
        g = g @ T ** draw(st.integers(-power, power)) @ S
    if draw(st.booleans()):
        g = -g
    return g


def random_sl2(rng: random.Random, length=5, power=3):
    g = Mat2(1, 0, 0, 1)
    for _ in range(rng.randint(0, length)):
        g = g @ T ** rng.randint(-power, power) @ S
    return g


def random_word(rng: random.Random, max_entry=4, max_len=6):
    n = rng.randint(1, max_len // 2)
    return tuple(rng.randint(1, max_entry) for _ in range(2 * n))


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(mod.REPORT):
        terminalreporter.write_line(line)
