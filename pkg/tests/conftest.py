import random

import pytest
from hypothesis import strategies as st

from pantslab.surface import from_pairing


def random_pairing(n: int, rng: random.Random) -> list[int]:
    sides = list(range(3 * n))
    rng.shuffle(sides)
    p = [0] * (3 * n)
    for a, b in zip(sides[::2], sides[1::2]):
        p[a], p[b] = b, a
    return p


@st.composite
def surfaces(draw, max_triangles: int = 12):
    n = 2 * draw(st.integers(1, max_triangles // 2))
    seed = draw(st.integers(0, 2**32 - 1))
    return from_pairing(random_pairing(n, random.Random(seed)))


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    def say(number: int, ok: bool, detail: str) -> bool:
        line = f"acceptance {number}: {'PASS' if ok else 'FAIL'} {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return say


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
