
import pytest

from secrecygain.codefile import bundled_path, load_code
from secrecygain.codes import LinearCode, WeightEnumerator, parse_word

OCTACODE_ROWS = [
    [1, 0, 0, 0, 2, 1, 1, 1],
    [0, 1, 0, 0, 1, 2, 1, 3],
    [0, 0, 1, 0, 1, 3, 2, 1],
    [0, 0, 0, 1, 1, 1, 3, 2],
]

EVE_WORDS = (0b0000, 0b1100, 0b1010, 0b1001)


def brute_force_dual_enumerator(n, rows):
    counts = [0] * (n + 1)
    for v in range(2**n):
        if all(bin(v & r).count("1") % 2 == 0 for r in rows):
            counts[bin(v).count("1")] += 1
    return WeightEnumerator(n, tuple(counts))


def random_linear_code(rng, n, k):
    while True:
        rows = [int(rng.integers(1, 2**n)) for _ in range(k)]
        try:
            return LinearCode(n, tuple(rows))
        except ValueError:
            continue


@pytest.fixture
def octacode():
    return load_code(bundled_path("octacode.json"))


@pytest.fixture
def code633():
    return LinearCode(6, tuple(parse_word(r) for r in ("000111", "011001", "101010")))


@pytest.fixture
def enumerators():
    WE = WeightEnumerator.from_dict
    return {
        "633": WE(6, {0: 1, 3: 4, 4: 3}),
        "h8": WE(8, {0: 1, 4: 14, 8: 1}),
        "c12": WE(12, {0: 1, 4: 6, 5: 24, 6: 16, 8: 9, 9: 8}),
        "n16": WE(16, {0: 1, 6: 112, 8: 30, 10: 112, 16: 1}),
        "c18": WE(18, {0: 1, 6: 102, 8: 153, 10: 153, 12: 102, 18: 1}),
        "c20": WE(20, {0: 1, 6: 90, 8: 255, 10: 332, 12: 255, 14: 90, 20: 1}),
        "rep2": WE(2, {0: 1, 2: 1}),
    }


@pytest.fixture
def non_fsd():
    return WeightEnumerator.from_dict(4, {0: 1, 1: 1, 3: 1, 4: 1})


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
