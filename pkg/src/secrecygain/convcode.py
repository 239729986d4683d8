"""Rate-1/2 tail-biting convolutional codes and exhaustive scans over them."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .codes import LinearCode, WeightEnumerator, gf2_rank, is_formally_self_dual, kissing_number
from .exceptions import CodeValidationError, ConstructionError


def parse_polynomial(text, base: int | None = None) -> int:
    """Parse a generator polynomial into a bit mask (bit j = coefficient of D^j).

    Strings made only of 0/1 are read as binary, anything else as octal,
    unless ``base`` says otherwise.  Integers pass through unchanged.
    """
    if isinstance(text, int):
        value = text
    else:
        s = str(text).strip().lower()
        if base is None:
            if s.startswith("0b"):
                base, s = 2, s[2:]
            elif s.startswith("0o"):
                base, s = 8, s[2:]
            else:
                base = 2 if s and set(s) <= {"0", "1"} and len(s) > 1 else 8
        try:
            value = int(s, base)
        except ValueError:
            raise CodeValidationError(f"cannot parse generator polynomial {text!r}") from None
    if value <= 0:
        raise CodeValidationError("generator polynomial must be nonzero")
    return value


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def gf2_poly_mod(a: int, b: int) -> int:
    db = poly_degree(b)
    while a and poly_degree(a) >= db:
        a ^= b << (poly_degree(a) - db)
    return a


def gf2_poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, gf2_poly_mod(a, b)
    return a


def _strip_d(p: int) -> int:
    while p and not p & 1:
        p >>= 1
    return p


def is_catastrophic(g1: int, g2: int) -> bool:
    """True when gcd(g1, g2) has a factor other than a power of D."""
    return gf2_poly_gcd(_strip_d(g1), _strip_d(g2)) != 1


@dataclass(frozen=True)
class TailBitingSpec:
    g1: int
    g2: int
    memory: int
    length: int

    def __post_init__(self):
        if self.memory < 0:
            raise CodeValidationError("memory must be nonnegative")
        for g in (self.g1, self.g2):
            if g <= 0 or poly_degree(g) > self.memory:
                raise CodeValidationError(
                    f"polynomial {g:o} does not fit memory {self.memory}"
                )
        if self.length < max(self.memory + 1, 1):
            raise CodeValidationError("tail-biting length must exceed the memory")

    @property
    def label(self) -> str:
        return f"({self.g1:o},{self.g2:o}) L={self.length}"


def generator_rows(spec: TailBitingSpec) -> list[int]:
    """Rows of the 2L x L tail-biting generator as words of length 2L.

    Row i is the interleaved impulse response g1_0 g2_0 g1_1 g2_1 ...
    cyclically shifted by 2i positions.
    """
    n = 2 * spec.length
    rows = []
    for i in range(spec.length):
        bits = [0] * n
        for j in range(spec.memory + 1):
            pos = (2 * (i + j)) % n
            bits[pos] ^= (spec.g1 >> j) & 1
            bits[(pos + 1) % n] ^= (spec.g2 >> j) & 1
        rows.append(int("".join(map(str, bits)), 2))
    return rows


def tailbite(g1, g2, length: int, memory: int | None = None, name: str = "") -> LinearCode:
    """Tail-bite the rate-1/2 code (g1, g2) to a binary [2L, L] block code."""
    g1, g2 = parse_polynomial(g1), parse_polynomial(g2)
    if memory is None:
        memory = max(poly_degree(g1), poly_degree(g2))
    spec = TailBitingSpec(g1, g2, memory, length)
    rows = generator_rows(spec)
    if gf2_rank(rows) < length:
        raise ConstructionError(
            f"tail-biting generator of {spec.label} has rank {gf2_rank(rows)} < {length}"
        )
    return LinearCode(2 * length, tuple(rows), name=name or spec.label)


@dataclass(frozen=True)
class ScanEntry:
    g1: int
    g2: int
    length: int
    d: int
    kissing: int
    xi: float
    necessary_score: Fraction
    weight_enumerator: WeightEnumerator

    def as_row(self) -> dict:
        return {
            "g1_octal": f"{self.g1:o}",
            "g2_octal": f"{self.g2:o}",
            "L": self.length,
            "d": self.d,
            "kissing": self.kissing,
            "xi": f"{self.xi:.6f}",
            "necessary_score": f"{float(self.necessary_score):.10g}",
        }


SCAN_COLUMNS = ["g1_octal", "g2_octal", "L", "d", "kissing", "xi", "necessary_score"]


def scan_convolutional(max_memory: int, length: int, ranking: str = "gain") -> list[ScanEntry]:
    """Tail-bite every non-catastrophic pair with memory <= ``max_memory``.

    Pairs whose tail-biting generator is rank deficient are skipped, and
    codes with the same weight enumerator are reported once (the first pair
    in lexicographic order).  ``ranking`` is ``"gain"`` (strong secrecy gain,
    descending) or ``"score"`` (necessary-condition score, ascending); ties
    go to the larger minimum distance, then lexicographic order.
    """
    # imported here to keep the module graph acyclic
    from .secrecy import necessary_condition_score, strong_secrecy_gain

    if ranking not in ("gain", "score"):
        raise ValueError("ranking must be 'gain' or 'score'")
    if max_memory < 0 or length < 1:
        raise ValueError("memory must be >= 0 and length >= 1")
    seen = set()
    entries = []
    top = 1 << (max_memory + 1)
    for g1 in range(1, top):
        for g2 in range(1, top):
            if is_catastrophic(g1, g2):
                continue
            memory = max(poly_degree(g1), poly_degree(g2))
            if length <= memory:
                continue
            try:
                code = tailbite(g1, g2, length, memory)
            except ConstructionError:
                continue
            W = code.weight_enumerator()
            if W.counts in seen:
                continue
            seen.add(W.counts)
            if not is_formally_self_dual(W).is_fsd:
                # not expected for non-catastrophic pairs; keep the scan honest
                raise ConstructionError(f"{code.name} is not formally self-dual")
            gain = strong_secrecy_gain(W)
            entries.append(
                ScanEntry(g1, g2, length, W.min_distance(), kissing_number(code),
                          float(gain.xi), necessary_condition_score(W), W)
            )
    if ranking == "gain":
        entries.sort(key=lambda e: (-round(e.xi, 12), -e.d, e.g1, e.g2))
    else:
        entries.sort(key=lambda e: (e.necessary_score, -e.d, e.g1, e.g2))
    return entries


def scan_to_csv(entries) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for e in entries:
        writer.writerow(e.as_row())
    return buf.getvalue()
