"""Binary and Z4 codes, exact weight enumerators and MacWilliams transforms.

Codewords are stored as Python ints.  Coordinate ``i`` (0-based, reading a
bit string left to right) is bit ``n - 1 - i`` of the int, so
``int("0110", 2)`` is the word (0, 1, 1, 0) and numeric order equals
lexicographic order of the bit strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import CodeValidationError, EnumerationLimitError, PreconditionError

MAX_LENGTH = 128
DEFAULT_CAP = 2**36
_BLOCK_BITS = 16
_MASK64 = (1 << 64) - 1

# Gray map on Z4: 0 -> 00, 1 -> 01, 2 -> 11, 3 -> 10
GRAY = ((0, 0), (0, 1), (1, 1), (1, 0))


# ---------------------------------------------------------------------------
# word helpers

def parse_word(text: str, n: int | None = None) -> int:
    text = text.strip()
    if not text or any(ch not in "01" for ch in text):
        raise CodeValidationError(f"not a binary word: {text!r}")
    if n is not None and len(text) != n:
        raise CodeValidationError(f"word {text!r} has length {len(text)}, expected {n}")
    return int(text, 2)


def format_word(word: int, n: int) -> str:
    return format(word, f"0{n}b")


def popcount(word: int) -> int:
    return bin(word).count("1")


def word_from_bits(bits: Iterable[int]) -> int:
    word = 0
    for b in bits:
        word = (word << 1) | (int(b) & 1)
    return word


def word_to_bits(word: int, n: int) -> list[int]:
    return [(word >> (n - 1 - i)) & 1 for i in range(n)]


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of integer-encoded row vectors."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = r
                break
            r ^= basis[top]
    return len(basis)


def gf2_reduce(rows: Iterable[int]) -> list[int]:
    """Return an independent spanning subset (an echelon basis) of ``rows``."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = r
                break
            r ^= basis[top]
    return [basis[k] for k in sorted(basis, reverse=True)]


def span(rows: Sequence[int]) -> list[int]:
    """All GF(2) linear combinations of ``rows`` (sorted, with repetition removed)."""
    words = {0}
    for r in rows:
        words |= {w ^ r for w in words}
    return sorted(words)


# ---------------------------------------------------------------------------
# weight enumerator

@dataclass(frozen=True)
class WeightEnumerator:
    """Exact weight distribution A_0..A_n of a binary code of length n."""

    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise CodeValidationError("length must be positive")
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != self.n + 1:
            raise CodeValidationError(
                f"expected {self.n + 1} weight counts, got {len(counts)}"
            )
        if any(c < 0 for c in counts):
            raise CodeValidationError("weight counts must be nonnegative")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_dict(cls, n: int, counts: Mapping) -> "WeightEnumerator":
        dense = [0] * (n + 1)
        for w, a in counts.items():
            w = int(w)
            if not 0 <= w <= n:
                raise CodeValidationError(f"weight {w} outside [0, {n}]")
            dense[w] = int(a)
        return cls(n, tuple(dense))

    @classmethod
    def from_json(cls, obj: Mapping) -> "WeightEnumerator":
        return cls.from_dict(int(obj["n"]), obj["counts"])

    def to_json(self) -> dict:
        return {"n": self.n, "counts": {str(w): str(a) for w, a in self.as_dict().items()}}

    def as_dict(self) -> dict[int, int]:
        return {w: a for w, a in enumerate(self.counts) if a}

    @property
    def size(self) -> int:
        return sum(self.counts)

    def __getitem__(self, w: int) -> int:
        return self.counts[w]

    def __iter__(self):
        return iter(self.as_dict().items())

    def __mul__(self, other: "WeightEnumerator") -> "WeightEnumerator":
        out = [0] * (self.n + other.n + 1)
        for w1, a1 in self.as_dict().items():
            for w2, a2 in other.as_dict().items():
                out[w1 + w2] += a1 * a2
        return WeightEnumerator(self.n + other.n, tuple(out))

    def is_even(self) -> bool:
        return all(a == 0 for w, a in enumerate(self.counts) if w % 2)

    def min_distance(self) -> int:
        """Smallest nonzero weight (equals d for linear or distance-invariant codes)."""
        for w in range(1, self.n + 1):
            if self.counts[w]:
                return w
        raise PreconditionError("code has no nonzero codeword; distance undefined")

    def __str__(self):
        terms = []
        for w, a in self.as_dict().items():
            mono = "".join(
                s for s in (_power("x", self.n - w), _power("y", w)) if s
            ) or "1"
            terms.append(mono if a == 1 else f"{a}{mono}")
        return " + ".join(terms)


def _power(var, e):
    if e == 0:
        return ""
    return var if e == 1 else f"{var}^{e}"


def macwilliams_transform(W: WeightEnumerator, M: int) -> WeightEnumerator:
    """Coefficients of ``W(x + y, x - y) / M`` computed with exact integers.

    Applied to the enumerator of a linear code with ``M = |C|`` this gives the
    enumerator of the dual code.  A non-integral coefficient means ``(W, M)``
    cannot come from such an identity and raises ``ValueError``.
    """
    n = W.n
    if M <= 0:
        raise ValueError("M must be positive")
    items = W.as_dict()
    out = []
    for j in range(n + 1):
        total = 0
        for w, a in items.items():
            # Krawtchouk polynomial K_j(w)
            k = 0
            for i in range(max(0, j - (n - w)), min(j, w) + 1):
                term = comb(w, i) * comb(n - w, j - i)
                k += -term if i % 2 else term
            total += a * k
        if total % M:
            raise ValueError(
                f"coefficient of x^{n - j} y^{j} is {total}/{M}, not an integer"
            )
        out.append(total // M)
    return WeightEnumerator(n, tuple(out))


@dataclass(frozen=True)
class FsdCertificate:
    is_fsd: bool
    transformed: WeightEnumerator | None
    first_mismatch: int | None = None
    reason: str | None = None


def is_formally_self_dual(code) -> FsdCertificate:
    """Decide formal self-duality of a code (or of a bare weight enumerator)."""
    W = code if isinstance(code, WeightEnumerator) else code.weight_enumerator()
    M = W.size
    try:
        image = macwilliams_transform(W, M)
    except ValueError:
        image = None
    if M * M != 2**W.n:
        return FsdCertificate(False, image, None, f"M = {M} differs from 2^(n/2)")
    if image is None:
        return FsdCertificate(False, None, None, "transform is not integral")
    for w in range(W.n + 1):
        if image.counts[w] != W.counts[w]:
            return FsdCertificate(False, image, w, f"A_{w} changes under the transform")
    return FsdCertificate(True, image)


# ---------------------------------------------------------------------------
# code representations

def _popcount_array(lo, hi=None):
    w = np.bitwise_count(lo).astype(np.int64)
    if hi is not None:
        w += np.bitwise_count(hi)
    return w


def _span_block(rows, wide):
    lo = np.zeros(1, dtype=np.uint64)
    hi = np.zeros(1, dtype=np.uint64) if wide else None
    for r in rows:
        rl = np.uint64(r & _MASK64)
        lo = np.concatenate([lo, lo ^ rl])
        if wide:
            rh = np.uint64(r >> 64)
            hi = np.concatenate([hi, hi ^ rh])
    return lo, hi


def _linear_counts(rows: Sequence[int], n: int, cap: int) -> tuple[int, ...]:
    k = len(rows)
    total = 1 << k
    if total > cap:
        raise EnumerationLimitError(total, cap)
    wide = n > 64
    b = min(k, _BLOCK_BITS)
    lo, hi = _span_block(rows[:b], wide)
    counts = np.bincount(_popcount_array(lo, hi), minlength=n + 1).astype(np.int64)
    high = rows[b:]
    cur = 0
    # Gray-code walk over the remaining message bits: one row XOR per step
    for i in range(1, 1 << len(high)):
        cur ^= high[(i & -i).bit_length() - 1]
        cl = np.uint64(cur & _MASK64)
        if wide:
            w = _popcount_array(lo ^ cl, hi ^ np.uint64(cur >> 64))
        else:
            w = _popcount_array(lo ^ cl)
        counts += np.bincount(w, minlength=n + 1)
    return tuple(int(c) for c in counts)


def _check_length(n):
    if not 1 <= n <= MAX_LENGTH:
        raise CodeValidationError(f"length {n} outside supported range [1, {MAX_LENGTH}]")


class _CodeBase:
    n: int
    name: str

    def weight_enumerator(self, cap: int = DEFAULT_CAP) -> WeightEnumerator:
        cache = self.__dict__.setdefault("_cache", {})
        if "we" not in cache:
            cache["we"] = self._compute_enumerator(cap)
        return cache["we"]

    def contains_zero(self) -> bool:
        return True

    def codeword_array(self, cap: int = 2**20) -> np.ndarray:
        """Codewords as a (M, n) uint8 array of bits."""
        words = self.codewords(cap)
        return np.array([word_to_bits(w, self.n) for w in words], dtype=np.uint8).reshape(
            len(words), self.n
        )


@dataclass(frozen=True, eq=False)
class LinearCode(_CodeBase):
    """A binary linear [n, k] code given by k independent generator rows."""

    n: int
    rows: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        _check_length(self.n)
        rows = tuple(int(r) for r in self.rows)
        for i, r in enumerate(rows):
            if r < 0 or r >> self.n:
                raise CodeValidationError(f"row {i} does not fit in length {self.n}")
        if gf2_rank(rows) != len(rows):
            raise CodeValidationError("generator rows are linearly dependent")
        object.__setattr__(self, "rows", rows)

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def size(self) -> int:
        return 1 << len(self.rows)

    def codewords(self, cap: int = 2**20) -> list[int]:
        if self.size > cap:
            raise EnumerationLimitError(self.size, cap)
        return span(self.rows)

    def _compute_enumerator(self, cap):
        return WeightEnumerator(self.n, _linear_counts(self.rows, self.n, cap))


@dataclass(frozen=True, eq=False)
class ExplicitCode(_CodeBase):
    """A (possibly nonlinear) code listed word by word."""

    n: int
    words: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        _check_length(self.n)
        words = tuple(sorted(int(w) for w in self.words))
        if not words:
            raise CodeValidationError("explicit code must contain at least one word")
        for w in words:
            if w < 0 or w >> self.n:
                raise CodeValidationError(
                    f"word {w:b} does not fit in length {self.n}"
                )
        for a, b in zip(words, words[1:]):
            if a == b:
                raise CodeValidationError(f"duplicate codeword {format_word(a, self.n)}")
        object.__setattr__(self, "words", words)

    @classmethod
    def from_array(cls, X, name: str = "") -> "ExplicitCode":
        X = np.asarray(X)
        return cls(X.shape[1], tuple(word_from_bits(row) for row in X), name)

    @property
    def size(self) -> int:
        return len(self.words)

    def contains_zero(self) -> bool:
        return self.words[0] == 0

    def codewords(self, cap: int = 2**20) -> list[int]:
        return list(self.words)

    def _compute_enumerator(self, cap):
        counts = [0] * (self.n + 1)
        for w in self.words:
            counts[popcount(w)] += 1
        return WeightEnumerator(self.n, tuple(counts))


@dataclass(frozen=True, eq=False)
class Z4GrayCode(_CodeBase):
    """Binary Gray image of the Z4-linear code spanned by ``z4_rows``."""

    z4_rows: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.z4_rows)
        if not rows:
            raise CodeValidationError("Z4 code needs at least one generator row")
        length = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != length:
                raise CodeValidationError(
                    f"row {i} has Z4 length {len(r)}, expected {length}"
                )
            if any(not 0 <= v < 4 for v in r):
                raise CodeValidationError(f"row {i} has entries outside Z4")
        _check_length(2 * length)
        object.__setattr__(self, "z4_rows", rows)

    @property
    def z4_length(self) -> int:
        return len(self.z4_rows[0])

    @property
    def n(self) -> int:
        return 2 * self.z4_length

    def image(self, cap: int = 2**24) -> ExplicitCode:
        cache = self.__dict__.setdefault("_cache", {})
        if "image" not in cache:
            cache["image"] = gray_map(self.z4_rows, self.z4_length, cap=cap, name=self.name)
        return cache["image"]

    @property
    def size(self) -> int:
        return self.image().size

    def codewords(self, cap: int = 2**24) -> list[int]:
        return self.image(cap).codewords()

    def _compute_enumerator(self, cap):
        return self.image().weight_enumerator()


def gray_map(
    z4_rows: Sequence[Sequence[int]], z4_length: int, cap: int = 2**24, name: str = ""
) -> ExplicitCode:
    """Binary image under the Gray map of the Z4 code generated by ``z4_rows``."""
    G = np.asarray(z4_rows, dtype=np.int64).reshape(len(z4_rows), z4_length)
    k = G.shape[0]
    total = 4**k
    if total > cap:
        raise EnumerationLimitError(total, cap)
    idx = np.arange(total, dtype=np.int64)
    digits = (idx[:, None] // (4 ** np.arange(k, dtype=np.int64))) % 4
    words4 = np.unique((digits @ G) % 4, axis=0)
    table = np.array(GRAY, dtype=np.uint8)
    bits = table[words4].reshape(len(words4), 2 * z4_length)
    return ExplicitCode(2 * z4_length, tuple(word_from_bits(b) for b in bits), name)


# ---------------------------------------------------------------------------
# constructions and metadata

def weight_enumerator(code, cap: int = DEFAULT_CAP) -> WeightEnumerator:
    return code.weight_enumerator(cap)


def direct_sum(codes: Sequence, name: str = ""):
    """Concatenation code C1 | C2 | ...; enumerator is the product of the parts."""
    if not codes:
        raise ValueError("direct_sum needs at least one code")
    if len(codes) == 1:
        return codes[0]
    n = sum(c.n for c in codes)
    if all(isinstance(c, LinearCode) for c in codes):
        rows = []
        offset = n
        for c in codes:
            offset -= c.n
            rows.extend(r << offset for r in c.rows)
        result = LinearCode(n, tuple(rows), name)
    else:
        words = [0]
        for c in codes:
            words = [(w << c.n) | v for w in words for v in c.codewords()]
        result = ExplicitCode(n, tuple(words), name)
    expected = codes[0].weight_enumerator()
    for c in codes[1:]:
        expected = expected * c.weight_enumerator()
    if result.weight_enumerator() != expected:
        raise RuntimeError("direct sum enumerator differs from the product of summands")
    return result


def _distance_profiles(words: Sequence[int], n: int) -> np.ndarray:
    M = len(words)
    profiles = np.zeros((M, n + 1), dtype=np.int64)
    if n <= 64:
        arr = np.array(words, dtype=np.uint64)
        for i in range(M):
            profiles[i] = np.bincount(np.bitwise_count(arr ^ arr[i]), minlength=n + 1)
    else:
        for i, a in enumerate(words):
            for b in words:
                profiles[i, popcount(a ^ b)] += 1
    return profiles


def distance_invariance_check(code, cap: int = 2**14) -> tuple[bool, int | None]:
    """True iff every codeword sees the same multiset of Hamming distances.

    Returns ``(verdict, witness)`` where ``witness`` is the first codeword whose
    distance profile differs from that of the smallest codeword.  This is a
    necessary condition for geometric uniformity only.
    """
    if isinstance(code, LinearCode):
        return True, None
    words = code.codewords()
    if len(words) > cap:
        raise EnumerationLimitError(len(words), cap)
    profiles = _distance_profiles(words, code.n)
    for i in range(1, len(words)):
        if not np.array_equal(profiles[i], profiles[0]):
            return False, words[i]
    return True, None


def min_distance(code) -> int:
    if code.size < 2:
        raise PreconditionError("single-codeword code has no minimum distance")
    if isinstance(code, LinearCode):
        return code.weight_enumerator().min_distance()
    profiles = _distance_profiles(code.codewords(), code.n)
    return int(np.flatnonzero(profiles[:, 1:].sum(axis=0))[0]) + 1


def kissing_number(code) -> int:
    """Largest number of codewords at minimum distance from a single codeword."""
    d = min_distance(code)
    if isinstance(code, LinearCode):
        return code.weight_enumerator()[d]
    profiles = _distance_profiles(code.codewords(), code.n)
    return int(profiles[:, d].max())


def full_space(n: int, name: str = "") -> LinearCode:
    return LinearCode(n, tuple(1 << i for i in reversed(range(n))), name or f"F2^{n}")


def zero_code(n: int) -> ExplicitCode:
    return ExplicitCode(n, (0,), f"zero-{n}")
