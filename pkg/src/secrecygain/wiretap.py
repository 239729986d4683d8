"""Coset coding for the Gaussian wiretap channel over Construction A lattices.

A scheme is a triple A = B (+) C of binary codes: Bob's lattice is
(1/sqrt 2)(A + 2Z^n), Eve's is (1/sqrt 2)(C + 2Z^n), and the message is the
B-component.  Uniqueness of the decomposition is what makes the scheme
decodable.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf
from scipy import stats

from .codes import (
    LinearCode,
    distance_invariance_check,
    format_word,
    gf2_rank,
    gf2_reduce,
    span,
    word_to_bits,
)
from .exceptions import ConstructionError, DomainError, PreconditionError
from .theta import theta_construction_a

THREADS_ENV = "SECRECYGAIN_THREADS"
MAX_SIM_LENGTH = 8
MIN_TRIALS = 10_000
BLOCK_TRIALS = 10_000


def _words(code) -> list[int]:
    if hasattr(code, "codewords"):
        return sorted(code.codewords())
    return sorted(set(int(w) for w in code))


@dataclass(frozen=True)
class Decomposition:
    valid: bool
    witness: int | None = None
    reason: str = ""


def check_unique_decomposition(A, B, C) -> Decomposition:
    """Decide whether every a in A is b XOR c for exactly one (b, c) in B x C.

    On failure ``witness`` is the smallest word of A that is reached twice,
    or a word of B (+) C lying outside A.
    """
    a_words, b_words, c_words = _words(A), _words(B), _words(C)
    if 0 not in b_words or 0 not in c_words:
        raise PreconditionError("B and C must both contain the zero word")
    a_set = set(a_words)
    reached: dict[int, int] = {}
    for b in b_words:
        for c in c_words:
            reached[b ^ c] = reached.get(b ^ c, 0) + 1
    doubles = sorted(a for a, k in reached.items() if k > 1)
    if doubles:
        return Decomposition(False, doubles[0], "a word has two decompositions")
    outside = sorted(set(reached) - a_set)
    if outside:
        return Decomposition(False, outside[0], "B + C leaves A")
    if len(a_words) != len(b_words) * len(c_words):
        missing = sorted(a_set - set(reached))
        return Decomposition(False, missing[0], "|A| differs from |B| |C|")
    return Decomposition(True)


def _differences(words) -> set[int]:
    return {a ^ b for a in words for b in words}


def find_linear_B(C, A=None, n: int | None = None) -> LinearCode:
    """Search for a linear B with A = B (+) C uniquely.

    Candidates are XORs of three distinct words of C (together with the
    generators of A outside span(C)) plus those generators themselves,
    tried in increasing order.  A greedy pass is followed by a backtracking
    search when it gets stuck.
    """
    c_words = _words(C)
    if n is None:
        n = C.n if hasattr(C, "n") else max(c_words).bit_length()
    if 0 not in c_words:
        raise PreconditionError("C must contain the zero word")
    if A is None:
        a_words = span(gf2_reduce(c_words))
    else:
        a_words = _words(A)
    a_set = set(a_words)
    if not set(c_words) <= a_set:
        raise PreconditionError("C must be a subset of A")
    if len(a_words) % len(c_words):
        raise ConstructionError("|C| does not divide |A|")
    target = len(a_words) // len(c_words)
    if target & (target - 1):
        raise ConstructionError("|A| / |C| is not a power of two")
    dim = target.bit_length() - 1

    extras = []
    basis = gf2_reduce(c_words)
    for a in a_words:
        if _independent(a, basis):
            extras.append(a)
            basis.append(a)
    pool = c_words + extras
    candidates = set(extras)
    for x, y, z in itertools.combinations(pool, 3):
        candidates.add(x ^ y ^ z)
    candidates = sorted(v for v in candidates if v and v in a_set)
    c_diff = _differences(c_words)
    tried = 0

    def admissible(rows):
        words = span(rows)
        return not (_differences(words) & c_diff) - {0}

    def extend(rows, start):
        nonlocal tried
        if len(rows) == dim:
            return rows
        for i in range(start, len(candidates)):
            v = candidates[i]
            if not _independent(v, rows):
                continue
            tried += 1
            new = rows + [v]
            # B is a group, so B - B = B
            if set(span(new)) & c_diff - {0}:
                continue
            found = extend(new, i + 1)
            if found is not None:
                return found
        return None

    rows: list[int] = []
    for v in candidates:
        if len(rows) == dim:
            break
        if _independent(v, rows) and admissible(rows + [v]):
            rows.append(v)
        tried += 1
    if len(rows) != dim:
        rows = extend([], 0)
    if rows is None:
        raise ConstructionError(
            f"no linear complement found after {tried} candidate tests "
            f"over {len(candidates)} candidates"
        )
    B = LinearCode(n, tuple(rows), name="B")
    check = check_unique_decomposition(a_words, B, c_words)
    if not check.valid:
        raise ConstructionError(f"complement fails verification: {check.reason}")
    return B


def _independent(v: int, rows) -> bool:
    return gf2_rank(list(rows) + [v]) > len(gf2_reduce(rows))


@dataclass(frozen=True)
class CosetScheme:
    """Coset code A = B (+) C over F_2^n with a verified decomposition."""

    n: int
    A: tuple
    B: tuple
    C: tuple

    def __post_init__(self):
        for name in "ABC":
            object.__setattr__(self, name, tuple(_words(getattr(self, name))))
        check = check_unique_decomposition(self.A, self.B, self.C)
        if not check.valid:
            raise ConstructionError(
                f"invalid decomposition ({check.reason}); witness {format_word(check.witness, self.n)}"
            )

    @property
    def k(self) -> int:
        return int(math.log2(len(self.B)))

    def split(self) -> dict[int, tuple[int, int]]:
        """Map each a in A to its (b, c) components."""
        return {b ^ c: (b, c) for b in self.B for c in self.C}

    def eve_weight_enumerator(self):
        from .codes import ExplicitCode

        return ExplicitCode(self.n, self.C).weight_enumerator()


def half_integer_condition(translates, base: int) -> bool:
    """True when 2 u_i / base is an integer for every coordinate of every translate.

    This is what lets the theta-series bound on Eve's error probability go
    through for a packing U + base*Z^n.
    """
    return all((2 * int(u)) % base == 0 for vec in translates for u in vec)


def eve_bound(scheme: CosetScheme, sigma_e) -> float:
    """Upper bound on Eve's probability of guessing the message correctly.

    vol(Bob's lattice) (2 pi sigma^2)^(-n/2) Theta_Eve(i tau), tau = 1/(2 pi sigma^2).
    """
    if not sigma_e > 0:
        raise DomainError("sigma_e must be positive")
    ok, witness = distance_invariance_check(_explicit(scheme.n, scheme.C))
    if not ok:
        raise PreconditionError("Eve's code must be distance invariant")
    translates = [word_to_bits(c, scheme.n) for c in scheme.C]
    if not half_integer_condition(translates, 2):
        raise PreconditionError("translates violate the half-integer condition")
    with mp.workdps(30):
        sigma = mpf(sigma_e)
        tau = 1 / (2 * mp.pi * sigma**2)
        vol_b = mpf(2) ** (mpf(scheme.n) / 2) / len(scheme.A)
        theta = theta_construction_a(scheme.eve_weight_enumerator(), tau=tau, dps=30)
        bound = vol_b * (2 * mp.pi * sigma**2) ** (-mpf(scheme.n) / 2) * theta
    return float(bound)


def _explicit(n, words):
    from .codes import ExplicitCode

    return ExplicitCode(n, tuple(words))


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    z = stats.norm.ppf(0.5 + confidence / 2)
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return centre - half, centre + half


@dataclass(frozen=True)
class WiretapResult:
    sigma_e: float
    bound: float
    empirical_pce: float
    ci_low: float
    ci_high: float
    trials: int
    successes: int

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2


def _sample_radius(n: int, sigma: float) -> float:
    # radius holding all but 1e-6 of the noise-scale Gaussian mass, padded by
    # the covering radius of (1/sqrt 2) 2Z^n
    return sigma * math.sqrt(stats.chi2.isf(1e-6, n)) + math.sqrt(n / 2)


def _run_block(scheme, arrays, sigma, radius, count, seed_seq):
    rng = np.random.default_rng(seed_seq)
    n = scheme.n
    b_arr, c_arr, a_arr, a_to_b = arrays
    msg = rng.integers(len(b_arr), size=count)
    # r = (c + 2z)/sqrt 2 uniform over Eve's lattice points in the ball
    r2 = np.empty((count, n))
    filled = 0
    half = int(math.ceil((radius * math.sqrt(2) + 1) / 2))
    while filled < count:
        m = max(4 * (count - filled), 256)
        c_idx = rng.integers(len(c_arr), size=m)
        z = rng.integers(-half, half + 1, size=(m, n))
        pts = c_arr[c_idx] + 2 * z
        keep = pts[(pts * pts).sum(axis=1) <= 2 * radius * radius]
        take = min(len(keep), count - filled)
        r2[filled:filled + take] = keep[:take]
        filled += take
    y = (b_arr[msg] + r2) / math.sqrt(2) + rng.normal(0.0, sigma, size=(count, n))
    v = math.sqrt(2) * y
    best = np.full(count, np.inf)
    best_a = np.zeros(count, dtype=np.int64)
    for j, a in enumerate(a_arr):
        d = v - a
        d = d - 2 * np.rint(d / 2)
        dist = (d * d).sum(axis=1)
        better = dist < best
        best[better] = dist[better]
        best_a[better] = j
    return int(np.count_nonzero(a_to_b[best_a] == msg))


def simulate_wiretap(scheme: CosetScheme, sigma_e, trials: int, seed: int = 0,
                     workers: int | None = None) -> WiretapResult:
    """Monte Carlo estimate of Eve's probability of decoding the message.

    Eve runs an exact nearest-point decoder for Bob's lattice and keeps the
    B-part.  Trials run in fixed blocks with spawned seeds, so the estimate
    does not depend on the number of worker threads.
    """
    if scheme.n > MAX_SIM_LENGTH:
        raise PreconditionError(f"simulation supports n <= {MAX_SIM_LENGTH}")
    if trials < MIN_TRIALS:
        raise PreconditionError(f"need at least {MIN_TRIALS} trials")
    if not sigma_e > 0:
        raise DomainError("sigma_e must be positive")
    n = scheme.n
    b_arr = np.array([word_to_bits(b, n) for b in scheme.B], dtype=float)
    c_arr = np.array([word_to_bits(c, n) for c in scheme.C], dtype=np.int64)
    a_arr = np.array([word_to_bits(a, n) for a in scheme.A], dtype=float)
    b_index = {b: i for i, b in enumerate(scheme.B)}
    parts = scheme.split()
    a_to_b = np.array([b_index[parts[a][0]] for a in scheme.A])
    arrays = (b_arr, c_arr, a_arr, a_to_b)
    radius = _sample_radius(n, float(sigma_e))
    sizes = [BLOCK_TRIALS] * (trials // BLOCK_TRIALS)
    if trials % BLOCK_TRIALS:
        sizes.append(trials % BLOCK_TRIALS)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    if workers is None:
        workers = int(os.environ.get(THREADS_ENV, "1") or 1)
    jobs = [(scheme, arrays, float(sigma_e), radius, s, q) for s, q in zip(sizes, seeds)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(lambda job: _run_block(*job), jobs))
    else:
        hits = sum(_run_block(*job) for job in jobs)
    lo, hi = wilson_interval(hits, trials)
    return WiretapResult(float(sigma_e), eve_bound(scheme, sigma_e), hits / trials, lo, hi, trials, hits)
