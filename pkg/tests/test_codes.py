import numpy as np
import pytest

from conftest import OCTACODE_ROWS, brute_force_dual_enumerator, random_linear_code
from secrecygain.codes import (
    ExplicitCode,
    LinearCode,
    WeightEnumerator,
    direct_sum,
    distance_invariance_check,
    format_word,
    gray_map,
    is_formally_self_dual,
    kissing_number,
    macwilliams_transform,
    min_distance,
    parse_word,
    span,
)
from secrecygain.exceptions import CodeValidationError, EnumerationLimitError


def test_word_round_trip():
    assert format_word(parse_word("0110"), 4) == "0110"
    with pytest.raises(CodeValidationError):
        parse_word("01a0")


def test_gray_map_small():
    code = gray_map([[2]], 1)
    assert sorted(code.codewords()) == [0b00, 0b11]


def test_nordstrom_robinson_enumerator():
    code = gray_map(OCTACODE_ROWS, 8)
    W = code.weight_enumerator()
    assert W.as_dict() == {0: 1, 6: 112, 8: 30, 10: 112, 16: 1}
    assert code.size == 256
    assert min_distance(code) == 6
    assert is_formally_self_dual(W).is_fsd


def test_nordstrom_robinson_is_distance_invariant():
    ok, witness = distance_invariance_check(gray_map(OCTACODE_ROWS, 8))
    assert ok and witness is None


def test_non_invariant_code_gives_witness():
    code = ExplicitCode(3, (0b000, 0b001, 0b011))
    ok, witness = distance_invariance_check(code)
    assert not ok
    assert witness in code.codewords()


def test_code_633(code633):
    W = code633.weight_enumerator()
    assert W.as_dict() == {0: 1, 3: 4, 4: 3}
    assert is_formally_self_dual(W).is_fsd
    assert kissing_number(code633) == 4


def test_non_fsd_rejected(non_fsd):
    cert = is_formally_self_dual(non_fsd)
    assert not cert.is_fsd
    assert cert.first_mismatch == 1


def test_odd_length_never_fsd():
    W = WeightEnumerator.from_dict(3, {0: 1, 3: 1})
    assert not is_formally_self_dual(W).is_fsd


@pytest.mark.parametrize("seed", range(10))
def test_macwilliams_matches_brute_force_dual(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 11))
    k = int(rng.integers(1, n + 1))
    code = random_linear_code(rng, n, k)
    dual = macwilliams_transform(code.weight_enumerator(), code.size)
    assert dual == brute_force_dual_enumerator(n, code.rows)


def test_macwilliams_rejects_non_integral():
    W = WeightEnumerator.from_dict(3, {0: 1, 1: 1})
    with pytest.raises(ValueError):
        macwilliams_transform(W, 3)


def test_direct_sum_enumerator_is_product(code633):
    rep = LinearCode(2, (0b11,))
    s = direct_sum([rep, code633])
    assert s.n == 8
    assert s.weight_enumerator() == rep.weight_enumerator() * code633.weight_enumerator()


def test_direct_sum_with_nonlinear_part():
    nr = gray_map(OCTACODE_ROWS, 8)
    rep = LinearCode(2, (0b11,))
    W = direct_sum([rep, nr]).weight_enumerator()
    expected = {0: 1, 2: 1, 6: 112, 8: 142, 10: 142, 12: 112, 16: 1, 18: 1}
    assert W.as_dict() == expected


def test_linear_code_rejects_dependent_rows():
    with pytest.raises(CodeValidationError):
        LinearCode(4, (0b1100, 0b0011, 0b1111))


def test_explicit_code_rejects_duplicates():
    with pytest.raises(CodeValidationError):
        ExplicitCode(2, (0, 3, 3))


def test_enumeration_cap():
    code = LinearCode(20, tuple(1 << i for i in range(20)))
    with pytest.raises(EnumerationLimitError) as err:
        code.weight_enumerator(cap=2**10)
    assert "2**10" in str(err.value) or "1024" in str(err.value)


def test_long_linear_code_uses_gray_walk():
    # 20 rows, beyond the numpy block, checked against binomial counts
    code = LinearCode(20, tuple(1 << i for i in range(20)))
    from math import comb

    assert code.weight_enumerator().counts == tuple(comb(20, w) for w in range(21))


def test_span_closure():
    words = span([0b1100, 0b1010])
    assert words == [0, 0b0110, 0b1010, 0b1100]


def test_enumerator_json_round_trip(enumerators):
    for W in enumerators.values():
        assert WeightEnumerator.from_json(W.to_json()) == W
