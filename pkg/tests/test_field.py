from itertools import product

import pytest

from mms.field import MAX_PRIME, Field, FieldError, field_make, is_prime


def test_make_primes():
    assert field_make(2).p == 2
    assert field_make(3).p == 3
    with pytest.raises(FieldError, match="not prime"):
        field_make(4)
    with pytest.raises(FieldError):
        field_make(1)
    with pytest.raises(FieldError):
        field_make(257)


def test_is_prime_matches_trial_division():
    naive = [k for k in range(2, 300) if all(k % d for d in range(2, k))]
    assert [k for k in range(300) if is_prime(k)] == naive
    assert MAX_PRIME == 251 and is_prime(MAX_PRIME)


def test_small_examples():
    f2, f3, f5 = Field(2), Field(3), Field(5)
    assert f2.add(1, 1) == 0
    assert f3.inv(2) == 2
    assert f2.neg(1) == 1
    assert f2.cmp(0, 1) < 0
    assert f3.cmp(1, 2) < 0
    assert f5.cmp(4, 4) == 0
    with pytest.raises(ZeroDivisionError):
        f5.inv(0)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_axioms_exhaustive(p):
    f = Field(p)
    els = list(f.elements())
    for a, b, c in product(els, els, els):
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    for a in els:
        assert f.add(a, f.neg(a)) == 0
        assert f.sub(a, a) == 0


def test_inverses_all_supported_primes():
    for p in range(2, MAX_PRIME + 1):
        if not is_prime(p):
            continue
        f = Field(p)
        for a in range(1, p):
            assert f.mul(f.inv(a), a) == 1


def test_order_is_total():
    f = Field(7)
    els = list(f.elements())
    for a, b in product(els, els):
        assert (f.cmp(a, b) == 0) == (a == b)
        assert f.cmp(a, b) == -f.cmp(b, a)


def test_element_wrapper():
    f = Field(5)
    x, y = f(3), f(4)
    assert (x + y).value == 2
    assert (x * y).value == 2
    assert (x - y).value == 4
    assert (-x).value == 2
    assert x < y
    with pytest.raises(ValueError):
        _ = x + Field(7)(1)
