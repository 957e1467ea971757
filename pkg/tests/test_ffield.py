import itertools

import pytest

from fpure.ffield import FieldMismatchError, FieldSpec, parse_field

# modulus coefficients, constant term first
FIELDS = {
    2: (2, 1, None),
    3: (3, 1, None),
    4: (2, 2, (1, 1, 1)),
    5: (5, 1, None),
    7: (7, 1, None),
    8: (2, 3, (1, 1, 0, 1)),
    9: (3, 2, (1, 0, 1)),
    16: (2, 4, (1, 1, 0, 0, 1)),
    25: (5, 2, (3, 0, 1)),
}


def field(q):
    p, f, mod = FIELDS[q]
    return FieldSpec(p, f, mod)


def test_small_examples():
    assert FieldSpec(2).add(1, 1) == 0
    assert FieldSpec(5).mul(3, 4) == 2
    F4 = field(4)
    z = F4.gen()
    assert z * (z + 1) == F4(1)


def test_frobenius_examples():
    F4 = field(4)
    z = F4.gen()
    assert FieldSpec(2).frobenius(1, 3) == 1
    assert FieldSpec(5).frobenius(2, 1) == 2
    assert z.frobenius(1) == z + 1
    assert FieldSpec(2).inv_frobenius(1, 5) == 1
    assert FieldSpec(5).inv_frobenius(3, 2) == 3
    assert z.inv_frobenius(1) == z + 1


@pytest.mark.parametrize("q", sorted(FIELDS))
def test_field_axioms(q):
    F = field(q)
    els = list(range(F.q))
    assert len(els) == q
    for a, b in itertools.product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
        if b:
            assert F.mul(F.div(a, b), b) == a
    for a, b, c in itertools.product(els[:5], repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in els:
        if a:
            assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0


@pytest.mark.parametrize("q", sorted(FIELDS))
def test_frobenius_is_additive_and_inverse_round_trips(q):
    F = field(q)
    for e in range(1, 5):
        for a in range(F.q):
            assert F.inv_frobenius(F.frobenius(a, e), e) == a
            assert F.frobenius(a, e) == F.pow(a, F.p ** e)
            for b in range(F.q):
                assert F.frobenius(F.add(a, b), e) == F.add(F.frobenius(a, e), F.frobenius(b, e))


def test_frobenius_order_f_is_identity():
    F = field(16)
    assert all(F.frobenius(a, 4) == a for a in range(F.q))


def test_errors():
    F = FieldSpec(5)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    with pytest.raises(ValueError):
        FieldSpec(4)
    with pytest.raises(ValueError):
        FieldSpec(2, 2, (1, 0, 1))  # z^2+1 = (z+1)^2
    with pytest.raises(FieldMismatchError):
        FieldSpec(2)(1) + FieldSpec(3)(1)


def test_parse_field():
    assert parse_field("5") == FieldSpec(5)
    F = parse_field("4:1,1,1")
    assert F.q == 4 and F == field(4)
    for bad in ("6", "x", "4:1,0,1", "8:1,1,1"):
        with pytest.raises(ValueError):
            parse_field(bad)


def test_element_text_round_trip():
    for q in (4, 9, 25):
        F = field(q)
        for a in range(F.q):
            assert F.parse_element(F.format(a)) == a
