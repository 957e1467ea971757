import io
import json

import numpy as np
import pytest

from fpure import CartierMap, FieldSpec, Ideal, PolynomialRing, maximal_ideal
from fpure.enumerator import (
    FixedIdealSet,
    LimitExceeded,
    Limits,
    branch_ideals,
    brute_force_fixed,
    count_subspaces,
    dehomogenize,
    enumerate_fixed,
    hyperplane_subspaces,
    homogenize,
    hyperplanes,
    is_homogeneous,
)

F2 = FieldSpec(2)
R = PolynomialRing(F2, ["x", "y"])


def I(*gens, ring=R):
    return Ideal(ring, list(gens))


EXAMPLE1 = {I("1"), I("x", "y"), I("x"), I("y"), I("x*y"), I()}


@pytest.mark.parametrize("q,s", [(2, 1), (2, 2), (2, 3), (3, 2), (4, 2), (5, 3), (2, 5)])
def test_hyperplane_count(q, s):
    hs = hyperplanes(q, s)
    assert len(hs) == (q**s - 1) // (q - 1)
    assert len(set(hs)) == len(hs)
    assert hs == sorted(hs)
    assert all(h.covector[h.lead] == 1 for h in hs)


def test_hyperplane_examples():
    assert len(hyperplanes(2, 2)) == 3
    assert len(hyperplanes(5, 3)) == 31
    assert [h.covector for h in hyperplanes(2, 1)] == [(1,)]
    with pytest.raises(ValueError):
        hyperplanes(2, 0)


def test_branch_ideals_example1():
    got = branch_ideals(maximal_ideal(R))
    assert set(got) == {I("x", "y^2"), I("y", "x^2"), I("x^2", "x*y", "x+y")}
    assert branch_ideals(I("x*y")) == [I("x^2*y", "x*y^2")]
    assert branch_ideals(I("1")) == [maximal_ideal(R)]
    with pytest.raises(ValueError):
        branch_ideals(I())


def test_branch_ideals_three_variables_over_f5():
    S = PolynomialRing(FieldSpec(5), ["x", "y", "z"])
    m = maximal_ideal(S)
    m2 = m * m
    out = branch_ideals(m)
    assert len(out) == 31 and len(set(out)) == 31
    for V in out:
        assert V.contains(m2) and m.contains(V) and V != m
        # two independent linear forms modulo m^2
        lin = [g for g in V.gb if g.degree() == 1]
        assert len(lin) == 2


def test_hyperplane_subspaces():
    F = FieldSpec(3)
    B = np.array([[1, 0, 2, 0], [0, 1, 1, 0], [0, 0, 0, 1]], dtype=np.int64)
    hs = hyperplane_subspaces(B, F)
    assert len(hs) == 13
    keys = {H.tobytes() for H in hs}
    assert len(keys) == 13
    assert all(H.shape == (2, 4) for H in hs)


def test_example1():
    phi = CartierMap(R("x*y"), 1)
    res = enumerate_fixed(phi)
    assert set(res) == EXAMPLE1
    assert res.complete
    assert res.stats["max_depth"] <= (phi.De + 1) ** 2
    assert set(brute_force_fixed(phi)) == EXAMPLE1


def test_example1_jobs_and_strategies_agree():
    phi = CartierMap(R("x*y"), 1)
    base = enumerate_fixed(phi)
    assert enumerate_fixed(phi, jobs=2) == base
    assert enumerate_fixed(phi, strategy="box") == base
    assert enumerate_fixed(phi, strategy="nakayama") == base


def test_small_oracle_cases():
    S = PolynomialRing(F2, ["x"])
    phi = CartierMap(S("x"), 1)
    assert enumerate_fixed(phi) == brute_force_fixed(phi)
    zero = CartierMap(S("0"), 1)
    assert set(enumerate_fixed(zero)) == {Ideal.zero(S)}
    assert set(brute_force_fixed(zero)) == {Ideal.zero(S)}


def test_hyperplane_branching_misses_ideals_outside_m_for_inhomogeneous_u():
    # <x+1> is fixed: I_1((x+1)^2) = <x+1>; it does not lie in <x>
    S = PolynomialRing(F2, ["x"])
    phi = CartierMap(S("x+1"), 1)
    oracle = brute_force_fixed(phi)
    assert Ideal(S, [S("x+1")]) in oracle
    assert enumerate_fixed(phi, strategy="nakayama") != oracle
    assert enumerate_fixed(phi, strategy="box") == oracle
    assert enumerate_fixed(phi, strategy="homogenize") == oracle
    assert enumerate_fixed(phi) == oracle


def test_subspace_branching_reaches_ideals_generated_by_hyperplanes():
    S = PolynomialRing(F2, ["x"])
    phi = CartierMap(S("x^2+x+1"), 1)
    assert enumerate_fixed(phi) == brute_force_fixed(phi)


def test_is_homogeneous():
    assert is_homogeneous(R("x*y+x^2"))
    assert not is_homogeneous(R("x*y+x"))
    assert is_homogeneous(R("0"))


def test_limits_and_partial_result():
    S = PolynomialRing(FieldSpec(5), ["x", "y", "z"])
    phi = CartierMap(S("(x^4+y^4+z^4)^4"), 1)
    with pytest.raises(LimitExceeded) as info:
        enumerate_fixed(phi, Limits(max_nodes=3))
    part = info.value.partial
    assert not part.complete
    assert part.to_json()["complete"] is False
    assert Ideal.zero(S) in part


def test_trace_events():
    buf = io.StringIO()
    enumerate_fixed(CartierMap(R("x*y"), 1), trace=buf)
    events = [json.loads(line) for line in buf.getvalue().splitlines()]
    kinds = {e["event"] for e in events}
    assert "node" in kinds
    # every fixed ideal, zero included, is first reported by the node reaching it
    assert sum(1 for e in events if e["event"] == "node" and e["new"]) == 6


def test_result_ordering_and_json():
    res = enumerate_fixed(CartierMap(R("x*y"), 1))
    ordered = res.sorted()
    assert ordered[0].is_unit() and ordered[-1].is_zero()
    data = res.to_json()
    assert data["count"] == 6 and data["field"] == "2" and data["vars"] == ["x", "y"]
    assert data["ideals"][0] == ["1"] and data["ideals"][-1] == []
    for gens in data["ideals"]:
        assert gens == sorted(gens)
    assert len(res.nonzero_proper()) == 4


def test_fixed_ideal_set_dedups():
    phi = CartierMap(R("x*y"), 1)
    s = FixedIdealSet(phi)
    assert s.add(I("x"))
    assert not s.add(I("x", "x^2"))
    assert len(s) == 1


def test_brute_force_cap():
    S = PolynomialRing(F2, ["x", "y"])
    with pytest.raises(ValueError):
        brute_force_fixed(CartierMap(S("x^3*y^3"), 1))
    assert count_subspaces(3, 2) == 16


def test_homogenize_round_trip():
    H = PolynomialRing(F2, ["x", "y", "t"])
    f = R("x^2*y + x + 1")
    fh = homogenize(f, H)
    assert fh == H("x^2*y + x*t^2 + t^3")
    assert is_homogeneous(fh)
    assert dehomogenize(Ideal(H, [fh]), R) == I("x^2*y + x + 1")
    assert homogenize(R("0"), H).is_zero()


@pytest.mark.parametrize("field,u", [
    (FieldSpec(2), "x*y+x"),
    (FieldSpec(2), "x*y+y+1"),
    (FieldSpec(3), "x^2*y+1"),
    (FieldSpec(3), "x*y+2*x+y"),
    (FieldSpec(2, 2, (1, 1, 1)), "x*y + z*x + 1"),
])
def test_homogenized_search_matches_oracle(field, u):
    S = PolynomialRing(field, ["x", "y"])
    phi = CartierMap(S(u), 1)
    got = enumerate_fixed(phi)
    assert got.stats["strategy"] == "homogenize"
    assert got == brute_force_fixed(phi)


def test_homogenized_search_limits():
    S = PolynomialRing(FieldSpec(3), ["x", "y"])
    phi = CartierMap(S("(x^2*y^2+x+2)^2"), 1)
    with pytest.raises(LimitExceeded) as info:
        enumerate_fixed(phi, Limits(max_nodes=2))
    assert not info.value.partial.complete
    assert Ideal.zero(S) in info.value.partial
