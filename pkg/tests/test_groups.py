import itertools
from fractions import Fraction

import pytest

from normext.corpus import abelian_groups, all_abelian_groups, all_subgroups, prime_exponent_pairs
from normext.groups import (
    GroupError,
    Homomorphism,
    LatticeGroup,
    apply_hom,
    coordinates,
    divide_subgroup,
    identity_hom,
    is_prime,
    make_group,
    prime_factors,
    quotient,
    scale_subgroup,
    subgroup_closure,
    zero_hom,
)


def naive_closure(G, gens):
    """Add sums until nothing changes."""
    S = {G.zero, *gens}
    while True:
        new = S | {G.add(a, b) for a in S for b in S}
        if new == S:
            return sorted(S)
        S = new


def test_make_group_examples():
    assert make_group([4]).elements == ((0,), (1,), (2,), (3,))
    assert len(make_group([2, 2]).elements) == 4
    assert make_group([1]).elements == ((0,),)
    with pytest.raises(GroupError):
        make_group([0])


def test_arithmetic():
    G = make_group([2, 4])
    assert G.add((1, 3), (1, 2)) == (0, 1)
    assert G.neg((1, 1)) == (1, 3)
    assert G.mul(-3, (1, 1)) == (1, 1)
    assert G.combine([1, -1], [(1, 0), (0, 1)]) == (1, 3)
    assert G.element_order((0, 2)) == 2
    assert G.exponent == 4
    assert (2, 0) not in G and (1, 3) in G


def test_subgroup_closure_examples():
    Z4, Z6 = make_group([4]), make_group([6])
    assert subgroup_closure(Z4, [(2,)]).elements == ((0,), (2,))
    assert subgroup_closure(Z4, []).elements == ((0,),)
    assert subgroup_closure(Z6, [(2,)]).elements == ((0,), (2,), (4,))
    with pytest.raises(GroupError):
        subgroup_closure(Z4, [(4,)])


def test_closure_matches_naive(rng):
    for _ in range(60):
        G = rng.choice(all_abelian_groups(24))
        gens = [rng.choice(G.elements) for _ in range(rng.randint(0, 3))]
        S = subgroup_closure(G, gens)
        assert list(S.elements) == naive_closure(G, gens)
        assert S.is_closed()


def test_scale_examples():
    assert scale_subgroup(make_group([4]), 2).elements == ((0,), (2,))
    assert scale_subgroup(make_group([3]), 3).elements == ((0,),)
    assert scale_subgroup(make_group([2, 4]), 2).elements == ((0, 0), (0, 2))


def test_divide_inverts_scale():
    G = make_group([2, 4])
    K = subgroup_closure(G, [])
    assert divide_subgroup(G, 2, K).elements == ((0, 0), (0, 2), (1, 0), (1, 2))
    assert len(divide_subgroup(G, 4, K).elements) == 8


def test_quotient_examples():
    Z4 = make_group([4])
    Q = quotient(Z4, subgroup_closure(Z4, [(2,)]))
    assert len(Q.cosets) == 2 and Q.exponent == 2 and Q.basis == ((1,),)
    assert Q.mu_index == 1 and Q.g(1) == (0,)

    V = make_group([2, 2])
    Q = quotient(V, subgroup_closure(V, []))
    assert Q.exponent == 2 and len(Q.basis) == 2

    Z8 = make_group([8])
    Q = quotient(Z8, subgroup_closure(Z8, [(4,)]))
    assert Q.exponent == 4 and Q.basis is None
    with pytest.raises(GroupError):
        coordinates((1,), Q)


def test_coordinates_examples():
    Z4 = make_group([4])
    Q = quotient(Z4, subgroup_closure(Z4, [(2,)]))
    assert coordinates((1,), Q) == (1,)
    assert coordinates((2,), Q) == (0,)
    V = make_group([2, 2])
    Q = quotient(V, subgroup_closure(V, []))
    assert Q.basis == ((0, 1), (1, 0))
    assert coordinates((1, 1), Q) == (1, 1)


def test_coordinates_reconstruct_cosets():
    for G in all_abelian_groups(32):
        for H, p in prime_exponent_pairs(G):
            Q = quotient(G, H, p)
            for x in G.elements:
                c = coordinates(x, Q)
                assert all(0 <= a < p for a in c)
                assert G.sub(x, G.combine(c, Q.basis)) in H


def test_trivial_quotient_needs_prime():
    G = make_group([3])
    assert quotient(G, subgroup_closure(G, [(1,)])).basis is None
    assert quotient(G, subgroup_closure(G, [(1,)]), 3).basis == ()


def test_quotient_rejects_non_subgroups():
    G = make_group([4])
    with pytest.raises(GroupError):
        quotient(G, subgroup_closure(make_group([8]), [(2,)]))


def test_homomorphisms():
    h = Homomorphism(make_group([2]), make_group([4]), ((2,),))
    assert apply_hom(h, (1,)) == (2,)
    assert apply_hom(h, (0,)) == (0,)
    g = Homomorphism(make_group([4]), make_group([2]), ((1,),))
    assert apply_hom(g, (3,)) == (1,)
    assert g.is_additive() and identity_hom(make_group([2, 3])).is_additive()
    assert apply_hom(zero_hom(make_group([5]), make_group([3])), (4,)) == (0,)
    with pytest.raises(GroupError):
        Homomorphism(make_group([2]), make_group([4]), ((1,),))  # 2*1 != 0 in Z_4


def test_group_enumeration():
    assert [len(abelian_groups(n)) for n in (1, 8, 16, 32, 36, 64)] == [1, 3, 5, 7, 4, 11]
    assert len(all_abelian_groups(64)) == 117


def test_subgroup_counts():
    # known subgroup counts
    assert len(all_subgroups(make_group([2, 2]))) == 5
    assert len(all_subgroups(make_group([2, 2, 2]))) == 16
    assert len(all_subgroups(make_group([12]))) == 6
    assert len(all_subgroups(make_group([2, 4]))) == 8


def test_prime_helpers():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert prime_factors(360) == [2, 2, 2, 3, 3, 5]
    assert prime_factors(1) == []


def test_lattice_group():
    L = LatticeGroup(2, 6)
    x = L.check([Fraction(1, 2), Fraction(-1, 3)])
    assert L.add(x, L.neg(x)) == L.zero
    assert Fraction(1, 4) not in [a for a in x]
    assert (Fraction(1, 4), Fraction(0)) not in L
    assert L.is_integral((Fraction(1), Fraction(-2)))
    pts = LatticeGroup(1, 2).window(1)
    assert [p[0] for p in pts] == [Fraction(k, 2) for k in range(-2, 3)]
    assert len(L.window(Fraction(1, 2))) == 7 ** 2
    assert all(a * 6 == int(a * 6) for pt in itertools.islice(L.window(1), 50) for a in pt)
