import random
from fractions import Fraction
from pathlib import Path

import pytest

from normext.corpus import all_abelian_groups, all_subgroups, prime_exponent_pairs, random_pseudonorm
from normext.extend import (
    ExtensionError,
    ExtensionProblem,
    build_chain,
    chain_extend,
    chain_steps,
    enumerate_representations,
    hungarian,
    min_matching_cost,
    pair_cost,
    prime_step_extend,
    rho,
)
from normext.groups import make_group, subgroup_closure
from normext.io import load_norm_file
from normext.oracles import box_representations, brute_force_assignment, brute_force_rho
from normext.pseudonorm import Pseudonorm, validate

DATA = Path(__file__).parent / "data"


def small_instances(rng, count, max_order=16):
    pairs = [(G, H, p) for G in all_abelian_groups(max_order) for H, p in prime_exponent_pairs(G)]
    for _ in range(count):
        G, H, p = rng.choice(pairs)
        yield ExtensionProblem(G, H, p, random_pseudonorm(H, rng), rng.randint(0, 2))


# -- assignment ---------------------------------------------------------------


def test_hungarian_against_permutations():
    rng = random.Random(5)
    for _ in range(200):
        cost = [[Fraction(rng.randint(0, 30), rng.randint(1, 6)) for _ in range(5)] for _ in range(5)]
        assignment, total = hungarian(cost)
        assert sorted(assignment) == list(range(5))
        assert total == sum(cost[i][j] for i, j in enumerate(assignment))
        assert total == brute_force_assignment(cost)


def test_hungarian_small_sizes():
    assert hungarian([]) == ((), 0)
    assert hungarian([[3]]) == ((0,), 3)
    assert hungarian([[4, 1], [2, 0]])[1] == 3
    rng = random.Random(2)
    for n in range(1, 7):
        cost = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        assert hungarian(cost)[1] == brute_force_assignment(cost)


def test_min_matching_cost_examples():
    cost = lambda a, b: abs(a - b)  # noqa: E731
    assert min_matching_cost([1, 2, 2], [2, 1, 2], cost, 0) == 0
    assert min_matching_cost([5], [], cost, 0) == 5
    assert min_matching_cost([3, 9], [8], cost, 0) == 4


# -- representations and rho: worked examples -------------------------------------


def test_enumerate_representations_examples(z4_half):
    G, H, N = z4_half
    P = ExtensionProblem(G, H, 2, N, cap=1)
    assert {(r.u, r.counts) for r in enumerate_representations((2,), P)} == {((2,), (0,)), ((0,), (2,))}
    assert {(r.u, r.counts) for r in enumerate_representations((1,), P)} == {((0,), (1,)), ((2,), (3,))}
    P0 = P.with_cap(0)
    assert [(r.u, r.counts) for r in enumerate_representations((0,), P0)] == [((0,), (0,))]


def test_representations_match_box_scan(rng):
    for P in small_instances(rng, 40):
        for x in P.domain.elements:
            ours = {(r.u, r.counts) for r in enumerate_representations(x, P)}
            assert ours == set(box_representations(x, P))


def test_pair_cost_examples(z4_half):
    G, H, N = z4_half
    P = ExtensionProblem(G, H, 2, N)
    g, mu = 0, P.mu
    assert pair_cost(g, g, P) == 0
    assert pair_cost(g, mu, P) == 1
    assert pair_cost(mu, g, P) == pair_cost(g, mu, P)


def test_rho_examples(z4_half):
    G, H, N = z4_half
    P = ExtensionProblem(G, H, 2, N)
    assert rho((2,), (0,), P) == 1
    assert rho((1,), (0,), P) == 1
    for x in G.elements:
        assert rho(x, x, P) == 0


def test_prime_step_examples(z4_half):
    G, H, N = z4_half
    ext = prime_step_extend(ExtensionProblem(G, H, 2, N))
    assert ext.norm.values == {(0,): 0, (1,): 1, (2,): 1, (3,): 1}
    for x in G.elements:
        assert ext.certificate_value(x) == ext.norm(x)

    V = make_group([2, 2])
    K = subgroup_closure(V, [(1, 0)])
    base = Pseudonorm(K, {(0, 0): 0, (1, 0): Fraction(7, 3)})
    out = prime_step_extend(ExtensionProblem(V, K, 2, base)).norm
    assert out.restrict(K) == base


def test_whole_group_is_fixed(rng):
    G = make_group([3, 3])
    H = subgroup_closure(G, [(1, 0), (0, 1)])
    N = random_pseudonorm(H, rng)
    assert prime_step_extend(ExtensionProblem(G, H, 3, N)).norm.values == N.values


def test_problem_preconditions(z4_half):
    G, H, N = z4_half
    with pytest.raises(ExtensionError, match="not prime"):
        ExtensionProblem(G, H, 4, N)
    with pytest.raises(ExtensionError, match="pG is not contained in H"):
        ExtensionProblem(make_group([8]), subgroup_closure(make_group([8]), [(4,)]), 2,
                         Pseudonorm(subgroup_closure(make_group([8]), [(4,)]), {(0,): 0, (4,): 1}))
    with pytest.raises(ExtensionError, match="not a pseudonorm"):
        ExtensionProblem(make_group([6]), subgroup_closure(make_group([6]), [(2,)]), 2,
                         Pseudonorm(subgroup_closure(make_group([6]), [(2,)]), {(0,): 0, (2,): 1, (4,): 3}))
    with pytest.raises(ExtensionError, match="cap"):
        ExtensionProblem(G, H, 2, N, cap=-1)


# -- rho properties ----------------------------------------------------------------


def test_rho_matches_brute_force(rng):
    for P in small_instances(rng, 120):
        G = P.domain
        for _ in range(3):
            x, y = rng.choice(G.elements), rng.choice(G.elements)
            assert rho(x, y, P) == brute_force_rho(x, y, P)


def test_pruning_matches_full_box(rng):
    for P in small_instances(rng, 80):
        G = P.domain
        for _ in range(4):
            x, y = rng.choice(G.elements), rng.choice(G.elements)
            assert rho(x, y, P) == rho(x, y, P, prune=False)


def test_rho_restriction_symmetry_invariance(rng):
    for P in small_instances(rng, 30):
        G, H, N = P.domain, P.sub, P.base
        E = G.elements
        for _ in range(8):
            x, y, z = rng.choice(E), rng.choice(E), rng.choice(E)
            assert rho(x, y, P) == rho(y, x, P)
            assert rho(x, y, P) == rho(G.add(x, z), G.add(y, z), P)
            assert rho(x, y, P) <= rho(x, z, P) + rho(z, y, P)
        for h in H.elements:
            for k in H.elements:
                assert rho(h, k, P) == N(G.sub(h, k))


def test_lower_bound_on_every_representation_pair(rng):
    # inside H no representation pair undercuts |x - y|_H
    for P in small_instances(rng, 25):
        G, H, N = P.domain, P.sub, P.base
        costs = P._pair_costs
        for _ in range(3):
            x, y = rng.choice(H.elements), rng.choice(H.elements)
            for rx in enumerate_representations(x, P):
                for ry in enumerate_representations(y, P):
                    w = min_matching_cost(rx.multiset(), ry.multiset(), lambda a, b: costs[a][b], P.mu)
                    assert N(G.sub(rx.u, ry.u)) + w >= N(G.sub(x, y))


def test_extension_sweep_small(rng):
    for G in all_abelian_groups(16):
        for H, p in prime_exponent_pairs(G):
            N = random_pseudonorm(H, rng)
            ext = prime_step_extend(ExtensionProblem(G, H, p, N))
            assert ext.norm.restrict(H) == N
            assert validate(ext.norm)
            for x in G.elements:
                assert ext.certificate_value(x) == ext.norm(x)


def test_cap_one_is_not_enough():
    # a corpus instance where the capped infimum at cap 1 is not attained
    N = load_norm_file(DATA / "cap1_counterexample.json")
    G = make_group([4, 4, 4])
    H = N.carrier
    low = prime_step_extend(ExtensionProblem(G, H, 2, N, cap=1), check=False).norm
    assert low((1, 1, 1)) == Fraction(52, 3)
    assert not validate(low)
    with pytest.raises(ExtensionError):
        prime_step_extend(ExtensionProblem(G, H, 2, N, cap=1))
    for cap in (2, 3):
        ext = prime_step_extend(ExtensionProblem(G, H, 2, N, cap=cap)).norm
        assert ext((1, 1, 1)) == 14


# -- chains -------------------------------------------------------------------------


def test_build_chain_examples():
    Z4, Z6 = make_group([4]), make_group([6])
    assert build_chain(Z4, subgroup_closure(Z4, [])).primes == [2, 2]
    assert build_chain(Z6, subgroup_closure(Z6, [])).primes == [2, 3]
    assert build_chain(Z6, subgroup_closure(Z6, [(1,)])).primes == []


def test_chain_plan_invariants():
    for G in all_abelian_groups(32):
        for H in all_subgroups(G):
            plan = build_chain(G, H)
            prev = H
            for p, nxt in plan.steps:
                assert all(G.mul(p, x) in prev for x in nxt.elements)
                # each step is a nontrivial elementary abelian p-extension
                step_index = len(nxt) // len(prev)
                assert step_index > 1 and p ** _log(step_index, p) == step_index
                prev = nxt
            assert len(prev) == G.order
            assert plan.primes == sorted(plan.primes)


def _log(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    assert n == 1, "index is not a power of p"
    return k


def test_chain_extend_examples():
    Z4 = make_group([4])
    K = subgroup_closure(Z4, [])
    out = chain_extend(Z4, K, Pseudonorm(K, {(0,): 0}))
    assert validate(out) and out((0,)) == 0

    Z6 = make_group([6])
    H = subgroup_closure(Z6, [(3,)])
    out = chain_extend(Z6, H, Pseudonorm(H, {(0,): 0, (3,): 2}))
    assert out((3,)) == 2 and validate(out)


def test_single_step_chain_is_prime_step(z4_half):
    G, H, N = z4_half
    assert chain_extend(G, H, N) == prime_step_extend(ExtensionProblem(G, H, 2, N)).norm.recarry(G)


def test_chain_monotonicity(rng):
    for G in all_abelian_groups(36):
        for H in all_subgroups(G):
            base = random_pseudonorm(H, rng)
            norm, carrier = base, H
            for p, nxt, ext in chain_steps(G, H, base):
                assert ext.norm.restrict(carrier) == norm.recarry(carrier)
                norm, carrier = ext.norm, nxt
            assert norm.recarry(G).restrict(H) == base
