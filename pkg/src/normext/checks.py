"""Invariant sweeps over generated corpora.

Each runner returns a CheckResult; the `check` subcommand and the acceptance
tests both go through here, so the two report the same numbers.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .corpus import all_abelian_groups, all_subgroups, prime_exponent_pairs, random_pseudonorm
from .extend import ExtensionProblem, chain_steps, prime_step_extend, rho
from .lattice import lattice_extend
from .oracles import brute_force_rho, transversal_exists
from .pseudonorm import validate
from .transversal import (
    DoublyStochasticMatrix,
    UniformCollection,
    birkhoff_decompose,
    is_transversal,
    p_fractional_transversal,
    transversal,
)
from .winding import discontinuity_report, pair_distance, triangle_sample, winding_norm

DEFAULT_SEED = 20240611


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: Optional[float] = 0.0  # None when timed together with another criterion

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        took = "same sweep" if self.seconds is None else f"{self.seconds:.1f}s"
        return f"[{status}] {self.number}. {self.name}: {self.detail} ({took})"


def _timed(fn: Callable[[], CheckResult]) -> CheckResult:
    t0 = time.perf_counter()
    res = fn()
    res.seconds = time.perf_counter() - t0
    return res


# -- criteria 1, 2, 4: the prime-step sweep ------------------------------------


@dataclass
class SweepStats:
    groups: int = 0
    pairs: int = 0
    extensions: int = 0
    restriction_failures: int = 0
    invalid: int = 0
    cap_changes: int = 0
    fallbacks: int = 0
    seconds: float = 0.0
    first_failure: str = ""


def extension_sweep(max_order=64, norms=20, cap=2, seed=DEFAULT_SEED) -> SweepStats:
    """Extend `norms` random pseudonorms for every (G, H, p) with pG in H."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    st = SweepStats()
    for G in all_abelian_groups(max_order):
        st.groups += 1
        for H, p in prime_exponent_pairs(G):
            st.pairs += 1
            for _ in range(norms):
                N = random_pseudonorm(H, rng)
                P = ExtensionProblem(G, H, p, N, cap)
                ext = prime_step_extend(P, check=False)
                st.extensions += 1
                st.fallbacks += ext.enumerated
                tag = f"G=Z{list(G.orders)} |H|={len(H)} p={p}"
                if ext.norm.restrict(H) != N:
                    st.restriction_failures += 1
                    st.first_failure = st.first_failure or f"restriction {tag}"
                if not validate(ext.norm, max_violations=1):
                    st.invalid += 1
                    st.first_failure = st.first_failure or f"validity {tag}"
                wider = prime_step_extend(P.with_cap(cap + 1), check=False)
                if wider.norm != ext.norm:
                    st.cap_changes += 1
                    st.first_failure = st.first_failure or f"cap {cap}->{cap + 1} {tag}"
    st.seconds = time.perf_counter() - t0
    return st


def sweep_results(st: SweepStats, cap=2) -> list[CheckResult]:
    scope = f"{st.groups} groups, {st.pairs} (G,H,p), {st.extensions} extensions"
    return [
        CheckResult(1, "restriction identity", st.restriction_failures == 0,
                    f"{st.restriction_failures} mismatches over {scope}", st.seconds),
        CheckResult(2, "pseudonorm validity", st.invalid == 0,
                    f"{st.invalid} invalid extensions over {scope}", None),
        CheckResult(4, "cap stability", st.cap_changes == 0,
                    f"{st.cap_changes} tables changed going from cap {cap} to {cap + 1}", None),
    ]


# -- criterion 3 -----------------------------------------------------------------


def oracle_equivalence(queries=1000, max_order=16, seed=DEFAULT_SEED) -> CheckResult:
    def run():
        rng = random.Random(seed)
        pairs = [(G, H, p) for G in all_abelian_groups(max_order) for H, p in prime_exponent_pairs(G)]
        bad = []
        caps = [0, 0, 0]
        for _ in range(queries):
            G, H, p = rng.choice(pairs)
            cap = rng.randint(0, 2)
            caps[cap] += 1
            P = ExtensionProblem(G, H, p, random_pseudonorm(H, rng), cap)
            x, y = rng.choice(G.elements), rng.choice(G.elements)
            if rho(x, y, P) != brute_force_rho(x, y, P):
                bad.append((G, x, y, cap))
        detail = f"{len(bad)} mismatches in {queries} queries (caps 0/1/2: {caps[0]}/{caps[1]}/{caps[2]})"
        return CheckResult(3, "oracle equivalence", not bad, detail)

    return _timed(run)


# -- criterion 5 -----------------------------------------------------------------


def random_collections(rng: random.Random, max_k=4, max_ground=20):
    k = rng.randint(1, max_k)
    n = rng.randint(k, max_ground)
    labels: list = list(range(n))
    if rng.random() < 0.2:
        labels = [f"s{i}" for i in labels]
    out = []
    for _ in range(2):
        pool = labels[:]
        rng.shuffle(pool)
        m = rng.randint(0, n // k)
        out.append(UniformCollection.of([pool[i * k:(i + 1) * k] for i in range(m)], k))
    return k, n, out[0], out[1]


def random_fractional(rng: random.Random, max_ground=30):
    p = rng.choice([2, 2, 3, 5])
    n = rng.randint(p, max_ground)
    labels = list(range(n))
    out = []
    for _ in range(2):
        pool = labels[:]
        rng.shuffle(pool)
        sets, i = [], 0
        while True:
            size = p * rng.randint(1, 3)
            if i + size > n or rng.random() < 0.15:
                break
            sets.append(pool[i:i + size])
            i += size
        out.append(sets)
    return p, out[0], out[1]


def transversal_contract(instances=1000, fractional=500, seed=DEFAULT_SEED) -> CheckResult:
    def run():
        rng = random.Random(seed)
        bad, oracle_runs = 0, 0
        for _ in range(instances):
            k, n, A, B = random_collections(rng)
            I = transversal(A, B)
            ok = is_transversal(I, A.sets + B.sets) and I <= (A.union | B.union)
            if n <= 12:
                oracle_runs += 1
                ok = ok and transversal_exists(A.sets + B.sets)
            bad += not ok
        fbad = 0
        for _ in range(fractional):
            p, A, B = random_fractional(rng)
            I = p_fractional_transversal(A, B, p)
            fbad += not is_transversal(I, A + B, fraction=p)
        detail = (f"{bad}/{instances} transversal failures ({oracle_runs} with exhaustive oracle), "
                  f"{fbad}/{fractional} p-fractional failures")
        return CheckResult(5, "transversal contract", bad == 0 and fbad == 0, detail)

    return _timed(run)


# -- criterion 6 -----------------------------------------------------------------


def random_doubly_stochastic(rng: random.Random, max_n=8) -> DoublyStochasticMatrix:
    """Random convex combination of permutation matrices with rational weights."""
    n = rng.randint(1, max_n)
    terms = rng.randint(1, n * n)
    weights = [rng.randint(1, 20) for _ in range(terms)]
    total = sum(weights)
    M = [[Fraction(0)] * n for _ in range(n)]
    for w in weights:
        sigma = list(range(n))
        rng.shuffle(sigma)
        for i, j in enumerate(sigma):
            M[i][j] += Fraction(w, total)
    return DoublyStochasticMatrix(tuple(tuple(r) for r in M))


def birkhoff_exactness(matrices=500, seed=DEFAULT_SEED) -> CheckResult:
    def run():
        rng = random.Random(seed)
        bad = 0
        most_terms = 0
        for _ in range(matrices):
            M = random_doubly_stochastic(rng)
            D = birkhoff_decompose(M)
            ok = (
                all(w > 0 for w, _ in D.terms)
                and D.weight() == 1
                and D.recompose(M.n) == [list(r) for r in M.entries]
                and len(D.terms) <= M.positive_entries()
            )
            most_terms = max(most_terms, len(D.terms))
            bad += not ok
        return CheckResult(6, "Birkhoff exactness", bad == 0,
                           f"{bad}/{matrices} failures, at most {most_terms} terms")

    return _timed(run)


# -- criterion 7 -----------------------------------------------------------------


def chain_sweep(max_order=64, norms=2, cap=2, seed=DEFAULT_SEED) -> CheckResult:
    def run():
        rng = random.Random(seed)
        pairs = chains = steps = 0
        bad = []
        for G in all_abelian_groups(max_order):
            for H in all_subgroups(G):
                pairs += 1
                for _ in range(norms):
                    base = random_pseudonorm(H, rng)
                    norm, carrier = base, H
                    ok = True
                    for p, nxt, ext in chain_steps(G, H, base, cap):
                        steps += 1
                        # every value already assigned must survive the step
                        ok = ok and ext.norm.restrict(carrier) == norm.recarry(carrier)
                        ok = ok and bool(validate(ext.norm, max_violations=1))
                        norm, carrier = ext.norm, nxt
                    final = norm.recarry(G)
                    ok = ok and final.restrict(H) == base and bool(validate(final, max_violations=1))
                    chains += 1
                    if not ok:
                        bad.append((G, H))
        detail = f"{len(bad)} failures over {pairs} (G,H) pairs, {chains} chains, {steps} prime steps"
        return CheckResult(7, "chain extension", not bad, detail)

    return _timed(run)


# -- criterion 8 -----------------------------------------------------------------


def winding_claims(kmax=20, samples=100_000, seed=DEFAULT_SEED, tol=1e-12) -> CheckResult:
    def run():
        problems = []
        rows = discontinuity_report(kmax)
        for r in rows:
            if abs(r.two_e_norm - 2.0 ** -r.k) > tol:
                problems.append(f"|2e_{r.k}| = {r.two_e_norm!r}")
            if not r.e_norm > 2:
                problems.append(f"|e_{r.k}| = {r.e_norm!r} is not > 2")
        rng = np.random.default_rng(seed)
        worst_excess = worst_ident = -np.inf
        for k in range(1, 6):
            s = triangle_sample(k, samples, rng)
            worst_excess = max(worst_excess, s.max_excess)
            if s.max_excess > tol:
                problems.append(f"triangle excess {s.max_excess:.3e} at k={k}")
        # identity check on scalar code paths, k drawn at random
        ks = rng.integers(1, kmax + 1, samples)
        ts = rng.uniform(-10, 10, samples)
        ss = rng.uniform(-10, 10, samples)
        for k, t, s in zip(ks.tolist(), ts.tolist(), ss.tolist()):
            worst_ident = max(worst_ident, abs(pair_distance(k, t, s) - winding_norm(k, t - s)))
        if worst_ident > tol:
            problems.append(f"pair_distance identity error {worst_ident:.3e}")
        detail = (f"k=1..{kmax}: |2e_k|=2^-k and |e_k|>2; triangle max excess {worst_excess:.2e}, "
                  f"identity max error {worst_ident:.2e}")
        if problems:
            detail = "; ".join(problems[:3])
        return CheckResult(8, "winding norm claims", not problems, detail)

    return _timed(run)


# -- criterion 9 -----------------------------------------------------------------


def lattice_case(window=8, cap=2) -> CheckResult:
    def run():
        vals = lattice_extend(1, 2, "abs-sum", window, cap)
        half = vals[(Fraction(1, 2),)]
        integral = {x: v for x, v in vals.items() if x[0].denominator == 1}
        restr = all(v == abs(x[0]) for x, v in integral.items())
        stable = lattice_extend(1, 2, "abs-sum", window, cap + 1) == vals
        ok = half == 1 and restr and stable and len(integral) == 2 * window + 1
        detail = (f"|1/2| = {half}; restriction to {len(integral)} integer points "
                  f"{'exact' if restr else 'WRONG'}; cap {cap}->{cap + 1} {'stable' if stable else 'CHANGED'}")
        return CheckResult(9, "lattice case", ok, detail)

    return _timed(run)


def run_all(max_order=64, norms=20, chain_norms=2, queries=1000, seed=DEFAULT_SEED, cap=2) -> list[CheckResult]:
    st = extension_sweep(max_order, norms, cap, seed)
    results = sweep_results(st, cap)
    results.append(oracle_equivalence(queries, min(max_order, 16), seed))
    results.append(transversal_contract(seed=seed))
    results.append(birkhoff_exactness(seed=seed))
    results.append(chain_sweep(max_order, chain_norms, cap, seed))
    results.append(winding_claims(seed=seed))
    results.append(lattice_case(cap=cap))
    return sorted(results, key=lambda r: r.number)
