"""Acceptance criteria 1-10.  A summary line per criterion is printed at the end of the run."""

import itertools
import time
from pathlib import Path

import numpy as np
import pytest
from sympy import primefactors, primerange

from endocab import brace as br
from endocab import cycleset as cs
from endocab import endocable as ec
from endocab import perm
from endocab import search
from endocab.search import Mode, Status

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "x4_19.cs"

# time allowances for the desk-scale criteria
N8_SECONDS = 300
N9_SECONDS = 290
N16_SECONDS = 6 * 3600


@pytest.fixture(scope="module")
def irretractable_4():
    return search.solve(search.build_model(4, diagonal="fullcycle", irretractable=True), Mode.ALL)


@pytest.fixture(scope="module")
def theorem_8():
    t0 = time.monotonic()
    rep = search.verify_theorem(search.FULLCYCLE_TWO, 8, max_seconds=N8_SECONDS)
    return rep, time.monotonic() - t0


@pytest.fixture(scope="module")
def full_corpus(corpus, irretractable_4, theorem_8):
    extra = list(irretractable_4.solutions) + list(theorem_8[0].solutions)
    return list(corpus) + extra


@pytest.fixture(scope="module")
def braces(full_corpus):
    return [(X, br.permutation_brace(X)) for X in full_corpus]


@pytest.mark.criterion(1)
def test_criterion_1_fixture():
    X = cs.load(FIXTURE)
    assert X == cs.x4_19()
    T = cs.diagonal(X)
    assert perm.cycle_structure(T).is_full_cycle and T.n == 4
    assert not cs.is_retractable(X)
    level = cs.mpl(X)
    assert level.level == cs.INFINITE
    assert level.stationary == X and len(level.tower) == 1
    B = br.permutation_brace(X)
    assert br.socle(B).members == (0,)
    assert cs.pi_type(X).is_p_type and cs.pi_type(X).primes_x == {2}


@pytest.mark.criterion(2)
def test_criterion_2_uniqueness_n4(irretractable_4):
    X419 = cs.load(FIXTURE)
    sols = irretractable_4.solutions
    assert irretractable_4.status is Status.SAT and sols
    assert all(cs.are_isomorphic(X, X419) is not None for X in sols)
    assert len(cs.dedupe_isomorphic(sols)) == 1


@pytest.mark.criterion(3)
def test_criterion_3_no_irretractable_n8(theorem_8):
    rep, seconds = theorem_8
    print(f"n=8: {rep.count} full-cycle cycle sets, {rep.stats.nodes} nodes, {seconds:.1f}s")
    assert rep.exhaustive, "n=8 enumeration did not finish within the time allowance"
    assert seconds <= N8_SECONDS
    assert rep.ok, [c.line() for c in rep.failures]
    assert rep.count > 0
    assert all(cs.is_retractable(X) for X in rep.solutions)
    assert search.solve(search.appendix_model(3), Mode.DECIDE).status is Status.UNSAT
    out = search.solve(search.build_model(8, diagonal="fullcycle", irretractable=True), Mode.DECIDE)
    assert out.status is Status.UNSAT


@pytest.mark.criterion(4)
@pytest.mark.extended
def test_criterion_4_appendix_v4():
    out = search.solve(search.appendix_model(4), Mode.DECIDE, max_seconds=N16_SECONDS)
    print(f"n=16: {out.status} after {out.stats.nodes} nodes, {out.stats.seconds:.0f}s")
    if out.status is Status.TIMEOUT:
        pytest.skip(f"budget exceeded after {out.stats.nodes} nodes; criterion not run")
    assert out.status is Status.UNSAT


@pytest.mark.criterion(5)
@pytest.mark.parametrize("n", [3, 5, 9])
def test_criterion_5_odd_prime_powers(n):
    rep = search.verify_theorem(search.FULLCYCLE_ODD, n, max_seconds=N9_SECONDS)
    assert rep.ok, [c.line() for c in rep.failures]
    assert all(cs.is_retractable(X) and cs.mpl(X).level != cs.INFINITE for X in rep.solutions)
    if not rep.exhaustive:
        # the partial run is still checked; report how far it got
        print(f"n={n}: budget exceeded; {rep.count} solutions verified after {rep.stats.nodes} nodes")
    else:
        print(f"n={n}: exhaustive, {rep.count} solutions, {rep.stats.nodes} nodes")


@pytest.mark.criterion(6)
def test_criterion_6_identity_suite(full_corpus):
    failures = []
    for X in full_corpus:
        rep = ec.identity_suite(X)
        failures += [(cs.serialize(X), c.line()) for c in rep.failures]
    assert not failures, failures[:5]


@pytest.mark.criterion(7)
def test_criterion_7_brace_facts(braces):
    for X, B in braces:
        assert B.size <= br.EXHAUSTIVE_AXIOM_LIMIT
        br.check_axioms(B)
        g = B.gen
        t = np.array(X.table)
        assert (B.add[g[:, None], g[None, :]] == B.mul[g[:, None], g[t]]).all()
        soc, fx = set(br.socle(B)), set(br.fix(B))
        assert set(br.center(B)) & fx <= soc
        primes = primefactors(B.size)
        if len(primes) == 1:
            assert len(fx) > 1
        assert br.dehornoy_class(B) % perm.cycle_structure(cs.diagonal(X)).order == 0


def _bk_structure(k):
    B = br.bk_brace(k)
    m = 2**k
    involutions = {a for a in range(m) if B.mul[a, a] == 0}
    assert involutions == {0, 1, m // 2, m // 2 + 1}
    one = {0, 1}
    evens = set(range(0, m, 2))
    products = {int(B.mul[a, e]) for a in one for e in evens}
    assert products == set(range(m)) and one & evens == {0}
    assert all(B.mul[a, b] in evens for a in evens for b in evens)
    assert max(int(B.mul_order[e]) for e in evens) == m // 2


@pytest.mark.criterion(8)
def test_criterion_8_bk(braces):
    for k in range(11):
        B = br.bk_brace(k)
        br.check_axioms(B)
        if k >= 2:
            _bk_structure(k)
    checked = 0
    for _, B in braces:
        for z in br.center(B):
            if z and B.mul[z, z] == 0:
                _, span, k = br.central_involution_subbrace(B, z)
                Bk = br.bk_brace(k)
                assert all(B.mul[span[a], span[b]] == span[Bk.mul[a, b]]
                           for a in range(2**k) for b in range(2**k))
                checked += 1
    assert checked > 0


@pytest.mark.criterion(9)
def test_criterion_9_holomorph():
    for p in primerange(2, 65):
        for v in itertools.count(1):
            m = p**v
            if m > 64:
                break
            for r in sorted({p, 2}):
                assert perm.classify_fixed_point_free(m, r) == perm.predicted_fixed_point_free(m, r), (m, r)
    for v in range(1, 7):
        assert perm.shift_centralizer_involutions(v) == perm.predicted_shift_centralizer_involutions(v), v


@pytest.mark.criterion(10)
def test_criterion_10_pi_type(full_corpus):
    for X in full_corpus:
        if cs.is_irreducible(X):
            assert cs.pi_type(X).is_pi_type
        if perm.cycle_structure(cs.diagonal(X)).is_full_cycle:
            assert cs.is_irreducible(X)
