"""Finite braces of abelian type as explicit operation tables.

Element 0 is the identity of both groups.  ``lam[g, h]`` is the lambda-action
``g o h - g``.  For the permutation brace of a cycle set, the element attached
to a point ``x`` is ``lambda_x``, the inverse of the row permutation
``sigma_x``; its action on points is the permutation ``perms[g]``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from sympy import primefactors

from . import perm
from .cycleset import CycleSet, validate
from .perm import CapExceeded, Permutation

MATERIALIZE_CAP = 4096
EXHAUSTIVE_AXIOM_LIMIT = 512


class AxiomViolation(AssertionError):
    pass


class NotALeftIdeal(ValueError):
    pass


class NotCentral(ValueError):
    pass


class NotInvolution(ValueError):
    pass


class HypothesisFails(ValueError):
    def __init__(self, message, witness):
        super().__init__(f"{message}: {witness}")
        self.witness = witness


class Brace:
    def __init__(self, add, mul, perms=None, gen=None, words=None, check=True, seed=0):
        self.add = np.asarray(add, dtype=np.int64)
        self.mul = np.asarray(mul, dtype=np.int64)
        size = len(self.add)
        self.size = size
        idx = np.arange(size)
        self.inv = np.argmax(self.mul == 0, axis=1)
        self.add_order, self.multiples = _orders(self.add)
        self.mul_order, _ = _orders(self.mul)
        self.neg = self.multiples[self.add_order - 1, idx]
        # lam[g, h] = g o h - g
        self.lam = self.add[self.mul, self.neg[:, None]]
        self.perms = perms
        self.gen = gen
        self.words = words
        if check:
            check_axioms(self, seed=seed)

    def __len__(self):
        return self.size

    @property
    def add_exponent(self) -> int:
        return math.lcm(*map(int, self.add_order))

    @property
    def mul_exponent(self) -> int:
        return math.lcm(*map(int, self.mul_order))

    def scale(self, k: int, g):
        """``k * g`` in the additive group (``g`` may be an index array)."""
        return self.multiples[k % self.add_exponent, g]

    def additive_span(self, g: int) -> list[int]:
        return [int(self.multiples[k, g]) for k in range(int(self.add_order[g]))]

    def is_central(self, z: int) -> bool:
        return bool(np.array_equal(self.mul[z, :], self.mul[:, z]))


def _orders(table):
    """Element orders under ``table`` and the power table ``powers[k, g]``."""
    size = len(table)
    idx = np.arange(size)
    order = np.zeros(size, dtype=np.int64)
    rows = [np.zeros(size, dtype=np.int64)]
    cur = idx.copy()
    k = 1
    while True:
        newly = (cur == 0) & (order == 0)
        order[newly] = k
        if (order > 0).all():
            break
        rows.append(cur)
        cur = table[cur, idx]
        k += 1
        if k > size + 1:
            raise AxiomViolation("operation table is not a group")
    exp = math.lcm(*map(int, order))
    while len(rows) < exp:
        rows.append(cur)
        cur = table[cur, idx]
    return order, np.array(rows[:exp])


def check_axioms(B: Brace, seed: int = 0, samples: int = 10**5) -> None:
    """Raise :class:`AxiomViolation` unless ``B`` is a brace.

    The brace identity is tested on all triples up to
    ``EXHAUSTIVE_AXIOM_LIMIT`` elements and on random triples beyond.
    """
    add, mul, n = B.add, B.mul, B.size
    idx = np.arange(n)
    for name, t in (("+", add), ("o", mul)):
        if not (t[0] == idx).all() or not (t[:, 0] == idx).all():
            raise AxiomViolation(f"0 is not the identity of ({name})")
        if any(len(np.unique(row)) != n for row in t) or any(len(np.unique(col)) != n for col in t.T):
            raise AxiomViolation(f"({name}) is not a Latin square")
    if not np.array_equal(add, add.T):
        raise AxiomViolation("(+) is not commutative")
    if n <= EXHAUSTIVE_AXIOM_LIMIT:
        for a in range(n):
            if not (add[add[a]] == add[a][add]).all():
                raise AxiomViolation(f"(+) is not associative at a={a}")
            if not (mul[mul[a]] == mul[a][mul]).all():
                raise AxiomViolation(f"(o) is not associative at a={a}")
            lhs = mul[a][add]
            ab = mul[a]
            rhs = add[add[ab, B.neg[a]][:, None], ab[None, :]]
            if not (lhs == rhs).all():
                b, c = np.argwhere(lhs != rhs)[0]
                raise AxiomViolation(f"brace identity fails at {(a, int(b), int(c))}")
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        if not (add[add[a, b], c] == add[a, add[b, c]]).all():
            raise AxiomViolation("(+) is not associative")
        if not (mul[mul[a, b], c] == mul[a, mul[b, c]]).all():
            raise AxiomViolation("(o) is not associative")
        lhs = mul[a, add[b, c]]
        rhs = add[add[mul[a, b], B.neg[a]], mul[a, c]]
        if not (lhs == rhs).all():
            k = int(np.argmax(lhs != rhs))
            raise AxiomViolation(f"brace identity fails at {(int(a[k]), int(b[k]), int(c[k]))}")
    if n <= EXHAUSTIVE_AXIOM_LIMIT:
        lam = B.lam
        for g in range(n):
            if not (lam[g][add] == add[lam[g][:, None], lam[g][None, :]]).all():
                raise AxiomViolation(f"lambda_{g} is not additive")
        if not _lam_hom_ok(B):
            raise AxiomViolation("g -> lambda_g is not a homomorphism")


def _lam_hom_ok(B: Brace) -> bool:
    lam, mul = B.lam, B.mul
    for g in range(B.size):
        # lambda_{g o h}(a) == lambda_g(lambda_h(a)) for all h, a
        if not (lam[mul[g]] == lam[g][lam]).all():
            return False
    return True


def bk_brace(k: int) -> Brace:
    """The brace on Z_{2^k} with ``a o b = a + b - 2ab``."""
    m = 2**k
    if m > MATERIALIZE_CAP:
        raise CapExceeded(f"B_{k} has {m} elements")
    a = np.arange(m)[:, None]
    b = np.arange(m)[None, :]
    return Brace((a + b) % m, (a + b - 2 * a * b) % m)


def permutation_brace(X: CycleSet, cap: int | None = None, check: bool = True, seed: int = 0) -> Brace:
    """The brace structure on the permutation group of ``X``.

    Elements are numbered in breadth-first order of the additive closure of
    ``{lambda_x}``, using ``a + lambda_x = a o lambda_{a^-1(x)}``; each element
    records the generator word it was reached by.  The lambda-action is then
    obtained by rewriting words through ``lambda_g(lambda_x) = lambda_{g(x)}``.
    """
    cap = min(MATERIALIZE_CAP, perm.default_cap()) if cap is None else cap
    n = X.n
    lam_x = list(X.lam)
    identity = Permutation.identity(n)
    elements = [identity]
    index = {identity: 0}
    parent = [-1]
    last = [-1]
    inverses = [identity]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        a, a_inv = elements[i], inverses[i]
        for x in range(n):
            b = perm.compose(a, lam_x[a_inv(x)])
            if b not in index:
                if len(elements) >= cap:
                    raise CapExceeded(f"permutation brace exceeds {cap} elements")
                index[b] = len(elements)
                elements.append(b)
                inverses.append(b.inverse())
                parent.append(i)
                last.append(x)
                queue.append(index[b])
    size = len(elements)
    G = perm.closure(lam_x, cap=max(cap, size) + 1, degree=n)
    if set(G.elements) != set(elements):
        raise AxiomViolation("additive and multiplicative closures differ")

    gen = np.array([index[l] for l in lam_x], dtype=np.int64)
    point = np.array([e.images for e in elements], dtype=np.int64).reshape(size, n)
    inv_point = np.array([e.images for e in inverses], dtype=np.int64).reshape(size, n)
    # step[c, y] = c + lambda_y
    step = np.empty((size, n), dtype=np.int64)
    for c in range(size):
        for y in range(n):
            step[c, y] = index[perm.compose(elements[c], lam_x[inv_point[c, y]])]
    # rmul[c, y] = c o lambda_y
    rmul = np.empty((size, n), dtype=np.int64)
    for c in range(size):
        for y in range(n):
            rmul[c, y] = index[perm.compose(elements[c], lam_x[y])]

    lam = np.zeros((size, size), dtype=np.int64)
    for h in range(1, size):
        lam[:, h] = step[lam[:, parent[h]], point[:, last[h]]]

    mul = np.zeros((size, size), dtype=np.int64)
    mul[:, 0] = np.arange(size)
    gen_point = [lam_x.index(s) for s in G.generators]
    word_index = {w: i for i, w in enumerate(G.words)}
    for w, word in enumerate(G.words[1:], start=1):
        h = index[G.elements[w]]
        prev = index[G.elements[word_index[word[:-1]]]]
        # g o (prev o s) = (g o prev) o s
        mul[:, h] = rmul[mul[:, prev], gen_point[word[-1]]]

    inv = np.array([index[e] for e in inverses], dtype=np.int64)
    # a + b = a o lambda_{a^-1}(b)
    add = mul[np.arange(size)[:, None], lam[inv]]

    B = Brace(add, mul, perms=elements, gen=gen, words=_words(parent, last), check=check, seed=seed)
    if not np.array_equal(B.lam, lam):
        raise AxiomViolation("lambda table disagrees with the word rewriting")
    if check:
        t = np.array(X.table)
        if not (add[gen[:, None], gen[None, :]] == mul[gen[:, None], gen[t]]).all():
            raise AxiomViolation("lambda_x + lambda_y != lambda_x o lambda_{x*y}")
    return B


def _words(parent, last):
    words = [()]
    for i in range(1, len(parent)):
        words.append(words[parent[i]] + (last[i],))
    return words


@dataclass(frozen=True)
class BraceSubset:
    parent: Brace
    members: tuple[int, ...]
    kind: str  # "subgroup+", "left-ideal", "ideal", "subbrace", "subgroup-o"

    def __len__(self):
        return len(self.members)

    def __contains__(self, g):
        return g in self.members

    def __iter__(self):
        return iter(self.members)


def is_additive_subgroup(B: Brace, S: Iterable[int]) -> bool:
    S = set(S)
    return 0 in S and all(int(B.add[a, b]) in S for a in S for b in S)


def is_mul_subgroup(B: Brace, S: Iterable[int]) -> bool:
    S = set(S)
    return 0 in S and all(int(B.mul[a, b]) in S for a in S for b in S)


def is_subbrace(B: Brace, S) -> bool:
    return is_additive_subgroup(B, S) and is_mul_subgroup(B, S)


def is_left_ideal(B: Brace, S) -> bool:
    S = set(S)
    return is_additive_subgroup(B, S) and all(int(B.lam[g, h]) in S for g in range(B.size) for h in S)


def is_ideal(B: Brace, S) -> bool:
    S = set(S)
    if not is_left_ideal(B, S):
        return False
    return all(int(B.mul[B.mul[g, h], B.inv[g]]) in S for g in range(B.size) for h in S)


def socle(B: Brace) -> BraceSubset:
    idx = np.arange(B.size)
    members = tuple(int(g) for g in idx if (B.lam[g] == idx).all())
    assert is_ideal(B, members)
    return BraceSubset(B, members, "ideal")


def fix(B: Brace) -> BraceSubset:
    idx = np.arange(B.size)
    members = tuple(int(h) for h in idx if (B.lam[:, h] == h).all())
    assert is_left_ideal(B, members)
    return BraceSubset(B, members, "left-ideal")


def center(B: Brace) -> BraceSubset:
    members = tuple(g for g in range(B.size) if B.is_central(g))
    return BraceSubset(B, members, "subgroup-o")


def relative_fix(B: Brace, L: Iterable[int]) -> BraceSubset:
    L = sorted(set(L))
    if not is_left_ideal(B, L):
        raise NotALeftIdeal(f"{L} is not a left ideal")
    rows = B.lam[L]
    members = tuple(int(h) for h in range(B.size) if (rows[:, h] == h).all())
    if not is_subbrace(B, members):
        raise AxiomViolation("relative fix is not a subbrace")
    return BraceSubset(B, members, "subbrace")


def primary_component(B: Brace, primes: Iterable[int]) -> BraceSubset:
    primes = set(primes)
    members = tuple(g for g in range(B.size) if set(primefactors(int(B.add_order[g]))) <= primes)
    assert is_left_ideal(B, members)
    return BraceSubset(B, members, "left-ideal")


def orders_and_exponent(B: Brace):
    """``(additive orders, multiplicative orders, exp+, exp o)``."""
    return B.add_order.copy(), B.mul_order.copy(), B.add_exponent, B.mul_exponent


def dehornoy_class(B: Brace) -> int:
    return B.add_exponent


def central_involution_subbrace(B: Brace, z: int):
    """The additive span of a central involution and its identification with B_k.

    Returns ``(subset, iso, k)`` where ``iso[a] == a*z`` for ``a`` in Z_{2^k},
    i.e. the map ``a*z -> a`` onto :func:`bk_brace` is the inverse of ``iso``.
    """
    if not B.is_central(z):
        raise NotCentral(f"{z} is not central")
    if B.mul[z, z] != 0:
        raise NotInvolution(f"{z} o {z} != 0")
    span = B.additive_span(z)
    m = len(span)
    if m & (m - 1):
        raise AxiomViolation(f"additive order {m} of a central involution is not a power of 2")
    k = m.bit_length() - 1
    for a in range(m):
        for b in range(m):
            if B.mul[span[a], span[b]] != span[(a + b - 2 * a * b) % m]:
                raise AxiomViolation(f"az o bz != (a+b-2ab)z at a={a}, b={b}")
    assert is_subbrace(B, span)
    return BraceSubset(B, tuple(sorted(span)), "subbrace"), span, k


def brace_to_cycleset(B: Brace) -> CycleSet:
    """``g * h = lambda_g^{-1}(h)``."""
    table = B.lam[B.inv]
    return validate(table.tolist())


def check_cyclic_centralizing(B: Brace, a: int, b: int) -> bool:
    span_a, span_b = B.additive_span(a), B.additive_span(b)
    for mb in span_b:
        if B.mul[a, mb] != B.mul[mb, a]:
            raise HypothesisFails("a does not centralize <b>+", (a, mb))
    for ma in span_a:
        if B.mul[b, ma] != B.mul[ma, b]:
            raise HypothesisFails("b does not centralize <a>+", (b, ma))
    for ma in span_a:
        for nb in span_b:
            if B.mul[ma, nb] != B.mul[nb, ma]:
                raise AxiomViolation(f"<a>+ does not centralize <b>+ at {(ma, nb)}")
    return True


def serialize(B: Brace) -> str:
    lines = [str(B.size)]
    lines += [" ".join(map(str, row)) for row in B.add.tolist()]
    lines += [" ".join(map(str, row)) for row in B.mul.tolist()]
    return "\n".join(lines) + "\n"


def parse(text: str) -> Brace:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    size = int(lines[0])
    rows = [[int(t) for t in ln.split()] for ln in lines[1:]]
    if len(rows) != 2 * size or any(len(r) != size for r in rows):
        raise ValueError("malformed brace file")
    return Brace(rows[:size], rows[size:])
