"""Finite cycle sets given by their operation table.

``table[x][y]`` is ``x * y``.  The left translation ``sigma_x`` is row ``x``
and ``lam[x]`` is its inverse, so ``x * y == lam[x].inverse()(y)``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from sympy import primefactors

from . import perm
from .perm import Permutation, PermGroup

INFINITE = math.inf


class CycleSetError(ValueError):
    pass


class RowNotBijective(CycleSetError):
    def __init__(self, x):
        super().__init__(f"row {x} is not a bijection")
        self.x = x


class CycloidViolation(CycleSetError):
    def __init__(self, x, y, z):
        super().__init__(f"(x*y)*(x*z) != (y*x)*(y*z) at x={x}, y={y}, z={z}")
        self.witness = (x, y, z)


class DiagonalNotBijective(CycleSetError):
    def __init__(self):
        super().__init__("diagonal x -> x*x is not a bijection")


class NotIndecomposable(ValueError):
    pass


class SizeCapExceeded(ValueError):
    pass


class ParseError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CycleSet:
    table: tuple[tuple[int, ...], ...]
    sigma: tuple[Permutation, ...] = field(repr=False)
    lam: tuple[Permutation, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.table)

    def op(self, x: int, y: int) -> int:
        return self.table[x][y]

    def __eq__(self, other):
        return isinstance(other, CycleSet) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __len__(self):
        return len(self.table)

    def as_array(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64).reshape(self.n, self.n)


@dataclass(frozen=True)
class CycleSetHom:
    source: CycleSet
    target: CycleSet
    map: tuple[int, ...]

    def is_homomorphism(self) -> bool:
        f, s, t = self.map, self.source, self.target
        return all(f[s.table[x][y]] == t.table[f[x]][f[y]] for x in range(s.n) for y in range(s.n))

    def fibers(self) -> list[list[int]]:
        result = [[] for _ in range(self.target.n)]
        for x, fx in enumerate(self.map):
            result[fx].append(x)
        return result


def validate(table: Sequence[Sequence[int]]) -> CycleSet:
    """Check the axioms and build a :class:`CycleSet`.

    Raises the first violation found: a non-bijective row, a witness triple
    for the cycloid equation, or a non-bijective diagonal.
    """
    rows = tuple(tuple(int(v) for v in row) for row in table)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise CycleSetError("table is not square")
    if any(not 0 <= v < n for row in rows for v in row):
        raise CycleSetError("entry out of range")
    for x, row in enumerate(rows):
        if len(set(row)) != n:
            raise RowNotBijective(x)
    if n:
        t = np.array(rows, dtype=np.int64)
        # lhs[x, y, z] = (x*y)*(x*z)
        lhs = t[t[:, :, None], t[:, None, :]]
        bad = np.argwhere(lhs != lhs.transpose(1, 0, 2))
        if len(bad):
            raise CycloidViolation(*map(int, bad[0]))
    if len({rows[x][x] for x in range(n)}) != n:
        raise DiagonalNotBijective()
    sigma = tuple(Permutation(row) for row in rows)
    return CycleSet(rows, sigma, tuple(s.inverse() for s in sigma))


def trivial(n: int) -> CycleSet:
    return validate([list(range(n)) for _ in range(n)])


def diagonal(X: CycleSet) -> Permutation:
    return Permutation(X.table[x][x] for x in range(X.n))


def permutation_group(X: CycleSet, cap: int | None = None) -> PermGroup:
    return perm.closure(X.sigma, cap=cap, degree=X.n)


def retraction_classes(X: CycleSet) -> list[list[int]]:
    """Classes of equal rows, ordered by their smallest member."""
    by_row: dict[tuple, list[int]] = {}
    for x, row in enumerate(X.table):
        by_row.setdefault(row, []).append(x)
    return sorted(by_row.values())


def retract(X: CycleSet) -> tuple[CycleSet, CycleSetHom]:
    classes = retraction_classes(X)
    proj = [0] * X.n
    for k, cls in enumerate(classes):
        for x in cls:
            proj[x] = k
    table = [[proj[X.table[c[0]][d[0]]] for d in classes] for c in classes]
    # the relation is a congruence, so representatives do not matter
    for c in classes:
        for d in classes:
            assert len({proj[X.table[x][y]] for x in c for y in d}) == 1
    R = validate(table)
    return R, CycleSetHom(X, R, tuple(proj))


class Mpl(NamedTuple):
    level: float  # an int, or INFINITE
    tower: list[CycleSet]

    @property
    def stationary(self) -> CycleSet | None:
        return self.tower[-1] if self.level == INFINITE else None


def mpl(X: CycleSet) -> Mpl:
    """Multipermutation level with the retraction tower ``X, X_ret, ...``.

    The tower stops at a singleton or at the first retraction that does not
    shrink; the latter gives ``INFINITE``.
    """
    tower = [X]
    while tower[-1].n > 1:
        R, _ = retract(tower[-1])
        if R.n == tower[-1].n:
            return Mpl(INFINITE, tower)
        tower.append(R)
    return Mpl(len(tower) - 1 if tower[-1].n == 1 else 0, tower)


def is_retractable(X: CycleSet) -> bool:
    return len(set(X.table)) < X.n


def decomposition(X: CycleSet) -> tuple[list[list[int]], bool]:
    G = perm.PermGroup(X.n, X.sigma, [], [])
    orbits = G.orbits()
    for orb in orbits:
        members = set(orb)
        assert all(X.table[x][y] in members for x in orb for y in orb)
    return orbits, len(orbits) <= 1


def generated_subcycleset(X: CycleSet, S: Iterable[int]) -> list[int]:
    members = set(S)
    if not members:
        raise ValueError("generating set must be nonempty")
    frontier = list(members)
    while frontier:
        new = []
        for x in frontier:
            for y in list(members):
                for v in (X.table[x][y], X.table[y][x]):
                    if v not in members:
                        members.add(v)
                        new.append(v)
        frontier = new
    return sorted(members)


def is_irreducible(X: CycleSet) -> bool:
    return all(len(generated_subcycleset(X, [x])) == X.n for x in range(X.n))


def restrict(X: CycleSet, subset: Sequence[int]) -> tuple[CycleSet, list[int]]:
    """The sub-cycle set on ``subset``, relabelled ``0..k-1`` in sorted order."""
    members = sorted(subset)
    pos = {x: i for i, x in enumerate(members)}
    table = [[pos[X.table[x][y]] for y in members] for x in members]
    return validate(table), members


class PiType(NamedTuple):
    primes_x: frozenset
    primes_g: frozenset
    is_pi_type: bool
    is_p_type: bool


def pi_type(X: CycleSet, group: PermGroup | None = None) -> PiType:
    _, indecomposable = decomposition(X)
    if not indecomposable:
        raise NotIndecomposable("pi-type is defined for indecomposable cycle sets")
    group = group or permutation_group(X)
    px = frozenset(primefactors(X.n))
    pg = frozenset(primefactors(group.order))
    return PiType(px, pg, px == pg, px == pg and len(px) == 1)


def relabel(X: CycleSet, f: Sequence[int]) -> CycleSet:
    """The isomorphic copy on which ``f(x) * f(y) = f(x * y)``."""
    n = X.n
    table = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            table[f[x]][f[y]] = f[X.table[x][y]]
    return validate(table)


def disjoint_union(X: CycleSet, Y: CycleSet) -> CycleSet:
    """``X`` and a shifted copy of ``Y``; each acts trivially on the other."""
    n, m = X.n, Y.n
    table = [list(X.table[x]) + list(range(n, n + m)) for x in range(n)]
    table += [list(range(n)) + [n + v for v in Y.table[y]] for y in range(m)]
    return validate(table)


def _signatures(X: CycleSet) -> list[tuple]:
    T = diagonal(X)
    tlen = {}
    for c in T.cycles():
        for x in c:
            tlen[x] = len(c)
    return [(perm.cycle_structure(X.sigma[x]).cycle_type, tlen[x]) for x in range(X.n)]


def invariant(X: CycleSet) -> tuple:
    """An isomorphism invariant, used to bucket before exact tests."""
    sig = sorted(_signatures(X))
    return (X.n, tuple(sig), len(set(X.table)))


def are_isomorphic(X: CycleSet, Y: CycleSet, cap: int = 8) -> list[int] | None:
    """Return a bijection ``f`` with ``f(x*y) = f(x)*f(y)``, or ``None``."""
    if X.n != Y.n:
        return None
    n = X.n
    if n > cap:
        raise SizeCapExceeded(f"isomorphism search is limited to size {cap}")
    sx, sy = _signatures(X), _signatures(Y)
    if sorted(sx) != sorted(sy):
        return None
    cands = [[y for y in range(n) if sy[y] == sx[x]] for x in range(n)]
    tx, ty = X.table, Y.table

    def extend(f, inv, x, y):
        # assign f(x) = y and close under the operation; None on conflict
        f, inv = f[:], inv[:]
        queue = [(x, y)]
        while queue:
            a, b = queue.pop()
            if f[a] == b:
                continue
            if f[a] != -1 or inv[b] != -1 or sx[a] != sy[b]:
                return None
            f[a], inv[b] = b, a
            for c in range(n):
                if f[c] != -1:
                    queue.append((tx[a][c], ty[b][f[c]]))
                    queue.append((tx[c][a], ty[f[c]][b]))
        return f, inv

    def search(f, inv):
        try:
            x = f.index(-1)
        except ValueError:
            return f
        for y in cands[x]:
            if inv[y] == -1:
                nxt = extend(f, inv, x, y)
                if nxt is not None:
                    found = search(*nxt)
                    if found is not None:
                        return found
        return None

    return search([-1] * n, [-1] * n)


def dedupe_isomorphic(cyclesets: Iterable[CycleSet], cap: int = 8) -> list[CycleSet]:
    """Keep the first member of each isomorphism class, in input order."""
    buckets: dict[tuple, list[CycleSet]] = defaultdict(list)
    kept = []
    for X in cyclesets:
        bucket = buckets[invariant(X)]
        if any(are_isomorphic(X, Y, cap=cap) is not None for Y in bucket):
            continue
        bucket.append(X)
        kept.append(X)
    return kept


def serialize(X: CycleSet) -> str:
    lines = [str(X.n)] + [" ".join(map(str, row)) for row in X.table]
    return "\n".join(lines) + "\n"


def parse(text: str) -> CycleSet:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty cycle-set file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(f"bad size line: {lines[0]!r}") from None
    if len(lines) != n + 1:
        raise ParseError(f"expected {n} table rows, found {len(lines) - 1}")
    table = []
    for k, ln in enumerate(lines[1:], start=1):
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError:
            raise ParseError(f"row {k}: non-integer entry") from None
        if len(row) != n:
            raise ParseError(f"row {k}: expected {n} entries, found {len(row)}")
        if any(not 0 <= v < n for v in row):
            raise ParseError(f"row {k}: entry out of range 0..{n - 1}")
        table.append(row)
    return validate(table)


def load(path) -> CycleSet:
    with open(path) as fh:
        return parse(fh.read())


X_4_19_TABLE = ((1, 0, 2, 3), (3, 2, 0, 1), (0, 1, 3, 2), (2, 3, 1, 0))


def x4_19() -> CycleSet:
    """The irretractable size-4 cycle set whose diagonal is a 4-cycle."""
    return validate(X_4_19_TABLE)
