"""Permutations, explicit permutation groups and affine maps on Z_m.

Points are 0-indexed.  Composition is the left-action convention:
``compose(p, q)`` is the map ``x -> p(q(x))``.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from sympy import factorint

DEFAULT_CAP = 2**16


def default_cap() -> int:
    """Element cap for closures; ``ENDOCABLE_CAP`` overrides it."""
    value = os.environ.get("ENDOCABLE_CAP")
    return int(value) if value else DEFAULT_CAP


class CapExceeded(RuntimeError):
    pass


class NotPrimePower(ValueError):
    pass


class Permutation:
    """A bijection of ``{0, ..., n-1}`` stored as its tuple of images."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> Permutation:
        images = list(range(n))
        for cycle in map(list, cycles):
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a] = b
        return cls(images)

    @classmethod
    def parse(cls, text: str) -> Permutation:
        return cls(int(tok) for tok in text.split())

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: Permutation):
        return self.images < other.images

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Permutation({list(self.images)})"

    def __str__(self):
        return " ".join(map(str, self.images))

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = compose(result, base)
            base = compose(base, base)
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.images) if i == j]

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles including fixed points, each starting at its minimum."""
        seen = [False] * self.n
        result = []
        for start in range(self.n):
            if seen[start]:
                continue
            cycle = []
            x = start
            while not seen[x]:
                seen[x] = True
                cycle.append(x)
                x = self.images[x]
            result.append(tuple(cycle))
        return result


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``p`` after ``q``."""
    if p.n != q.n:
        raise ValueError(f"degree mismatch: {p.n} != {q.n}")
    pi = p.images
    return Permutation(pi[j] for j in q.images)


class CycleStructure(NamedTuple):
    order: int
    cycle_type: tuple[int, ...]
    is_full_cycle: bool


def cycle_structure(p: Permutation) -> CycleStructure:
    lengths = tuple(sorted(len(c) for c in p.cycles()))
    order = math.lcm(*lengths) if lengths else 1
    return CycleStructure(order, lengths, lengths == (p.n,))


class PermGroup:
    """An explicitly enumerated permutation group.

    ``elements[i]`` equals the product of ``generators[w]`` over the word
    ``words[i]`` (left to right), and ``elements[0]`` is the identity.
    """

    def __init__(self, degree, generators, elements, words):
        self.degree = degree
        self.generators = list(generators)
        self.elements = list(elements)
        self.words = list(words)
        self.index = {g: i for i, g in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.index

    def __iter__(self):
        return iter(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def orbits(self) -> list[list[int]]:
        seen = [False] * self.degree
        result = []
        for start in range(self.degree):
            if seen[start]:
                continue
            orbit = [start]
            seen[start] = True
            for x in orbit:
                for g in self.generators:
                    y = g(x)
                    if not seen[y]:
                        seen[y] = True
                        orbit.append(y)
            result.append(sorted(orbit))
        return result

    def is_transitive(self) -> bool:
        return len(self.orbits()) <= 1

    def is_semiregular(self) -> bool:
        return all(g.is_identity() or not g.fixed_points() for g in self.elements)

    def centralizer(self, subset: Iterable[Permutation]) -> list[Permutation]:
        """Elements of the group commuting with every member of ``subset``."""
        subset = list(subset)
        return [g for g in self.elements if all(compose(g, s) == compose(s, g) for s in subset)]

    def center(self) -> list[Permutation]:
        return self.centralizer(self.generators)


def closure(generators: Iterable[Permutation], cap: int | None = None, degree: int | None = None) -> PermGroup:
    """Breadth-first closure of the generators under composition.

    Generators are deduplicated and sorted lexicographically first, so the
    element numbering depends only on the generating set.
    """
    cap = default_cap() if cap is None else cap
    gens = sorted(set(generators))
    if degree is None:
        if not gens:
            raise ValueError("degree required for an empty generating set")
        degree = gens[0].n
    if any(g.n != degree for g in gens):
        raise ValueError("generators of different degree")
    identity = Permutation.identity(degree)
    elements = [identity]
    words: list[tuple[int, ...]] = [()]
    index = {identity: 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        g = elements[i]
        for k, s in enumerate(gens):
            h = compose(g, s)
            if h not in index:
                if len(elements) >= cap:
                    raise CapExceeded(f"closure exceeds cap {cap}")
                index[h] = len(elements)
                elements.append(h)
                words.append(words[i] + (k,))
                queue.append(index[h])
    return PermGroup(degree, gens, elements, words)


def centralizer_of_permutation(p: Permutation, cap: int | None = None) -> list[Permutation]:
    """All permutations of the same degree commuting with ``p``.

    An element of the centralizer permutes the cycles of ``p`` of equal
    length among themselves and maps each one onto its image with a rotation,
    so the candidates are enumerated structurally rather than over ``n!``.
    """
    cap = default_cap() if cap is None else cap
    by_length: dict[int, list[tuple[int, ...]]] = {}
    for c in p.cycles():
        by_length.setdefault(len(c), []).append(c)
    size = 1
    for length, cycles in by_length.items():
        size *= math.factorial(len(cycles)) * length ** len(cycles)
    if size > cap:
        raise CapExceeded(f"centralizer of order {size} exceeds cap {cap}")

    per_length = []
    for length, cycles in by_length.items():
        options = []
        for targets in itertools.permutations(range(len(cycles))):
            for shifts in itertools.product(range(length), repeat=len(cycles)):
                mapping = []
                for src, tgt, shift in zip(cycles, targets, shifts):
                    dest = cycles[tgt]
                    mapping.extend((src[i], dest[(i + shift) % length]) for i in range(length))
                options.append(mapping)
        per_length.append(options)

    result = []
    for choice in itertools.product(*per_length):
        images = [0] * p.n
        for mapping in choice:
            for a, b in mapping:
                images[a] = b
        result.append(Permutation(images))
    return sorted(result)


@dataclass(frozen=True, order=True)
class AffineMap:
    """The map ``x -> alpha*x + beta`` on ``Z_m``."""

    modulus: int
    alpha: int
    beta: int

    def __post_init__(self):
        m = self.modulus
        object.__setattr__(self, "alpha", self.alpha % m)
        object.__setattr__(self, "beta", self.beta % m)
        if math.gcd(self.alpha, m) != 1 and m > 1:
            raise ValueError(f"slope {self.alpha} is not a unit mod {m}")

    def __call__(self, x: int) -> int:
        return (self.alpha * x + self.beta) % self.modulus

    def compose(self, other: AffineMap) -> AffineMap:
        """``self`` after ``other``."""
        m = self.modulus
        return AffineMap(m, self.alpha * other.alpha, self.alpha * other.beta + self.beta)

    def power(self, k: int) -> AffineMap:
        result = AffineMap(self.modulus, 1, 0)
        for _ in range(k):
            result = self.compose(result)
        return result

    def is_identity(self) -> bool:
        return self.modulus == 1 or (self.alpha == 1 % self.modulus and self.beta == 0)

    def is_fixed_point_free(self) -> bool:
        return all(self(x) != x for x in range(self.modulus))

    def as_permutation(self) -> Permutation:
        return Permutation(self(x) for x in range(self.modulus))

    def __str__(self):
        return f"x -> {self.alpha}x + {self.beta} (mod {self.modulus})"


def hol_enumerate(m: int) -> list[AffineMap]:
    """All affine maps with invertible slope, ordered by ``(alpha, beta)``."""
    if m < 1:
        raise ValueError("modulus must be positive")
    units = [a for a in range(m) if math.gcd(a, m) == 1] if m > 1 else [0]
    return [AffineMap(m, a, b) for a in units for b in range(m)]


def prime_power(m: int) -> tuple[int, int]:
    """Return ``(p, v)`` with ``m == p**v``; raise NotPrimePower otherwise."""
    factors = factorint(m)
    if len(factors) != 1:
        raise NotPrimePower(f"{m} is not a prime power")
    ((p, v),) = factors.items()
    return p, v


def classify_fixed_point_free(m: int, r: int) -> list[AffineMap]:
    """Fixed-point-free ``g`` in Hol(Z_m) with ``g**r == id``, by brute force."""
    p, _ = prime_power(m)
    if r not in (p, 2):
        raise ValueError(f"order bound {r} must be {p} or 2")
    return [g for g in hol_enumerate(m) if g.power(r).is_identity() and g.is_fixed_point_free()]


def predicted_fixed_point_free(m: int, r: int) -> list[AffineMap]:
    """Closed-form answer for :func:`classify_fixed_point_free`.

    Odd ``p`` with ``r == p``: the translations by nonzero multiples of
    ``p**(v-1)``.  ``r == 2`` with ``m`` a power of two: translation by
    ``m/2`` and the reflections ``x -> beta - x`` with odd ``beta``.
    """
    p, v = prime_power(m)
    step = p ** (v - 1)
    if p != 2 and r == p:
        return sorted(AffineMap(m, 1, i * step) for i in range(1, p))
    if p == 2 and r == 2:
        maps = {AffineMap(m, 1, step)} | {AffineMap(m, -1, b) for b in range(1, m, 2)}
        return sorted(maps)
    if r == 2:
        # odd p: an involution x -> -x + b always has the fixed point b/2
        return []
    raise ValueError(f"no closed form for m={m}, r={r}")


def shift_centralizer_involutions(v: int) -> list[Permutation]:
    """Fixed-point-free involutions of Z_{2^v} commuting with ``i -> i + 2``."""
    m = 2**v
    shift2 = Permutation((i + 2) % m for i in range(m))
    cands = centralizer_of_permutation(shift2)
    for c in cands:
        assert compose(c, shift2) == compose(shift2, c)
    ident = Permutation.identity(m)
    return [c for c in cands if compose(c, c) == ident and not c.fixed_points()]


def predicted_shift_centralizer_involutions(v: int) -> list[Permutation]:
    m = 2**v
    result = {Permutation((i + m // 2) % m for i in range(m))}
    for gamma in range(1, m, 2):
        result.add(Permutation((i + gamma) % m if i % 2 == 0 else (i - gamma) % m for i in range(m)))
    return sorted(result)
