"""Lambda-endomorphisms of braces and endocabled cycle sets.

For a cycle set ``X`` with permutation brace ``G`` and an additive
endomorphism ``phi`` of ``G`` commuting with the lambda-action (or relatively
so), the endocabling ``X_phi`` is ``X`` with ``x *_phi y = lambda_{phi(lambda_x)}^{-1}(y)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import perm
from .brace import Brace, center, fix, is_left_ideal, permutation_brace
from .cycleset import CycleSet, diagonal, is_retractable, retraction_classes, validate
from .perm import CapExceeded, Permutation
from .report import Report


class NotAdditiveHom(ValueError):
    def __init__(self, witness):
        super().__init__(f"not an additive homomorphism at {witness}")
        self.witness = witness


class NotCentral(ValueError):
    pass


class NotCentralInGroupRing(ValueError):
    def __init__(self, witness):
        super().__init__(f"coefficients are not conjugation invariant at {witness}")
        self.witness = witness


class BraceMismatch(ValueError):
    pass


class NotRelativeEndo(ValueError):
    pass


class NotFullEndo(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LambdaEndo:
    brace: Brace
    image: np.ndarray
    is_full: bool
    is_relative: bool

    def __call__(self, g):
        return self.image[g]

    def key(self) -> tuple:
        return tuple(int(v) for v in self.image)

    def image_set(self) -> list[int]:
        return sorted(set(self.key()))


def classify(B: Brace, image) -> LambdaEndo:
    image = np.asarray(image, dtype=np.int64)
    if image.shape != (B.size,):
        raise ValueError(f"image must have length {B.size}")
    bad = np.argwhere(image[B.add] != B.add[image[:, None], image[None, :]])
    if len(bad):
        raise NotAdditiveHom(tuple(int(v) for v in bad[0]))
    # commute[g, h]: lambda_g(phi(h)) == phi(lambda_g(h))
    commute = B.lam[:, image] == image[B.lam]
    rows = np.unique(image)
    return LambdaEndo(B, image, bool(commute.all()), bool(commute[rows].all()))


def scalar_endo(B: Brace, k: int) -> LambdaEndo:
    return classify(B, B.scale(k, np.arange(B.size)))


def central_endo(B: Brace, z: int) -> LambdaEndo:
    if not B.is_central(z):
        raise NotCentral(f"{z} is not in the center")
    return classify(B, B.lam[z].copy())


def groupring_endo(B: Brace, coeffs: Mapping[int, int]) -> LambdaEndo:
    """``h -> sum k_g lambda_g(h)`` for a class function ``g -> k_g``."""
    for h in range(B.size):
        for g in range(B.size):
            conj = int(B.mul[B.mul[h, g], B.inv[h]])
            if coeffs.get(conj, 0) != coeffs.get(g, 0):
                raise NotCentralInGroupRing((h, g))
    image = np.zeros(B.size, dtype=np.int64)
    for g, k in coeffs.items():
        if k:
            image = B.add[image, B.scale(k, B.lam[g])]
    return classify(B, image)


def conjugacy_classes(B: Brace) -> list[list[int]]:
    seen = set()
    classes = []
    for g in range(B.size):
        if g in seen:
            continue
        cls = sorted({int(B.mul[B.mul[h, g], B.inv[h]]) for h in range(B.size)})
        seen.update(cls)
        classes.append(cls)
    return classes


def _same_brace(phi: LambdaEndo, psi: LambdaEndo) -> Brace:
    if phi.brace is not psi.brace:
        raise BraceMismatch("endomorphisms live on different braces")
    return phi.brace


def sum_endo(phi: LambdaEndo, psi: LambdaEndo) -> LambdaEndo:
    B = _same_brace(phi, psi)
    return classify(B, B.add[phi.image, psi.image])


def compose_endo(phi: LambdaEndo, psi: LambdaEndo) -> LambdaEndo:
    """``phi`` after ``psi``, classified afresh."""
    B = _same_brace(phi, psi)
    return classify(B, phi.image[psi.image])


def negate_endo(phi: LambdaEndo) -> LambdaEndo:
    return classify(phi.brace, phi.brace.neg[phi.image])


def _require_permutation_brace(B: Brace, X: CycleSet):
    if B.perms is None or B.gen is None or len(B.gen) != X.n:
        raise BraceMismatch("endomorphism is not defined on the permutation brace of this cycle set")


def cabling_table(X: CycleSet, phi: LambdaEndo) -> list[list[int]]:
    B = phi.brace
    _require_permutation_brace(B, X)
    rows = []
    for x in range(X.n):
        g = B.perms[int(phi.image[B.gen[x]])]
        # x *_phi y = g^{-1}(y), so row x lists the images of g^{-1}
        rows.append(list(g.inverse().images))
    return rows


def endocable(X: CycleSet, phi: LambdaEndo) -> CycleSet:
    if not (phi.is_full or phi.is_relative):
        raise NotRelativeEndo("cabling needs a (relative) lambda-endomorphism")
    return validate(cabling_table(X, phi))


def blocks(X: CycleSet, phi: LambdaEndo) -> list[list[int]]:
    """Classes of ``x ~ y`` iff ``phi(lambda_x) == phi(lambda_y)``."""
    if not phi.is_full:
        raise NotFullEndo("blocks need a full lambda-endomorphism")
    B = phi.brace
    _require_permutation_brace(B, X)
    key = [int(phi.image[B.gen[x]]) for x in range(X.n)]
    by_key: dict[int, list[int]] = {}
    for x, k in enumerate(key):
        by_key.setdefault(k, []).append(x)
    parts = sorted(by_key.values())
    for g in B.perms:
        for part in parts:
            assert len({key[g(x)] for x in part}) == 1, "block system is not G(X)-invariant"
    assert parts == retraction_classes(endocable(X, phi)), "blocks differ from retraction classes of X_phi"
    return parts


def phi_z(B: Brace, z: int) -> LambdaEndo:
    """``id - lambda_z``."""
    if not B.is_central(z):
        raise NotCentral(f"{z} is not in the center")
    return classify(B, B.add[np.arange(B.size), B.neg[B.lam[z]]])


def phi_z_report(B: Brace, z: int) -> Report:
    phi = phi_z(B, z)
    img = phi.image
    rep = Report()
    rep.check("phi_z.full", phi.is_full)
    # z - lambda_g(z)
    d = B.add[z, B.neg[B.lam[:, z]]]
    bad = np.flatnonzero(img != d)
    rep.check("phi_z.d", not len(bad), f"g={bad[:1].tolist()}")
    if z == 0:
        rep.skip("phi_z.z_not_in_image", "z=0")
    else:
        rep.check("phi_z.z_not_in_image", z not in set(img.tolist()), f"z={z}")
    if B.mul_order[z] > 2:
        for name in ("phi_z.a", "phi_z.b", "phi_z.c"):
            rep.skip(name, f"o(z)={B.mul_order[z]}")
        return rep
    image_set = np.unique(img)
    twice = B.add[img, img]
    bad = np.flatnonzero(img[img] != twice)
    ok_a = not len(bad) and (img[image_set] == B.add[image_set, image_set]).all()
    rep.check("phi_z.a", bool(ok_a), f"g={bad[:1].tolist()}")
    bad = image_set[B.lam[z, image_set] != B.neg[image_set]]
    rep.check("phi_z.b", not len(bad), f"g={bad[:1].tolist()}")
    two_g = B.add[image_set, image_set]
    bad = image_set[B.lam[image_set, z] != B.add[z, B.neg[two_g]]]
    rep.check("phi_z.c", not len(bad), f"g={bad[:1].tolist()}")
    return rep


def _perm_array(p: Permutation) -> np.ndarray:
    return np.array(p.images, dtype=np.int64)


def _mixed_law(tphi: np.ndarray, tpsi: np.ndarray):
    """First (x, y, z) violating (x *phi y) *psi (x *phi z) = (y *psi x) *phi (y *psi z)."""
    lhs = tpsi[tphi[:, :, None], tphi[:, None, :]]
    rhs = tphi[tpsi[:, :, None], tpsi[:, None, :]].transpose(1, 0, 2)
    bad = np.argwhere(lhs != rhs)
    return tuple(int(v) for v in bad[0]) if len(bad) else None


def _endo_checks(rep: Report, X: CycleSet, B: Brace, name: str, phi: LambdaEndo) -> CycleSet | None:
    try:
        Xp = endocable(X, phi)
    except ValueError as exc:
        rep.check(f"{name}.cycleset", False, exc)
        return None
    rep.check(f"{name}.cycleset", True)
    image = phi.image_set()
    group = perm.closure(Xp.sigma, degree=X.n)
    expected = {B.perms[g] for g in image}
    rep.check(f"{name}.group_is_image", set(group.elements) == expected,
              f"|G(X_phi)|={group.order} |phi(G)|={len(expected)}")
    rep.check(f"{name}.image_left_ideal", is_left_ideal(B, image))
    if phi.is_full:
        try:
            blocks(X, phi)
            rep.check(f"{name}.blocks", True)
        except AssertionError as exc:
            rep.check(f"{name}.blocks", False, exc)
    return Xp


def identity_suite(X: CycleSet, B: Brace | None = None) -> Report:
    """Check the endocabling identities over scalars, central lambda_z and their sums."""
    B = B or permutation_brace(X)
    rep = Report()
    n = X.n
    T = diagonal(X)
    Z = center(B).members
    rep.result("size", n)
    rep.result("brace_order", B.size)
    rep.result("center_order", len(Z))

    family: list[tuple[str, LambdaEndo]] = []
    for k in range(B.add_exponent):
        family.append((f"scalar[{k}]", scalar_endo(B, k)))
    for z in Z:
        family.append((f"lam[{z}]", central_endo(B, z)))

    tables: dict[tuple, np.ndarray] = {}
    diag: dict[tuple, np.ndarray] = {}

    def run(name, phi):
        key = phi.key()
        if key in tables:
            return tables[key]
        Xp = _endo_checks(rep, X, B, name, phi)
        if Xp is None:
            tables[key] = None
            return None
        t = Xp.as_array()
        tables[key] = t
        diag[key] = t[np.arange(n), np.arange(n)]
        return t

    for name, phi in family:
        rep.check(f"{name}.full", phi.is_full)
        run(name, phi)

    # T_{k id} = T^k
    for k in range(B.add_exponent + 1):
        phi = scalar_endo(B, k)
        run(f"scalar[{k}]", phi)
        rep.check(f"diag.scalar[{k}]", np.array_equal(diag[phi.key()], _perm_array(T**k)))

    for z in Z:
        lz = B.perms[z]
        conj = perm.compose(lz.inverse(), perm.compose(T, lz))
        phi = central_endo(B, z)
        rep.check(f"diag.lam[{z}]", np.array_equal(diag[phi.key()], _perm_array(conj)))
        rep.check(f"diag.commute[{z}]", perm.compose(T, conj) == perm.compose(conj, T))
        rep.extend(phi_z_report(B, z), prefix=f"z[{z}].")

    dual = scalar_endo(B, -1)
    Tinv = T.inverse()
    expected = [[X.lam[Tinv(x)](y) for y in range(n)] for x in range(n)]
    rep.check("dual", run("scalar[-1]", dual).tolist() == expected)

    for (na, phi), (nb, psi) in itertools.combinations_with_replacement(family, 2):
        tphi, tpsi = tables[phi.key()], tables[psi.key()]
        if tphi is None or tpsi is None:
            continue
        tag = f"{na}+{nb}"
        w = _mixed_law(tphi, tpsi)
        rep.check(f"mixed.{tag}", w is None, w)
        chi = sum_endo(phi, psi)
        rep.check(f"sum_full.{tag}", chi.is_full)
        tchi = run(tag, chi)
        if tchi is None:
            continue
        dphi, dpsi, dchi = diag[phi.key()], diag[psi.key()], diag[chi.key()]
        rep.check(f"diag_hom.{tag}", np.array_equal(dchi, dphi[dpsi]) and np.array_equal(dchi, dpsi[dphi]))
        ok = np.array_equal(tchi, tpsi[dphi[:, None], tphi]) and np.array_equal(tchi, tphi[dpsi[:, None], tpsi])
        rep.check(f"add_cablings.{tag}", ok)

    tab = X.as_array()
    for f in fix(B).members:
        lf = B.perms[f]
        la = _perm_array(lf)
        auto = np.array_equal(la[tab], tab[la[:, None], la[None, :]])
        rep.check(f"fix_auto[{f}]", auto and perm.compose(lf, T) == perm.compose(T, lf))
        conj = B.mul[B.mul[f], B.inv[f]]
        rep.check(f"fix_conj[{f}]", np.array_equal(B.lam[f], conj))
    return rep


def replacement_check(X: CycleSet, z: int, k: int, B: Brace | None = None) -> Report:
    B = B or permutation_brace(X)
    rep = Report()
    name = f"replacement[z={z},k={k}]"
    if B.size & (B.size - 1):
        rep.skip(name, "G(X) is not a 2-group")
        return rep
    if not B.is_central(z) or B.mul_order[z] != 2:
        rep.skip(name, "z is not a central involution")
        return rep
    phi = phi_z(B, z)
    kphi = classify(B, B.scale(k, phi.image))
    Xk = endocable(X, kphi)
    Bk = permutation_brace(Xk)
    d = Bk.add_exponent
    image = kphi.image_set()
    rep.result(f"{name}.d", d)
    rep.check(f"{name}.d_is_image_exponent", d == _lcm(B.add_order[image]))
    if not is_retractable(Xk) or d % 4:
        rep.skip(name, f"retractable={is_retractable(Xk)} d={d}")
        return rep
    others = [w for w in center(B).members if w != z and B.mul_order[w] == 2]
    rep.check(name, bool(others), "no second central involution")
    if others:
        rep.result(f"{name}.z_prime", others[0])
    return rep


def _lcm(values) -> int:
    return math.lcm(*(int(v) for v in values)) if len(values) else 1


def _additive_generators(B: Brace) -> list[int]:
    span = {0}
    gens = []
    while len(span) < B.size:
        best, best_span = None, None
        for g in sorted(range(B.size), key=lambda g: (-int(B.add_order[g]), g)):
            if g in span:
                continue
            new = _additive_closure(B, span, g)
            if best_span is None or len(new) > len(best_span):
                best, best_span = g, new
        gens.append(best)
        span = best_span
    return gens


def _additive_closure(B: Brace, span: set, g: int) -> set:
    result = set(span)
    frontier = list(result)
    while frontier:
        nxt = []
        for a in frontier:
            b = int(B.add[a, g])
            if b not in result:
                result.add(b)
                nxt.append(b)
            for s in list(span):
                c = int(B.add[a, s])
                if c not in result:
                    result.add(c)
                    nxt.append(c)
        frontier = nxt
    return result


def enumerate_lambda_endos(B: Brace, cap: int = 10**6) -> list[LambdaEndo]:
    """All full lambda-endomorphisms, by brute force over generator images."""
    gens = _additive_generators(B)
    cands = [[e for e in range(B.size) if B.add_order[g] % B.add_order[e] == 0] for g in gens]
    total = 1
    for c in cands:
        total *= len(c)
    if total > cap:
        raise CapExceeded(f"{total} candidate generator images exceed cap {cap}")
    found: dict[tuple, LambdaEndo] = {}
    for images in itertools.product(*cands):
        phi = _extend_hom(B, gens, images)
        if phi is None:
            continue
        endo = classify(B, phi)
        if endo.is_full:
            found.setdefault(endo.key(), endo)
    return [found[k] for k in sorted(found)]


def _extend_hom(B: Brace, gens, images):
    phi = [-1] * B.size
    phi[0] = 0
    queue = [0]
    for a in queue:
        for g, img in zip(gens, images):
            b = int(B.add[a, g])
            v = int(B.add[phi[a], img])
            if phi[b] == -1:
                phi[b] = v
                queue.append(b)
            elif phi[b] != v:
                return None
    return np.array(phi, dtype=np.int64)
