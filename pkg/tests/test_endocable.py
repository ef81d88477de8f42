import itertools

import numpy as np
import pytest

from endocab import brace as br
from endocab import cycleset as cs
from endocab import endocable as ec


@pytest.fixture(scope="module")
def B419(x419):
    return br.permutation_brace(x419)


def test_scalar_one_is_identity(x419, B419):
    assert ec.endocable(x419, ec.scalar_endo(B419, 1)) == x419


def test_scalar_zero_is_trivial(x419, B419):
    assert ec.endocable(x419, ec.scalar_endo(B419, 0)) == cs.trivial(4)


def test_scalar_two_squares_diagonal(x419, B419):
    X2 = ec.endocable(x419, ec.scalar_endo(B419, 2))
    assert cs.diagonal(X2) == cs.diagonal(x419) ** 2
    assert cs.is_retractable(X2)


def test_dual_formula(x419, B419):
    Xd = ec.endocable(x419, ec.scalar_endo(B419, -1))
    Tinv = cs.diagonal(x419).inverse()
    for x in range(4):
        for y in range(4):
            assert Xd.table[x][y] == x419.lam[Tinv(x)](y)


def test_central_endo(x419, B419):
    for z in br.center(B419):
        phi = ec.central_endo(B419, z)
        assert phi.is_full
        lz = B419.perms[z]
        assert cs.diagonal(ec.endocable(x419, phi)) == lz.inverse() * cs.diagonal(x419) * lz
    non_central = next(g for g in range(B419.size) if not B419.is_central(g))
    with pytest.raises(ec.NotCentral):
        ec.central_endo(B419, non_central)
    with pytest.raises(ec.NotCentral):
        ec.phi_z(B419, non_central)


def test_not_additive(B419):
    image = np.zeros(B419.size, dtype=np.int64)
    image[1] = 1
    with pytest.raises(ec.NotAdditiveHom):
        ec.classify(B419, image)


def test_groupring_endo(B419):
    classes = ec.conjugacy_classes(B419)
    assert sorted(g for c in classes for g in c) == list(range(B419.size))
    coeffs = {g: 1 for g in classes[-1]}
    phi = ec.groupring_endo(B419, coeffs)
    assert phi.is_full
    single = next(c for c in classes if len(c) > 1)[0]
    with pytest.raises(ec.NotCentralInGroupRing):
        ec.groupring_endo(B419, {single: 1})


def test_endo_algebra(B419):
    one, two = ec.scalar_endo(B419, 1), ec.scalar_endo(B419, 2)
    three = ec.sum_endo(one, two)
    assert three.key() == ec.scalar_endo(B419, 3).key()
    assert ec.compose_endo(two, two).key() == ec.scalar_endo(B419, 4).key()
    assert ec.negate_endo(one).key() == ec.scalar_endo(B419, -1).key()
    other = br.bk_brace(2)
    with pytest.raises(ec.BraceMismatch):
        ec.sum_endo(one, ec.scalar_endo(other, 1))


def test_cabling_needs_permutation_brace(x419):
    B = br.bk_brace(2)
    with pytest.raises(ec.BraceMismatch):
        ec.cabling_table(x419, ec.scalar_endo(B, 1))


def test_blocks_are_retraction_classes(x419, B419):
    for k in range(5):
        phi = ec.scalar_endo(B419, k)
        assert ec.blocks(x419, phi) == cs.retraction_classes(ec.endocable(x419, phi))


def test_non_relative_endo_refused(x419, B419):
    bad = ec.LambdaEndo(B419, np.zeros(B419.size, dtype=np.int64), False, False)
    with pytest.raises(ec.NotRelativeEndo):
        ec.endocable(x419, bad)
    with pytest.raises(ec.NotFullEndo):
        ec.blocks(x419, bad)


def _additive_endos(B):
    gens = ec._additive_generators(B)
    cands = [[e for e in range(B.size) if B.add_order[g] % B.add_order[e] == 0] for g in gens]
    for images in itertools.product(*cands):
        image = ec._extend_hom(B, gens, images)
        if image is not None:
            yield ec.classify(B, image)


def test_relative_endos_cable(corpus):
    """Relative lambda-endomorphisms that are not full still give cycle sets."""
    relative = 0
    for X in corpus:
        B = br.permutation_brace(X)
        for phi in _additive_endos(B):
            if phi.is_relative:
                Xp = ec.endocable(X, phi)
                relative += not phi.is_full
                assert Xp.n == X.n
            else:
                with pytest.raises(ec.NotRelativeEndo):
                    ec.endocable(X, phi)
    assert relative > 0


def test_phi_z_report(B419):
    for z in br.center(B419):
        rep = ec.phi_z_report(B419, z)
        assert rep.ok, str(rep)


def test_identity_suite_x4_19(x419):
    rep = ec.identity_suite(x419)
    assert rep.ok, "\n".join(c.line() for c in rep.failures)
    assert rep.count("PASS") > 100


def test_enumerated_endos_contain_scalars_and_centrals(B419):
    found = {e.key() for e in ec.enumerate_lambda_endos(B419)}
    for k in range(4):
        assert ec.scalar_endo(B419, k).key() in found
    for z in br.center(B419):
        assert ec.central_endo(B419, z).key() in found


def test_every_full_endo_cables(x419, B419):
    for phi in ec.enumerate_lambda_endos(B419):
        Xp = ec.endocable(x419, phi)
        assert ec.blocks(x419, phi) == cs.retraction_classes(Xp)


def test_replacement_check(x419):
    B = br.permutation_brace(x419)
    for z in br.center(B):
        for k in (1, 2):
            assert ec.replacement_check(x419, z, k, B).ok
