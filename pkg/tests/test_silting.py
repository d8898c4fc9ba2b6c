"""Presilting, coresolution, goodification and equivalence checks."""

import pytest

from siltcheck.fields import PrimeField
from siltcheck.linalg import Matrix
from siltcheck.algebra import Quiver, path_algebra
from siltcheck.complexes import (derived_hom_dim, direct_sum_complexes,
                                 is_acyclic, projective_complex)
from siltcheck.dg import dg_end
from siltcheck.silting import (cone_les_dims_ok, coresolve_A,
                               coresolution_les_ok, goodify, hom_les_dims_ok,
                               is_presilting, is_tilting, presilting_witness,
                               radical_rows, silting_equivalent,
                               silting_report)

F101 = PrimeField(101)


@pytest.fixture(scope="module")
def A2():
    return path_algebra(Quiver(["1", "2"], [("a", "1", "2")]), F101)


@pytest.fixture(scope="module")
def parts(A2):
    P1c = projective_complex(A2, {0: [0]})
    P2c = projective_complex(A2, {0: [1]})
    s1res = projective_complex(
        A2, {-1: [1], 0: [0]},
        {-1: Matrix(F101, 1, 2, [[F101.zero, F101.one]])})
    return P1c, P2c, s1res


@pytest.fixture(scope="module")
def regular(parts):
    P1c, P2c, _ = parts
    return direct_sum_complexes([P1c, P2c])


@pytest.fixture(scope="module")
def tilt(parts):
    P1c, _, s1res = parts
    return direct_sum_complexes([P1c, s1res])


@pytest.fixture(scope="module")
def silt2(parts):
    P1c, P2c, _ = parts
    return direct_sum_complexes([P2c, P1c.shift(1)])


@pytest.fixture(scope="module")
def wrong(parts):
    P1c, P2c, _ = parts
    return direct_sum_complexes([P1c, P2c.shift(1)])


def test_regular_complex_report(regular):
    r = silting_report(regular)
    assert r.presilting and r.presilting_witness is None
    assert r.n == 0
    assert r.multiplicities == [{0: 1, 1: 1}]
    assert r.good and r.tilting and r.module_form
    assert not r.inconclusive
    assert r.equivalence_criterion == "mutual-presilting"


def test_tilting_fixture_coresolution(tilt):
    cor = coresolve_A(tilt)
    assert cor is not None and cor.n == 1
    assert cor.multiplicities == [{0: 2}, {1: 1}]
    assert is_acyclic(cor.triangles[-1].cone)
    for tri in cor.triangles:
        assert cone_les_dims_ok(tri)
        assert hom_les_dims_ok(tri, tilt)
    assert coresolution_les_ok(cor, tilt)


def test_tilting_fixture_report(tilt):
    r = silting_report(tilt)
    assert r.presilting and r.good and r.tilting and r.module_form
    assert r.n == 1 and not r.inconclusive


def test_two_term_report(silt2):
    r = silting_report(silt2)
    assert r.presilting and r.presilting_witness is None
    assert r.n == 1
    assert r.multiplicities == [{0: 1}, {1: 1}]
    assert r.good
    assert not r.tilting and not r.module_form
    assert not r.inconclusive
    assert coresolution_les_ok(coresolve_A(silt2), silt2)


def test_tilting_check_two_sided(tilt, silt2):
    tc = is_tilting(silt2)
    assert not tc and not tc.inconclusive
    assert tc.witness == (-1, 1)
    assert not tc.module_form
    tc2 = is_tilting(tilt)
    assert tc2 and tc2.module_form and tc2.witness is None


def test_wrong_orientation_fails_with_witness(wrong):
    assert presilting_witness(wrong) == (1, 1)
    assert not is_presilting(wrong)
    r = silting_report(wrong, max_steps=4)
    assert not r.presilting and r.presilting_witness == (1, 1)
    assert r.inconclusive and r.n is None and r.multiplicities is None
    assert not r.good and not r.tilting


def test_step_cap_is_inconclusive_not_false(silt2):
    r = silting_report(silt2, max_steps=0)
    assert r.presilting
    assert r.inconclusive and r.n is None and not r.good


def test_presilting_matches_dg_end_cohomology(tilt, silt2):
    for U in (tilt, silt2):
        B = dg_end(U)
        for i in range(1, U.hi - U.lo + 1):
            assert B.h_dim(i) == 0
            assert derived_hom_dim(U, U, i) == 0


def test_equivalence_reflexive_and_additive(parts, tilt, silt2):
    P1c, _, s1res = parts
    assert silting_equivalent(silt2, silt2)
    doubled = direct_sum_complexes([P1c, s1res, P1c, s1res])
    assert silting_equivalent(tilt, doubled)


def test_equivalence_negatives(regular, tilt, silt2):
    assert not silting_equivalent(tilt, regular)
    assert not silting_equivalent(tilt, silt2)


def test_equivalence_preconditions(wrong, silt2):
    with pytest.raises(ValueError):
        silting_equivalent(wrong, silt2)


def test_goodify_regular_and_tilt(regular, tilt, parts):
    P1c, P2c, s1res = parts
    g = goodify(regular)
    assert [id(s) for s in g.summands] == [id(P1c), id(P2c)]
    g2 = goodify(tilt)
    assert [id(s) for s in g2.summands] == [id(P1c), id(P1c), id(s1res)]
    assert is_presilting(g2)
    assert silting_equivalent(tilt, g2)


def test_goodify_idempotent_up_to_equivalence(silt2, tilt):
    for U in (silt2, tilt):
        g = goodify(U)
        gg = goodify(g)
        assert gg is not None
        assert silting_equivalent(g, gg)
        r = silting_report(g)
        assert r.good and r.n is not None and r.n <= 1


def test_radical_of_h0(tilt):
    from siltcheck.dg import h0_algebra
    alg = h0_algebra(dg_end(tilt))
    rad = radical_rows(alg)
    # End of the tilting fixture: two local pieces linked by one radical map
    assert alg.dim == 3 and len(rad) == 1


def test_radical_rejects_small_characteristic():
    F2 = PrimeField(2)
    A = path_algebra(Quiver(["1", "2"], [("a", "1", "2")]), F2)
    U = direct_sum_complexes([projective_complex(A, {0: [0]}),
                              projective_complex(A, {0: [1]})])
    with pytest.raises(ValueError):
        coresolve_A(U)
