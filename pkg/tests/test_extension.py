import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ccext.cyclic_auto import relation_holds
from ccext.epf import enumerate_epfs, validate_epf
from ccext.errors import NotExactProduct
from ccext.extension import (
    build_extension,
    classify_equivalence,
    equivalent_pairs,
    ext_inverse,
    ext_multiply,
    extension_from_json,
    extension_to_json,
    extract_pair,
    pair_isomorphism,
    skew_product,
    to_cayley,
    verify_structure,
)
from ccext.groups import (
    center,
    core_of_subgroup,
    cyclic_group,
    dihedral_group,
    direct_product,
    find_isomorphism,
    subgroup_generated,
)
from ccext.skewmorph import enumerate_skew, validate_skew

import oracles

TIMES3 = validate_skew(cyclic_group(8), [3 * x % 8 for x in range(8)])
REFERENCE = {(s, t): e for e, (s, t) in zip(
    enumerate_epfs(TIMES3, 8), [(0, 1), (1, 3), (1, 1), (2, 1), (3, 3), (3, 1)])}
ID2 = validate_skew(cyclic_group(2), [0, 1])
DIHEDRAL_PI = validate_epf(ID2, 4, [1, 3])


def test_reference_table_labels():
    # sanity check on the (s, t) keys: Pi(x) = 1 + 2s(1 + t + ... + t^(x-1))
    for (s, t), e in REFERENCE.items():
        assert e.values[1] == (1 + 2 * s) % 8
        assert e.values[3] == (1 + 2 * s * (1 + t + t * t)) % 8


def test_table_matches_definition_oracle():
    for e in [DIHEDRAL_PI, *REFERENCE.values()]:
        ext = build_extension(e)
        oracle = oracles.ext_table(e.group.mul.tolist(), list(e.skew.perm), e.values, e.n)
        assert ext.table.tolist() == oracle


def test_direct_product_case():
    A = dihedral_group(3)
    e = validate_epf(validate_skew(A, range(6)), 3, [1] * 6)
    G = to_cayley(build_extension(e))
    assert find_isomorphism(G, direct_product(A, cyclic_group(3))) is not None


def test_semidirect_case_is_abelian_only_when_phi_trivial():
    for sm in enumerate_skew(cyclic_group(5)):
        G = to_cayley(skew_product(sm))
        assert G.is_abelian() == (sm.m == 1)


def test_dihedral_of_order_eight():
    ext = build_extension(DIHEDRAL_PI)
    G = to_cayley(ext)
    assert not G.is_abelian()
    assert oracles.element_orders(G.mul.tolist()) == oracles.element_orders(dihedral_group(4).mul.tolist())
    assert oracles.brute_isomorphic(G.mul.tolist(), dihedral_group(4).mul.tolist())
    # c has order 4 and a inverts it
    a, c = ext.index((1, 0)), ext.index(ext.c)
    assert G.orders[c] == 4 and G.conj(c, a) == G.power(c, -1)


def test_commuting_rule_and_inverses():
    for e in REFERENCE.values():
        ext = build_extension(e)
        for x in range(8):
            assert ext_multiply(ext, (0, 1), (x, 0)) == (TIMES3.perm[x], e.values[x])
            assert ext_multiply(ext, (x, 0), (3, 0)) == ((x + 3) % 8, 0)
        for idx in range(ext.order):
            g = ext.element(idx)
            h = ext_inverse(ext, g)
            assert ext_multiply(ext, g, h) == (0, 0) == ext_multiply(ext, h, g)


def test_row_301_relation():
    ext = build_extension(REFERENCE[(0, 1)])
    G = to_cayley(ext)
    assert G.order == 64
    assert relation_holds("a^c=a^3", G, ext.index((1, 0)), ext.index(ext.c))


def test_extract_from_direct_product():
    A = cyclic_group(3)
    G = direct_product(A, cyclic_group(4))
    res = extract_pair(G, [0, 4, 8], 1)
    assert res.skew.perm == (0, 1, 2) and res.epf.values == (1, 1, 1)
    assert res.core_index == 1


def test_extract_from_dihedral():
    D4 = dihedral_group(4)
    res = extract_pair(D4, [0, 4], 1)
    assert res.skew.perm == (0, 1) and res.epf.n == 4 and res.epf.values == (1, 3)


def test_extract_rejects_non_factorizations():
    D4 = dihedral_group(4)
    with pytest.raises(NotExactProduct):
        extract_pair(D4, [0, 2], 1)
    with pytest.raises(NotExactProduct):
        extract_pair(D4, [0, 4], 2)


def test_round_trip_on_reference_table():
    for e in REFERENCE.values():
        ext = build_extension(e)
        res = extract_pair(to_cayley(ext), ext.embedded_A(), ext.index(ext.c))
        assert res.skew.perm == TIMES3.perm and res.epf.values == e.values and res.core_index == 2


def test_skew_product_is_core_free():
    for sm in enumerate_skew(dihedral_group(3)):
        ext = skew_product(sm)
        G = to_cayley(ext)
        c = ext.index(ext.c)
        assert tuple(core_of_subgroup(G, subgroup_generated(G, [c]))) == (0,)
        assert sm.m < sm.group.order
        res = extract_pair(G, ext.embedded_A(), c)
        assert res.skew == sm and res.core_index == sm.m


def test_structure_trivial_when_n_equals_m():
    report = verify_structure(skew_product(TIMES3))
    assert all(v["pass"] for v in report.values())


def test_structure_on_reference_table_rows():
    for e in REFERENCE.values():
        assert all(v["pass"] for v in verify_structure(build_extension(e)).values())
    ext = build_extension(REFERENCE[(1, 1)])
    G = to_cayley(ext)
    c2 = ext.index((0, 2))
    assert c2 in center(G)
    ext = build_extension(REFERENCE[(1, 3)])
    G = to_cayley(ext)
    c2 = ext.index((0, 2))
    assert c2 not in center(G)
    a = ext.index((1, 0))
    assert G.conj(c2, a) == G.power(c2, 3)


def test_equivalence_examples():
    e11, e31 = REFERENCE[(1, 1)], REFERENCE[(3, 1)]
    assert equivalent_pairs(e11, e11).image == tuple(range(8))
    theta = equivalent_pairs(e11, e31)
    assert theta is not None and theta.image[1] == 3
    assert pair_isomorphism(build_extension(e11), build_extension(e31), theta)
    assert equivalent_pairs((TIMES3, REFERENCE[(1, 3)]), (TIMES3, REFERENCE[(3, 3)])) is None


def test_reference_table_classes():
    keys = list(REFERENCE)
    classes = classify_equivalence([REFERENCE[k] for k in keys])
    got = sorted(sorted(keys[i] for i in c.members) for c in classes)
    assert got == sorted([[(0, 1)], [(1, 1), (3, 1)], [(2, 1)], [(1, 3)], [(3, 3)]])
    assert len(classify_equivalence([REFERENCE[(0, 1)]])) == 1


def test_conjugate_automorphisms_with_trivial_pi_form_one_class():
    # the three involutory automorphisms of D_3 are conjugate in Aut(D_3)
    A = dihedral_group(3)
    pairs = [validate_epf(sm, 2, [1] * 6) for sm in enumerate_skew(A) if sm.is_automorphism and sm.m == 2]
    assert len(pairs) == 3 and len(classify_equivalence(pairs)) == 1


def test_json_round_trip():
    ext = build_extension(REFERENCE[(1, 3)])
    back = extension_from_json(extension_to_json(ext), TIMES3.group)
    assert np.array_equal(back.table, ext.table)


def _corpus():
    out = []
    for A in (cyclic_group(4), cyclic_group(6), dihedral_group(2), dihedral_group(3)):
        for sm in enumerate_skew(A):
            for n in range(sm.m, 13, sm.m):
                if A.order * n <= 48:
                    out.extend(enumerate_epfs(sm, n))
    return out


EPFS = _corpus()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(EPFS))
def test_round_trip_and_structure(e):
    ext = build_extension(e)
    res = extract_pair(to_cayley(ext), ext.embedded_A(), ext.index(ext.c))
    assert res.skew.perm == e.skew.perm and res.skew.pi == e.skew.pi
    assert res.epf.values == e.values and res.core_index == e.m
    assert all(v["pass"] for v in verify_structure(ext).values())


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(EPFS), st.data())
def test_equivalence_transports_tables(e1, data):
    same = [e for e in EPFS if e.n == e1.n and e.group.same_table(e1.group)]
    e2 = data.draw(st.sampled_from(same))
    theta = equivalent_pairs(e1, e2)
    back = equivalent_pairs(e2, e1)
    assert (theta is None) == (back is None)
    if theta is not None:
        assert pair_isomorphism(build_extension(e1), build_extension(e2), theta)
