import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ccext.errors import CapExceeded, NoIdentity, NotAssociative, NotLatin, NotNormal
from ccext.groups import (
    as_subgroup,
    associativity_violation,
    automorphisms,
    center,
    core_of_subgroup,
    cyclic_group,
    dihedral_group,
    direct_product,
    element_order,
    find_isomorphism,
    from_cayley_table,
    group_from_json,
    group_to_json,
    is_normal,
    isomorphisms,
    quotient_group,
    subgroup_generated,
)

import oracles

# a reduced Latin square of order 5 (a loop) with (1*1)*1 != 1*(1*1)
LOOP5 = [[0, 1, 2, 3, 4], [1, 2, 0, 4, 3], [2, 4, 3, 0, 1], [3, 0, 4, 1, 2], [4, 3, 1, 2, 0]]


def quaternion_table():
    # elements (sign, unit) with units 1,i,j,k; index = 4*sign + unit
    mult = {(0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
            (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
            (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
            (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0)}
    T = []
    for a in range(8):
        row = []
        for b in range(8):
            s, u = mult[(a % 4, b % 4)]
            row.append(4 * ((s + a // 4 + b // 4) % 2) + u)
        T.append(row)
    return T


def test_cyclic_and_dihedral_are_groups():
    for k in range(1, 9):
        for G in (cyclic_group(k), dihedral_group(k)):
            assert associativity_violation(G.mul) is None
            assert np.array_equal(G.mul[0], np.arange(G.order))
            assert all(G.op(g, int(G.inv[g])) == 0 for g in range(G.order))


def test_dihedral_examples():
    assert find_isomorphism(dihedral_group(1), cyclic_group(2)) is not None
    D3 = dihedral_group(3)
    assert D3.order == 6 and not D3.is_abelian()
    D4 = dihedral_group(4)
    assert sum(1 for o in D4.orders if o == 4) == 2


def test_cyclic_table_round_trips():
    G = from_cayley_table(cyclic_group(3).mul)
    assert G.mul.tolist() == oracles.cyclic_table(3)


def test_not_latin():
    with pytest.raises(NotLatin):
        from_cayley_table([[0, 1], [1, 1]])


def test_no_identity():
    with pytest.raises(NoIdentity):
        # x*y = -x-y mod 3 is a quasigroup with no identity
        from_cayley_table([[0, 2, 1], [2, 1, 0], [1, 0, 2]])


def test_non_associative_loop():
    with pytest.raises(NotAssociative) as info:
        from_cayley_table(LOOP5)
    a, b, c = info.value.triple
    T = LOOP5
    assert T[T[a][b]][c] != T[a][T[b][c]]


def test_identity_relabelled_to_zero():
    # Z_3 with the identity stored as element 2
    T = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
    G = from_cayley_table(T)
    assert np.array_equal(G.mul[0], np.arange(3))
    assert find_isomorphism(G, cyclic_group(3)) is not None


def test_sampled_flag_above_cap():
    G = from_cayley_table(cyclic_group(20).mul, assoc_cap=10)
    assert G.sampled
    assert not from_cayley_table(cyclic_group(20).mul).sampled


def test_element_order_examples():
    Z8 = cyclic_group(8)
    assert element_order(Z8, 0) == 1
    assert element_order(Z8, 1) == 8
    assert element_order(Z8, 2) == 4


def test_automorphism_counts():
    assert len(automorphisms(cyclic_group(1))) == 1
    auts = automorphisms(cyclic_group(8))
    assert sorted(f.image[1] for f in auts) == [1, 3, 5, 7]
    assert len(automorphisms(dihedral_group(3))) == 6
    assert len(automorphisms(dihedral_group(4))) == 8
    assert len(automorphisms(dihedral_group(2))) == 6
    with pytest.raises(CapExceeded):
        automorphisms(cyclic_group(10), cap=8)


@pytest.mark.parametrize("G", [cyclic_group(6), dihedral_group(3), dihedral_group(4),
                               direct_product(cyclic_group(2), cyclic_group(4))], ids=lambda G: G.label)
def test_automorphisms_form_a_group(G):
    auts = automorphisms(G)
    images = {f.image for f in auts}
    for f in auts:
        assert f.is_automorphism
        assert f.inverse().image in images
        for g in auts:
            assert f.compose(g).image in images


def test_subgroup_generated_examples():
    Z8 = cyclic_group(8)
    assert tuple(subgroup_generated(Z8, [])) == (0,)
    assert tuple(subgroup_generated(Z8, [2])) == (0, 2, 4, 6)
    D4 = dihedral_group(4)
    # rho^2 = 2, sigma = 4
    assert len(subgroup_generated(D4, [2, 4])) == 4


def test_core_examples():
    D4 = dihedral_group(4)
    sigma = subgroup_generated(D4, [4])
    assert tuple(core_of_subgroup(D4, sigma)) == (0,)
    rot = subgroup_generated(D4, [1])
    assert tuple(core_of_subgroup(D4, rot)) == tuple(rot)
    Z6 = cyclic_group(6)
    H = subgroup_generated(Z6, [2])
    assert tuple(core_of_subgroup(Z6, H)) == tuple(H)


def test_center():
    assert tuple(center(dihedral_group(4))) == (0, 2)
    assert len(center(cyclic_group(5))) == 5


def test_quotient_examples():
    Z8 = cyclic_group(8)
    Q, proj = quotient_group(Z8, as_subgroup(Z8, [0, 4]))
    assert Q.order == 4 and element_order(Q, proj(1)) == 4
    Q1, _ = quotient_group(Z8, as_subgroup(Z8, [0]))
    assert find_isomorphism(Q1, Z8) is not None
    Qall, _ = quotient_group(Z8, as_subgroup(Z8, range(8)))
    assert Qall.order == 1
    D3 = dihedral_group(3)
    with pytest.raises(NotNormal):
        quotient_group(D3, subgroup_generated(D3, [3]))


def test_isomorphism_distinguishes_small_groups():
    Q8 = from_cayley_table(quaternion_table())
    D4 = dihedral_group(4)
    assert find_isomorphism(Q8, D4) is None
    assert find_isomorphism(cyclic_group(8), direct_product(cyclic_group(2), cyclic_group(4))) is None
    assert find_isomorphism(direct_product(cyclic_group(2), cyclic_group(3)), cyclic_group(6)) is not None
    assert len(isomorphisms(D4, D4)) == 8


def test_json_round_trip():
    G = dihedral_group(5)
    H = group_from_json(json.dumps(group_to_json(G)))
    assert H.same_table(G) and H.label == G.label


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["c", "d"]), st.integers(1, 9), st.data())
def test_subgroup_core_and_quotient_properties(kind, k, data):
    G = cyclic_group(k) if kind == "c" else dihedral_group(k)
    gens = data.draw(st.lists(st.integers(0, G.order - 1), max_size=2))
    H = subgroup_generated(G, gens)
    assert G.order % len(H) == 0
    core = core_of_subgroup(G, H)
    assert set(core) <= set(H) and is_normal(G, core)
    Q, proj = quotient_group(G, core)
    assert G.order == len(core) * Q.order
    assert proj.is_homomorphism and tuple(proj.kernel()) == tuple(core)
