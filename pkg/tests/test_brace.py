import numpy as np
import pytest

from bracekit.brace import (AdditiveShape, TableBrace, ideal_closure, inv, is_brace_isomorphism,
                            is_ideal, is_left_ideal, is_simple, lam, mul, socle,
                            sylow_left_ideals, table_lookup_brace, tabulate, trivial_brace,
                            verify_brace_axioms)
from bracekit.errors import CapExceeded
from bracekit.hegedus import HegedusSpec, build_hegedus, search_orthogonal
from bracekit.residue import Modulus, QuadraticForm, identity, qform_sum_pairs

import catalog


def h222():
    mod = Modulus(2, 1)
    return build_hegedus(HegedusSpec(mod, 2, qform_sum_pairs(2, mod), identity(2, mod)))


def test_shape_rank_round_trip():
    shape = AdditiveShape([3, 2, 4])
    idx = np.arange(shape.order)
    assert np.array_equal(shape.rank(shape.unrank(idx)), idx)
    # most significant coordinate first
    assert shape.rank([[1, 0, 0]])[0] == 8
    assert shape.rank([[0, 1, 3]])[0] == 7


def test_trivial_multiplication_is_addition():
    B = trivial_brace([4, 3])
    assert mul(B, (1, 2), (3, 2)) == (0, 1)
    assert inv(B, (1, 2)) == (3, 1)
    assert mul(B, (0, 0), (2, 1)) == (2, 1)
    assert mul(B, (2, 1), (0, 0)) == (2, 1)


def test_h222_product():
    # lambda_(x,mu)(y, mu') = (y, mu' + x1 y2 + x2 y1) for f = id
    B = h222()
    assert lam(B, (1, 0, 0), (0, 1, 0)) == (0, 1, 1)
    assert mul(B, (1, 0, 0), (0, 1, 0)) == (1, 1, 1)
    T = tabulate(B)
    assert T.table[4, 2] == 3


def test_inverse_two_sided_on_order_72():
    T = catalog.table("72")
    idx = np.arange(T.order)
    assert np.all(T.mul_table[idx, T.inv_index] == 0)
    assert np.all(T.mul_table[T.inv_index, idx] == 0)
    assert inv(T, (0,) * T.shape.dim) == (0,) * T.shape.dim


def test_axioms_pass_on_trivial_and_hegedus():
    assert verify_brace_axioms(trivial_brace([2, 3, 4])).ok
    mod = Modulus(3, 1)
    Q = QuadraticForm(mod, np.array([[1, 1], [0, 1]]))  # bilinear matrix [[2,1],[1,2]]
    found = [f for f, rp in search_orthogonal(Q) if rp == 1]
    assert found
    for f in found:
        assert verify_brace_axioms(build_hegedus(HegedusSpec(mod, 2, Q, f))).ok


def test_axioms_catch_a_swapped_entry():
    T = tabulate(h222())
    table = T.table.copy()
    table[5, [2, 3]] = table[5, [3, 2]]
    rep = verify_brace_axioms(TableBrace(T.shape, table))
    assert not rep.ok
    assert rep.witnesses


def test_sampled_axioms_record_seed():
    rep = verify_brace_axioms(h222(), cap=4, samples=500, seed=3)
    assert rep.ok and rep.mode == "sampled"
    assert rep.to_dict()["seed"] == 3


def test_socle_examples():
    assert socle(trivial_brace([2, 3])) == list(range(6))
    assert socle(h222()) == [0, 1]
    assert socle(catalog.table("72")) == [0]
    with pytest.raises(CapExceeded):
        socle(trivial_brace([5, 5]), cap=10)


def test_ideal_closure_examples():
    B = trivial_brace([5])
    assert ideal_closure(B, []) == [0]
    assert ideal_closure(B, [3]) == [0, 1, 2, 3, 4]
    # (1, 0) in Z/2 x Z/3 has index 3
    assert ideal_closure(trivial_brace([2, 3]), [3]) == [0, 3]


def test_closure_is_additively_closed():
    T = catalog.table("72id")
    add = T.shape.add_table
    for a in (1, 5, 17, 40):
        S = ideal_closure(T, [a])
        member = np.zeros(T.order, dtype=bool)
        member[S] = True
        assert member[add[np.ix_(S, S)]].all()
        assert member[T.shape.neg_index[S]].all()


def test_simplicity_examples():
    for p in (2, 3, 5, 7):
        assert is_simple(trivial_brace([p])).simple
    res = is_simple(trivial_brace([4]))
    assert not res.simple and res.ideal == [0, 2]
    assert not is_simple(trivial_brace([2, 3])).simple


def test_left_ideal_predicates():
    T = catalog.table("72")
    everything = list(range(T.order))
    for pred in (is_left_ideal, is_ideal):
        assert pred(T, [0])
        assert pred(T, everything)
    # (0,0,0,0,1) is fixed by every lambda
    assert is_left_ideal(T, [0, 1])
    # 5 does not divide 72
    assert not is_left_ideal(T, [0, 1, 2, 3, 4])
    assert is_ideal(h222(), socle(h222()))


def test_sylow_components():
    comps = sylow_left_ideals(catalog.table("72"))
    assert sorted(len(c) for _, c in comps) == [8, 9]
    assert sylow_left_ideals(trivial_brace([2, 3])) == [(2, [0, 3]), (3, [0, 1, 2])]
    assert [len(c) for _, c in sylow_left_ideals(h222())] == [8]


def test_isomorphism_checks():
    T = catalog.table("72")
    assert is_brace_isomorphism(T, T, np.arange(T.order))
    assert is_brace_isomorphism(T, table_lookup_brace(T), np.arange(T.order))
    bad = np.arange(T.order)
    bad[[1, 2]] = bad[[2, 1]]
    assert not is_brace_isomorphism(T, T, bad)


def test_trivial_table_rows_are_identity():
    T = tabulate(trivial_brace([3, 3]))
    assert np.array_equal(T.table, np.tile(np.arange(9), (9, 1)))


def test_lambda_image_times_socle_is_order():
    for T in (catalog.table("72"), catalog.table("72id"), tabulate(h222())):
        image = {row.tobytes() for row in T.table}
        assert len(image) * len(socle(T)) == T.order
