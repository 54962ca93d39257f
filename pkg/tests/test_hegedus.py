import numpy as np
import pytest

from bracekit.brace import socle, tabulate, verify_brace_axioms
from bracekit.errors import SpecError
from bracekit.hegedus import (HegedusSpec, build_hegedus, predicted_socle, q_batch, q_value,
                              search_orthogonal)
from bracekit.residue import (Modulus, QuadraticForm, ResidueMatrix, ResidueVector, identity,
                              qform_sum_pairs)

import catalog

Z2 = Modulus(2, 1)


def h222_spec():
    return HegedusSpec(Z2, 2, qform_sum_pairs(2, Z2), identity(2, Z2))


def test_q_value_examples():
    spec = h222_spec()
    assert q_value(spec, ResidueVector(Z2, [0, 0]), 1) == 1
    assert q_value(spec, ResidueVector(Z2, [1, 0]), 0) == 0
    assert q_value(spec, ResidueVector(Z2, [1, 1]), 0) == 1


def test_q_is_additive_along_products():
    for spec in (h222_spec(), catalog.hegedus_specs()[-1]):
        T = tabulate(build_hegedus(spec))
        X = T.shape.elements
        q = q_batch(spec.Q, X)
        # q(a + lambda_a(b)) = q(a) + q(b) on every pair
        assert np.array_equal(q[T.mul_table], (q[:, None] + q[None, :]) % spec.m)


def test_identity_f_collapses():
    T = tabulate(build_hegedus(h222_spec()))
    X = T.shape.elements
    # with f = id the first two coordinates are untouched
    assert np.array_equal(X[T.table][:, :, :2], np.broadcast_to(X[None, :, :2], (8, 8, 2)))
    assert len(socle(T)) == 2


def test_predicted_socle_examples():
    mod = Modulus(3, 2)
    Q = QuadraticForm(mod, np.array([[1]]))
    # over Z/9 the only scalars preserving x^2 are +-1, so n = 1 forces r' = 0
    assert {rp for _, rp in search_orthogonal(Q)} == {0}
    s0 = HegedusSpec(mod, 1, Q, identity(1, mod))
    assert predicted_socle(s0) == list(range(9))
    assert socle(build_hegedus(s0)) == predicted_socle(s0)
    s1 = next(s for s in catalog.hegedus_specs()
              if (s.modulus.p, s.modulus.r, s.n, s.r_prime) == (3, 2, 2, 1))
    assert predicted_socle(s1) == [0, 3, 6]
    assert socle(build_hegedus(s1)) == [0, 3, 6]


def test_full_order_f_gives_zero_socle():
    mod = Modulus(2, 1)
    Q = qform_sum_pairs(2, mod)
    swap = ResidueMatrix(mod, np.array([[0, 1], [1, 0]]))
    spec = HegedusSpec(mod, 2, Q, swap)
    assert spec.r_prime == 1
    assert predicted_socle(spec) == [0]
    assert socle(build_hegedus(spec)) == [0]


def test_axioms_on_order_27_family():
    mod = Modulus(3, 1)
    Q = QuadraticForm(mod, np.array([[1, 1], [0, 1]]))
    for f, rp in search_orthogonal(Q):
        assert verify_brace_axioms(build_hegedus(HegedusSpec(mod, 2, Q, f))).ok


def test_rejects_non_orthogonal_f():
    mod = Modulus(3, 1)
    Q = qform_sum_pairs(2, mod)
    with pytest.raises(SpecError):
        HegedusSpec(mod, 2, Q, ResidueMatrix(mod, np.array([[2, 0], [0, 1]])))


def test_rejects_order_not_power_of_p():
    mod = Modulus(3, 1)
    Q = QuadraticForm(mod, np.array([[1, 0], [0, 1]]))
    # -Id preserves every form but has order 2
    with pytest.raises(SpecError):
        HegedusSpec(mod, 2, Q, ResidueMatrix(mod, np.array([[2, 0], [0, 2]])))


def test_degenerate_form_builds_but_has_no_prediction():
    mod = Modulus(3, 1)
    Q = QuadraticForm(mod, np.zeros((1, 1), dtype=np.int64))
    spec = HegedusSpec(mod, 1, Q, identity(1, mod))
    assert verify_brace_axioms(build_hegedus(spec)).ok
    with pytest.raises(SpecError):
        predicted_socle(spec)
