import numpy as np
import pytest

from bracekit.errors import SingularMatrixError, SpecError
from bracekit.residue import (Modulus, QuadraticForm, ResidueMatrix, ResidueVector, block_diag,
                              block_perm_F, companion_D, eval_b, eval_Q, factorize, gram_E, identity,
                              is_nondegenerate, is_orthogonal, mat_inv, mat_mul, mat_pow,
                              qform_from_gram, qform_sum_pairs)

Z2, Z3, Z5, Z7 = (Modulus(p, 1) for p in (2, 3, 5, 7))


def M(rows, mod):
    return ResidueMatrix(mod, np.array(rows) % mod.m)


def V(coords, mod):
    return ResidueVector(mod, np.array(coords) % mod.m)


def test_modulus_rejects_composite():
    with pytest.raises(SpecError):
        Modulus(6, 1)


def test_identity_product():
    A = M([[1, 2], [3, 4]], Z5)
    assert mat_mul(identity(2, Z5), A) == A


def test_companion_examples():
    assert companion_D(3, Z5) == M([[0, 4], [1, 4]], Z5)
    assert companion_D(2, Z3) == M([[2]], Z3)
    assert companion_D(5, Z3).order == 5
    D = companion_D(3, Z5)
    assert mat_mul(mat_mul(D, D), D) == identity(2, Z5)


def test_companion_inverse_is_square():
    D = companion_D(3, Z7)
    assert mat_inv(D) == mat_pow(D, 2)
    assert mat_pow(D, -1) == mat_pow(D, 2)


def test_companion_minus_identity_invertible_when_p_coprime():
    for p in (3, 5, 7):
        for n in range(2, 8):
            if n % p:
                D = companion_D(n, Modulus(p, 1))
                assert (D - identity(n - 1, D.modulus)).is_invertible()


def test_companion_rejects_small_n():
    with pytest.raises(SpecError):
        companion_D(1, Z3)


def test_gram_examples():
    assert gram_E(3, Z5) == M([[2, 4], [4, 2]], Z5)
    E = gram_E(3, Z5)
    assert mat_mul(E, mat_inv(E)) == identity(2, Z5)
    with pytest.raises(SingularMatrixError):
        mat_inv(gram_E(3, Z3))


def test_mat_inv_round_trip():
    rng = np.random.default_rng(0)
    for m in (2, 3, 4, 5, 7, 9, 25):
        (p, r), = factorize(m).items()
        mod = Modulus(p, r)
        found = 0
        while found < 100:
            A = ResidueMatrix(mod, rng.integers(0, m, (3, 3)))
            if not A.is_invertible():
                continue
            found += 1
            assert mat_mul(A, mat_inv(A)) == identity(3, mod)


def test_qform_sum_pairs():
    Q = qform_sum_pairs(2, Z2)
    assert eval_Q(Q, V([1, 1], Z2)) == 1
    assert eval_Q(Q, V([1, 0], Z2)) == 0
    assert eval_Q(qform_sum_pairs(1, Z3), V([2], Z3)) == 0
    assert eval_Q(qform_sum_pairs(3, Z3), V([1, 1, 1], Z3)) == 0


def test_bilinear_routes():
    Q = qform_sum_pairs(2, Z2)
    assert eval_b(Q, V([1, 0], Z2), V([0, 1], Z2)) == 1
    rng = np.random.default_rng(1)
    Q5 = QuadraticForm(Z5, np.triu(rng.integers(0, 5, (3, 3))))
    for _ in range(50):
        x, y = V(rng.integers(0, 5, 3), Z5), V(rng.integers(0, 5, 3), Z5)
        assert eval_b(Q5, x, y) == eval_b(Q5, y, x)
        assert eval_b(Q5, x, V([0, 0, 0], Z5)) == 0


def test_qform_from_gram():
    Q = qform_from_gram(M([[2, 0], [0, 2]], Z5))
    assert np.array_equal(Q.U, np.eye(2, dtype=np.int64))
    Q = qform_from_gram(gram_E(3, Z5))
    assert np.array_equal(Q.U, [[1, 4], [0, 1]])
    assert np.array_equal((Q.U + Q.U.T) % 5, gram_E(3, Z5).entries)
    with pytest.raises(SpecError):
        qform_from_gram(M([[1, 0], [0, 1]], Z2))


def test_nondegenerate():
    assert is_nondegenerate(qform_sum_pairs(2, Z3))
    assert not is_nondegenerate(QuadraticForm(Z3, np.zeros((2, 2), dtype=np.int64)))
    for p in (3, 5, 7):
        for n in range(3, 8):
            E = gram_E(n, Modulus(p, 1))
            if n % p == 0:
                assert not E.is_invertible()
            elif p != 2:
                assert is_nondegenerate(qform_from_gram(E))


def test_orthogonality_examples():
    Q = qform_sum_pairs(2, Z3)
    assert is_orthogonal(identity(2, Z3), Q)
    for p in (3, 5, 7):
        for n in range(3, 7):
            if n % p:
                mod = Modulus(p, 1)
                assert is_orthogonal(companion_D(n, mod), qform_from_gram(gram_E(n, mod)))
    # p | n-1 and p | C(n-1, 2): D preserves the sum-of-pairs form
    assert is_orthogonal(companion_D(4, Z3), qform_sum_pairs(3, Z3))
    assert not is_orthogonal(companion_D(3, Z5), qform_sum_pairs(2, Z5))


def test_block_matrices():
    assert block_perm_F(2, 1, Z5) == identity(2, Z5)
    F = block_perm_F(2, 3, Z5)
    assert mat_pow(F, 3) == identity(6, Z5)
    assert F.T == mat_inv(F)
    C, F2 = block_diag(companion_D(3, Z5), 2), block_perm_F(2, 2, Z5)
    assert mat_mul(C, F2) == mat_mul(F2, C)
    assert mat_mul(F2, F2) == identity(4, Z5)
    with pytest.raises(SpecError):
        block_diag(identity(2, Z5), 0)
