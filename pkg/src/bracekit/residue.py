"""Exact vectors, matrices and quadratic forms over Z/(p^r).

Matrices act on column vectors: ``apply(A, x)`` is ``A @ x``.  A quadratic
form is stored by its upper-triangular coefficient matrix ``U`` so that
``Q(x) = x U x^t``; its bilinear form has matrix ``U + U^t``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import SingularMatrixError, SpecError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division, as ``{p: e}`` in increasing p."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class Modulus:
    p: int
    r: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise SpecError(f"p={self.p} is not prime")
        if self.r < 1:
            raise SpecError(f"r={self.r} must be positive")

    @property
    def m(self) -> int:
        return self.p**self.r

    def is_unit(self, a: int) -> bool:
        return a % self.p != 0

    def inverse(self, a: int) -> int:
        if not self.is_unit(a):
            raise SingularMatrixError(f"{a} is not a unit mod {self.m}")
        return pow(int(a), -1, self.m)

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r}

    def __str__(self):
        return f"Z/{self.m}"


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ResidueVector:
    modulus: Modulus
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen(np.asarray(self.coords) % self.modulus.m))

    def __len__(self):
        return len(self.coords)

    def __eq__(self, other):
        return (isinstance(other, ResidueVector) and self.modulus == other.modulus
                and np.array_equal(self.coords, other.coords))

    def __add__(self, other: ResidueVector) -> ResidueVector:
        _same(self.modulus, other.modulus)
        return ResidueVector(self.modulus, self.coords + other.coords)

    def to_json(self) -> list[int]:
        return [int(c) for c in self.coords]


@dataclass(frozen=True, eq=False)
class ResidueMatrix:
    modulus: Modulus
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.int64)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise SpecError(f"matrix must be square, got shape {e.shape}")
        object.__setattr__(self, "entries", _frozen(e % self.modulus.m))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def m(self) -> int:
        return self.modulus.m

    def __eq__(self, other):
        return (isinstance(other, ResidueMatrix) and self.modulus == other.modulus
                and np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash((self.modulus, self.entries.tobytes()))

    def __matmul__(self, other: ResidueMatrix) -> ResidueMatrix:
        return mat_mul(self, other)

    def __sub__(self, other: ResidueMatrix) -> ResidueMatrix:
        _check_pair(self, other)
        return ResidueMatrix(self.modulus, self.entries - other.entries)

    def __add__(self, other: ResidueMatrix) -> ResidueMatrix:
        _check_pair(self, other)
        return ResidueMatrix(self.modulus, self.entries + other.entries)

    @property
    def T(self) -> ResidueMatrix:
        return ResidueMatrix(self.modulus, self.entries.T)

    def apply(self, x: ResidueVector) -> ResidueVector:
        _same(self.modulus, x.modulus)
        if len(x) != self.n:
            raise SpecError("dimension mismatch")
        return ResidueVector(self.modulus, self.entries @ x.coords)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.entries, np.eye(self.n, dtype=np.int64)))

    @cached_property
    def order(self) -> int:
        """Multiplicative order, by iterated powering (cached)."""
        if not self.is_invertible():
            raise SingularMatrixError("singular matrix has no multiplicative order")
        ident = np.eye(self.n, dtype=np.int64)
        cur = self.entries.copy()
        k = 1
        while not np.array_equal(cur, ident):
            cur = (cur @ self.entries) % self.m
            k += 1
        return k

    def powers(self) -> np.ndarray:
        """Array ``P`` with ``P[k] = A^k`` for ``0 <= k < order``."""
        out = np.empty((self.order, self.n, self.n), dtype=np.int64)
        out[0] = np.eye(self.n, dtype=np.int64)
        for k in range(1, self.order):
            out[k] = (out[k - 1] @ self.entries) % self.m
        return out

    def det(self) -> int:
        return bareiss_det(self.entries.tolist()) % self.m

    def is_invertible(self) -> bool:
        return self.modulus.is_unit(self.det())

    def to_json(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.entries]

    def __repr__(self):
        return f"ResidueMatrix({self.modulus}, {self.to_json()})"


def _same(a: Modulus, b: Modulus):
    if a != b:
        raise SpecError(f"modulus mismatch: {a} vs {b}")


def _check_pair(a: ResidueMatrix, b: ResidueMatrix):
    _same(a.modulus, b.modulus)
    if a.n != b.n:
        raise SpecError(f"dimension mismatch: {a.n} vs {b.n}")


def identity(n: int, modulus: Modulus) -> ResidueMatrix:
    return ResidueMatrix(modulus, np.eye(n, dtype=np.int64))


def mat_mul(a: ResidueMatrix, b: ResidueMatrix) -> ResidueMatrix:
    _check_pair(a, b)
    return ResidueMatrix(a.modulus, a.entries @ b.entries)


def bareiss_det(rows: list[list[int]]) -> int:
    """Fraction-free determinant over the integers."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def mat_inv(a: ResidueMatrix) -> ResidueMatrix:
    """Gauss-Jordan inverse using unit pivots only, scanning rows top-down."""
    m, mod = a.m, a.modulus
    n = a.n
    work = np.concatenate([a.entries, np.eye(n, dtype=np.int64)], axis=1).tolist()
    for col in range(n):
        pivot = next((r for r in range(col, n) if mod.is_unit(work[r][col])), None)
        if pivot is None:
            raise SingularMatrixError(f"no unit pivot in column {col}")
        work[col], work[pivot] = work[pivot], work[col]
        inv = pow(work[col][col], -1, m)
        work[col] = [(v * inv) % m for v in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                factor = work[r][col]
                work[r] = [(v - factor * w) % m for v, w in zip(work[r], work[col])]
    return ResidueMatrix(mod, [row[n:] for row in work])


def mat_pow(a: ResidueMatrix, e: int) -> ResidueMatrix:
    if e < 0:
        return mat_pow(mat_inv(a), -e)
    result = np.eye(a.n, dtype=np.int64)
    base = a.entries.copy()
    while e:
        if e & 1:
            result = (result @ base) % a.m
        base = (base @ base) % a.m
        e >>= 1
    return ResidueMatrix(a.modulus, result)


def apply_powers(powers: np.ndarray, k: np.ndarray, Y: np.ndarray, m: int) -> np.ndarray:
    """Row-wise ``powers[k[t]] @ Y[t]`` mod m, grouped by exponent to avoid a k x n x n stack."""
    Y = np.asarray(Y, dtype=np.int64)
    k = np.asarray(k, dtype=np.int64)
    out = np.empty_like(Y)
    for e in np.unique(k):
        rows = k == e
        out[rows] = (Y[rows] @ powers[e].T) % m
    return out


def companion_D(n: int, modulus: Modulus) -> ResidueMatrix:
    """Companion matrix of 1 + x + ... + x^(n-1); it has multiplicative order n."""
    if n < 2:
        raise SpecError("companion_D needs n >= 2")
    d = np.zeros((n - 1, n - 1), dtype=np.int64)
    for i in range(n - 2):
        d[i + 1, i] = 1
    d[:, n - 2] = -1
    return ResidueMatrix(modulus, d)


def gram_E(n: int, modulus: Modulus) -> ResidueMatrix:
    """Diagonal n-1, off-diagonal -1.

    This is the closed form of half the sum of (D^k)^t D^k; it is used
    directly so that even moduli work.
    """
    if n < 2:
        raise SpecError("gram_E needs n >= 2")
    e = -np.ones((n - 1, n - 1), dtype=np.int64)
    np.fill_diagonal(e, n - 1)
    return ResidueMatrix(modulus, e)


def block_diag(block: ResidueMatrix, k: int) -> ResidueMatrix:
    if k < 1:
        raise SpecError("block count must be >= 1")
    d = block.n
    out = np.zeros((d * k, d * k), dtype=np.int64)
    for i in range(k):
        out[i * d:(i + 1) * d, i * d:(i + 1) * d] = block.entries
    return ResidueMatrix(block.modulus, out)


def block_perm_F(blockdim: int, k: int, modulus: Modulus) -> ResidueMatrix:
    """Block cyclic shift with identity blocks: block i of x lands in block i+1 (mod k)."""
    if k < 1:
        raise SpecError("block count must be >= 1")
    d = blockdim
    out = np.zeros((d * k, d * k), dtype=np.int64)
    eye = np.eye(d, dtype=np.int64)
    for i in range(k):
        j = (i + 1) % k
        out[j * d:(j + 1) * d, i * d:(i + 1) * d] = eye
    return ResidueMatrix(modulus, out)


def block_perm(perm: list[int], blockdim: int, modulus: Modulus) -> ResidueMatrix:
    """Matrix moving block ``perm[j]`` of x into block ``j`` of the result."""
    k, d = len(perm), blockdim
    out = np.zeros((d * k, d * k), dtype=np.int64)
    eye = np.eye(d, dtype=np.int64)
    for j, src in enumerate(perm):
        out[j * d:(j + 1) * d, src * d:(src + 1) * d] = eye
    return ResidueMatrix(modulus, out)


# --- quadratic forms -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuadraticForm:
    modulus: Modulus
    U: np.ndarray = field(repr=False)

    def __post_init__(self):
        u = np.asarray(self.U, dtype=np.int64) % self.modulus.m
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise SpecError("form coefficients must be a square matrix")
        if np.any(np.tril(u, -1)):
            raise SpecError("form coefficients must be upper triangular")
        object.__setattr__(self, "U", _frozen(u))

    @property
    def n(self) -> int:
        return self.U.shape[0]

    @property
    def m(self) -> int:
        return self.modulus.m

    @cached_property
    def bilinear(self) -> np.ndarray:
        return _frozen((self.U + self.U.T) % self.m)

    def __eq__(self, other):
        return (isinstance(other, QuadraticForm) and self.modulus == other.modulus
                and np.array_equal(self.U, other.U))

    def __hash__(self):
        return hash((self.modulus, self.U.tobytes()))

    def values(self, X: np.ndarray) -> np.ndarray:
        """Row-wise Q over a batch ``X`` of shape (k, n)."""
        X = np.asarray(X, dtype=np.int64)
        return np.einsum("ki,ij,kj->k", X, self.U, X) % self.m

    def pair_values(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Row-wise b(x, y) via the matrix U + U^t."""
        return np.einsum("ki,ij,kj->k", np.asarray(X), self.bilinear, np.asarray(Y)) % self.m

    def to_json(self) -> dict:
        return {"p": self.modulus.p, "r": self.modulus.r, "n": self.n,
                "U": [[int(v) for v in row] for row in self.U]}

    def __repr__(self):
        return f"QuadraticForm({self.modulus}, U={self.U.tolist()})"


def qform_sum_pairs(n: int, modulus: Modulus) -> QuadraticForm:
    """Q(x) = sum over i < j of x_i x_j."""
    if n < 1:
        raise SpecError("n must be >= 1")
    return QuadraticForm(modulus, np.triu(np.ones((n, n), dtype=np.int64), 1))


def qform_direct_sum(*forms: QuadraticForm) -> QuadraticForm:
    mod = forms[0].modulus
    size = sum(f.n for f in forms)
    U = np.zeros((size, size), dtype=np.int64)
    at = 0
    for f in forms:
        _same(mod, f.modulus)
        U[at:at + f.n, at:at + f.n] = f.U
        at += f.n
    return QuadraticForm(mod, U)


def qform_from_gram(B: ResidueMatrix) -> QuadraticForm:
    """A form whose bilinear matrix is B: strict upper triangle plus half the diagonal."""
    e, m = B.entries, B.m
    if not np.array_equal(e, e.T):
        raise SpecError("Gram matrix must be symmetric")
    U = np.triu(e, 1)
    diag = np.diag(e)
    if B.modulus.p == 2:
        if np.any(diag % 2):
            raise SpecError("odd diagonal entry in characteristic 2; supply U directly")
        half = diag // 2
    else:
        half = diag * pow(2, -1, m)
    U[np.diag_indices_from(U)] = half % m
    return QuadraticForm(B.modulus, U)


def _check_vec(Q: QuadraticForm, x: ResidueVector):
    _same(Q.modulus, x.modulus)
    if len(x) != Q.n:
        raise SpecError(f"vector of length {len(x)} for a form on {Q.n} variables")


def eval_Q(Q: QuadraticForm, x: ResidueVector) -> int:
    _check_vec(Q, x)
    return int(Q.values(x.coords[None, :])[0])


def eval_b(Q: QuadraticForm, x: ResidueVector, y: ResidueVector) -> int:
    """b(x, y) = Q(x+y) - Q(x) - Q(y); checked against x (U+U^t) y^t."""
    _check_vec(Q, x)
    _check_vec(Q, y)
    by_def = (eval_Q(Q, x + y) - eval_Q(Q, x) - eval_Q(Q, y)) % Q.m
    by_matrix = int(Q.pair_values(x.coords[None, :], y.coords[None, :])[0])
    assert by_def == by_matrix, "bilinear form routes disagree"
    return by_def


def is_nondegenerate(Q: QuadraticForm) -> bool:
    return Q.modulus.is_unit(bareiss_det(Q.bilinear.tolist()))


def transform_coefficients(f: ResidueMatrix, Q: QuadraticForm) -> np.ndarray:
    """Coefficients of Q o f before upper-triangular normalisation: f^t U f."""
    return (f.entries.T @ Q.U @ f.entries) % Q.m


def is_orthogonal(f: ResidueMatrix, Q: QuadraticForm) -> bool:
    """Q(f x) = Q(x) for all x.

    Q o f has matrix M = f^t U f, and two forms agree as functions exactly
    when their normalised coefficients agree: evaluating at e_i and e_i + e_j
    recovers every coefficient, for every modulus.
    """
    _same(f.modulus, Q.modulus)
    if f.n != Q.n:
        raise SpecError("dimension mismatch")
    diff = (transform_coefficients(f, Q) - Q.U) % Q.m
    if np.any(np.diag(diff)):
        return False
    return not np.any(np.triu(diff + diff.T, 1) % Q.m)


def is_orthogonal_exhaustive(f: ResidueMatrix, Q: QuadraticForm, limit: int = 10**6) -> bool:
    """Brute-force Q(f x) = Q(x) over every vector (used as an independent check)."""
    if Q.m**Q.n > limit:
        raise SpecError(f"{Q.m}^{Q.n} vectors exceeds exhaustive limit {limit}")
    X = all_vectors(Q.n, Q.m)
    return bool(np.array_equal(Q.values(X), Q.values((X @ f.entries.T) % Q.m)))


def all_vectors(n: int, m: int) -> np.ndarray:
    """Every vector of (Z/m)^n as rows, most significant coordinate first."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((m,) * n).reshape(n, -1).T
    return grids.astype(np.int64)


def linear_defect(c: ResidueMatrix, Q: QuadraticForm) -> np.ndarray:
    """The vector v with v_j = Q(c e_j) - Q(e_j); the candidate for Q(c x) = Q(x) + v x^t."""
    eye = np.eye(Q.n, dtype=np.int64)
    return (Q.values((eye @ c.entries.T) % Q.m) - Q.values(eye)) % Q.m


def satisfies_linear_defect(c: ResidueMatrix, Q: QuadraticForm, v: np.ndarray,
                            limit: int = 10**6) -> bool:
    """Exhaustively check Q(c x) = Q(x) + v x^t for every x."""
    if Q.m**Q.n > limit:
        raise SpecError(f"{Q.m}^{Q.n} vectors exceeds exhaustive limit {limit}")
    X = all_vectors(Q.n, Q.m)
    lhs = Q.values((X @ c.entries.T) % Q.m)
    rhs = (Q.values(X) + X @ np.asarray(v)) % Q.m
    return bool(np.array_equal(lhs, rhs))


def matrix_to_json(a: ResidueMatrix) -> dict:
    return {"p": a.modulus.p, "r": a.modulus.r, "rows": a.to_json()}


def matrix_from_json(obj: dict) -> ResidueMatrix:
    return ResidueMatrix(Modulus(obj["p"], obj.get("r", 1)), obj["rows"])


def form_from_json(obj: dict) -> QuadraticForm:
    form = QuadraticForm(Modulus(obj["p"], obj.get("r", 1)), obj["U"])
    if "n" in obj and obj["n"] != form.n:
        raise SpecError("form 'n' does not match U")
    return form
