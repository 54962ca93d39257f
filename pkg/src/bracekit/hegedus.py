"""Braces H(p^r, n, Q, f) on (Z/p^r)^(n+1).

An element is ``(x, mu)`` with ``x`` in (Z/p^r)^n.  With
``q(x, mu) = mu - Q(x)`` and ``b`` the bilinear form of ``Q``::

    lam_(x,mu)(y, mu') = (f^q(y), mu' + b(x, f^q(y)))

``f`` must preserve ``Q`` and have order p^r' with r' <= r.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .brace import AdditiveShape, FormulaBrace
from .errors import SpecError
from .residue import (Modulus, QuadraticForm, ResidueMatrix, ResidueVector, apply_powers,
                      bareiss_det, is_nondegenerate, is_orthogonal)


def p_power_exponent(f: ResidueMatrix) -> int | None:
    """r' with ord(f) = p^r' and r' <= r, or None when the order is not such a power."""
    mod = f.modulus
    if not f.is_invertible():
        return None
    ident = np.eye(f.n, dtype=np.int64)
    cur = f.entries.copy()
    for j in range(mod.r + 1):
        if np.array_equal(cur, ident):
            return j
        nxt = np.eye(f.n, dtype=np.int64)
        for _ in range(mod.p):
            nxt = (nxt @ cur) % mod.m
        cur = nxt
    return None


@dataclass(frozen=True, eq=False)
class HegedusSpec:
    modulus: Modulus
    n: int
    Q: QuadraticForm
    f: ResidueMatrix
    r_prime: int = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise SpecError("n must be positive")
        if self.Q.n != self.n or self.f.n != self.n:
            raise SpecError("Q and f must act on (Z/p^r)^n")
        if self.Q.modulus != self.modulus or self.f.modulus != self.modulus:
            raise SpecError("Q and f must live over the spec modulus")
        if not self.f.is_invertible():
            raise SpecError("f is not invertible")
        if not is_orthogonal(self.f, self.Q):
            raise SpecError("f does not preserve Q")
        rp = p_power_exponent(self.f)
        if rp is None:
            raise SpecError(f"order of f is not p^r' with r' <= {self.modulus.r}")
        object.__setattr__(self, "r_prime", rp)

    @property
    def m(self) -> int:
        return self.modulus.m

    def to_json(self) -> dict:
        return {"kind": "hegedus", "p": self.modulus.p, "r": self.modulus.r, "n": self.n,
                "Q": self.Q.to_json(), "f": self.f.to_json()}


def q_value(spec: HegedusSpec, x: ResidueVector, mu: int) -> int:
    if len(x) != spec.n:
        raise SpecError("dimension mismatch")
    return int((mu - spec.Q.values(x.coords[None, :])[0]) % spec.m)


def q_batch(Q: QuadraticForm, A: np.ndarray) -> np.ndarray:
    """q on a batch of coordinate rows ``(x, mu)``."""
    return (A[:, -1] - Q.values(A[:, :-1])) % Q.m


def build_hegedus(spec: HegedusSpec) -> FormulaBrace:
    n, m, Q = spec.n, spec.m, spec.Q
    powers = spec.f.powers()
    order = len(powers)

    def lam(A, B):
        X = A[:, :n]
        k = q_batch(Q, A) % order
        FY = apply_powers(powers, k, B[:, :n], m)
        mu = (B[:, n] + Q.pair_values(X, FY)) % m
        return np.concatenate([FY, mu[:, None]], axis=1)

    def lam_inv(A, C):
        X, Z = A[:, :n], C[:, :n]
        k = (-q_batch(Q, A)) % order
        Y = apply_powers(powers, k, Z, m)
        mu = (C[:, n] - Q.pair_values(X, Z)) % m
        return np.concatenate([Y, mu[:, None]], axis=1)

    shape = AdditiveShape([m] * (n + 1))
    return FormulaBrace(shape, lam, lam_inv, spec.to_json())


def predicted_socle(spec: HegedusSpec) -> list[int]:
    """Indices of {(0, mu) : mu in p^r' Z/p^r}; only claimed for non-degenerate Q."""
    if not is_nondegenerate(spec.Q):
        raise SpecError("the socle formula needs a non-degenerate form")
    step = spec.modulus.p**spec.r_prime
    # (0, ..., 0, mu) has rank mu under the mixed-radix order
    return list(range(0, spec.m, step))


def all_forms(n: int, modulus: Modulus):
    """Every upper-triangular coefficient matrix over (Z/m)^n, in lexicographic order."""
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    for values in product(range(modulus.m), repeat=len(slots)):
        U = np.zeros((n, n), dtype=np.int64)
        for (i, j), v in zip(slots, values):
            U[i, j] = v
        yield QuadraticForm(modulus, U)


def _all_matrices(n: int, m: int) -> np.ndarray:
    grid = np.indices((m,) * (n * n)).reshape(n * n, -1).T
    return grid.reshape(-1, n, n).astype(np.int64)


def search_orthogonal(Q: QuadraticForm, limit: int = 10**6) -> list[tuple[ResidueMatrix, int]]:
    """Every f preserving Q whose order is p^r' with r' <= r, as (f, r').

    Brute force over all n x n matrices, so only for tiny n and m.
    """
    n, m, mod = Q.n, Q.m, Q.modulus
    if m ** (n * n) > limit:
        raise SpecError(f"{m}^{n * n} candidate matrices exceeds search limit {limit}")
    F = _all_matrices(n, m)
    M = np.einsum("kji,jl,klm->kim", F, Q.U, F) % m
    diff = (M - Q.U) % m
    diag_ok = ~np.any(np.diagonal(diff, axis1=1, axis2=2), axis=1)
    sym = (diff + diff.transpose(0, 2, 1)) % m
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    off_ok = ~np.any(sym[:, upper], axis=1)
    out = []
    for entries in F[diag_ok & off_ok]:
        if not mod.is_unit(bareiss_det(entries.tolist())):
            continue
        f = ResidueMatrix(mod, entries)
        rp = p_power_exponent(f)
        if rp is not None:
            out.append((f, rp))
    return out
