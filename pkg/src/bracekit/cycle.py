"""Cyclic families H_1 |><| ... |><| H_s of Hegedus braces and their simplicity.

Factor i lives over Z/p_i^{r_i} with n_i = p_{i+1}^{r_{i+1}} (n_s = p_1^{r_1}).
H_{i+1} acts on H_i through c_i^{q_{i+1}}, and H_1 acts on H_s through
c_s^{q_1} plus a correction term in mu_s.  Indices are 0-based in code:
factor k+1 acts on factor k, and factor 0 acts on factor s-1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .brace import (DEFAULT_CAP, DEFAULT_SAMPLES, DEFAULT_SEED, FormulaBrace, LeftBrace, Report,
                    as_table, is_automorphism_map)
from .checks import check_identity
from .errors import SpecError
from .hegedus import HegedusSpec, build_hegedus, q_batch
from .matched import (IteratedActionsSpec, MatchedPairSpec, RuleAction, iterated_matched_product,
                      matched_product, validate_commuting_actions)
from .residue import (Modulus, QuadraticForm, ResidueMatrix, apply_powers, block_diag, block_perm,
                      block_perm_F, companion_D, factorize, gram_E, identity, is_orthogonal,
                      is_prime, mat_mul, qform_direct_sum, qform_from_gram, qform_sum_pairs)


@dataclass(frozen=True)
class PrimeSlot:
    p: int
    r: int = 1
    r_prime: int = 0
    copies: int | None = None  # diagonal copies of D when f = id; defaults to p^r'

    @property
    def modulus(self) -> Modulus:
        return Modulus(self.p, self.r)

    @property
    def m(self) -> int:
        return self.p**self.r

    @property
    def blocks(self) -> int:
        return self.copies if self.copies is not None else self.p**self.r_prime


@dataclass
class CycleSpec:
    slots: tuple[PrimeSlot, ...]
    overrides: dict[int, ResidueMatrix] = field(default_factory=dict)
    identity_actions: bool = False

    def __post_init__(self):
        self.slots = tuple(self.slots)
        if self.s < 2:
            raise SpecError("a cycle needs at least two primes")
        primes = [sl.p for sl in self.slots]
        if len(set(primes)) != len(primes):
            raise SpecError("primes must be distinct")
        for k, sl in enumerate(self.slots):
            if not is_prime(sl.p) or sl.r < 1:
                raise SpecError(f"slot {k}: need a prime p and r >= 1")
            if not 0 <= sl.r_prime <= sl.r:
                raise SpecError(f"slot {k}: need 0 <= r' <= r")
            if sl.copies is not None and (sl.r_prime != 0 or sl.copies < 1):
                raise SpecError(f"slot {k}: explicit copies require r' = 0")
        if any(sl.p == 2 for sl in self.slots[:-1]):
            raise SpecError("only the last prime may be 2")
        last = self.slots[-1]
        if last.p == 2 and last.r != 1:
            raise SpecError("p_s = 2 requires r_s = 1")
        for k in self.overrides:
            if not 0 <= k < self.s:
                raise SpecError(f"override index {k} out of range")

    @property
    def s(self) -> int:
        return len(self.slots)

    def n(self, i: int) -> int:
        return self.slots[(i + 1) % self.s].m

    def dims(self) -> list[int]:
        """Number of coordinates of each H_i, including mu."""
        return [sl.blocks * (self.n(i) - 1) + 1 for i, sl in enumerate(self.slots)]

    def order(self) -> int:
        out = 1
        for sl, d in zip(self.slots, self.dims()):
            out *= sl.m**d
        return out

    def to_json(self) -> dict:
        out = {"kind": "cycle", "s": self.s,
               "primes": [{"p": sl.p, "r": sl.r, "rprime": sl.r_prime,
                           **({"copies": sl.copies} if sl.copies is not None else {})}
                          for sl in self.slots]}
        if self.overrides:
            out["overrides"] = {f"c_{k}": c.to_json() for k, c in sorted(self.overrides.items())}
        if self.identity_actions:
            out["identity_actions"] = True
        return out


@dataclass(frozen=True, eq=False)
class CycleBlocks:
    index: int
    modulus: Modulus
    n: int
    D: ResidueMatrix
    E: ResidueMatrix
    C: ResidueMatrix
    B: ResidueMatrix
    F: ResidueMatrix
    Q: QuadraticForm
    v: np.ndarray  # Q(Cx) = Q(x) + v.x; zero unless p = 2


def _defect_coefficients_ok(c: ResidueMatrix, Q: QuadraticForm, v: np.ndarray) -> bool:
    """Q(cx) - Q(x) = v.x as functions, for p = 2 and r = 1 where x_i^2 = x_i."""
    M = (c.entries.T @ Q.U @ c.entries - Q.U) % 2
    upper = np.triu(M + M.T, 1) % 2
    return not upper.any() and np.array_equal(np.diag(M) % 2, np.asarray(v) % 2)


def build_blocks(spec: CycleSpec, i: int) -> CycleBlocks:
    sl = spec.slots[i]
    mod, n, k = sl.modulus, spec.n(i), sl.blocks
    D, E = companion_D(n, mod), gram_E(n, mod)
    B = block_diag(E, k)
    F = block_perm_F(n - 1, k, mod) if sl.copies is None else identity(k * (n - 1), mod)
    C = spec.overrides.get(i, block_diag(D, k))
    if C.modulus != mod or C.n != k * (n - 1):
        raise SpecError(f"c_{i} must be a {k * (n - 1)}x{k * (n - 1)} matrix over {mod}")
    if sl.p == 2:
        Q = qform_direct_sum(*[qform_sum_pairs(n - 1, mod)] * k)
        base = np.zeros(n - 1, dtype=np.int64)
        base[-1] = comb(n - 1, 2) % 2
        v = np.tile(base, k)
    else:
        if not mod.is_unit(E.det()):
            raise SpecError(f"E is singular mod {sl.p}")
        Q = qform_from_gram(B)
        v = np.zeros(k * (n - 1), dtype=np.int64)

    if not np.array_equal((mat_mul(mat_mul(D.T, E), D)).entries, E.entries):
        raise SpecError("D^t E D != E")
    if not np.array_equal(mat_mul(mat_mul(F.T, B), F).entries, B.entries):
        raise SpecError("F^t B F != B")
    if mat_mul(C, F) != mat_mul(F, C):
        raise SpecError(f"c_{i} does not commute with f_{i}")
    if F.order != sl.p**sl.r_prime:
        raise SpecError(f"f_{i} does not have order p^r'")
    if C.order != n:
        raise SpecError(f"c_{i} must have order {n}")
    if not is_orthogonal(F, Q):
        raise SpecError(f"f_{i} does not preserve Q_{i}")
    if i == spec.s - 1 and sl.p == 2:
        if not _defect_coefficients_ok(C, Q, v):
            raise SpecError("c_s violates Q(c x) = Q(x) + v x^t")
    elif not is_orthogonal(C, Q):
        raise SpecError(f"c_{i} does not preserve Q_{i}")
    return CycleBlocks(i, mod, n, D, E, C, B, F, Q, v)


def build_H(spec: CycleSpec, i: int, blocks: CycleBlocks | None = None) -> FormulaBrace:
    bl = blocks or build_blocks(spec, i)
    return build_hegedus(HegedusSpec(bl.modulus, bl.C.n, bl.Q, bl.F))


def _geometric_sums(C: ResidueMatrix) -> np.ndarray:
    """G[q] = Id + C + ... + C^{q-1} for 0 <= q < ord(C)."""
    P = C.powers()
    G = np.zeros_like(P)
    for q in range(1, len(P)):
        G[q] = (G[q - 1] + P[q - 1]) % C.m
    return G


def _power_action(src_Q: QuadraticForm, C: ResidueMatrix, tgt_shape, src_shape):
    P, m, d = C.powers(), C.m, C.n
    order = len(P)

    def fn(A, X):
        k = q_batch(src_Q, A) % order
        return np.concatenate([apply_powers(P, k, X[:, :d], m), X[:, d:]], axis=1)

    def inv(A, X):
        k = (-q_batch(src_Q, A)) % order
        return np.concatenate([apply_powers(P, k, X[:, :d], m), X[:, d:]], axis=1)
    return RuleAction(src_shape, tgt_shape, fn, inv, "c^q")


def _corrected_action(src_Q: QuadraticForm, C: ResidueMatrix, v: np.ndarray, tgt_shape, src_shape):
    P, G, m, d = C.powers(), _geometric_sums(C), C.m, C.n
    order = len(P)
    v = np.asarray(v, dtype=np.int64)

    def fn(A, X):
        k = q_batch(src_Q, A) % order
        x = X[:, :d]
        mu = (X[:, d] + apply_powers(G, k, x, m) @ v) % m
        return np.concatenate([apply_powers(P, k, x, m), mu[:, None]], axis=1)

    def inv(A, X):
        k = q_batch(src_Q, A) % order
        x = apply_powers(P, (-k) % order, X[:, :d], m)
        mu = (X[:, d] - apply_powers(G, k, x, m) @ v) % m
        return np.concatenate([x, mu[:, None]], axis=1)
    return RuleAction(src_shape, tgt_shape, fn, inv, "c^q + v-sum")


@dataclass
class CycleConstruction:
    spec: CycleSpec
    blocks: list[CycleBlocks]
    factors: list[FormulaBrace]
    actions: IteratedActionsSpec


def build_actions(spec: CycleSpec) -> CycleConstruction:
    blocks = [build_blocks(spec, i) for i in range(spec.s)]
    Hs = [build_H(spec, i, bl) for i, bl in enumerate(blocks)]
    actions = {}
    if not spec.identity_actions:
        s = spec.s
        for k in range(s - 1):
            actions[(k + 1, k)] = _power_action(blocks[k + 1].Q, blocks[k].C,
                                                Hs[k].shape, Hs[k + 1].shape)
        last = blocks[s - 1]
        if last.v.any():
            actions[(0, s - 1)] = _corrected_action(blocks[0].Q, last.C, last.v,
                                                    Hs[s - 1].shape, Hs[0].shape)
        else:
            actions[(0, s - 1)] = _power_action(blocks[0].Q, last.C, Hs[s - 1].shape, Hs[0].shape)
    return CycleConstruction(spec, blocks, Hs, IteratedActionsSpec(Hs, actions))


def build_cycle_brace(spec: CycleSpec, construction: CycleConstruction | None = None) -> FormulaBrace:
    con = construction or build_actions(spec)
    B = iterated_matched_product(con.actions, validate=False)
    B.provenance = spec.to_json()
    return B


def simplicity_criterion(spec: CycleSpec) -> bool:
    """True iff c_i - Id is invertible for every i (identity actions never qualify)."""
    if spec.identity_actions:
        return False
    for i in range(spec.s):
        C = build_blocks(spec, i).C
        if not (C - identity(C.n, C.modulus)).is_invertible():
            return False
    return True


def _mode(order: int, cap: int, samples: int, seed: int) -> tuple[bool, Report]:
    exhaustive = order <= cap
    return exhaustive, Report(mode="exhaustive" if exhaustive else "sampled",
                              samples=None if exhaustive else samples,
                              seed=None if exhaustive else seed)


def _factor_slices(con: CycleConstruction) -> list[slice]:
    bounds = np.cumsum([0] + [H.shape.dim for H in con.factors])
    return [slice(bounds[i], bounds[i + 1]) for i in range(len(con.factors))]


def phi_hom_check(spec: CycleSpec, i: int, brace: LeftBrace | None = None,
                  construction: CycleConstruction | None = None, cap: int = DEFAULT_CAP,
                  samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> Report:
    """phi_i(a) = q_i(a_i) is a homomorphism from the product's multiplicative group."""
    con = construction or build_actions(spec)
    B = brace or build_cycle_brace(spec, con)
    sl, Q = _factor_slices(con)[i], con.blocks[i].Q
    m = spec.slots[i].m
    exhaustive, rep = _mode(B.order**2, cap**2, samples, seed)
    rng = np.random.default_rng(seed)

    def phi(X):
        return q_batch(Q, X[:, sl])

    check_identity(rep, f"phi[{i}]_homomorphism", [B.shape, B.shape],
                   lambda a, b: (phi(B.mul(a, b)), (phi(a) + phi(b)) % m),
                   exhaustive, samples, rng, ["a", "b"])
    return rep


def action_invariant_checks(spec: CycleSpec, construction: CycleConstruction | None = None,
                            cap: int = DEFAULT_CAP, samples: int = DEFAULT_SAMPLES,
                            seed: int = DEFAULT_SEED) -> Report:
    """q_i is invariant under every action, every action is a brace automorphism,
    actions are constant along orbits, and actions on a common factor commute."""
    con = construction or build_actions(spec)
    spec_a = con.actions
    exhaustive, rep = _mode(spec_a.order, cap, samples, seed)
    rng = np.random.default_rng(seed)
    for (j, i), act in sorted(spec_a.actions.items()):
        Q = con.blocks[i].Q
        check_identity(rep, f"q_invariance[{j},{i}]",
                       [spec_a.braces[j].shape, spec_a.braces[i].shape],
                       lambda a, x, act=act, Q=Q: (q_batch(Q, act.apply(a, x)), q_batch(Q, x)),
                       exhaustive, samples, rng, [f"a{j}", f"x{i}"])
    rep.merge(validate_commuting_actions(spec_a.braces, spec_a.actions, cap, samples, seed))
    return rep


# --- block permutations -----------------------------------------------------------

def psi_sigma(spec: CycleSpec, i: int, sigma: Sequence[int],
              construction: CycleConstruction | None = None):
    """The map permuting the coordinate blocks of factor i (new block j = old block sigma[j])
    and fixing everything else.

    Requires the block permutation to commute with f_i and c_i and to
    preserve Q_i (and v_i); raises SpecError otherwise.
    """
    con = construction or build_actions(spec)
    bl = con.blocks[i]
    k = spec.slots[i].blocks
    sigma = [int(x) for x in sigma]
    if sorted(sigma) != list(range(k)):
        raise SpecError(f"sigma must be a permutation of {k} blocks")
    P = block_perm(sigma, bl.n - 1, bl.modulus)
    if mat_mul(P, bl.F) != mat_mul(bl.F, P):
        raise SpecError("block permutation does not commute with f_i")
    if mat_mul(P, bl.C) != mat_mul(bl.C, P):
        raise SpecError("block permutation does not commute with c_i")
    if not is_orthogonal(P, bl.Q):
        raise SpecError("block permutation does not preserve Q_i")
    if not np.array_equal((bl.v @ P.entries) % bl.modulus.m, bl.v):
        raise SpecError("block permutation does not preserve v_i")
    sl = _factor_slices(con)[i]
    d = bl.C.n
    cols = np.arange(sl.start, sl.stop)
    perm_cols = cols.copy()
    perm_cols[:d] = sl.start + (P.entries @ np.arange(d))

    def psi(X):
        X = np.asarray(X)
        out = X.copy()
        out[:, cols] = X[:, perm_cols]
        return out
    return psi


def check_psi_sigma(spec: CycleSpec, i: int, sigma: Sequence[int], cap: int = DEFAULT_CAP,
                    samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> Report:
    con = build_actions(spec)
    psi = psi_sigma(spec, i, sigma, con)
    B = build_cycle_brace(spec, con)
    return is_automorphism_map(B if B.order > cap else as_table(B, cap), psi, cap, samples, seed)


def _block_shift_action(src_Q: QuadraticForm, src_slice: slice, src_shape, tgt_shape,
                        start: int, blocks: int, bdim: int, order: int):
    """a -> psi^{q(a)} where psi moves block j+1 into block j (cyclically)."""
    def shift(X, k):
        X = np.asarray(X)
        out = X.copy()
        seg = X[:, start:start + blocks * bdim].reshape(len(X), blocks, bdim)
        for e in np.unique(k):
            rows = k == e
            out[rows, start:start + blocks * bdim] = \
                np.roll(seg[rows], -int(e), axis=1).reshape(int(rows.sum()), -1)
        return out

    def fn(A, X):
        return shift(X, q_batch(src_Q, np.asarray(A)[:, src_slice]) % order)

    def inv(A, X):
        return shift(X, (-q_batch(src_Q, np.asarray(A)[:, src_slice])) % order)
    return RuleAction(src_shape, tgt_shape, fn, inv, "block-shift^q")


@dataclass
class TwoCycleMatchedPair:
    first: CycleConstruction
    second: CycleConstruction
    spec: MatchedPairSpec


def matched_of_two(primes: Sequence[int] = (3, 5, 7, 11)) -> TwoCycleMatchedPair:
    """Two cycle braces H_1 |><| H_2 and H_3 |><| H_4 over four odd primes, acting on each
    other by cyclic block shifts of H_1 and H_3 driven by q_4 and q_2."""
    p1, p2, p3, p4 = primes
    if len(set(primes)) != 4 or any(p == 2 or not is_prime(p) for p in primes):
        raise SpecError("need four distinct odd primes")
    A = build_actions(CycleSpec((PrimeSlot(p1, copies=p4), PrimeSlot(p2))))
    Bc = build_actions(CycleSpec((PrimeSlot(p3, copies=p2), PrimeSlot(p4))))
    G = iterated_matched_product(A.actions, validate=False)
    H = iterated_matched_product(Bc.actions, validate=False)
    sA, sB = _factor_slices(A), _factor_slices(Bc)
    alpha = _block_shift_action(Bc.blocks[1].Q, sB[1], H.shape, G.shape,
                                start=0, blocks=p4, bdim=p2 - 1, order=p4)
    beta = _block_shift_action(A.blocks[1].Q, sA[1], G.shape, H.shape,
                               start=0, blocks=p2, bdim=p4 - 1, order=p2)
    return TwoCycleMatchedPair(A, Bc, MatchedPairSpec(G, H, alpha, beta))


def build_matched_of_two(pair: TwoCycleMatchedPair) -> FormulaBrace:
    B = matched_product(pair.spec, validate=False)
    B.provenance = {"construction": "matched_of_two",
                    "first": pair.first.spec.to_json(), "second": pair.second.spec.to_json()}
    return B


# --- order filters ----------------------------------------------------------------

@dataclass
class FilterVerdict:
    N: int
    possible: bool
    reason: str

    def to_dict(self) -> dict:
        return {"N": self.N, "verdict": "possible" if self.possible else "impossible",
                "reason": self.reason}


def _mult_order(a: int, q: int) -> int | None:
    if a % q == 0:
        return None
    k, x = 1, a % q
    while x != 1:
        x = (x * a) % q
        k += 1
    return k


def order_filters(N: int) -> FilterVerdict:
    """Necessary conditions for a simple left brace of order N."""
    if N < 2:
        raise SpecError("N must be at least 2")
    fac = factorize(N)
    if len(fac) == 1:
        (p, e), = fac.items()
        if e == 1:
            return FilterVerdict(N, True, "prime order: the trivial brace is simple")
        return FilterVerdict(N, False, "prime power order: only order p admits a simple brace")
    for q, e in fac.items():
        ok = any((p**t - 1) % q == 0 for p, f in fac.items() if p != q for t in range(1, f + 1))
        if not ok:
            return FilterVerdict(N, False, f"{q} divides no p^t - 1 over the other prime powers p^t | N")
    if len(fac) == 2:
        (a, ea), (b, eb) = fac.items()
        for p, n, q, eq in ((a, ea, b, eb), (b, eb, a, ea)):
            if eq == 1 and _mult_order(p, q) == n:
                return FilterVerdict(N, False, f"normal Sylow obstruction: {p}^{n}*{q} "
                                               f"with {n} the order of {p} mod {q}")
    return FilterVerdict(N, True, "passes all implemented necessary conditions")
