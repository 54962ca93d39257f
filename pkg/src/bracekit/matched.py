"""Matched pairs, matched products and iterated matched products of left ideals.

An action ``alpha: (S, .) -> Aut(T, +)`` is evaluated on batches:
``alpha.apply(A, X)`` is ``alpha_{A[k]}(X[k])`` row by row.  Compositions are
written like maps and applied rightmost first.  Missing entries in an
action dictionary mean the identity action.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from math import gcd
from typing import Callable, Sequence

import numpy as np

from .brace import (DEFAULT_CAP, DEFAULT_SAMPLES, DEFAULT_SEED, AdditiveShape, FormulaBrace,
                    LeftBrace, Report, TableBrace, as_table, is_brace_isomorphism, is_simple,
                    sylow_left_ideals)
from .checks import check_identity
from .errors import CapExceeded, SpecError


class Action:
    """A map from elements of ``source`` to additive automorphisms of ``target``."""

    source: AdditiveShape
    target: AdditiveShape

    def apply(self, A, X) -> np.ndarray:
        raise NotImplementedError

    def apply_inv(self, A, X) -> np.ndarray:
        raise NotImplementedError


class RuleAction(Action):
    def __init__(self, source: AdditiveShape, target: AdditiveShape,
                 fn: Callable, inv_fn: Callable, name: str = "rule"):
        self.source, self.target = source, target
        self._fn, self._inv = fn, inv_fn
        self.name = name

    def apply(self, A, X):
        return self.target.reduce(self._fn(np.asarray(A), np.asarray(X)))

    def apply_inv(self, A, X):
        return self.target.reduce(self._inv(np.asarray(A), np.asarray(X)))

    def __repr__(self):
        return f"RuleAction({self.name})"


class TableAction(Action):
    """``table[a, x]`` is the index of alpha_a(x)."""

    def __init__(self, source: AdditiveShape, target: AdditiveShape, table):
        table = np.asarray(table, dtype=np.int64)
        if table.shape != (source.order, target.order):
            raise SpecError(f"action table must be {source.order}x{target.order}")
        if np.any(np.sort(table, axis=1) != np.arange(target.order)):
            raise SpecError("every action row must be a permutation")
        self.source, self.target = source, target
        self.table = table
        inv = np.empty_like(table)
        inv[np.arange(source.order)[:, None], table] = np.arange(target.order)[None, :]
        self.inv_table = inv

    def apply(self, A, X):
        return self.target.unrank(self.table[self.source.rank(A), self.target.rank(X)])

    def apply_inv(self, A, X):
        return self.target.unrank(self.inv_table[self.source.rank(A), self.target.rank(X)])

    def is_trivial(self) -> bool:
        return bool(np.all(self.table == np.arange(self.target.order)))


def _apply(action: Action | None, A, X):
    return np.asarray(X) if action is None else action.apply(A, X)


def _apply_inv(action: Action | None, A, X):
    return np.asarray(X) if action is None else action.apply_inv(A, X)


def _exhaustive(order: int, cap: int) -> bool:
    return order <= cap


# --- matched pairs --------------------------------------------------------------

@dataclass
class MatchedPairSpec:
    """G, H with alpha: (H, .) -> Aut(G, +) and beta: (G, .) -> Aut(H, +)."""

    G: LeftBrace
    H: LeftBrace
    alpha: Action | None = None
    beta: Action | None = None


def _action_checks(rep: Report, name: str, action: Action | None, src: LeftBrace,
                   tgt: LeftBrace, exhaustive: bool, samples: int, rng, equivariant: bool = False):
    if action is None:
        return
    S, T = src.shape, tgt.shape
    check_identity(rep, f"{name}_additive", [S, T, T],
                   lambda a, x, y: (action.apply(a, T.add(x, y)),
                                    T.add(action.apply(a, x), action.apply(a, y))),
                   exhaustive, samples, rng, ["a", "x", "y"])
    check_identity(rep, f"{name}_bijective", [S, T],
                   lambda a, x: (action.apply_inv(a, action.apply(a, x)), x),
                   exhaustive, samples, rng, ["a", "x"])
    check_identity(rep, f"{name}_homomorphism", [S, S, T],
                   lambda a, b, x: (action.apply(src.mul(a, b), x),
                                    action.apply(a, action.apply(b, x))),
                   exhaustive, samples, rng, ["a", "b", "x"])
    if equivariant:
        check_identity(rep, f"{name}_brace_automorphism", [S, T, T],
                       lambda a, x, y: (action.apply(a, tgt.lam(x, y)),
                                        tgt.lam(action.apply(a, x), action.apply(a, y))),
                       exhaustive, samples, rng, ["a", "x", "y"])


def validate_matched_pair(spec: MatchedPairSpec, cap: int = DEFAULT_CAP,
                          samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> Report:
    G, H, alpha, beta = spec.G, spec.H, spec.alpha, spec.beta
    exhaustive = _exhaustive(G.order * H.order, cap)
    rep = Report(mode="exhaustive" if exhaustive else "sampled",
                 samples=None if exhaustive else samples, seed=None if exhaustive else seed)
    rng = np.random.default_rng(seed)
    _action_checks(rep, "alpha", alpha, H, G, exhaustive, samples, rng)
    _action_checks(rep, "beta", beta, G, H, exhaustive, samples, rng)
    SG, SH = G.shape, H.shape

    def mp1(a, b, x):
        b2 = _apply(beta, a, b)
        lhs = G.lam(a, _apply(alpha, b, x))
        rhs = _apply(alpha, b2, G.lam(_apply_inv(alpha, b2, a), x))
        return lhs, rhs

    def mp2(b, a, y):
        a2 = _apply(alpha, b, a)
        lhs = H.lam(b, _apply(beta, a, y))
        rhs = _apply(beta, a2, H.lam(_apply_inv(beta, a2, b), y))
        return lhs, rhs

    check_identity(rep, "MP1", [SG, SH, SG], mp1, exhaustive, samples, rng, ["a", "b", "x"])
    check_identity(rep, "MP2", [SH, SG, SH], mp2, exhaustive, samples, rng, ["b", "a", "y"])
    return rep


def _concat_shape(shapes: Sequence[AdditiveShape]) -> AdditiveShape:
    return AdditiveShape([m for s in shapes for m in s.moduli])


def _splitter(shapes: Sequence[AdditiveShape]):
    bounds = np.cumsum([0] + [s.dim for s in shapes])

    def split(X):
        X = np.asarray(X)
        return [X[:, bounds[i]:bounds[i + 1]] for i in range(len(shapes))]
    return split


def matched_product(spec: MatchedPairSpec, validate: bool = True, cap: int = DEFAULT_CAP,
                    samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> FormulaBrace:
    """The brace on G x H with componentwise addition and

    lam_(a,b)(a', b') = (alpha_b lam_{alpha_b^{-1}(a)}(a'), beta_a lam_{beta_a^{-1}(b)}(b')).
    """
    if validate:
        rep = validate_matched_pair(spec, cap, samples, seed)
        if not rep.ok:
            raise SpecError(f"invalid matched pair: {rep.to_dict()}")
    G, H, alpha, beta = spec.G, spec.H, spec.alpha, spec.beta
    shape = _concat_shape([G.shape, H.shape])
    split = _splitter([G.shape, H.shape])

    def lam(X, Y):
        a, b = split(X)
        x, y = split(Y)
        first = _apply(alpha, b, G.lam(_apply_inv(alpha, b, a), x))
        second = _apply(beta, a, H.lam(_apply_inv(beta, a, b), y))
        return np.concatenate([first, second], axis=1)

    def lam_inv(X, Z):
        a, b = split(X)
        u, v = split(Z)
        first = G.lam_inv(_apply_inv(alpha, b, a), _apply_inv(alpha, b, u))
        second = H.lam_inv(_apply_inv(beta, a, b), _apply_inv(beta, a, v))
        return np.concatenate([first, second], axis=1)

    prov = {"construction": "matched_product",
            "factors": [G.provenance, H.provenance]}
    return FormulaBrace(shape, lam, lam_inv, prov)


def swap_map(G: LeftBrace, H: LeftBrace, GH: LeftBrace, HG: LeftBrace) -> np.ndarray:
    """Index map (a, b) -> (b, a) from G x H to H x G."""
    X = GH.shape.elements
    a, b = X[:, :G.shape.dim], X[:, G.shape.dim:]
    return HG.shape.rank(np.concatenate([b, a], axis=1))


# --- iterated matched products ----------------------------------------------------

@dataclass
class IteratedActionsSpec:
    """Braces B_0..B_{n-1} and actions ``actions[(j, i)]``: (B_j, .) -> Aut(B_i, +)."""

    braces: list[LeftBrace]
    actions: dict[tuple[int, int], Action] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.braces)
        for (j, i), act in self.actions.items():
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise SpecError(f"bad action index ({j}, {i})")
            if act.source != self.braces[j].shape or act.target != self.braces[i].shape:
                raise SpecError(f"action ({j}, {i}) has the wrong source or target shape")

    @property
    def n(self) -> int:
        return len(self.braces)

    @property
    def order(self) -> int:
        out = 1
        for b in self.braces:
            out *= b.order
        return out

    def action(self, j: int, i: int) -> Action | None:
        return self.actions.get((j, i))


def validate_iterated(spec: IteratedActionsSpec, cap: int = DEFAULT_CAP,
                      samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> Report:
    """Homomorphism checks for every action, then IM1 and IM2."""
    exhaustive = _exhaustive(spec.order, cap)
    rep = Report(mode="exhaustive" if exhaustive else "sampled",
                 samples=None if exhaustive else samples, seed=None if exhaustive else seed)
    rng = np.random.default_rng(seed)
    Bs, n = spec.braces, spec.n
    for (j, i), act in sorted(spec.actions.items()):
        _action_checks(rep, f"alpha[{j},{i}]", act, Bs[j], Bs[i], exhaustive, samples, rng)

    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            a_ji, a_ij = spec.action(j, i), spec.action(i, j)
            if a_ji is None and a_ij is None:
                continue
            Bi = Bs[i]

            def im1(a, b, x, Bi=Bi, a_ji=a_ji, a_ij=a_ij):
                lhs = Bi.lam(a, _apply(a_ji, _apply_inv(a_ij, a, b), x))
                rhs = _apply(a_ji, b, Bi.lam(_apply_inv(a_ji, b, a), x))
                return lhs, rhs

            check_identity(rep, "IM1", [Bi.shape, Bs[j].shape, Bi.shape], im1,
                           exhaustive, samples, rng, [f"a{i}", f"b{j}", f"x{i}"])

    for i in range(n):
        for j in range(n):
            for k in range(n):
                if len({i, j, k}) < 3:
                    continue
                a_ki, a_ji = spec.action(k, i), spec.action(j, i)
                a_kj, a_jk = spec.action(k, j), spec.action(j, k)
                if a_ki is None and a_ji is None:
                    continue

                def im2(b, c, x, a_ki=a_ki, a_ji=a_ji, a_kj=a_kj, a_jk=a_jk):
                    lhs = _apply(a_ki, c, _apply(a_ji, _apply_inv(a_kj, c, b), x))
                    rhs = _apply(a_ji, b, _apply(a_ki, _apply_inv(a_jk, b, c), x))
                    return lhs, rhs

                check_identity(rep, "IM2", [Bs[j].shape, Bs[k].shape, Bs[i].shape], im2,
                               exhaustive, samples, rng, [f"b{j}", f"c{k}", f"x{i}"])
    return rep


def _c_chain(spec: IteratedActionsSpec, parts: list[np.ndarray]) -> list[np.ndarray]:
    """c_0 = a_0 and c_k = (alpha^{(0..k-1),k}_{(a_0..a_{k-1})})^{-1}(a_k).

    Then a_0 + ... + a_{n-1} = c_0 c_1 ... c_{n-1} in the product brace.
    """
    cs = []
    for k, a_k in enumerate(parts):
        c = a_k
        for j in range(k):
            c = _apply_inv(spec.action(j, k), cs[j], c)
        cs.append(c)
    return cs


def iterated_matched_product(spec: IteratedActionsSpec, validate: bool = True,
                             cap: int = DEFAULT_CAP, samples: int = DEFAULT_SAMPLES,
                             seed: int = DEFAULT_SEED) -> FormulaBrace:
    """The brace on B_0 x ... x B_{n-1} whose lambda has i-th component

    alpha^{(0,i)}_{c_0} ... lam^{(i)}_{c_i} ... alpha^{(n-1,i)}_{c_{n-1}} (b_i)

    with the c_k of :func:`_c_chain`.
    """
    if validate:
        rep = validate_iterated(spec, cap, samples, seed)
        if not rep.ok:
            raise SpecError(f"IM1/IM2 validation failed: {rep.to_dict()}")
    Bs, n = spec.braces, spec.n
    shapes = [b.shape for b in Bs]
    split = _splitter(shapes)

    def lam(X, Y):
        cs = _c_chain(spec, split(X))
        out = []
        for i, y in enumerate(split(Y)):
            for j in range(n - 1, i, -1):
                y = _apply(spec.action(j, i), cs[j], y)
            y = Bs[i].lam(cs[i], y)
            for j in range(i - 1, -1, -1):
                y = _apply(spec.action(j, i), cs[j], y)
            out.append(y)
        return np.concatenate(out, axis=1)

    def lam_inv(X, Z):
        cs = _c_chain(spec, split(X))
        out = []
        for i, z in enumerate(split(Z)):
            for j in range(i):
                z = _apply_inv(spec.action(j, i), cs[j], z)
            z = Bs[i].lam_inv(cs[i], z)
            for j in range(i + 1, n):
                z = _apply_inv(spec.action(j, i), cs[j], z)
            out.append(z)
        return np.concatenate(out, axis=1)

    prov = {"construction": "iterated_matched_product",
            "factors": [b.provenance for b in Bs],
            "actions": sorted([list(k) for k in spec.actions])}
    return FormulaBrace(_concat_shape(shapes), lam, lam_inv, prov)


def nested_matched_product(spec: IteratedActionsSpec) -> LeftBrace:
    """(...(B_0 |><| B_1) |><| ...) |><| B_{n-1} built one matched pair at a time.

    The pair at step j uses alpha^{(j,(0..j-1))} acting coordinatewise and
    alpha^{((0..j-1),j)} composed along the c-chain.  This is an independent
    route to the same lambda as :func:`iterated_matched_product`.
    """
    Bs = spec.braces
    P = Bs[0]
    for j in range(1, spec.n):
        prefix = IteratedActionsSpec(Bs[:j], {k: v for k, v in spec.actions.items()
                                              if k[0] < j and k[1] < j})
        split = _splitter([b.shape for b in Bs[:j]])

        def down(A, X, j=j, split=split):
            return np.concatenate([_apply(spec.action(j, i), A, x)
                                   for i, x in enumerate(split(X))], axis=1)

        def down_inv(A, X, j=j, split=split):
            return np.concatenate([_apply_inv(spec.action(j, i), A, x)
                                   for i, x in enumerate(split(X))], axis=1)

        def up(A, y, j=j, split=split, prefix=prefix):
            cs = _c_chain(prefix, split(A))
            for k in range(j - 1, -1, -1):
                y = _apply(spec.action(k, j), cs[k], y)
            return y

        def up_inv(A, y, j=j, split=split, prefix=prefix):
            cs = _c_chain(prefix, split(A))
            for k in range(j):
                y = _apply_inv(spec.action(k, j), cs[k], y)
            return y

        alpha = RuleAction(Bs[j].shape, P.shape, down, down_inv, f"down[{j}]")
        beta = RuleAction(P.shape, Bs[j].shape, up, up_inv, f"up[{j}]")
        P = matched_product(MatchedPairSpec(P, Bs[j], alpha, beta), validate=False)
    return P


def validate_commuting_actions(braces: Sequence[LeftBrace], actions: dict,
                               cap: int = DEFAULT_CAP, samples: int = DEFAULT_SAMPLES,
                               seed: int = DEFAULT_SEED) -> Report:
    """Each action lands in brace automorphisms, alpha^{(i,j)} is constant along
    the orbits of every alpha^{(k,i)}, and actions on a common target commute."""
    spec = IteratedActionsSpec(list(braces), dict(actions))
    exhaustive = _exhaustive(spec.order, cap)
    rep = Report(mode="exhaustive" if exhaustive else "sampled",
                 samples=None if exhaustive else samples, seed=None if exhaustive else seed)
    rng = np.random.default_rng(seed)
    Bs, n = spec.braces, spec.n
    for (j, i), act in sorted(spec.actions.items()):
        _action_checks(rep, f"alpha[{j},{i}]", act, Bs[j], Bs[i], exhaustive, samples, rng,
                       equivariant=True)
    for (i, j), a_ij in sorted(spec.actions.items()):
        for k in range(n):
            a_ki = spec.action(k, i)
            if k == i or a_ki is None:
                continue
            check_identity(rep, "orbit_invariance", [Bs[k].shape, Bs[i].shape, Bs[j].shape],
                           lambda ak, ai, x, a_ij=a_ij, a_ki=a_ki:
                           (a_ij.apply(a_ki.apply(ak, ai), x), a_ij.apply(ai, x)),
                           exhaustive, samples, rng, [f"a{k}", f"a{i}", f"x{j}"])
    for i in range(n):
        for j in range(n):
            for k in range(j + 1, n):
                if i in (j, k):
                    continue
                a_ji, a_ki = spec.action(j, i), spec.action(k, i)
                if a_ji is None or a_ki is None:
                    continue
                check_identity(rep, "commuting", [Bs[j].shape, Bs[k].shape, Bs[i].shape],
                               lambda aj, ak, x, a_ji=a_ji, a_ki=a_ki:
                               (a_ji.apply(aj, a_ki.apply(ak, x)), a_ki.apply(ak, a_ji.apply(aj, x))),
                               exhaustive, samples, rng, [f"a{j}", f"a{k}", f"x{i}"])
    return rep


def iterated_from_commuting_actions(braces: Sequence[LeftBrace], actions: dict,
                                    cap: int = DEFAULT_CAP, samples: int = DEFAULT_SAMPLES,
                                    seed: int = DEFAULT_SEED) -> FormulaBrace:
    rep = validate_commuting_actions(braces, actions, cap, samples, seed)
    if not rep.ok:
        raise SpecError(f"commuting-action conditions failed: {rep.to_dict()}")
    spec = IteratedActionsSpec(list(braces), dict(actions))
    return iterated_matched_product(spec, validate=False)


# --- decomposition ----------------------------------------------------------------

@dataclass
class Component:
    prime: int
    brace: TableBrace
    embedding: np.ndarray  # component index -> index in the decomposed brace


@dataclass
class Decomposition:
    components: list[Component]
    spec: IteratedActionsSpec
    product: TableBrace
    eta: np.ndarray
    eta_check: bool


def _sylow_embedding(shape: AdditiveShape, p: int):
    """Shape of the Sylow p-part and the coordinate scaling that embeds it."""
    sub_moduli, coords, scale = [], [], []
    for j, m in enumerate(shape.moduli):
        pe = 1
        while m % (pe * p) == 0:
            pe *= p
        if pe > 1:
            sub_moduli.append(pe)
            coords.append(j)
            scale.append(m // pe)
    return AdditiveShape(sub_moduli), coords, scale


def decompose_and_rebuild(B: LeftBrace, cap: int = DEFAULT_CAP) -> Decomposition:
    """Split B into its Sylow left ideals, read the actions off lambda, rebuild the
    iterated product and check that eta(a_0, ..., a_{n-1}) = a_0 + ... + a_{n-1}
    is a brace isomorphism."""
    T = as_table(B, cap)
    shape = T.shape
    comps: list[Component] = []
    for p, members in sylow_left_ideals(T, cap):
        sub, coords, scale = _sylow_embedding(shape, p)
        X = np.zeros((sub.order, shape.dim), dtype=np.int64)
        X[:, coords] = sub.elements * np.array(scale, dtype=np.int64)
        emb = shape.rank(X)
        if sorted(emb.tolist()) != members:
            raise SpecError(f"Sylow {p}-part does not match its coordinate embedding")
        back = np.full(T.order, -1, dtype=np.int64)
        back[emb] = np.arange(sub.order)
        table = back[T.table[np.ix_(emb, emb)]]
        comps.append(Component(p, TableBrace(sub, table, {"construction": "sylow", "p": p}), emb))

    actions = {}
    for j, cj in enumerate(comps):
        for i, ci in enumerate(comps):
            if i == j:
                continue
            back = np.full(T.order, -1, dtype=np.int64)
            back[ci.embedding] = np.arange(ci.brace.order)
            table = back[T.table[np.ix_(cj.embedding, ci.embedding)]]
            act = TableAction(cj.brace.shape, ci.brace.shape, table)
            if not act.is_trivial():
                actions[(j, i)] = act
    spec = IteratedActionsSpec([c.brace for c in comps], actions)
    product = as_table(iterated_matched_product(spec, validate=True, cap=cap), cap)

    split = _splitter([c.brace.shape for c in comps])
    total = np.zeros((product.order, shape.dim), dtype=np.int64)
    for c, part in zip(comps, split(product.shape.elements)):
        total = shape.add(total, shape.unrank(c.embedding[c.brace.shape.rank(part)]))
    eta = shape.rank(total)
    return Decomposition(comps, spec, product, eta, is_brace_isomorphism(product, T, eta, cap))


# --- graph of actions -------------------------------------------------------------

@dataclass
class ActionGraph:
    """Vertices 0..n-1; edge (j, i) when alpha^{(j,i)} is nontrivial."""

    n: int
    edges: list[tuple[int, int]]
    exact: bool = True

    def successors(self, v: int) -> list[int]:
        return [i for (j, i) in self.edges if j == v]

    def strongly_connected(self) -> bool:
        def reach(start, forward):
            seen, stack = {start}, [start]
            while stack:
                v = stack.pop()
                nxt = [i for (j, i) in self.edges if j == v] if forward else \
                    [j for (j, i) in self.edges if i == v]
                for w in nxt:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            return seen
        if self.n <= 1:
            return True
        return len(reach(0, True)) == self.n and len(reach(0, False)) == self.n

    def hamiltonian_cycle(self) -> list[int] | None:
        if self.n <= 1:
            return list(range(self.n))
        edges = set(self.edges)
        for rest in permutations(range(1, self.n)):
            cyc = (0,) + rest
            if all((cyc[k], cyc[(k + 1) % self.n]) in edges for k in range(self.n)):
                return list(cyc)
        return None

    def has_full_cycle(self, mode: str = "walk-cycle") -> bool:
        if mode == "strict-cycle":
            return self.hamiltonian_cycle() is not None
        if mode == "walk-cycle":
            return self.strongly_connected()
        raise SpecError(f"unknown cycle mode {mode!r}")

    def to_dict(self) -> dict:
        return {"vertices": self.n, "edges": [list(e) for e in self.edges], "exact": self.exact}


def _is_nontrivial(act: Action, cap_pairs: int, samples: int, rng) -> tuple[bool, bool]:
    """(nontrivial, decided exhaustively)."""
    if isinstance(act, TableAction):
        return not act.is_trivial(), True
    S, T = act.source, act.target
    if S.order * T.order <= cap_pairs:
        A = np.repeat(S.elements, T.order, axis=0)
        X = np.tile(T.elements, (S.order, 1))
        return bool(np.any(act.apply(A, X) != X)), True
    A, X = S.random(rng, samples), T.random(rng, samples)
    return bool(np.any(act.apply(A, X) != X)), False


def action_graph(spec: IteratedActionsSpec, cap_pairs: int = 10**6,
                 samples: int = 10_000, seed: int = DEFAULT_SEED) -> ActionGraph:
    rng = np.random.default_rng(seed)
    edges, exact = [], True
    for (j, i), act in sorted(spec.actions.items()):
        nontrivial, decided = _is_nontrivial(act, cap_pairs, samples, rng)
        if nontrivial:
            edges.append((j, i))
        elif not decided:
            exact = False
    return ActionGraph(spec.n, edges, exact)


@dataclass
class GraphVerdict:
    verdict: str  # "simple" | "not-simple" | "inapplicable"
    reason: str
    graph: ActionGraph

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "reason": self.reason, "graph": self.graph.to_dict()}


def graph_verdict(spec: IteratedActionsSpec, certificates: Sequence[bool | None] | None = None,
                  mode: str = "walk-cycle", cap: int = DEFAULT_CAP,
                  seed: int = DEFAULT_SEED) -> GraphVerdict:
    """Simplicity from the graph of actions.

    A missing full cycle proves non-simplicity without further hypotheses.
    A full cycle proves simplicity only for factors of pairwise coprime
    orders that are certified simple; ``certificates[i]`` may supply that,
    otherwise factors within ``cap`` are checked by exhaustive ideal closure.
    """
    graph = action_graph(spec, seed=seed)
    if not graph.has_full_cycle(mode):
        if not graph.exact:
            return GraphVerdict("inapplicable", "nontriviality of some action only sampled", graph)
        return GraphVerdict("not-simple", "graph of actions has no full cycle", graph)
    orders = [b.order for b in spec.braces]
    for x in range(len(orders)):
        for y in range(x + 1, len(orders)):
            if gcd(orders[x], orders[y]) != 1:
                return GraphVerdict("inapplicable", "factor orders are not pairwise coprime", graph)
    certs = list(certificates) if certificates is not None else [None] * spec.n
    for i, b in enumerate(spec.braces):
        if certs[i] is None:
            try:
                certs[i] = bool(is_simple(b, cap))
            except CapExceeded:
                certs[i] = None
        if not certs[i]:
            why = "not simple" if certs[i] is False else "not certified simple"
            return GraphVerdict("inapplicable", f"factor {i} is {why}", graph)
    return GraphVerdict("simple", "full cycle with simple factors of coprime orders", graph)
