"""Set-theoretic solutions r(x, y) = (f_x(y), g_y(x)) of the Yang-Baxter equation."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .brace import DEFAULT_CAP, DEFAULT_SEED, LeftBrace, as_table
from .errors import CapExceeded, SpecError

YBE_BUDGET = 10**8


@dataclass(eq=False)
class SetSolution:
    """``f[x, y] = f_x(y)`` and ``g[y, x] = g_y(x)`` as index tables on X = {0..N-1}."""

    f: np.ndarray
    g: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.f = np.asarray(self.f, dtype=np.int64)
        self.g = np.asarray(self.g, dtype=np.int64)
        N = self.f.shape[0]
        for name, t in (("f", self.f), ("g", self.g)):
            if t.shape != (N, N):
                raise SpecError(f"{name} must be an N x N table")
            if t.size and (t.min() < 0 or t.max() >= N):
                raise SpecError(f"{name} has entries outside [0, {N})")

    @property
    def n(self) -> int:
        return self.f.shape[0]

    def apply(self, x, y):
        """r(x, y) on index arrays."""
        return self.f[x, y], self.g[y, x]


def flip_solution(N: int) -> SetSolution:
    ident = np.tile(np.arange(N), (N, 1))
    return SetSolution(ident, ident.copy(), {"construction": "flip", "n": N})


def canonical_solution(B: LeftBrace, cap: int = DEFAULT_CAP) -> SetSolution:
    """f_a(b) = lambda_a(b) and g_b(a) = lambda^{-1}_{lambda_a(b)}(a)."""
    T = as_table(B, cap)
    f = T.table.astype(np.int64)
    N = T.order
    a = np.arange(N)[None, :]  # g[b, a]
    fab = f.T  # fab[b, a] = lambda_a(b)
    g = T.inv_table[fab, a]
    return SetSolution(f, g, {"construction": "canonical", "brace": B.provenance})


@dataclass
class CheckResult:
    ok: bool
    witness: list[int] | None = None
    mode: str = "exhaustive"
    samples: int | None = None
    seed: int | None = None

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        out = {"ok": self.ok, "mode": self.mode}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.mode == "sampled":
            out["samples"], out["seed"] = self.samples, self.seed
        return out


def _braid_sides(sol: SetSolution, x, y, z):
    f, g = sol.f, sol.g
    # r12 r23 r12
    a1, b1 = f[x, y], g[y, x]
    b2, c2 = f[b1, z], g[z, b1]
    a3, b3 = f[a1, b2], g[b2, a1]
    # r23 r12 r23
    u1, v1 = f[y, z], g[z, y]
    t2, u2 = f[x, u1], g[u1, x]
    u3, v3 = f[u2, v1], g[v1, u2]
    return (a3, b3, c2), (t2, u3, v3)


def verify_ybe(sol: SetSolution, budget: int = YBE_BUDGET, sample: bool = False,
               samples: int = 10**6, seed: int = DEFAULT_SEED) -> CheckResult:
    """r12 r23 r12 = r23 r12 r23 on X^3; exhaustive when N^3 <= budget."""
    N = sol.n
    if N**3 > budget:
        if not sample:
            raise CapExceeded(f"{N}^3 triples exceeds budget {budget}; enable sampling")
        rng = np.random.default_rng(seed)
        x, y, z = (rng.integers(0, N, samples) for _ in range(3))
        lhs, rhs = _braid_sides(sol, x, y, z)
        bad = np.flatnonzero(np.any(np.stack(lhs) != np.stack(rhs), axis=0))
        w = [int(x[bad[0]]), int(y[bad[0]]), int(z[bad[0]])] if bad.size else None
        return CheckResult(not bad.size, w, "sampled", samples, seed)
    chunk = max(1, (1 << 22) // max(N * N, 1))
    yz_y, yz_z = np.divmod(np.arange(N * N), N)
    for start in range(0, N, chunk):
        xs = np.arange(start, min(N, start + chunk))
        x = np.repeat(xs, N * N)
        y = np.tile(yz_y, len(xs))
        z = np.tile(yz_z, len(xs))
        lhs, rhs = _braid_sides(sol, x, y, z)
        bad = np.flatnonzero(np.any(np.stack(lhs) != np.stack(rhs), axis=0))
        if bad.size:
            i = bad[0]
            return CheckResult(False, [int(x[i]), int(y[i]), int(z[i])])
    return CheckResult(True)


def verify_involutive(sol: SetSolution) -> CheckResult:
    N = sol.n
    x, y = np.divmod(np.arange(N * N), N)
    u, v = sol.apply(x, y)
    u2, v2 = sol.apply(u, v)
    bad = np.flatnonzero((u2 != x) | (v2 != y))
    return CheckResult(not bad.size, [int(x[bad[0]]), int(y[bad[0]])] if bad.size else None)


def _rows_are_permutations(t: np.ndarray) -> np.ndarray:
    return np.all(np.sort(t, axis=1) == np.arange(t.shape[1]), axis=1)


def verify_nondegenerate(sol: SetSolution) -> CheckResult:
    """Every f_x and every g_x is a bijection; the witness is the first failing x."""
    okf, okg = _rows_are_permutations(sol.f), _rows_are_permutations(sol.g)
    if okf.all() and okg.all():
        return CheckResult(True)
    x = int(np.argmin(okf)) if not okf.all() else int(np.argmin(okg))
    return CheckResult(False, [x, 0 if not okf.all() else 1])


@dataclass
class GroupSummary:
    order: int
    generators: int

    def to_dict(self) -> dict:
        return {"order": self.order, "generators": self.generators}


def permutation_group(sol: SetSolution, cap: int = 10**6) -> GroupSummary:
    """Order of the group generated by the maps f_x, by breadth-first closure."""
    if not _rows_are_permutations(sol.f).all():
        raise SpecError("f_x are not all permutations")
    gens, seen_gen = [], set()
    for row in sol.f:
        key = row.tobytes()
        if key not in seen_gen and not np.array_equal(row, np.arange(sol.n)):
            seen_gen.add(key)
            gens.append(row)
    ident = np.arange(sol.n, dtype=np.int64)
    seen = {ident.tobytes()}
    queue = deque([ident])
    while queue:
        cur = queue.popleft()
        for gperm in gens:
            nxt = gperm[cur]
            key = nxt.tobytes()
            if key not in seen:
                if len(seen) >= cap:
                    raise CapExceeded(f"permutation group exceeds {cap} elements")
                seen.add(key)
                queue.append(nxt)
    return GroupSummary(len(seen), len(gens))
