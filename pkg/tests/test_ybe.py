import numpy as np
import pytest

from bracekit.brace import socle, tabulate, trivial_brace
from bracekit.errors import CapExceeded, SpecError
from bracekit.hegedus import HegedusSpec, build_hegedus
from bracekit.residue import Modulus, identity, qform_sum_pairs
from bracekit.ybe import (SetSolution, canonical_solution, flip_solution, permutation_group,
                          verify_involutive, verify_nondegenerate, verify_ybe)

import catalog


def h222():
    mod = Modulus(2, 1)
    return build_hegedus(HegedusSpec(mod, 2, qform_sum_pairs(2, mod), identity(2, mod)))


def test_flip_solution():
    sol = flip_solution(5)
    assert verify_ybe(sol) and verify_involutive(sol) and verify_nondegenerate(sol)
    assert permutation_group(sol).order == 1


def test_trivial_brace_gives_flip():
    sol = canonical_solution(trivial_brace([2, 3]))
    flip = flip_solution(6)
    assert np.array_equal(sol.f, flip.f) and np.array_equal(sol.g, flip.g)


@pytest.mark.parametrize("which", ["h222", "72"])
def test_canonical_solutions_verify(which):
    T = tabulate(h222()) if which == "h222" else catalog.table("72")
    sol = canonical_solution(T)
    assert verify_ybe(sol).ok
    assert verify_involutive(sol).ok
    assert verify_nondegenerate(sol).ok
    assert permutation_group(sol).order * len(socle(T)) == T.order


def test_order_72_group():
    assert permutation_group(canonical_solution(catalog.table("72"))).order == 72


def test_corrupted_table_fails_with_witness():
    sol = canonical_solution(catalog.table("72"))
    f = sol.f.copy()
    f[5, [3, 4]] = f[5, [4, 3]]
    bad = SetSolution(f, sol.g)
    res = verify_ybe(bad)
    assert not res.ok and len(res.witness) == 3
    assert not verify_involutive(bad).ok


def test_degenerate_solution():
    N = 4
    const = np.tile(np.arange(N)[:, None], (1, N))  # f_x(y) = x
    sol = SetSolution(const, const.copy())
    res = verify_nondegenerate(sol)
    assert not res.ok
    with pytest.raises(SpecError):
        permutation_group(sol)


def test_budget_and_sampling():
    sol = canonical_solution(catalog.table("72"))
    with pytest.raises(CapExceeded):
        verify_ybe(sol, budget=1000)
    res = verify_ybe(sol, budget=1000, sample=True, samples=5000, seed=9)
    assert res.ok and res.mode == "sampled" and res.to_dict()["seed"] == 9


def test_rejects_malformed_tables():
    with pytest.raises(SpecError):
        SetSolution(np.zeros((2, 3)), np.zeros((2, 2)))
    with pytest.raises(SpecError):
        SetSolution(np.full((2, 2), 2), np.zeros((2, 2)))


def test_group_matches_sympy():
    combinatorics = pytest.importorskip("sympy.combinatorics")
    for T in (catalog.table("72"), catalog.table("72id"), tabulate(h222())):
        sol = canonical_solution(T)
        gens = [combinatorics.Permutation(row.tolist()) for row in sol.f]
        assert permutation_group(sol).order == combinatorics.PermutationGroup(gens).order()
