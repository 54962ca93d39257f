"""JSON file formats.  Every object carries ``"format": "bracekit/1"``."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .brace import AdditiveShape, LeftBrace, TableBrace, trivial_brace
from .cycle import CycleSpec, PrimeSlot, build_cycle_brace
from .errors import SpecError
from .hegedus import HegedusSpec, build_hegedus
from .matched import (Action, IteratedActionsSpec, MatchedPairSpec, RuleAction, TableAction,
                      iterated_matched_product, matched_product)
from .residue import (Modulus, QuadraticForm, ResidueMatrix, apply_powers, factorize,
                      qform_sum_pairs)
from .ybe import SetSolution

FORMAT = "bracekit/1"

_ALLOWED = {
    "table": {"format", "kind", "shape", "lambda", "provenance"},
    "formula": {"format", "kind", "spec", "order", "certificate", "provenance"},
    "trivial": {"format", "kind", "shape"},
    "hegedus": {"format", "kind", "p", "r", "n", "Q", "f"},
    "cycle": {"format", "kind", "s", "primes", "overrides", "identity_actions"},
    "matched": {"format", "kind", "G", "H", "alpha", "beta"},
    "iterated": {"format", "kind", "factors", "actions"},
    "solution": {"format", "kind", "n", "f", "g", "provenance"},
}


def dumps(obj: Any) -> str:
    """Canonical serialization: sorted keys, compact separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def write_json(path: str | Path, obj: dict):
    Path(path).write_text(dumps(obj))


def sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def read_json(path: str | Path) -> dict:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise SpecError(f"{path}: top level must be an object")
    return obj


def _check_fields(obj: dict, kind: str):
    fmt = obj.get("format", FORMAT)
    if fmt != FORMAT:
        raise SpecError(f"unsupported format {fmt!r}")
    extra = set(obj) - _ALLOWED[kind]
    if extra:
        raise SpecError(f"unknown fields for {kind!r}: {sorted(extra)}")


def _kind(obj: dict) -> str:
    kind = obj.get("kind")
    if kind is None:
        if "lambda" in obj:
            kind = "table"
        elif "f" in obj and "g" in obj:
            kind = "solution"
    if kind not in _ALLOWED:
        raise SpecError(f"unknown kind {kind!r}")
    return kind


# --- braces -----------------------------------------------------------------------

def table_to_json(T: TableBrace) -> dict:
    return {"format": FORMAT, "kind": "table", "shape": list(T.shape.moduli),
            "lambda": T.table.tolist(), "provenance": T.provenance or {}}


def table_from_json(obj: dict) -> TableBrace:
    _check_fields(obj, "table")
    try:
        shape = AdditiveShape(obj["shape"])
        table = np.asarray(obj["lambda"], dtype=np.int64)
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed table brace: {exc}") from exc
    return TableBrace(shape, table, obj.get("provenance", {}))


def _matrix(rows, mod: Modulus) -> ResidueMatrix:
    try:
        return ResidueMatrix(mod, np.asarray(rows, dtype=np.int64) % mod.m)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"malformed matrix: {exc}") from exc


def hegedus_from_json(obj: dict) -> HegedusSpec:
    _check_fields(obj, "hegedus")
    try:
        mod = Modulus(int(obj["p"]), int(obj.get("r", 1)))
        n = int(obj["n"])
        Qd = obj["Q"]
        if Qd == "sum_pairs":
            Q = qform_sum_pairs(n, mod)
        else:
            Q = QuadraticForm(mod, np.asarray(Qd["U"] if isinstance(Qd, dict) else Qd,
                                              dtype=np.int64) % mod.m)
        f = _matrix(obj["f"], mod) if obj.get("f", "identity") != "identity" else \
            ResidueMatrix(mod, np.eye(n, dtype=np.int64))
    except KeyError as exc:
        raise SpecError(f"hegedus spec missing field {exc}") from exc
    return HegedusSpec(mod, n, Q, f)


def cycle_from_json(obj: dict) -> CycleSpec:
    _check_fields(obj, "cycle")
    try:
        slots = tuple(PrimeSlot(int(d["p"]), int(d.get("r", 1)), int(d.get("rprime", 0)),
                                d.get("copies")) for d in obj["primes"])
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed cycle spec: {exc}") from exc
    if "s" in obj and obj["s"] != len(slots):
        raise SpecError("'s' does not match the number of primes")
    overrides = {}
    for key, rows in (obj.get("overrides") or {}).items():
        if not key.startswith("c_") or not key[2:].isdigit():
            raise SpecError(f"unknown override {key!r}")
        k = int(key[2:])
        if not 0 <= k < len(slots):
            raise SpecError(f"override {key!r} out of range")
        overrides[k] = _matrix(rows, slots[k].modulus)
    return CycleSpec(slots, overrides, bool(obj.get("identity_actions", False)))


def _action_from_json(obj, source: LeftBrace, target: LeftBrace) -> Action | None:
    if obj is None or obj == "identity" or obj.get("map") == "identity":
        return None
    kind = obj.get("map")
    if kind == "table":
        return TableAction(source.shape, target.shape, obj["table"])
    if kind == "rule":
        # x -> M^{a_j} x on the target coordinates, driven by coordinate j of the actor
        j = int(obj["driver"])
        moduli = set(target.shape.moduli)
        if len(moduli) != 1:
            raise SpecError("linear rule actions need a target with a single modulus")
        m = moduli.pop()
        (p, r), = factorize(m).items()
        R = _matrix(obj["matrix"], Modulus(p, r))
        if R.n != target.shape.dim:
            raise SpecError("rule matrix has the wrong size")
        P = R.powers()
        order = len(P)

        def fn(A, X):
            return apply_powers(P, np.asarray(A)[:, j] % order, X, m)

        def inv(A, X):
            return apply_powers(P, (-np.asarray(A)[:, j]) % order, X, m)
        return RuleAction(source.shape, target.shape, fn, inv, f"M^a[{j}]")
    raise SpecError(f"unknown action map {kind!r}")


def brace_from_json(obj: dict, base: Path | None = None, depth: int = 0) -> LeftBrace:
    """Build a brace from a table file, a spec, or a ``{"file": path}`` reference."""
    if depth > 8:
        raise SpecError("brace references nest too deeply")
    if "file" in obj and len(obj) == 1:
        path = Path(obj["file"])
        if base is not None and not path.is_absolute():
            path = base / path
        return brace_from_json(read_json(path), path.parent, depth + 1)
    kind = _kind(obj)
    if kind == "table":
        return table_from_json(obj)
    if kind == "trivial":
        _check_fields(obj, "trivial")
        return trivial_brace(obj["shape"])
    if kind == "hegedus":
        return build_hegedus(hegedus_from_json(obj))
    if kind == "cycle":
        return build_cycle_brace(cycle_from_json(obj))
    if kind == "formula":
        _check_fields(obj, "formula")
        return brace_from_json(obj["spec"], base, depth + 1)
    if kind == "matched":
        _check_fields(obj, "matched")
        G = brace_from_json(obj["G"], base, depth + 1)
        H = brace_from_json(obj["H"], base, depth + 1)
        spec = MatchedPairSpec(G, H, _action_from_json(obj.get("alpha"), H, G),
                               _action_from_json(obj.get("beta"), G, H))
        return matched_product(spec)
    if kind == "iterated":
        return iterated_matched_product(iterated_from_json(obj, base, depth))
    raise SpecError(f"{kind!r} does not describe a brace")


def iterated_from_json(obj: dict, base: Path | None = None, depth: int = 0) -> IteratedActionsSpec:
    _check_fields(obj, "iterated")
    braces = [brace_from_json(b, base, depth + 1) for b in obj["factors"]]
    actions = {}
    for a in obj.get("actions", []):
        j, i = int(a["from"]), int(a["to"])
        if not (0 <= i < len(braces) and 0 <= j < len(braces)) or i == j:
            raise SpecError(f"bad action indices from={j} to={i}")
        act = _action_from_json(a, braces[j], braces[i])
        if act is not None:
            actions[(j, i)] = act
    return IteratedActionsSpec(braces, actions)


# --- solutions ----------------------------------------------------------------------

def solution_to_json(sol: SetSolution) -> dict:
    return {"format": FORMAT, "kind": "solution", "n": sol.n, "f": sol.f.tolist(),
            "g": sol.g.tolist(), "provenance": sol.provenance}


def solution_from_json(obj: dict) -> SetSolution:
    _check_fields(obj, "solution")
    try:
        sol = SetSolution(obj["f"], obj["g"], obj.get("provenance", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed solution: {exc}") from exc
    if "n" in obj and obj["n"] != sol.n:
        raise SpecError("'n' does not match the tables")
    return sol


# --- reports ------------------------------------------------------------------------

def report_envelope(command: str, inputs: dict[str, str], cap: int, seed: int, samples: int,
                    result: dict) -> dict:
    return {"format": FORMAT, "kind": "report", "tool": "bracekit", "version": __version__,
            "command": command, "inputs": inputs, "cap": cap, "seed": seed, "samples": samples,
            "result": result}
