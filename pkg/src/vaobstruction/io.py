"""JSON formats for cochains, forms and graded algebras.

Keys name group elements in parentheses separated by ``|``; a cyclic element
is a bare integer and a general one a coordinate tuple, so ``"(1|1)"`` on
``Z/2`` and ``"((1,0)|(0,1))"`` on ``Z/2 + Z/2``.  Scalars are strings
``"p/q@r/s"`` (magnitude ``p/q``, phase ``r/s``) or plain rationals.  Omitted
cochain entries are 1.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .cohomology import AbelianCochain3, Cochain2, IntertwinerCocycle, ModuleCocycle
from .forms import QuadraticForm
from .groups import ASet, FiniteAbelianGroup, format_element, parse_element
from .scalar import Scalar
from .testbed import GradedAlgebraData, _show, frac_array

__all__ = [
    "InputError",
    "load_json",
    "dump_json",
    "group_from_json",
    "cochain_to_json",
    "cochain_from_json",
    "cochain2_to_json",
    "cochain2_from_json",
    "form_to_json",
    "form_from_json",
    "algebra_to_json",
    "algebra_from_json",
    "aset_to_json",
    "aset_from_json",
    "module_cocycle_to_json",
    "module_cocycle_from_json",
    "psi_cocycle_to_json",
    "psi_cocycle_from_json",
]


class InputError(ValueError):
    """Malformed input; the message names the file position or field."""


def load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    return data


def dump_json(data) -> str:
    """Deterministic serialization (sorted keys, fixed indentation)."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def show_scalar(s: Scalar) -> str:
    """Human form: rationals as rationals, other scalars as ``p/q@r/s``."""
    return _show(s)


# ---------------------------------------------------------------------------
# pieces


def group_from_json(data: dict, field: str = "group") -> FiniteAbelianGroup:
    raw = data.get(field)
    if not isinstance(raw, list) or not raw or not all(isinstance(n, int) and n >= 1 for n in raw):
        raise InputError(f"field {field!r}: expected a non-empty list of positive integers")
    return FiniteAbelianGroup(raw)


def _key(group: FiniteAbelianGroup, idx) -> str:
    return "(" + "|".join(format_element(group.element(int(i))) for i in idx) + ")"


def _parse_key(group: FiniteAbelianGroup, key: str, arity: int, where: str) -> tuple:
    text = key.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise InputError(f"{where}: key {key!r} must look like (i|j)")
    parts = text[1:-1].split("|")
    if len(parts) != arity:
        raise InputError(f"{where}: key {key!r} needs {arity} arguments")
    try:
        return tuple(group.index(parse_element(p)) for p in parts)
    except ValueError:
        raise InputError(f"{where}: key {key!r} does not name elements of {list(group.cyclic_orders)}") from None


def _scalar(value, where: str) -> Scalar:
    try:
        return Scalar.parse(str(value))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{where}: {value!r} is not a nonzero scalar") from None


def _table(group: FiniteAbelianGroup, entries, arity: int, where: str) -> np.ndarray:
    if entries is None:
        entries = {}
    if not isinstance(entries, dict):
        raise InputError(f"{where}: expected an object")
    vals = np.full((group.order,) * arity, Scalar(), dtype=object)
    for key, v in entries.items():
        vals[_parse_key(group, key, arity, where)] = _scalar(v, f"{where}.{key}")
    return vals


def _entries(group: FiniteAbelianGroup, table) -> dict:
    vals = table.to_scalars()
    return {_key(group, idx): str(vals[idx]) for idx in np.ndindex(*vals.shape) if not vals[idx].is_one()}


def _check_group(data: dict, group: FiniteAbelianGroup | None) -> FiniteAbelianGroup:
    if "group" in data:
        g = group_from_json(data)
        if group is not None and g != group:
            raise InputError(f"field 'group': file says {list(g.cyclic_orders)}, "
                             f"command line says {list(group.cyclic_orders)}")
        return g
    if group is None:
        raise InputError("field 'group' is missing and no --group was given")
    return group


# ---------------------------------------------------------------------------
# cochains and forms


def cochain_to_json(c: AbelianCochain3) -> dict:
    return {"group": list(c.group.cyclic_orders), "F": _entries(c.group, c.F), "Omega": _entries(c.group, c.Omega)}


def cochain_from_json(data: dict, group: FiniteAbelianGroup | None = None) -> AbelianCochain3:
    from .scalar import ScalarArray

    g = _check_group(data, group)
    unknown = set(data) - {"group", "F", "Omega"}
    if unknown:
        raise InputError(f"unexpected fields {sorted(unknown)}")
    F = _table(g, data.get("F"), 3, "F")
    O = _table(g, data.get("Omega"), 2, "Omega")
    return AbelianCochain3(g, ScalarArray.from_scalars(F), ScalarArray.from_scalars(O))


def cochain2_to_json(lam: Cochain2) -> dict:
    return {"group": list(lam.group.cyclic_orders), "lambda": _entries(lam.group, lam.table)}


def cochain2_from_json(data: dict, group: FiniteAbelianGroup | None = None) -> Cochain2:
    from .scalar import ScalarArray

    g = _check_group(data, group)
    return Cochain2(g, ScalarArray.from_scalars(_table(g, data.get("lambda"), 2, "lambda")))


def form_to_json(Q: QuadraticForm) -> dict:
    return {"group": list(Q.group.cyclic_orders), "Q": _entries(Q.group, Q.table)}


def form_from_json(data: dict, group: FiniteAbelianGroup | None = None) -> QuadraticForm:
    from .scalar import ScalarArray

    g = _check_group(data, group)
    return QuadraticForm(g, ScalarArray.from_scalars(_table(g, data.get("Q"), 1, "Q")))


# ---------------------------------------------------------------------------
# A-sets and the module / intertwiner cocycles
#
# Carrier labels are JSON strings or integers; in keys they appear verbatim
# as the last ``|``-separated parts.


def aset_to_json(S: ASet) -> dict:
    A = S.group
    return {"carrier": list(S.carrier),
            "action": {f"({format_element(A.element(a))}|{s})": S.carrier[S.table[a, k]]
                       for a in range(A.order) for k, s in enumerate(S.carrier)}}


def _labels(raw, where: str) -> list:
    if not isinstance(raw, list) or not all(isinstance(x, (str, int)) and not isinstance(x, bool) for x in raw):
        raise InputError(f"{where}: expected a list of string or integer labels")
    if len({str(x) for x in raw}) != len(raw):
        raise InputError(f"{where}: labels must be distinct")
    return raw


def _split_key(key: str, where: str) -> list:
    text = key.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise InputError(f"{where}: key {key!r} must be parenthesized")
    return text[1:-1].split("|")


def _element(group, text, key, where) -> int:
    try:
        return group.index(parse_element(text))
    except ValueError:
        raise InputError(f"{where}: key {key!r} does not name elements of {list(group.cyclic_orders)}") from None


def _label_index(labels, text, key, where) -> int:
    names = [str(x) for x in labels]
    if text not in names:
        raise InputError(f"{where}: key {key!r} names an unknown label {text!r}")
    return names.index(text)


def aset_from_json(data: dict, group: FiniteAbelianGroup, field: str = "S") -> ASet:
    raw = data.get(field)
    if not isinstance(raw, dict):
        raise InputError(f"field {field!r}: expected {{'carrier': [...], 'action': {{...}}}}")
    carrier = _labels(raw.get("carrier"), f"{field}.carrier")
    table = {}
    for key, t in (raw.get("action") or {}).items():
        parts = _split_key(key, f"{field}.action")
        if len(parts) != 2:
            raise InputError(f"{field}.action: key {key!r} must look like (i|s)")
        a = _element(group, parts[0], key, f"{field}.action")
        k = _label_index(carrier, parts[1], key, f"{field}.action")
        table[(group.element(a), carrier[k])] = carrier[_label_index(carrier, str(t), key, f"{field}.action")]

    def act(x, s):
        if (x, s) in table:
            return table[(x, s)]
        if not any(x):
            return s
        raise InputError(f"{field}.action: no image for ({format_element(x)}|{s})")

    try:
        return ASet(group, carrier, act)
    except ValueError as exc:
        raise InputError(f"{field}.action: {exc}") from None


def _cube(shape, entries, where, parse_idx) -> np.ndarray:
    if entries is None:
        entries = {}
    if not isinstance(entries, dict):
        raise InputError(f"{where}: expected an object")
    vals = np.full(shape, Scalar(), dtype=object)
    for key, v in entries.items():
        vals[parse_idx(key)] = _scalar(v, f"{where}.{key}")
    return vals


def _sparse(table, key_of) -> dict:
    vals = table.to_scalars()
    return {key_of(idx): str(vals[idx]) for idx in np.ndindex(*vals.shape) if not vals[idx].is_one()}


def module_cocycle_to_json(phi: ModuleCocycle) -> dict:
    A, S = phi.group, phi.aset
    return {"group": list(A.cyclic_orders), "S": aset_to_json(S),
            "Phi": _sparse(phi.table, lambda idx: f"({format_element(A.element(idx[0]))}|"
                                                  f"{format_element(A.element(idx[1]))}|{S.carrier[idx[2]]})")}


def module_cocycle_from_json(data: dict, group: FiniteAbelianGroup | None = None) -> ModuleCocycle:
    from .scalar import ScalarArray

    g = _check_group(data, group)
    S = aset_from_json(data, g)

    def idx(key):
        parts = _split_key(key, "Phi")
        if len(parts) != 3:
            raise InputError(f"Phi: key {key!r} must look like (i|j|s)")
        return (_element(g, parts[0], key, "Phi"), _element(g, parts[1], key, "Phi"),
                _label_index(S.carrier, parts[2], key, "Phi"))

    vals = _cube((g.order, g.order, S.size), data.get("Phi"), "Phi", idx)
    return ModuleCocycle(S, ScalarArray.from_scalars(vals))


def psi_cocycle_to_json(psi: IntertwinerCocycle) -> dict:
    A, S = psi.group, psi.aset
    return {"group": list(A.cyclic_orders), "S1": aset_to_json(S), "S2": list(psi.labels2),
            "Psi": _sparse(psi.table, lambda idx: f"({format_element(A.element(idx[0]))}|"
                                                  f"{S.carrier[idx[1]]}|{psi.labels2[idx[2]]})")}


def psi_cocycle_from_json(data: dict, group: FiniteAbelianGroup | None = None) -> IntertwinerCocycle:
    from .scalar import ScalarArray

    g = _check_group(data, group)
    S1 = aset_from_json(data, g, "S1")
    S2 = _labels(data.get("S2"), "S2")

    def idx(key):
        parts = _split_key(key, "Psi")
        if len(parts) != 3:
            raise InputError(f"Psi: key {key!r} must look like (i|r|s)")
        return (_element(g, parts[0], key, "Psi"), _label_index(S1.carrier, parts[1], key, "Psi"),
                _label_index(S2, parts[2], key, "Psi"))

    vals = _cube((g.order, S1.size, len(S2)), data.get("Psi"), "Psi", idx)
    return IntertwinerCocycle(S1, S2, ScalarArray.from_scalars(vals))


# ---------------------------------------------------------------------------
# algebras


def _rational(v, where: str) -> Fraction:
    try:
        if isinstance(v, bool) or not isinstance(v, (int, str, float)):
            raise ValueError
        return Fraction(v.strip()) if isinstance(v, str) else Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{where}: {v!r} is not a rational") from None


def _text(q: Fraction) -> str:
    return str(q)


def algebra_to_json(a: GradedAlgebraData) -> dict:
    A = a.group
    out = {
        "group": list(A.cyclic_orders),
        "dims": {_key(A, [x]): a.dims[x] for x in range(A.order)},
        "unit": a.unit,
        "Lminus1": {_key(A, [x]): [[_text(v) for v in row] for row in a.lminus1[x]]
                    for x in range(A.order) if any(v != 0 for v in a.lminus1[x].flat)},
        "mult": {},
    }
    for (x, y), table in sorted(a.mult.items()):
        pairs = {}
        for e in sorted(table):
            T = table[e]
            for u, v in np.ndindex(T.shape[1], T.shape[2]):
                vec = T[:, u, v]
                if any(c != 0 for c in vec):
                    pairs.setdefault(f"({u},{v})", []).append({"exp": e, "vec": [_text(c) for c in vec]})
        out["mult"][_key(A, [x, y])] = pairs
    scales = _entries(A, a.scales.table)
    if scales:
        out["scale"] = scales
    return out


def algebra_from_json(data: dict) -> GradedAlgebraData:
    from .scalar import ScalarArray

    A = group_from_json(data)
    n = A.order
    dims_raw = data.get("dims")
    if not isinstance(dims_raw, dict):
        raise InputError("field 'dims': expected an object")
    dims = [None] * n
    for key, d in dims_raw.items():
        (x,) = _parse_key(A, key, 1, "dims")
        if not isinstance(d, int) or d < 0:
            raise InputError(f"dims.{key}: expected a non-negative integer")
        dims[x] = d
    missing = [format_element(A.element(x)) for x in range(n) if dims[x] is None]
    if missing:
        raise InputError(f"field 'dims': no dimension for {missing}")
    unit = data.get("unit")
    if not isinstance(unit, int) or not 0 <= unit < dims[0]:
        raise InputError("field 'unit': expected a basis index of the degree-0 space")
    Ls = [frac_array(np.zeros((d, d), dtype=int)) for d in dims]
    for key, mat in (data.get("Lminus1") or {}).items():
        (x,) = _parse_key(A, key, 1, "Lminus1")
        where = f"Lminus1.{key}"
        if not isinstance(mat, list) or len(mat) != dims[x] or any(
                not isinstance(r, list) or len(r) != dims[x] for r in mat):
            raise InputError(f"{where}: expected a {dims[x]}x{dims[x]} matrix")
        Ls[x] = frac_array([[_rational(v, where) for v in row] for row in mat]).reshape(dims[x], dims[x])
    mult = {}
    raw = data.get("mult")
    if not isinstance(raw, dict):
        raise InputError("field 'mult': expected an object")
    for key, pairs in raw.items():
        x, y = _parse_key(A, key, 2, "mult")
        z = int(A.add_table[x, y])
        where = f"mult.{key}"
        if not isinstance(pairs, dict):
            raise InputError(f"{where}: expected an object keyed by basis pairs")
        table: dict = {}
        for pkey, terms in pairs.items():
            pw = f"{where}.{pkey}"
            try:
                u, v = (int(t) for t in pkey.strip().strip("()").split(","))
            except ValueError:
                raise InputError(f"{pw}: basis pair must look like (b1,b2)") from None
            if not (0 <= u < dims[x] and 0 <= v < dims[y]):
                raise InputError(f"{pw}: basis index out of range")
            if not isinstance(terms, list):
                raise InputError(f"{pw}: expected a list of terms")
            for t_idx, term in enumerate(terms):
                tw = f"{pw}[{t_idx}]"
                if not isinstance(term, dict) or not isinstance(term.get("exp"), int):
                    raise InputError(f"{tw}: expected {{'exp': int, 'vec': [...]}}")
                vec = term.get("vec")
                if not isinstance(vec, list) or len(vec) != dims[z]:
                    raise InputError(f"{tw}.vec: expected {dims[z]} rationals")
                e = term["exp"]
                if e not in table:
                    table[e] = frac_array(np.zeros((dims[z], dims[x], dims[y]), dtype=int))
                for c, val in enumerate(vec):
                    table[e][c, u, v] += _rational(val, f"{tw}.vec")
        mult[(x, y)] = table
    scales = None
    if "scale" in data:
        scales = Cochain2(A, ScalarArray.from_scalars(_table(A, data["scale"], 2, "scale")))
    try:
        return GradedAlgebraData(A, tuple(dims), unit, tuple(Ls), mult, scales)
    except ValueError as exc:
        raise InputError(str(exc)) from None
