"""JSON file formats and lattice shorthands.

Lattice file::

    {"elements": ["0", "a", "b", "1"], "covers": [[0, 1], [0, 2], [1, 3], [2, 3]]}

Polynomial file (subset keys are sorted one-based indices, missing keys are
bottom; ``lattice`` is optional when a lattice is supplied separately)::

    {"lattice": "chain:3", "arity": 2, "alpha": {"": "0", "1": "c1", "12": "1"}}

Table file: ``{"arity": n, "values": [...]}`` with values in lexicographic
order of the argument tuples.  Variadic file::

    {"lattice": ..., "a1": "0", "d1": "1", "a2": "0", "b2": "1", "c2": "0", "d2": "1"}

Element values may be given by name or by integer id.
"""

from __future__ import annotations

import json
import os
from typing import Any

from .assoc import VariadicPolynomial
from .errors import LatpolyError
from .lattice import Lattice, boolean, build_from_covers, chain, product
from .poly import FunctionTable, PolynomialFn, mask_key

SCHEMA_VERSION = 1


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside parentheses and braces; blank text gives no parts."""
    if not text.strip():
        return []
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _strip_parens(text: str) -> str:
    text = text.strip()
    while text.startswith("(") and text.endswith(")") and _balanced(text[1:-1]):
        text = text[1:-1].strip()
    return text


def _balanced(text: str) -> bool:
    depth = 0
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


def parse_shorthand(text: str) -> Lattice | None:
    """``chain:<k>``, ``boolean:<k>`` or ``product:<a>,<b>``; None if ``text`` is none of these."""
    text = _strip_parens(text)
    kind, _, arg = text.partition(":")
    try:
        if kind == "chain":
            return chain(int(arg))
        if kind == "boolean":
            return boolean(int(arg))
    except ValueError:
        raise LatpolyError(f"bad lattice shorthand {text!r}") from None
    if kind == "product":
        parts = split_top_level(arg)
        if len(parts) != 2:
            raise LatpolyError(f"product needs two factors: {text!r}")
        factors = [parse_shorthand(p) for p in parts]
        if None in factors:
            raise LatpolyError(f"bad product factor in {text!r}")
        return product(*factors)
    return None


def lattice_from_json(obj: dict, label: str | None = None) -> Lattice:
    try:
        names = obj["elements"]
        covers = obj["covers"]
    except (KeyError, TypeError):
        raise LatpolyError("lattice JSON needs 'elements' and 'covers'") from None
    return build_from_covers([str(n) for n in names], [tuple(c) for c in covers], label=label)


def lattice_to_json(lat: Lattice) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "elements": list(lat.names),
        "covers": [list(c) for c in lat.covers()],
    }


def _read_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise LatpolyError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise LatpolyError(f"{path} is not valid JSON: {exc}") from None


def load_lattice(ref: Any, base_dir: str | None = None) -> Lattice:
    """Resolve a lattice reference: shorthand, path to a JSON file, or inline object."""
    if isinstance(ref, dict):
        return lattice_from_json(ref)
    if not isinstance(ref, str):
        raise LatpolyError(f"cannot interpret {ref!r} as a lattice")
    lat = parse_shorthand(ref)
    if lat is not None:
        return lat
    path = ref
    if base_dir and not os.path.isabs(path):
        path = os.path.join(base_dir, path)
    return lattice_from_json(_read_json(path), label=os.path.basename(ref))


def element(lat: Lattice, value: Any) -> int:
    if isinstance(value, bool):
        raise LatpolyError(f"{value!r} is not an element")
    if isinstance(value, int):
        return lat.check(value)
    return lat.index(str(value))


def _lattice_for(obj: dict, lat: Lattice | None, base_dir: str | None) -> Lattice:
    if lat is not None:
        return lat
    if "lattice" not in obj:
        raise LatpolyError("no lattice given (use --lattice or a 'lattice' key)")
    return load_lattice(obj["lattice"], base_dir)


def poly_from_json(obj: dict, lat: Lattice | None = None, base_dir: str | None = None) -> PolynomialFn:
    lat = _lattice_for(obj, lat, base_dir)
    try:
        n = int(obj["arity"])
        alpha_obj = obj["alpha"]
    except (KeyError, TypeError, ValueError):
        raise LatpolyError("polynomial JSON needs 'arity' and 'alpha'") from None
    coeffs = {}
    for key, value in alpha_obj.items():
        if not key.isdigit() and key != "":
            raise LatpolyError(f"bad subset key {key!r}")
        coeffs[frozenset(int(ch) for ch in key)] = element(lat, value)
    return PolynomialFn.from_map(lat, n, coeffs)


def poly_to_json(f: PolynomialFn, alpha=None, lattice_ref: Any = None) -> dict:
    lat = f.lattice
    alpha = f.alpha if alpha is None else alpha
    obj: dict = {"schema": SCHEMA_VERSION}
    if lattice_ref is not None:
        obj["lattice"] = lattice_ref
    obj["arity"] = f.arity
    obj["alpha"] = {mask_key(m): lat.names[v] for m, v in enumerate(alpha)}
    return obj


def table_from_json(obj: dict, lat: Lattice | None = None, base_dir: str | None = None) -> FunctionTable:
    lat = _lattice_for(obj, lat, base_dir)
    try:
        n = int(obj["arity"])
        values = obj["values"]
    except (KeyError, TypeError, ValueError):
        raise LatpolyError("table JSON needs 'arity' and 'values'") from None
    return FunctionTable(lat, n, [element(lat, v) for v in values])


def table_to_json(t: FunctionTable) -> dict:
    names = t.lattice.names
    return {"schema": SCHEMA_VERSION, "arity": t.arity, "values": [names[v] for v in t.flat()]}


VARIADIC_KEYS = ("a1", "d1", "a2", "b2", "c2", "d2")


def variadic_from_json(obj: dict, lat: Lattice | None = None, base_dir: str | None = None) -> VariadicPolynomial:
    lat = _lattice_for(obj, lat, base_dir)
    missing = [k for k in VARIADIC_KEYS if k not in obj]
    if missing:
        raise LatpolyError(f"variadic JSON lacks {', '.join(missing)}")
    return VariadicPolynomial(lat, *(element(lat, obj[k]) for k in VARIADIC_KEYS))


def variadic_to_json(g: VariadicPolynomial, lattice_ref: Any = None) -> dict:
    obj: dict = {"schema": SCHEMA_VERSION}
    if lattice_ref is not None:
        obj["lattice"] = lattice_ref
    for k in VARIADIC_KEYS:
        obj[k] = g.lattice.names[getattr(g, k)]
    return obj


def read_json_file(path: str) -> Any:
    return _read_json(path)
