"""Named Gram matrices and the catalog name grammar.

Atoms: U, E8, E8(-1), K3 (= U+U+U+E8(-1)+E8(-1)), <k> for a rank-1
lattice, and diag(a1,...,an) with a^k repetition shorthand. Atoms may be
joined with "+" for direct sums, e.g. "U+U+<2>". The QFORGE_CATALOG
environment variable points at a JSON file whose entries extend or
override the bundled ones.
"""
from __future__ import annotations

import importlib.resources
import json
import os
import re

from .errors import BadInputError
from .jsonio import lattice_from_obj
from .lattice import QuadLattice, diag_lattice, direct_sum, from_rows, rescale

_ENV_VAR = "QFORGE_CATALOG"


def _bundled() -> dict:
    path = importlib.resources.files("qforge.data").joinpath("catalog.json")
    return json.loads(path.read_text())


def _external() -> dict:
    path = os.environ.get(_ENV_VAR)
    if not path:
        return {}
    with open(path) as fh:
        return json.load(fh)


def _named_entries() -> dict:
    entries = _bundled()
    entries.update(_external())
    return entries


_DIAG_RE = re.compile(r"^diag\((.*)\)$")
_RANK1_RE = re.compile(r"^<(-?\d+)>$")


def _parse_diag_args(body: str) -> list[int]:
    out: list[int] = []
    for part in body.split(","):
        part = part.strip()
        if "^" in part:
            base, _, count = part.partition("^")
            out.extend([int(base)] * int(count))
        else:
            out.append(int(part))
    return out


def _atom(name: str) -> QuadLattice:
    entries = _named_entries()
    if name in entries:
        return lattice_from_obj(entries[name])
    if name == "E8(-1)":
        return rescale(lattice_from_obj(entries["E8"]), -1, label="E8(-1)")
    if name == "K3":
        u = lattice_from_obj(entries["U"])
        e8m = rescale(lattice_from_obj(entries["E8"]), -1)
        return direct_sum(u, u, u, e8m, e8m, label="K3")
    m = _RANK1_RE.match(name)
    if m:
        return diag_lattice(int(m.group(1)), label=name)
    m = _DIAG_RE.match(name)
    if m:
        return diag_lattice(*_parse_diag_args(m.group(1)), label=name)
    raise BadInputError(f"unknown catalog name: {name!r}")


def resolve(name: str) -> QuadLattice:
    """Resolve a catalog name, possibly a "+"-joined direct sum."""
    parts = [p.strip() for p in _split_atoms(name)]
    if not parts:
        raise BadInputError("empty catalog name")
    if len(parts) == 1:
        return _atom(parts[0])
    return direct_sum(*[_atom(p) for p in parts], label=name)


def _split_atoms(name: str) -> list[str]:
    # "+" separates atoms except inside diag(...) parentheses or E8(-1)
    parts = []
    depth = 0
    cur = []
    for ch in name:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in (s.strip() for s in parts) if p]
