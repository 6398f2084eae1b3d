"""JSON serialization conventions.

Lattice files: {"label": str, "gram": [[int, ...], ...]}. Integers with
|x| >= 2**53 are serialized as strings to survive double-precision JSON
readers. Rationals travel as "num/den" strings, the real place as "inf".
"""
from __future__ import annotations

import json
from fractions import Fraction

from .errors import BadInputError
from .lattice import QuadLattice, from_rows
from .padic import INF

SAFE_BOUND = 2**53


def encode_int(x: int):
    return x if abs(x) < SAFE_BOUND else str(x)


def decode_int(x) -> int:
    if isinstance(x, bool):
        raise BadInputError("expected an integer")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return int(x)
    raise BadInputError(f"expected an integer, got {x!r}")


def encode_fraction(q) -> str | int:
    q = Fraction(q)
    if q.denominator == 1:
        return encode_int(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def decode_fraction(x) -> Fraction:
    if isinstance(x, str) and "/" in x:
        num, den = x.split("/")
        return Fraction(int(num), int(den))
    return Fraction(decode_int(x))


def encode_matrix(mat):
    return [[encode_int(x) for x in row] for row in mat]


def encode_fraction_matrix(mat):
    return [[encode_fraction(x) for x in row] for row in mat]


def decode_matrix(rows):
    return [[decode_int(x) for x in row] for row in rows]


def encode_vector(vec):
    return [encode_int(x) for x in vec]


def encode_place(place):
    return "inf" if place == INF else int(place)


def lattice_to_obj(latt: QuadLattice) -> dict:
    obj = {"gram": encode_matrix(latt.gram)}
    if latt.label:
        obj["label"] = latt.label
    return obj


def lattice_from_obj(obj: dict) -> QuadLattice:
    if "gram" not in obj:
        raise BadInputError('lattice JSON needs a "gram" field')
    return from_rows(decode_matrix(obj["gram"]), label=obj.get("label"))


def load_lattice_file(path: str) -> QuadLattice:
    with open(path) as fh:
        return lattice_from_obj(json.load(fh))


def dump_json(obj, path: str | None = None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
