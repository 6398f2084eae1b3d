"""Integer quadratic lattices and exact structural operations.

A lattice is Z^n with an integer symmetric Gram matrix; q(x) = x^T G x and
the pairing is b(x, y) = x^T G y. Everything here is a pure function of
immutable values, computed in exact arbitrary-precision arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import (
    BudgetExceededError,
    DegenerateLatticeError,
    DimensionMismatchError,
)
from .linalg import (
    hermite_rows,
    invert_unimodular,
    left_kernel,
    mat_mul,
    smith_normal_form,
    transpose,
)

Vector = tuple[int, ...]

DEFAULT_ENUM_BUDGET = 10**8


@dataclass(frozen=True)
class QuadLattice:
    """Free abelian group of finite rank with an integer Gram matrix."""

    gram: tuple[tuple[int, ...], ...]
    label: str | None = None

    def __post_init__(self):
        n = len(self.gram)
        for row in self.gram:
            if len(row) != n:
                raise DimensionMismatchError("gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise DimensionMismatchError("gram matrix must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def det(self) -> int:
        return linalg.det_bareiss(self.gram)

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def __repr__(self):
        name = self.label or f"rank-{self.rank} lattice"
        return f"QuadLattice({name})"


def from_rows(rows, label: str | None = None) -> QuadLattice:
    return QuadLattice(linalg.freeze(rows), label=label)


def diag_lattice(*entries: int, label: str | None = None) -> QuadLattice:
    n = len(entries)
    return QuadLattice(
        tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)),
        label=label,
    )


def direct_sum(*lattices: QuadLattice, label: str | None = None) -> QuadLattice:
    n = sum(latt.rank for latt in lattices)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for latt in lattices:
        for i in range(latt.rank):
            for j in range(latt.rank):
                rows[off + i][off + j] = latt.gram[i][j]
        off += latt.rank
    return from_rows(rows, label=label)


def rescale(latt: QuadLattice, c: int, label: str | None = None) -> QuadLattice:
    return from_rows([[c * x for x in row] for row in latt.gram], label=label)


@dataclass(frozen=True)
class Sublattice:
    """Span of linearly independent vectors inside an ambient lattice."""

    ambient: QuadLattice
    basis: tuple[Vector, ...]

    def __post_init__(self):
        for v in self.basis:
            if len(v) != self.ambient.rank:
                raise DimensionMismatchError("basis vector length != ambient rank")
        if self.basis and linalg.rational_rank(self.basis) != len(self.basis):
            raise DimensionMismatchError("basis vectors are linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def gram(self) -> tuple[tuple[int, ...], ...]:
        g = self.ambient.gram
        return tuple(
            tuple(pairing(self.ambient, u, v) for v in self.basis) for u in self.basis
        )

    def as_lattice(self, label: str | None = None) -> QuadLattice:
        return QuadLattice(self.gram(), label=label)

    def to_ambient(self, coords) -> Vector:
        if len(coords) != self.rank:
            raise DimensionMismatchError("coordinate length != sublattice rank")
        n = self.ambient.rank
        out = [0] * n
        for c, v in zip(coords, self.basis):
            for i in range(n):
                out[i] += c * v[i]
        return tuple(out)


def span(ambient: QuadLattice, vectors) -> Sublattice:
    return Sublattice(ambient, linalg.freeze(vectors))


# ---------------------------------------------------------------------------
# Values and pairings


def qvalue(latt: QuadLattice, v) -> int:
    return pairing(latt, v, v)


def pairing(latt: QuadLattice, u, v) -> int:
    n = latt.rank
    if len(u) != n or len(v) != n:
        raise DimensionMismatchError("vector length != lattice rank")
    total = 0
    for i, ui in enumerate(u):
        if ui:
            row = latt.gram[i]
            total += ui * sum(row[j] * v[j] for j in range(n) if v[j])
    return total


# ---------------------------------------------------------------------------
# Signature via exact rational diagonalization


def _symmetric_diagonalize(gram, order: list[int] | None = None):
    """Congruent diagonalization over Q.

    Returns (diag_entries, basis) with basis^T G basis == diag(entries)
    exactly; `order` optionally biases pivot selection (used to exercise
    independence of the result's invariants from the elimination order).
    """
    n = len(gram)
    m = [[Fraction(x) for x in row] for row in gram]
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def col_add(dst, src, c):
        # e_dst <- e_dst + c * e_src, applied symmetrically to m
        for i in range(n):
            m[i][dst] += c * m[i][src]
        for j in range(n):
            m[dst][j] += c * m[src][j]
        for i in range(n):
            basis[i][dst] += c * basis[i][src]

    def col_swap(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        m[i], m[j] = m[j], m[i]
        for row in basis:
            row[i], row[j] = row[j], row[i]

    diag: list[Fraction] = []
    for step in range(n):
        candidates = [j for j in range(step, n)]
        if order:
            pref = [j for j in order if step <= j < n]
            candidates = [j for j in pref if j in candidates] + [
                j for j in candidates if j not in pref
            ]
        piv = next((j for j in candidates if m[j][j] != 0), None)
        if piv is None:
            # all diagonal entries vanish; borrow a nonzero pairing
            pair = next(
                (
                    (i, j)
                    for i in range(step, n)
                    for j in range(step, n)
                    if i != j and m[i][j] != 0
                ),
                None,
            )
            if pair is None:
                raise DegenerateLatticeError("form is degenerate")
            col_add(pair[0], pair[1], 1)
            piv = pair[0]
        if piv != step:
            col_swap(step, piv)
        d = m[step][step]
        for j in range(step + 1, n):
            if m[step][j] != 0:
                col_add(j, step, -m[step][j] / d)
        diag.append(d)
    return diag, linalg.freeze(basis)


def signature(latt: QuadLattice) -> tuple[int, int]:
    """(positive count, negative count) of any rational diagonalization."""
    diag, _ = _symmetric_diagonalize(latt.gram)
    pos = sum(1 for d in diag if d > 0)
    neg = sum(1 for d in diag if d < 0)
    return pos, neg


def is_indefinite(latt: QuadLattice) -> bool:
    pos, neg = signature(latt)
    return pos > 0 and neg > 0


# ---------------------------------------------------------------------------
# Saturation, complements, discriminant group


def saturate(sub: Sublattice) -> Sublattice:
    """Smallest primitive sublattice containing sub: ambient ∩ Q-span."""
    if not sub.basis:
        return sub
    d, _, v = smith_normal_form(sub.basis)
    k = len(sub.basis)
    vinv = invert_unimodular(v)
    sat_rows = vinv[:k]
    h, _ = hermite_rows(sat_rows)
    return Sublattice(sub.ambient, h)


def saturation_index(sub: Sublattice) -> int:
    """Order of saturate(sub)/sub, the product of invariant factors."""
    if not sub.basis:
        return 1
    factors = linalg.snf_invariant_factors(sub.basis)
    out = 1
    for f in factors:
        out *= f
    return out


def orthogonal_complement(sub: Sublattice) -> Sublattice:
    """Saturated sublattice of everything pairing to zero with sub."""
    amb = sub.ambient
    if not sub.basis:
        return Sublattice(amb, linalg.freeze(linalg.identity(amb.rank)))
    a = mat_mul(amb.gram, transpose(sub.basis))
    rows = left_kernel(a)
    return Sublattice(amb, rows)


@dataclass(frozen=True)
class DiscriminantGroup:
    """Dual quotient with its torsion forms.

    orders: invariant factors > 1, each dividing the next.
    generators: rational coordinate vectors of dual generators.
    pairings[i][j]: b-value mod Z in [0, 1).
    qvalues[i]: q-value mod 2Z in [0, 2) for even lattices, mod Z otherwise.
    """

    orders: tuple[int, ...]
    generators: tuple[tuple[Fraction, ...], ...]
    pairings: tuple[tuple[Fraction, ...], ...]
    qvalues: tuple[Fraction, ...]
    even: bool

    @property
    def size(self) -> int:
        out = 1
        for d in self.orders:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return not self.orders

    def has_2_torsion(self) -> bool:
        return any(d % 2 == 0 for d in self.orders)


def discriminant_group(latt: QuadLattice) -> DiscriminantGroup:
    n = latt.rank
    det = latt.det()
    if det == 0:
        raise DegenerateLatticeError("degenerate lattice has no discriminant group")
    d, u, _ = smith_normal_form(latt.gram)
    uinv = invert_unimodular(u)
    ginv = linalg.invert(latt.gram)
    orders = []
    gens = []
    for i in range(n):
        di = d[i][i]
        if di > 1:
            orders.append(di)
            col = tuple(uinv[r][i] for r in range(n))
            gens.append(linalg.mat_vec(ginv, col))
    even = latt.is_even()
    qmod = 2 if even else 1

    def bval(x, y) -> Fraction:
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                total += xi * sum(Fraction(latt.gram[i][j]) * y[j] for j in range(n))
        return total

    pair_rows = []
    qvals = []
    for i, g1 in enumerate(gens):
        pair_rows.append(tuple(bval(g1, g2) % 1 for g2 in gens))
        qvals.append(bval(g1, g1) % qmod)
    return DiscriminantGroup(
        orders=tuple(orders),
        generators=tuple(tuple(g) for g in gens),
        pairings=tuple(pair_rows),
        qvalues=tuple(qvals),
        even=even,
    )


# ---------------------------------------------------------------------------
# Brute-force value enumeration: the universal representation oracle


def _check_budget(rank: int, height: int, budget: int) -> None:
    if height < 1:
        raise ValueError("height bound must be >= 1")
    total = (2 * height + 1) ** rank - 1
    if total > budget:
        raise BudgetExceededError(
            f"enumeration of {total} vectors exceeds budget {budget}"
        )


def iter_box_values(latt: QuadLattice, height: int):
    """Yield (value, vector) over all nonzero vectors with max |coord| <= height,
    in lexicographic order of the coordinate tuple."""
    n = latt.rank
    gram = latt.gram
    rng = range(-height, height + 1)

    def rec(prefix: list[int], partial_rows: list[int], acc: int, i: int):
        # acc = q on prefix; partial_rows[j] = 2 * b(prefix, e_j) for j >= i
        if i == n:
            if any(prefix):
                yield acc, tuple(prefix)
            return
        gii = gram[i][i]
        row = gram[i]
        for x in rng:
            if i + 1 == n:
                if x or any(prefix):
                    yield acc + x * (partial_rows[i] + gii * x), tuple(prefix) + (x,)
            else:
                new_acc = acc + x * (partial_rows[i] + gii * x)
                new_partial = partial_rows[:]
                if x:
                    for j in range(i + 1, n):
                        new_partial[j] += 2 * x * row[j]
                yield from rec(prefix + [x], new_partial, new_acc, i + 1)

    yield from rec([], [0] * n, 0, 0)


def enumerate_values(
    latt: QuadLattice, height: int, budget: int = DEFAULT_ENUM_BUDGET
) -> dict[int, Vector]:
    """All attained q-values with one witness each (first in lexicographic
    order). Errors out rather than truncating when over budget."""
    _check_budget(latt.rank, height, budget)
    out: dict[int, Vector] = {}
    for value, vec in iter_box_values(latt, height):
        if value not in out:
            out[value] = vec
    return out


def min_nonzero_abs(
    latt: QuadLattice, height: int, budget: int = DEFAULT_ENUM_BUDGET
) -> tuple[int | None, Vector | None]:
    """Minimum |q| over nonzero values in the box, with a witness.

    Streaming form of enumerate_values for desk-scale verification runs.
    """
    _check_budget(latt.rank, height, budget)
    if latt.rank == 2:
        return _min_nonzero_abs_rank2(latt, height)
    best = None
    witness = None
    for value, vec in iter_box_values(latt, height):
        if value != 0 and (best is None or abs(value) < best):
            best = abs(value)
            witness = vec
    return best, witness


def _min_nonzero_abs_rank2(latt: QuadLattice, height: int):
    a = latt.gram[0][0]
    b2 = 2 * latt.gram[0][1]
    c = latt.gram[1][1]
    best = None
    witness = None
    for x in range(-height, height + 1):
        ax2 = a * x * x
        b2x = b2 * x
        for y in range(-height, height + 1):
            v = ax2 + (b2x + c * y) * y
            if v and (x or y):
                av = -v if v < 0 else v
                if best is None or av < best:
                    best = av
                    witness = (x, y)
    return best, witness


def all_values_divisible_by(
    latt: QuadLattice, p: int, height: int, budget: int = DEFAULT_ENUM_BUDGET
) -> tuple[bool, Vector | None]:
    """Check every q-value in the box is a multiple of p; returns a
    counterexample witness when one exists."""
    _check_budget(latt.rank, height, budget)
    if latt.rank == 2:
        a = latt.gram[0][0]
        b2 = 2 * latt.gram[0][1]
        c = latt.gram[1][1]
        for x in range(-height, height + 1):
            ax2 = a * x * x
            b2x = b2 * x
            for y in range(-height, height + 1):
                if (ax2 + (b2x + c * y) * y) % p:
                    return False, (x, y)
        return True, None
    for value, vec in iter_box_values(latt, height):
        if value % p:
            return False, vec
    return True, None


# ---------------------------------------------------------------------------
# Canonical search order for constructive vector hunts
#
# Vectors are produced shell by shell in increasing L1 norm; inside a shell
# the order is lexicographic with per-coordinate value order
# 1, 2, ..., 0, -1, -2, ...  Only sign-canonical vectors are emitted
# (first nonzero coordinate positive), optionally only primitive ones.


def iter_search_vectors(
    rank: int,
    max_l1: int,
    primitive_only: bool = True,
):
    for m in range(1, max_l1 + 1):
        yield from _shell(rank, m, primitive_only)


def _shell(rank: int, m: int, primitive_only: bool):
    def rec(prefix: list[int], i: int, remaining: int, seen: bool):
        if i == rank - 1:
            if remaining == 0:
                if seen:
                    yield tuple(prefix + [0])
            else:
                yield tuple(prefix + [remaining])
                if seen:
                    yield tuple(prefix + [-remaining])
            return
        for x in range(1, remaining + 1):
            yield from rec(prefix + [x], i + 1, remaining - x, True)
        yield from rec(prefix + [0], i + 1, remaining, seen)
        if seen:
            for x in range(1, remaining + 1):
                yield from rec(prefix + [-x], i + 1, remaining - x, True)

    for vec in rec([], 0, m, False):
        if primitive_only and math.gcd(*vec) != 1:
            continue
        yield vec
