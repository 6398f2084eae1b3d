"""Lattice isometries of signature (1, n): trichotomy and constructors.

classify() is exact and component-agnostic: the characteristic polynomial
is stripped of cyclotomic factors; a non-cyclotomic remainder forces an
eigenvalue off the unit circle (hyperbolic), otherwise the element is
quasi-unipotent and either has finite order (elliptic) or a rank-3
Jordan cell at a root of unity (parabolic).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import (
    BadInputError,
    DegenerateDirectionError,
    DimensionMismatchError,
    InternalInconsistencyError,
    IsotropicFormError,
    NotBinaryError,
    NotFoundWithinBoundError,
    NotIsometryError,
    WrongSignatureError,
)
from .forge import find_isotropic
from .intmath import pell_fundamental, is_square
from .lattice import (
    QuadLattice,
    Vector,
    iter_search_vectors,
    orthogonal_complement,
    pairing,
    qvalue,
    signature,
    span,
)
from .limits import DEFAULT_LIMITS, SearchLimits
from .linalg import (
    char_poly,
    det_bareiss,
    freeze,
    identity,
    mat_mul,
    mat_pow,
    mat_sub,
    mat_vec,
    is_zero,
    transpose,
)
from .polys import poly_eval, strip_cyclotomic


class Tag(Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class Isometry:
    """Integer matrix g with g^T G g == G (columns are basis images)."""

    lattice: QuadLattice
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not is_isometry(self.matrix, self.lattice):
            raise NotIsometryError("matrix does not preserve the Gram matrix")

    def apply(self, v) -> Vector:
        return mat_vec(self.matrix, v)

    def power(self, k: int) -> "Isometry":
        if k < 0:
            return Isometry(self.lattice, inverse_isometry_matrix(self.matrix)).power(-k)
        return Isometry(self.lattice, mat_pow(self.matrix, k))

    def inverse(self) -> "Isometry":
        return Isometry(self.lattice, inverse_isometry_matrix(self.matrix))


@dataclass(frozen=True)
class IsomClass:
    """Trichotomy tag with its defining evidence."""

    tag: Tag
    order: int | None = None  # elliptic: exact finite order
    quasi_unipotent_order: int | None = None  # parabolic: least k with g^k unipotent
    fixed_isotropic: Vector | None = None  # parabolic: fixed line of g^k
    dominant_factor: tuple[int, ...] | None = None  # hyperbolic: non-cyclotomic part
    dominant_interval: tuple[Fraction, Fraction] | None = None  # isolates lambda > 1
    cyclotomic_orders: tuple[tuple[int, int], ...] = ()  # (m, multiplicity) factors
    preserves_positive_cone: bool | None = None


def is_isometry(matrix, latt: QuadLattice) -> bool:
    n = latt.rank
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise DimensionMismatchError("matrix rank != lattice rank")
    if mat_mul(transpose(matrix), mat_mul(latt.gram, matrix)) != freeze(latt.gram):
        return False
    return abs(det_bareiss(matrix)) == 1


def inverse_isometry_matrix(matrix) -> tuple[tuple[int, ...], ...]:
    from .linalg import invert_unimodular

    return invert_unimodular(matrix)


def _exact_order(matrix, k: int) -> int:
    """Least divisor d of k with matrix^d == I (caller guarantees one exists)."""
    n = len(matrix)
    for d in sorted(
        d for d in range(1, k + 1) if k % d == 0
    ):
        if mat_pow(matrix, d) == identity(n):
            return d
    raise InternalInconsistencyError("no order divides the cyclotomic lcm")


def _dominant_root_interval(poly) -> tuple[Fraction, Fraction]:
    """Isolating interval (lo, hi) with lo > 1 containing a real root.

    Bisection from the Cauchy bound; the polynomial has a real root > 1
    because its roots come in lambda, 1/lambda pairs off the unit circle.
    """
    bound = Fraction(1 + max(abs(c) for c in poly), 1)
    lo, hi = Fraction(1), bound
    if poly_eval(poly, lo) == 0:
        raise InternalInconsistencyError("1 is a root of the non-cyclotomic part")
    s_lo = 1 if poly_eval(poly, lo) > 0 else -1
    # largest real root of a monic polynomial: sign at the Cauchy bound is +
    if s_lo > 0:
        # same sign at both ends: bisect on the derivative-free grid to find
        # a sign change among rational sample points
        samples = 1
        while True:
            samples *= 2
            step = (hi - lo) / samples
            prev = lo
            prev_sign = s_lo
            found = False
            for i in range(1, samples + 1):
                t = lo + i * step
                val = poly_eval(poly, t)
                if val == 0:
                    return (t - step, t + step)
                sgn = 1 if val > 0 else -1
                if sgn != prev_sign:
                    lo, hi = prev, t
                    found = True
                    break
                prev, prev_sign = t, sgn
            if found:
                break
            if samples > 4096:
                # even multiplicities defeat sign sampling; the coarse
                # Cauchy interval is still a valid (if weak) certificate
                return Fraction(1), bound
    for _ in range(12):
        mid = (lo + hi) / 2
        val = poly_eval(poly, mid)
        if val == 0:
            return (mid - (hi - lo) / 4, mid + (hi - lo) / 4)
        if (val > 0) == (poly_eval(poly, hi) > 0):
            hi = mid
        else:
            lo = mid
    return lo, hi


def _positive_cone_flag(g: Isometry) -> bool:
    from .padic import rational_diagonalize

    diag, basis = rational_diagonalize(g.lattice.gram)
    idx = next(i for i, d in enumerate(diag) if d > 0)
    col = [basis[r][idx] for r in range(g.lattice.rank)]
    den = math.lcm(*[f.denominator for f in col])
    w = tuple(int(f * den) for f in col)
    gw = g.apply(w)
    return pairing(g.lattice, gw, w) > 0


def classify(g: Isometry) -> IsomClass:
    """Exactly one of elliptic (finite order), hyperbolic (real eigenvalue
    off the unit circle) or parabolic (infinite order, quasi-unipotent)."""
    pos, neg = signature(g.lattice)
    if pos != 1 or neg < 1:
        raise WrongSignatureError("classification needs signature (1, n), n >= 1")
    cp = char_poly(g.matrix)
    rest, cyclo = strip_cyclotomic(cp)
    cone = _positive_cone_flag(g)
    orders = tuple(sorted(cyclo.items()))
    if rest != (1,):
        return IsomClass(
            tag=Tag.HYPERBOLIC,
            dominant_factor=rest,
            dominant_interval=_dominant_root_interval(rest),
            cyclotomic_orders=orders,
            preserves_positive_cone=cone,
        )
    k = math.lcm(*cyclo.keys())
    n = g.lattice.rank
    gk = mat_pow(g.matrix, k)
    if gk == identity(n):
        return IsomClass(
            tag=Tag.ELLIPTIC,
            order=_exact_order(g.matrix, k),
            cyclotomic_orders=orders,
            preserves_positive_cone=cone,
        )
    b = mat_sub(gk, identity(n))
    b2 = mat_mul(b, b)
    b3 = mat_mul(b2, b)
    if not is_zero(b3) or is_zero(b2):
        raise InternalInconsistencyError(
            "quasi-unipotent part is not a rank-3 Jordan cell"
        )
    fixed = _primitive_column(b2)
    if qvalue(g.lattice, fixed) != 0 or mat_vec(gk, fixed) != fixed:
        raise InternalInconsistencyError("fixed line of g^k is not isotropic")
    return IsomClass(
        tag=Tag.PARABOLIC,
        quasi_unipotent_order=k,
        fixed_isotropic=fixed,
        cyclotomic_orders=orders,
        preserves_positive_cone=cone,
    )


def _primitive_column(mat) -> Vector:
    cols = transpose(mat)
    col = next(c for c in cols if any(c))
    g = math.gcd(*col)
    col = tuple(x // g for x in col)
    for x in col:
        if x != 0:
            return col if x > 0 else tuple(-y for y in col)
    raise InternalInconsistencyError("zero column")


def cyclotomic_test(poly) -> bool:
    """True iff the monic integer polynomial is a product of cyclotomics."""
    from .polys import is_cyclotomic_product

    return is_cyclotomic_product(tuple(poly))


# ---------------------------------------------------------------------------
# Constructors


def pell_automorph(latt: QuadLattice) -> Isometry:
    """Infinite-order isometry of an anisotropic binary form of signature
    (1,1), from the fundamental solution of t^2 - D u^2 = 4.

    With Gram [[g11, g12], [g12, g22]] the form is g11 x^2 + 2 g12 xy +
    g22 y^2; its discriminant D = 4 (g12^2 - g11 g22) is 4 * |det| > 0 and
    D/4 square exactly when the form represents zero.
    """
    if latt.rank != 2:
        raise NotBinaryError("Pell automorphs exist for binary forms only")
    g11, g12 = latt.gram[0][0], latt.gram[0][1]
    g22 = latt.gram[1][1]
    d4 = g12 * g12 - g11 * g22  # D/4
    if d4 <= 0:
        raise IsotropicFormError("form is not indefinite")
    if is_square(d4):
        raise IsotropicFormError("form represents zero; no Pell automorph")
    x, y = pell_fundamental(d4)
    t, u = 2 * x, y
    a, b, c = g11, 2 * g12, g22
    matrix = (
        ((t - b * u) // 2, -c * u),
        (a * u, (t + b * u) // 2),
    )
    return Isometry(latt, matrix)


def eichler_transvection(
    latt: QuadLattice, v: Vector, a: Vector
) -> Isometry:
    """Unipotent isometry x -> x + b(x,a) v - b(x,v) a - q(a)/2 b(x,v) v
    attached to an isotropic v and a ⊥ v; a is doubled when q(a) is odd.

    Fixes v; (g - I)^3 = 0 with (g - I)^2 != 0 as long as q(a) != 0.
    """
    n = latt.rank
    if n < 3:
        raise BadInputError("rank >= 3 required (the complement of v is too small)")
    if qvalue(latt, v) != 0:
        raise BadInputError("v must be isotropic")
    if pairing(latt, v, a) != 0:
        raise BadInputError("a must pair to zero with v")
    if _proportional(v, a):
        raise BadInputError("a must not be proportional to v")
    if qvalue(latt, a) == 0:
        raise DegenerateDirectionError(
            "q(a) = 0 gives a shear with a rank-2 Jordan cell; pick another a"
        )
    if qvalue(latt, a) % 2 != 0:
        a = tuple(2 * x for x in a)
    qa_half = qvalue(latt, a) // 2
    cols = []
    for i in range(n):
        e = tuple(int(i == j) for j in range(n))
        bxa = pairing(latt, e, a)
        bxv = pairing(latt, e, v)
        img = tuple(
            e[r] + bxa * v[r] - bxv * a[r] - qa_half * bxv * v[r] for r in range(n)
        )
        cols.append(img)
    matrix = tuple(zip(*cols))
    iso = Isometry(latt, matrix)
    b = mat_sub(matrix, identity(n))
    if is_zero(mat_mul(b, b)):
        raise DegenerateDirectionError("transvection collapsed to a small Jordan cell")
    if not is_zero(mat_mul(mat_mul(b, b), b)):
        raise InternalInconsistencyError("(g - I)^3 != 0 for a transvection")
    if iso.apply(v) != tuple(v):
        raise InternalInconsistencyError("transvection does not fix v")
    return iso


def _proportional(v, a) -> bool:
    return all(
        v[i] * a[j] == v[j] * a[i] for i in range(len(v)) for j in range(len(v))
    )


def find_parabolic(
    latt: QuadLattice, limits: SearchLimits = DEFAULT_LIMITS
) -> Isometry:
    """Verified parabolic isometry: isotropic v, then a transvection along
    a direction a ⊥ v with q(a) != 0."""
    pos, neg = signature(latt)
    if pos != 1 or neg < 2:
        raise WrongSignatureError("need signature (1, n) with n >= 2")
    v = find_isotropic(latt, limits)
    comp = orthogonal_complement(span(latt, [v]))
    scanned = 0
    for coords in iter_search_vectors(comp.rank, limits.max_l1):
        scanned += 1
        if scanned > limits.vector_budget:
            break
        a = comp.to_ambient(coords)
        if qvalue(latt, a) == 0 or _proportional(v, a):
            continue
        iso = eichler_transvection(latt, v, a)
        tag = classify(iso).tag
        if tag is not Tag.PARABOLIC:
            raise InternalInconsistencyError(f"transvection classified {tag}")
        return iso
    raise NotFoundWithinBoundError("no usable transvection direction found")


def find_hyperbolic(latt: QuadLattice) -> Isometry:
    """Pell automorph of an anisotropic signature-(1,1) lattice, verified
    hyperbolic."""
    iso = pell_automorph(latt)
    tag = classify(iso).tag
    if tag is not Tag.HYPERBOLIC:
        raise InternalInconsistencyError(f"Pell automorph classified {tag}")
    return iso
