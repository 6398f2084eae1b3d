import random

import pytest

from qforge.catalog import resolve
from qforge.errors import (
    NotFoundWithinBoundError,
    PreconditionError,
)
from qforge.forge import (
    Rank2Result,
    SmallnessCertificate,
    check_certificate,
    find_isotropic,
    find_isotropic_pair,
    find_rank2_avoiding,
    find_w_odd_valuation,
    select_prime,
    verify_certificate,
)
from qforge.lattice import (
    all_values_divisible_by,
    diag_lattice,
    direct_sum,
    from_rows,
    min_nonzero_abs,
    orthogonal_complement,
    pairing,
    qvalue,
    saturation_index,
    signature,
    span,
)
from qforge.limits import SearchLimits

U = from_rows([[0, 1], [1, 0]], label="U")
UU2 = direct_sum(U, U, diag_lattice(2), label="U+U+<2>")


def test_find_isotropic_examples():
    assert find_isotropic(U) == (1, 0)
    assert find_isotropic(diag_lattice(1, -1)) == (1, 1)
    assert find_isotropic(diag_lattice(1, 1, -1, -1, -1)) == (1, 0, 1, 0, 0)


def test_find_isotropic_output_contract():
    import math

    for latt in (U, diag_lattice(2, -3, 5, -7, 11)):
        v = find_isotropic(latt)
        assert qvalue(latt, v) == 0
        assert math.gcd(*v) == 1


def test_find_isotropic_not_found():
    with pytest.raises(NotFoundWithinBoundError):
        find_isotropic(diag_lattice(5, -15), SearchLimits(max_l1=12))


def test_find_isotropic_pair_u():
    v, vp = find_isotropic_pair(U)
    assert (v, vp) == ((1, 0), (0, 1))
    assert pairing(U, v, vp) == 1


def test_find_isotropic_pair_uu():
    v, vp = find_isotropic_pair(direct_sum(U, U))
    assert (v, vp) == ((1, 0, 0, 0), (0, 1, 0, 0))


def test_find_isotropic_pair_generic():
    latt = diag_lattice(1, -1, -1, 1, -1)
    v, vp = find_isotropic_pair(latt)
    assert qvalue(latt, v) == 0
    assert qvalue(latt, vp) == 0
    assert pairing(latt, v, vp) != 0


def test_find_w_worked_instance():
    comp = orthogonal_complement(span(UU2, [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0)]))
    w, beta, n = find_w_odd_valuation(comp, 5, want_negative=True)
    assert w == (1, -5, 0)
    assert comp.to_ambient(w) == (0, 0, 1, -5, 0)
    assert (beta, n) == (-2, 0)


def test_find_w_rank1():
    comp = span(diag_lattice(2), [(1,)])
    w, beta, n = find_w_odd_valuation(comp, 2, want_negative=False)
    assert w == (1,) and beta == 1 and n == 0


def test_find_w_unreachable_valuation():
    comp = span(diag_lattice(-2, -2), [(1, 0), (0, 1)])
    with pytest.raises(NotFoundWithinBoundError):
        find_w_odd_valuation(comp, 5, want_negative=True, limits=SearchLimits(max_l1=2))


def test_certificate_worked_example():
    cert = SmallnessCertificate(p=5, alpha1=30, alpha2=-10, beta1=6, beta2=-2, n1=0, n2=0)
    assert verify_certificate(cert, 4)
    assert not verify_certificate(cert, 5)  # p > N must be strict


def test_certificate_isotropic_rejected():
    cert = SmallnessCertificate(p=5, alpha1=5, alpha2=-5, beta1=1, beta2=-1, n1=0, n2=0)
    ok, reason = check_certificate(cert, 1)
    assert not ok
    assert "isotropic" in reason or "zero" in reason


def test_certificate_malformed_rejected():
    cert = SmallnessCertificate(p=5, alpha1=30, alpha2=-10, beta1=6, beta2=-2, n1=1, n2=0)
    assert not verify_certificate(cert, 1)
    cert = SmallnessCertificate(p=5, alpha1=25, alpha2=-10, beta1=5, beta2=-2, n1=0, n2=0)
    assert not verify_certificate(cert, 1)


def test_rank2_preconditions():
    with pytest.raises(PreconditionError):
        find_rank2_avoiding(diag_lattice(1, 1), 3)
    with pytest.raises(PreconditionError):
        find_rank2_avoiding(diag_lattice(1, 1, 1, 1, 1), 3)


def test_rank2_worked_instance():
    res = find_rank2_avoiding(UU2, 4)
    cert = res.certificate
    assert cert.p == 5
    assert res.w == (0, 0, 1, -5, 0)
    assert qvalue(UU2, res.v1) == cert.alpha1
    assert qvalue(UU2, res.w) == cert.alpha2
    assert pairing(UU2, res.v1, res.w) == 0
    assert verify_certificate(cert, 4)
    latt = res.lattice.as_lattice()
    assert signature(latt) == (1, 1)
    assert saturation_index(res.lattice) == 1
    best, _ = min_nonzero_abs(latt, 200)
    assert best is not None and best >= 5


def test_rank2_k3():
    res = find_rank2_avoiding(resolve("K3"), 2)
    assert res.certificate.p >= 3
    latt = res.lattice.as_lattice()
    assert signature(latt) == (1, 1)
    best, _ = min_nonzero_abs(latt, 200)
    assert best is not None and best >= 3


def test_rank2_values_multiples_of_p():
    res = find_rank2_avoiding(UU2, 4)
    ok, _ = all_values_divisible_by(res.lattice.as_lattice(), res.certificate.p, 100)
    assert ok


def test_select_prime():
    assert select_prime(UU2, 4) == 5
    assert select_prime(UU2, 0) == 3


def test_av_bvp_identity():
    # q(a v + b v') = 2 a b q(v, v') for isotropic v, v'
    rng = random.Random(11)
    latt = direct_sum(U, U)
    v, vp = find_isotropic_pair(latt)
    for _ in range(25):
        a = rng.randint(-9, 9)
        b = rng.randint(-9, 9)
        combo = tuple(a * x + b * y for x, y in zip(v, vp))
        assert qvalue(latt, combo) == 2 * a * b * pairing(latt, v, vp)


def test_rank2_deterministic():
    first = find_rank2_avoiding(UU2, 4)
    second = find_rank2_avoiding(UU2, 4)
    assert first == second
