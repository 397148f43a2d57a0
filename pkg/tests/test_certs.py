import random
from fractions import Fraction

import pytest

from polyred.certs import (
    Automorphism,
    Certificate,
    CertificateBuilder,
    ExtendFreshVars,
    PostCompose,
    PreCompose,
    RationalMap,
    SegreExtend,
    apply_move,
    fiber_transport_check,
    substitute_rational,
    verify_certificate,
)
from polyred.linalg import RatMatrix
from polyred.maps import PolyMap
from polyred.poly import Poly


def V(n, i):
    return Poly.variable(n, i)


def C(n, c):
    return Poly.const(n, c)


# -- automorphisms ---------------------------------------------------------


def test_linear_automorphism_two_sided():
    a = Automorphism.from_linear(RatMatrix([[2, 1], [1, 1]]))
    assert a.verify_two_sided() is None
    # a deliberately wrong inverse is caught
    bad = Automorphism(
        PolyMap.from_matrix(RatMatrix([[2, 1], [1, 1]])),
        PolyMap.from_matrix(RatMatrix([[1, 0], [0, 1]])),
    )
    assert bad.verify_two_sided() is not None


def test_block_shear():
    n = 3
    sh = Automorphism.block_shear(n, {2: V(n, 0) * V(n, 0)})
    assert sh.verify_two_sided() is None
    assert sh.forward.eval_at([2, 0, 1]) == [2, 0, 5]
    with pytest.raises(ValueError):
        Automorphism.block_shear(n, {2: V(n, 2) + V(n, 0)})


def test_block_shear_multiple_targets():
    n = 4
    sh = Automorphism.block_shear(
        n, {2: V(n, 0) ** 3, 3: V(n, 0) * V(n, 1)}
    )
    assert sh.verify_two_sided() is None


def test_permutation_automorphism():
    a = Automorphism.permutation(3, [2, 0, 1])
    assert a.verify_two_sided() is None
    assert a.forward.eval_at([10, 20, 30]) == [30, 10, 20]


def test_translation_automorphism():
    a = Automorphism.translation([1, -2])
    assert a.verify_two_sided() is None
    assert a.forward.eval_at([0, 0]) == [1, -2]


def test_rational_inverse_verification():
    # forward (x, y) -> (x, y(1 + x... ) no: use v * scalar polynomial:
    # sigma(x, v) = (x, v * (1 + x^2)) has rational inverse (x, v / (1 + x^2))
    n = 2
    x, v = V(n, 0), V(n, 1)
    w = C(n, 1) + x * x
    fwd = PolyMap([x, v * w])
    inv = RationalMap([x * w, v], w)
    a = Automorphism(fwd, inv)
    assert a.verify_two_sided() is None
    # wrong numerator fails
    bad = Automorphism(fwd, RationalMap([x * w, v + C(n, 1)], w))
    assert bad.verify_two_sided() is not None


def test_substitute_rational():
    n = 2
    x, y = V(n, 0), V(n, 1)
    p = x * x + y
    q, k = substitute_rational(p, [x, y], y)
    # p(x/y, y/y) = x^2/y^2 + 1 -> (x^2 + y^2) / y^2
    assert k == 2
    assert q == x * x + y * y


# -- moves ------------------------------------------------------------------


def test_extend_fresh_vars():
    f = PolyMap([V(1, 0) ** 2])
    g = apply_move(f, ExtendFreshVars(2))
    assert g.n_in == 3 and g.n_out == 3
    assert g.eval_at([2, 5, 7]) == [4, 5, 7]


def test_post_and_pre_compose():
    f = PolyMap([V(2, 0) + V(2, 1) ** 2, V(2, 1)])
    a = Automorphism.block_shear(2, {0: V(2, 1) ** 2})
    post = apply_move(f, PostCompose(a))
    assert post.components[0] == V(2, 0) + V(2, 1) ** 2 + V(2, 1) ** 2
    pre = apply_move(f, PreCompose(a))
    assert pre.components[0] == V(2, 0) + V(2, 1) ** 2 + V(2, 1) ** 2
    assert pre.components[1] == V(2, 1)


def test_compose_sharing():
    # untouched components are carried over as the same objects
    f = PolyMap([V(3, 0) ** 3, V(3, 1), V(3, 2)])
    a = Automorphism.block_shear(3, {0: V(3, 1) * V(3, 2)})
    g = apply_move(f, PostCompose(a))
    assert g.components[1] is f.components[1]
    assert g.components[2] is f.components[2]


def test_segre_move():
    f = PolyMap([V(1, 0) + V(1, 0) ** 2])
    g = apply_move(f, SegreExtend())
    # (x + t x^2, t)
    assert g.n_in == 2
    assert g.components[0] == V(2, 0) + V(2, 1) * V(2, 0) ** 2
    assert g.components[1] == V(2, 1)


def test_segre_needs_zero_constant():
    f = PolyMap([V(1, 0) + C(1, 1)])
    with pytest.raises(ValueError):
        apply_move(f, SegreExtend())


def test_segre_jacobian_identity_small():
    # det J of (F(tx)/t, t) at (x, t) equals det J of F at tx
    from polyred.maps import jacobian_det

    f = PolyMap([V(2, 0) + V(2, 1) ** 3, V(2, 1) + V(2, 0) ** 2])
    g = apply_move(f, SegreExtend())
    jf = jacobian_det(f)
    jg = jacobian_det(g)
    n = 3
    t = V(n, 2)
    scaled = [V(n, 0) * t, V(n, 1) * t]
    assert jg == jf.extend(n).substitute(scaled + [t])


# -- certificates ------------------------------------------------------------


def build_toy_certificate():
    f = PolyMap([V(1, 0) + V(1, 0) ** 2])
    b = CertificateBuilder(f, kind="toy")
    b.push(ExtendFreshVars(1))
    sh = Automorphism.block_shear(2, {1: V(2, 0) ** 2})
    b.push(PostCompose(sh))
    b.push(SegreExtend())
    return b.build()


def test_certificate_roundtrip():
    cert = build_toy_certificate()
    rep = verify_certificate(cert)
    assert rep.ok, rep.issues
    assert rep.moves_checked == 3
    assert rep.autos_checked == 1


def test_certificate_tampered_intermediate():
    cert = build_toy_certificate()
    tampered = Certificate(
        cert.source,
        cert.target,
        cert.moves,
        cert.intermediates[:-2]
        + [PolyMap.identity(cert.intermediates[-2].n_in)]
        + cert.intermediates[-1:],
        cert.kind,
    )
    rep = verify_certificate(tampered)
    assert not rep.ok


def test_certificate_tampered_target():
    cert = build_toy_certificate()
    wrong = Certificate(
        cert.source,
        PolyMap.identity(cert.target.n_in),
        cert.moves,
        cert.intermediates,
        cert.kind,
    )
    rep = verify_certificate(wrong)
    assert not rep.ok
    assert any("target" in msg for msg in rep.issues)


def test_certificate_bad_automorphism():
    f = PolyMap([V(2, 0), V(2, 1)])
    forged = Automorphism(
        PolyMap([V(2, 0) + V(2, 1) ** 2, V(2, 1)]),
        PolyMap([V(2, 0), V(2, 1)]),  # not the inverse
    )
    nxt = apply_move(f, PostCompose(forged))
    cert = Certificate(f, nxt, [PostCompose(forged)], [f, nxt])
    rep = verify_certificate(cert)
    assert not rep.ok
    assert any("automorphism" in msg for msg in rep.issues)


def test_fiber_transport_ok():
    cert = build_toy_certificate()
    rep = fiber_transport_check(cert, seed=11, samples=25)
    assert rep.ok, rep.issues
    assert rep.samples_run == 25


def test_fiber_transport_catches_wrong_target():
    cert = build_toy_certificate()
    wrong = Certificate(
        cert.source,
        PolyMap.identity(cert.target.n_in),
        cert.moves,
        cert.intermediates,
        cert.kind,
    )
    rep = fiber_transport_check(wrong, seed=11, samples=10)
    assert not rep.ok


def test_fiber_transport_with_rational_precompose():
    # sigma(x, v) = (x, v (1 + x^2)): fiber transport inverts it at points
    n = 2
    x, v = V(n, 0), V(n, 1)
    w = C(n, 1) + x * x
    sigma = Automorphism(PolyMap([x, v * w]), RationalMap([x * w, v], w))
    f = PolyMap([x + v, v])
    b = CertificateBuilder(f)
    b.push(PreCompose(sigma))
    cert = b.build()
    assert verify_certificate(cert).ok
    rep = fiber_transport_check(cert, seed=3, samples=15)
    assert rep.ok, rep.issues
    assert rep.samples_run > 0


def test_builder_intermediates_complete():
    cert = build_toy_certificate()
    assert len(cert.intermediates) == len(cert.moves) + 1
    assert cert.intermediates[0] == cert.source
    assert cert.intermediates[-1] == cert.target
