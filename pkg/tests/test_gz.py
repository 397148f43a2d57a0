import random
from fractions import Fraction

import pytest

from polyred.certs import fiber_transport_check, verify_certificate
from polyred.gz import (
    GZPairing,
    decompose_cubes,
    pair_down,
    pair_up,
    pairing_to_equivalence,
    verify_pairing,
)
from polyred.linalg import RatMatrix
from polyred.maps import PolyMap, is_druzkowski, is_yagzhev
from polyred.poly import Poly


def V(n, i):
    return Poly.variable(n, i)


def reassemble(parts, n):
    total = Poly(n)
    for c, form in parts:
        total = total + (form ** 3).scale(c)
    return total


def random_cubic_form(rng, n):
    terms = {}
    for _ in range(rng.randrange(1, 4)):
        mono = {}
        for _ in range(3):
            v = rng.randrange(n)
            mono[v] = mono.get(v, 0) + 1
        key = tuple(sorted(mono.items()))
        terms[key] = terms.get(key, Fraction(0)) + rng.randrange(-3, 4)
    return Poly(n, {m: c for m, c in terms.items() if c})


def random_yagzhev(rng, n):
    return PolyMap([
        V(n, i) + random_cubic_form(rng, n) for i in range(n)
    ])


# --------------------------------------------------------- decompose_cubes


def test_single_cube():
    x = V(1, 0)
    assert decompose_cubes(x ** 3) == [(Fraction(1), x)]


def test_polarization_of_x2y():
    x, y = V(2, 0), V(2, 1)
    h = (x ** 2 * y).scale(6)
    # spot value first: 6 * 1^2 * 2 = 12 at (1, 2)
    assert h.eval_at([1, 2]) == 12
    parts = decompose_cubes(h)
    assert reassemble(parts, 2) == h
    assert sum((f ** 3).scale(c).eval_at([1, 2]) for c, f in parts) == 12


def test_polarization_of_xyz():
    x, y, z = (V(3, i) for i in range(3))
    h = (x * y * z).scale(6)
    parts = decompose_cubes(h)
    assert reassemble(parts, 3) == h


def test_decompose_random_forms():
    for seed in range(10):
        rng = random.Random(seed)
        n = rng.randrange(2, 5)
        h = random_cubic_form(rng, n)
        assert reassemble(decompose_cubes(h), n) == h


def test_decompose_zero_and_bad_degree():
    assert decompose_cubes(Poly(2)) == []
    x = V(1, 0)
    with pytest.raises(ValueError):
        decompose_cubes(x ** 2)
    with pytest.raises(ValueError):
        decompose_cubes(x ** 3 + x)


def test_forms_merge_up_to_scalar():
    x = V(1, 0)
    # 8x^3 = (2x)^3 should fold into a single pooled form
    parts = decompose_cubes((x ** 3).scale(8))
    assert parts == [(Fraction(8), x)]


# ------------------------------------------------------------------ pair_up


def test_pair_up_unit_example():
    x = V(1, 0)
    p = pair_up(PolyMap([x + x ** 3]))
    assert p.A == RatMatrix([[0, 0], [1, 1]])
    assert p.B == RatMatrix([[1, 1]])
    assert p.C == RatMatrix([[1], [0]])
    u, v = V(2, 0), V(2, 1)
    assert p.F == PolyMap([u, v + (u + v) ** 3])
    assert verify_pairing(p).ok


def test_pair_up_identity_pads_to_full_rank():
    g = PolyMap.identity(3)
    p = pair_up(g)
    assert p.F.n_in == 6
    assert p.A.rank() == 3
    assert is_druzkowski(p.F)[0]
    assert verify_pairing(p).ok


def test_pair_up_rejects_inhomogeneous():
    x, y = V(2, 0), V(2, 1)
    with pytest.raises(ValueError):
        pair_up(PolyMap([x + y ** 2, y]))


def test_pair_up_dimension_bookkeeping():
    rng = random.Random(3)
    g = random_yagzhev(rng, 3)
    p = pair_up(g)
    m = 3
    r = p.F.n_in - m
    assert p.A.nrows == p.A.ncols == m + r
    assert (p.B.nrows, p.B.ncols) == (m, m + r)
    assert (p.C.nrows, p.C.ncols) == (m + r, m)


# ---------------------------------------------------------------- pair_down


def test_pair_down_unit_example():
    u, v = V(2, 0), V(2, 1)
    F = PolyMap([u, v + (u + v) ** 3])
    A = RatMatrix([[0, 0], [1, 1]])
    p = pair_down(F, A)
    x = V(1, 0)
    assert p.G == PolyMap([x + x ** 3])
    assert p.B == RatMatrix([[1, 1]])
    assert p.C == RatMatrix([[1], [0]])
    assert verify_pairing(p).ok


def test_pair_down_zero_matrix_rejected():
    with pytest.raises(ValueError):
        pair_down(PolyMap.identity(2), RatMatrix.zero(2, 2))


def test_pair_down_inconsistent_map_rejected():
    u, v = V(2, 0), V(2, 1)
    F = PolyMap([u, v + u ** 3])
    A = RatMatrix([[0, 0], [1, 1]])  # says (u+v)^3, map has u^3
    with pytest.raises(ValueError):
        pair_down(F, A)


def test_pair_down_rank_two_in_dimension_four():
    rows = [
        [1, 0, 1, 0],
        [0, 1, 0, 1],
        [1, 1, 1, 1],
        [0, 0, 0, 0],
    ]
    A = RatMatrix([[Fraction(a) for a in r] for r in rows])
    assert A.rank() == 2
    comps = []
    for i in range(4):
        form = Poly(4)
        for j, a in enumerate(rows[i]):
            if a:
                form = form + V(4, j).scale(a)
        comps.append(V(4, i) + form ** 3)
    p = pair_down(PolyMap(comps), A)
    assert p.G.n_in == 2
    assert verify_pairing(p).ok


# -------------------------------------------------------------- roundtrips


def test_round_trip_reproduces_g_exactly():
    for seed in range(8):
        rng = random.Random(seed)
        g = random_yagzhev(rng, rng.randrange(1, 4))
        p = pair_up(g)
        back = pair_down(p.F, p.A)
        assert back.G == g
        assert back.B == p.B and back.C == p.C


# ----------------------------------------------------------- verification


def test_verify_catches_kernel_mismatch():
    u, v = V(2, 0), V(2, 1)
    F = PolyMap([u, v + (u + v) ** 3])
    A = RatMatrix([[0, 0], [1, 1]])
    B = RatMatrix([[1, 0]])
    C = RatMatrix([[1], [0]])
    x = V(1, 0)
    tampered = GZPairing(A, B, C, F, PolyMap([x]))
    report = verify_pairing(tampered)
    assert not report.ok
    assert any("kernel" in s for s in report.issues)


def test_verify_catches_bc_tampering():
    x = V(1, 0)
    p = pair_up(PolyMap([x + x ** 3]))
    bad = GZPairing(p.A, p.B, RatMatrix([[2], [0]]), p.F, p.G)
    report = verify_pairing(bad)
    assert not report.ok
    assert any("identity" in s for s in report.issues)


# -------------------------------------------------------------- equivalence


def test_equivalence_certificate_unit_example():
    x = V(1, 0)
    p = pair_up(PolyMap([x + x ** 3]))
    cert = pairing_to_equivalence(p)
    assert len(cert.moves) == 4
    assert cert.target == p.F
    assert verify_certificate(cert).ok
    report = fiber_transport_check(cert, seed=0, samples=20)
    assert report.ok and report.samples_run == 20


def test_equivalence_certificate_identity_g():
    p = pair_up(PolyMap.identity(2))
    cert = pairing_to_equivalence(p)
    assert verify_certificate(cert).ok
    assert cert.target == p.F


def test_equivalence_random_pairings():
    for seed in (2, 5, 7):
        rng = random.Random(seed)
        g = random_yagzhev(rng, 2)
        cert = pairing_to_equivalence(pair_up(g))
        assert verify_certificate(cert).ok
        assert fiber_transport_check(cert, seed=seed, samples=10).ok


def test_equivalence_refuses_invalid_pairing():
    x = V(1, 0)
    p = pair_up(PolyMap([x + x ** 3]))
    bad = GZPairing(p.A, p.B, RatMatrix([[2], [0]]), p.F, p.G)
    with pytest.raises(ValueError):
        pairing_to_equivalence(bad)
