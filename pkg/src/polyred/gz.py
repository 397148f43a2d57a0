"""Pairing of cubic homogeneous maps with cubic linear partners.

A pairing is a triple of matrices (A, B, C) with B C = I and
ker B = ker A, linking F(X) = X + (A X)^{*3} on R^n to the lower
dimensional G(x) = B F(C x) = x + B (A C x)^{*3} on R^m.  The power
``*3`` cubes componentwise, so F's nonlinear part is a vector of cubes
of linear forms while G's can be any cubic homogeneous polynomials.

pair_up builds a partner F for a given G by writing each component of
G - X as a rational combination of cubes of linear forms (polarization
does this monomial by monomial), pair_down recovers G from F's
coefficient matrix, and pairing_to_equivalence turns a verified pairing
into a certificate that the two maps agree up to fresh variables and
invertible coordinate changes.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .certs import (
    Automorphism,
    Certificate,
    CertificateBuilder,
    ExtendFreshVars,
    PostCompose,
    PreCompose,
)
from .linalg import RatMatrix
from .maps import PolyMap, is_yagzhev
from .poly import Poly


def _polarize(mono, coeff, m):
    """One cubic monomial as (coefficient, linear-form vector) pieces.

    6uvw = (u+v+w)^3 - (u+v)^3 - (v+w)^3 - (u+w)^3 + u^3 + v^3 + w^3,
    specialized when variables repeat.
    """

    def vec(*pairs):
        v = [Fraction(0)] * m
        for i, a in pairs:
            v[i] += a
        return tuple(v)

    exps = list(mono)
    if len(exps) == 1:
        return [(coeff, vec((exps[0][0], 1)))]
    s = coeff / 6
    if len(exps) == 2:
        # u^2 w with u the doubled variable
        if exps[0][1] == 2:
            u, w = exps[0][0], exps[1][0]
        else:
            u, w = exps[1][0], exps[0][0]
        return [
            (s, vec((u, 2), (w, 1))),
            (-s, vec((u, 2))),
            (-s * 2, vec((u, 1), (w, 1))),
            (s * 2, vec((u, 1))),
            (s, vec((w, 1))),
        ]
    u, v, w = (p[0] for p in exps)
    return [
        (s, vec((u, 1), (v, 1), (w, 1))),
        (-s, vec((u, 1), (v, 1))),
        (-s, vec((v, 1), (w, 1))),
        (-s, vec((u, 1), (w, 1))),
        (s, vec((u, 1))),
        (s, vec((v, 1))),
        (s, vec((w, 1))),
    ]


def _primitive(vec):
    """(integer key, scalar) with vec = scalar * key, key primitive and
    its first nonzero entry positive."""
    den = 1
    for q in vec:
        den = den * q.denominator // gcd(den, q.denominator)
    ints = [int(q * den) for q in vec]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    sign = 1
    for a in ints:
        if a:
            sign = 1 if a > 0 else -1
            break
    key = tuple(a * sign // g for a in ints)
    return key, Fraction(sign * g, den)


def decompose_cubes(h: Poly):
    """Write a cubic form as sum of c * (linear form)^3, exactly.

    Forms are merged when they agree up to a scalar (the scalar's cube
    folds into the coefficient); coefficients that cancel to zero drop
    out.  Returns [(coefficient, form Poly)] in first-seen order.
    """
    if h.is_zero():
        return []
    if h.degree() != 3 or not h.is_homogeneous():
        raise ValueError("cube decomposition expects a cubic form")
    m = h.varcount
    acc = {}
    order = []
    for mono, coeff in h.sorted_terms():
        for c, v in _polarize(mono, coeff, m):
            key, lam = _primitive(v)
            if key not in acc:
                acc[key] = Fraction(0)
                order.append(key)
            acc[key] += c * lam ** 3
    out = []
    for key in order:
        if acc[key]:
            form = Poly(
                m, {((i, 1),): Fraction(a) for i, a in enumerate(key) if a}
            )
            out.append((acc[key], form))
    return out


@dataclass
class GZPairing:
    A: RatMatrix
    B: RatMatrix
    C: RatMatrix
    F: PolyMap
    G: PolyMap


@dataclass
class PairingReport:
    ok: bool
    issues: list


def _cubic_linear_from(A: RatMatrix) -> PolyMap:
    """X + (A X)^{*3}."""
    n = A.nrows
    comps = []
    for i in range(n):
        form = Poly(n)
        for j, a in enumerate(A.rows[i]):
            if a:
                form = form + Poly.variable(n, j).scale(a)
        comps.append(Poly.variable(n, i) + form ** 3)
    return PolyMap(comps)


def _bfc(B: RatMatrix, F: PolyMap, C: RatMatrix) -> PolyMap:
    inner = F.compose(PolyMap.from_matrix(C))
    m = B.nrows
    comps = []
    for i in range(m):
        p = Poly(C.ncols)
        for j, b in enumerate(B.rows[i]):
            if b:
                p = p + inner.components[j].scale(b)
        comps.append(p)
    return PolyMap(comps)


def verify_pairing(p: GZPairing) -> PairingReport:
    """Check every pairing axiom exactly; verdicts, never exceptions."""
    issues = []
    m = p.G.n_in
    n = p.F.n_in
    if (p.A.nrows, p.A.ncols) != (n, n) or (p.B.nrows, p.B.ncols) != (m, n) \
            or (p.C.nrows, p.C.ncols) != (n, m):
        return PairingReport(False, ["matrix shapes do not match the maps"])
    if p.B * p.C != RatMatrix.identity(m):
        issues.append("B C is not the identity")
    ra = p.A.rank()
    if ra != m:
        issues.append(f"rank of A is {ra}, not the partner dimension {m}")
    if not (ra == p.B.rank() == p.A.vstack(p.B).rank()):
        issues.append("kernel of B differs from kernel of A")
    if p.F != _cubic_linear_from(p.A):
        issues.append("F is not X + (A X)^{*3}")
    if not is_yagzhev(p.G):
        issues.append("G is not identity plus cubic homogeneous")
    if p.G != _bfc(p.B, p.F, p.C):
        issues.append("G is not B F(C x)")
    return PairingReport(not issues, issues)


def pair_up(g: PolyMap) -> GZPairing:
    """Build a cubic linear partner for a cubic homogeneous map.

    Decomposes G - X into cubes over a shared, scalar-deduplicated pool
    of r linear forms, stacks the forms into Q (r x m) and the
    coefficients into P (m x r), then pads Q with standard basis rows
    (zero P columns) until it reaches rank m, which the kernel axiom
    needs.  The partner lives in dimension n = m + r with

        A = [[0, 0], [Q, Q P]],   B = [I | P],   C = [I; 0].
    """
    if not is_yagzhev(g):
        raise ValueError("pair_up expects an identity-plus-cubic map")
    m = g.n_in
    pool = []
    index = {}
    coeff_rows = []
    for i in range(m):
        h = g.components[i] - Poly.variable(m, i)
        row = {}
        for c, form in decompose_cubes(h):
            vec = tuple(form.terms.get(((j, 1),), Fraction(0)) for j in range(m))
            key, lam = _primitive(vec)
            k = index.get(key)
            if k is None:
                k = len(pool)
                index[key] = k
                pool.append(key)
            row[k] = row.get(k, Fraction(0)) + c * lam ** 3
        coeff_rows.append(row)

    q_rows = [[Fraction(a) for a in key] for key in pool]
    used = RatMatrix(q_rows) if q_rows else RatMatrix.zero(0, m)
    rank = used.rank()
    padded = list(q_rows)
    for i in range(m):
        if rank == m:
            break
        e = [Fraction(0)] * m
        e[i] = Fraction(1)
        trial = RatMatrix(padded + [e])
        if trial.rank() > rank:
            padded.append(e)
            rank += 1
    r = len(padded)
    n = m + r

    Q = RatMatrix(padded)
    P = RatMatrix(
        [[coeff_rows[i].get(k, Fraction(0)) for k in range(r)]
         for i in range(m)]
    )
    QP = Q * P
    a_rows = [[Fraction(0)] * n for _ in range(m)]
    for k in range(r):
        a_rows.append(list(Q.rows[k]) + list(QP.rows[k]))
    A = RatMatrix(a_rows)
    B = RatMatrix.identity(m).hstack(P)
    C = RatMatrix.identity(m).vstack(RatMatrix.zero(r, m))
    F = _cubic_linear_from(A)
    pairing = GZPairing(A, B, C, F, g)
    report = verify_pairing(pairing)
    if not report.ok:
        raise AssertionError(f"constructed pairing failed its axioms: {report.issues}")
    return pairing


def pair_down(f: PolyMap, A: RatMatrix) -> GZPairing:
    """Recover the cubic homogeneous partner of F(X) = X + (A X)^{*3}.

    B is the reduced row basis of A, C its right inverse with free
    coordinates zeroed; both are deterministic, so the round trip
    through pair_up reproduces its G exactly.
    """
    n = f.n_in
    if (A.nrows, A.ncols) != (n, n):
        raise ValueError("coefficient matrix shape does not match the map")
    if f != _cubic_linear_from(A):
        raise ValueError("map is not X + (A X)^{*3} for the given matrix")
    m = A.rank()
    if m == 0:
        raise ValueError(
            "zero coefficient matrix: no partner of positive dimension")
    B = A.row_basis()
    C = B.right_inverse()
    if C is None:
        raise AssertionError("row basis lost full row rank")
    G = _bfc(B, f, C)
    pairing = GZPairing(A, B, C, f, G)
    report = verify_pairing(pairing)
    if not report.ok:
        raise AssertionError(f"constructed pairing failed its axioms: {report.issues}")
    return pairing


def pairing_to_equivalence(p: GZPairing) -> Certificate:
    """Certificate that G, padded by r = n - m fresh variables, reaches F
    through one cubic shear and one linear change of coordinates.

    With D a basis of ker B, the square matrix C' = [C | D] is
    invertible and B' = C'^{-1} stacks B over some E' that kills Im C;
    then B'(F(C'(x, z))) = (G(x), z + E'((A C x)^{*3})), so undoing the
    shear and the two linear moves replays (G, z) into F exactly.
    """
    report = verify_pairing(p)
    if not report.ok:
        raise ValueError(f"refusing an invalid pairing: {report.issues}")
    m = p.G.n_in
    n = p.F.n_in
    r = n - m
    builder = CertificateBuilder(p.G, kind="gz-equivalence")
    if r:
        builder.push(ExtendFreshVars(r))
        kernel = p.B.nullspace_basis()  # rows span ker B
        cprime = p.C.hstack(kernel.transpose())
        bprime = cprime.inverse()
        ac = p.A * p.C
        cubes = []
        for k in range(n):
            form = Poly(n)
            for j, a in enumerate(ac.rows[k]):
                if a:
                    form = form + Poly.variable(n, j).scale(a)
            cubes.append(form ** 3)
        additions = {}
        for j in range(r):
            s = Poly(n)
            for k in range(n):
                e = bprime.rows[m + j][k]
                if e and not cubes[k].is_zero():
                    s = s + cubes[k].scale(e)
            if not s.is_zero():
                additions[m + j] = s
        if additions:
            builder.push(PreCompose(Automorphism.shear(
                n, additions, "carry the cubes along the kernel block")))
    else:
        cprime = p.C
        bprime = p.B
    if cprime != RatMatrix.identity(n):
        builder.push(PostCompose(Automorphism.from_linear(
            cprime, bprime, "return to the partner's coordinates")))
        builder.push(PreCompose(Automorphism.from_linear(
            bprime, cprime, "match the partner's parametrization")))
    if builder.current != p.F:
        raise AssertionError("equivalence replay missed the partner map")
    return builder.build()
