"""Elimination tools: resultants, squarefree parts, real root counting.

A polynomial is viewed as univariate in one distinguished variable with
coefficients in the remaining ones.  Coefficient lists keep the ambient
variable count of the input, with the distinguished variable unused, so
no index shifting happens anywhere.

`resultant` runs the subresultant polynomial remainder sequence with the
classical g*h^delta normalization.  That normalization is not optional:
the naive pseudo-remainder sequence grows junk factors exponentially and
is unusable beyond toy degrees, while the normalized divisions keep every
intermediate the size of an actual subresultant.  `sylvester_resultant`
computes the same thing as a fraction-free determinant; it is the slow
reference route and the two are checked against each other in the tests.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from .poly import ExactDivisionError, Poly


# -- univariate views ----------------------------------------------------


def uni_coeffs(p: Poly, var: int) -> list:
    """Coefficient list [c0, c1, ...] of p in the distinguished variable.

    Coefficients are Poly values in the same ambient space that do not
    use `var`.  The zero polynomial gives [].
    """
    if p.is_zero():
        return []
    d = p.degree_in(var)
    out = [Poly(p.varcount) for _ in range(d + 1)]
    for m, c in p.terms.items():
        e = 0
        rest = []
        for v, k in m:
            if v == var:
                e = k
            else:
                rest.append((v, k))
        out[e].terms[tuple(rest)] = out[e].terms.get(tuple(rest), Fraction(0)) + c
    return [Poly(p.varcount, {m: c for m, c in q.terms.items() if c != 0}) for q in out]


def uni_assemble(coeffs: list, var: int, varcount: int) -> Poly:
    out = Poly(varcount)
    xv = Poly.variable(varcount, var)
    for e, c in enumerate(coeffs):
        if not c.is_zero():
            out = out + c * xv ** e
    return out


def _trim(coeffs: list) -> list:
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _prem(a: list, b: list, varcount: int) -> list:
    """Pseudo-remainder of coefficient lists: lc(b)^(da-db+1) * a mod b."""
    da, db = len(a) - 1, len(b) - 1
    d = b[-1]
    r = list(a)
    for j in range(da - db, -1, -1):
        if len(r) - 1 == db + j:
            top = r[-1]
            r = [d * c for c in r[:-1]]
            for i, bc in enumerate(b[:-1]):
                r[j + i] = r[j + i] - top * bc
            _trim(r)
        else:
            r = [d * c for c in r]
    return _trim(r)


def resultant(f: Poly, g: Poly, var: int) -> Poly:
    """Resultant of f and g with respect to one variable.

    Equals the determinant of the Sylvester matrix, sign included.
    Returns a polynomial in the same ambient space not using `var`.
    """
    if f.varcount != g.varcount:
        raise ValueError("variable count mismatch in resultant")
    n = f.varcount
    if f.is_zero() or g.is_zero():
        return Poly(n)
    a = uni_coeffs(f, var)
    b = uni_coeffs(g, var)
    da, db = len(a) - 1, len(b) - 1
    if da == 0 and db == 0:
        return Poly.const(n, 1)
    sign = 1
    if da < db:
        a, b, da, db = b, a, db, da
        if da % 2 == 1 and db % 2 == 1:
            sign = -1
    if db == 0:
        return (b[0] ** da).scale(sign)
    g_ = Poly.const(n, 1)
    h_ = Poly.const(n, 1)
    while True:
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            sign = -sign
        r = _prem(a, b, n)
        if not r:
            return Poly(n)  # nonconstant common factor
        divisor = g_ * h_ ** delta
        a, da = b, db
        b = [c.exact_divide(divisor) for c in r]
        db = len(b) - 1
        g_ = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h_ = g_
        else:
            h_ = (g_ ** delta).exact_divide(h_ ** (delta - 1))
        if db == 0:
            break
    c = b[0]
    if da == 1:
        res = c
    else:
        res = (c ** da).exact_divide(h_ ** (da - 1))
    return res.scale(sign)


def sylvester_matrix(f: Poly, g: Poly, var: int) -> list:
    """Sylvester matrix as nested lists of coefficient Polys."""
    a = uni_coeffs(f, var)
    b = uni_coeffs(g, var)
    da, db = len(a) - 1, len(b) - 1
    if da < 0 or db < 0:
        raise ValueError("Sylvester matrix of a zero polynomial")
    n = f.varcount
    size = da + db
    zero = Poly(n)
    rows = []
    for i in range(db):
        row = [zero] * size
        for k, c in enumerate(reversed(a)):
            row[i + k] = c
        rows.append(row)
    for i in range(da):
        row = [zero] * size
        for k, c in enumerate(reversed(b)):
            row[i + k] = c
        rows.append(row)
    return rows


def poly_matrix_det(rows: list, varcount: int) -> Poly:
    """Fraction-free (Bareiss) determinant of a matrix of Polys."""
    n = len(rows)
    if n == 0:
        return Poly.const(varcount, 1)
    m = [list(r) for r in rows]
    sign = 1
    prev = Poly.const(varcount, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Poly(varcount)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num.exact_divide(prev)
            m[i][k] = Poly(varcount)
        prev = pivot
    return m[n - 1][n - 1].scale(sign)


def sylvester_resultant(f: Poly, g: Poly, var: int) -> Poly:
    """Reference resultant: determinant of the Sylvester matrix.

    Exponentially slower than `resultant` on real inputs; kept as the
    independent second route.
    """
    if f.varcount != g.varcount:
        raise ValueError("variable count mismatch")
    n = f.varcount
    if f.is_zero() or g.is_zero():
        return Poly(n)
    if f.degree_in(var) == 0 and g.degree_in(var) == 0:
        return Poly.const(n, 1)
    return poly_matrix_det(sylvester_matrix(f, g, var), n)


# -- multivariate gcd ------------------------------------------------------


def primitive_part(p: Poly) -> Poly:
    """p divided by its rational content, graded-lex leading coefficient > 0."""
    lt = p.leading_term()
    if lt is None:
        return p
    num = 0
    den = 1
    for c in p.terms.values():
        num = math.gcd(num, c.numerator)
        den = den * c.denominator // math.gcd(den, c.denominator)
    content = Fraction(num, den)
    if lt[1] < 0:
        content = -content
    return p.scale(1 / content)


def _list_gcd(coeffs: list) -> Poly:
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant() and not g.is_zero():
            break
        g = poly_gcd(g, c)
    return primitive_part(g)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Gcd in Q[x_1..x_n], primitive with positive leading coefficient.

    Primitive PRS: recurse on the content, pseudo-divide the primitive
    parts in the highest variable either side uses.  Not built for large
    inputs; the specialized paths all go through `resultant` instead.
    """
    if p.varcount != q.varcount:
        raise ValueError("variable count mismatch in gcd")
    n = p.varcount
    if p.is_zero():
        return primitive_part(q)
    if q.is_zero():
        return primitive_part(p)
    used = p.variables_used() | q.variables_used()
    if not used:
        return Poly.const(n, 1)
    var = max(used)
    a = uni_coeffs(p, var)
    b = uni_coeffs(q, var)
    cont_a, cont_b = _list_gcd(a), _list_gcd(b)
    cont = poly_gcd(cont_a, cont_b)
    if len(a) == 1 or len(b) == 1:
        return cont
    a = [c.exact_divide(cont_a) for c in a]
    b = [c.exact_divide(cont_b) for c in b]
    if len(a) < len(b):
        a, b = b, a
    while True:
        r = _prem(a, b, n)
        if not r:
            cg = _list_gcd(b)
            g = uni_assemble([c.exact_divide(cg) for c in b], var, n)
            break
        if len(r) == 1:
            return cont
        cr = _list_gcd(r)
        a, b = b, [c.exact_divide(cr) for c in r]
    return primitive_part(cont * g)


# -- genuinely univariate polynomials over Q ------------------------------
#
# Here a polynomial must use at most one variable; it is handled through
# its Fraction coefficient list.


def _require_univariate(p: Poly) -> int:
    used = p.variables_used()
    if len(used) > 1:
        raise ValueError("polynomial is not univariate")
    return next(iter(used)) if used else 0


def q_coeffs(p: Poly) -> list:
    """[c0, c1, ...] as Fractions for a univariate polynomial."""
    var = _require_univariate(p)
    if p.is_zero():
        return []
    out = [Fraction(0)] * (p.degree_in(var) + 1)
    for m, c in p.terms.items():
        out[m[0][1] if m else 0] = c
    return out


def _q_trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _q_rem(a: list, b: list) -> list:
    r = list(a)
    db = len(b) - 1
    inv = 1 / b[-1]
    while len(r) - 1 >= db and r:
        f = r[-1] * inv
        k = len(r) - 1 - db
        for i in range(db):
            r[k + i] -= f * b[i]
        r.pop()
        _q_trim(r)
    return r


def q_gcd(a: list, b: list) -> list:
    """Monic gcd of univariate rational coefficient lists."""
    a, b = _q_trim(list(a)), _q_trim(list(b))
    while b:
        a, b = b, _q_rem(a, b)
    if not a:
        return []
    lc = a[-1]
    return [c / lc for c in a]


def q_derive(a: list) -> list:
    return [c * i for i, c in enumerate(a)][1:]


def _q_divide(a: list, b: list) -> list:
    """Exact quotient of coefficient lists."""
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = list(a)
    db = len(b) - 1
    while _q_trim(r) and len(r) - 1 >= db:
        f = r[-1] / b[-1]
        k = len(r) - 1 - db
        q[k] = f
        for i in range(db + 1):
            r[k + i] -= f * b[i]
        _q_trim(r)
    if r:
        raise ExactDivisionError("univariate division is not exact")
    return q


def squarefree_part(p: Poly) -> Poly:
    """p with repeated factors collapsed: p / gcd(p, p')."""
    var = _require_univariate(p)
    c = q_coeffs(p)
    if len(c) <= 1:
        return p
    g = q_gcd(c, q_derive(c))
    if len(g) == 1:
        out = c
    else:
        out = _q_divide(c, g)
    return uni_assemble([Poly.const(p.varcount, x) for x in out], var, p.varcount)


def sturm_chain(p: Poly) -> list:
    """Sturm sequence of a univariate polynomial, as coefficient lists."""
    c = _q_trim(q_coeffs(p))
    if not c:
        raise ValueError("Sturm chain of the zero polynomial")
    chain = [c]
    d = q_derive(c)
    if _q_trim(list(d)):
        chain.append(d)
        while True:
            r = _q_rem(chain[-2], chain[-1])
            if not r:
                break
            chain.append([-x for x in r])
    return chain


def _q_eval(c: list, x: Fraction) -> Fraction:
    v = Fraction(0)
    for coef in reversed(c):
        v = v * x + coef
    return v


def _variations(chain: list, x: Fraction) -> int:
    signs = []
    for c in chain:
        v = _q_eval(c, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s1, s2 in zip(signs, signs[1:]) if s1 != s2)


def _variations_at_inf(chain: list, positive: bool) -> int:
    signs = []
    for c in chain:
        lc = c[-1]
        s = 1 if lc > 0 else -1
        if not positive and (len(c) - 1) % 2 == 1:
            s = -s
        signs.append(s)
    return sum(1 for s1, s2 in zip(signs, signs[1:]) if s1 != s2)


def sturm_count(p: Poly, lo: Optional[Fraction] = None, hi: Optional[Fraction] = None) -> int:
    """Number of distinct real roots in (lo, hi]; None means +-infinity.

    Endpoints must not be roots of p when finite.
    """
    chain = sturm_chain(p)
    if len(chain[0]) <= 1:
        return 0
    va = _variations(chain, Fraction(lo)) if lo is not None else _variations_at_inf(chain, False)
    vb = _variations(chain, Fraction(hi)) if hi is not None else _variations_at_inf(chain, True)
    return va - vb


def count_real_roots(p: Poly) -> int:
    """Distinct real roots of a univariate polynomial (no squarefree
    assumption; the Sturm chain collapses multiplicity by itself)."""
    return sturm_count(p)


def cauchy_bound(p: Poly) -> Fraction:
    """All real roots lie strictly inside [-M, M]."""
    c = _q_trim(q_coeffs(p))
    if len(c) <= 1:
        return Fraction(1)
    lc = abs(c[-1])
    return Fraction(1) + max(abs(x) for x in c[:-1]) / lc


def isolate_real_roots(p: Poly) -> list:
    """Disjoint rational intervals, one distinct real root in each.

    Returns [(lo, hi)] pairs, graded left to right; lo == hi marks an
    exact rational root, otherwise the root is interior and neither
    endpoint is a root.  Works on any nonzero univariate polynomial.
    """
    sf = squarefree_part(p)
    c = _q_trim(q_coeffs(sf))
    if not c:
        raise ValueError("cannot isolate roots of the zero polynomial")
    if len(c) == 1:
        return []
    chain = sturm_chain(sf)

    def val(x):
        return _q_eval(c, x)

    def vari(x):
        return _variations(chain, x)

    out = []

    def go(lo, hi, vlo, vhi):
        k = vlo - vhi  # roots in (lo, hi], endpoints never roots here
        if k == 0:
            return
        if k == 1:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        if val(mid) == 0:
            w = (hi - lo) / 4
            while val(mid - w) == 0 or val(mid + w) == 0 or \
                    vari(mid - w) - vari(mid + w) != 1:
                w = w / 2
            out_left = vari(mid - w)
            go(lo, mid - w, vlo, out_left)
            out.append((mid, mid))
            go(mid + w, hi, vari(mid + w), vhi)
        else:
            vm = vari(mid)
            go(lo, mid, vlo, vm)
            go(mid, hi, vm, vhi)

    m = cauchy_bound(sf)
    go(-m, m, vari(-m), vari(m))
    out.sort(key=lambda iv: iv[0])
    return out
