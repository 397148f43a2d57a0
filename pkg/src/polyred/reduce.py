"""Reduction to cubic and Yagzhev form, plus the gradient symmetrization.

Each stage returns the transformed map together with a Certificate whose
moves replay from the input to the claimed output, so nothing has to be
taken on faith.  ``to_yagzhev`` chains the four stages:

  1. split high-degree terms until every component has degree <= 3,
  2. move a generic base point to the origin and straighten the
     differential there,
  3. extend by one projective-style variable t (the Segre extension),
  4. absorb the quadratic block into fresh variables, leaving an
     identity-plus-cubic-homogeneous map.

The variable count grows along the way and no attempt is made to
minimize it; the per-stage dimensions are recorded in the trace.
"""

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .certs import (
    Automorphism,
    Certificate,
    CertificateBuilder,
    ExtendFreshVars,
    PostCompose,
    PreCompose,
    RationalMap,
    SegreExtend,
)
from .linalg import sparse_det, sparse_inverse
from .maps import (
    Budget,
    BudgetExceeded,
    DEFAULT_BUDGET,
    GenericityError,
    PolyMap,
    Unknown,
    adjugate,
    eval_jacobian_sparse,
    has_identity_linear_part,
    is_yagzhev,
    jacobian,
    jacobian_det,
)
from .poly import (
    GRLEX_KEY,
    Poly,
    mono_degree,
    mono_div,
    mono_divides,
    mono_exponent,
    mono_gcd,
)


def _check_time(start: float, budget: Budget, what: str) -> None:
    if budget.max_ms and (time.monotonic() - start) * 1000 > budget.max_ms:
        raise BudgetExceeded(f"{what} ran past the {budget.max_ms} ms budget")


# ---------------------------------------------------------------- stage 1


def _component_at_max(f: PolyMap, d: int):
    for i, c in enumerate(f.components):
        if c.degree() == d:
            return i, c
    raise AssertionError("no component at the maximal degree")


def _take_degree(mono, k: int):
    """Leading sub-monomial of total degree k (greedy, left to right)."""
    out = []
    need = k
    for v, e in mono:
        if need <= 0:
            break
        t = min(e, need)
        out.append((v, t))
        need -= t
    return tuple(out)


def _single_term_split(comp: Poly, d: int):
    """Split the graded-lex leading degree-d term into two monomial
    factors of degrees ceil(d/2) and floor(d/2); the coefficient rides
    on the second factor."""
    n = comp.varcount
    mono = max((m for m in comp.terms if mono_degree(m) == d), key=GRLEX_KEY)
    coeff = comp.terms[mono]
    a = _take_degree(mono, (d + 1) // 2)
    b = mono_div(mono, a)
    return Poly(n, {a: Fraction(1)}), Poly(n, {b: coeff})


def _grouped_split(comp: Poly, d: int):
    """Split off a monomial factor shared by as many top-degree terms as
    possible, so one round of fresh variables removes them all.

    Candidates: the balanced factor of the leading term, plus gcds of
    the leading term with every other degree-d term (capped at degree
    d-2 so both factors keep degree >= 2).  Scored by how many degree-d
    terms die, then by how many terms move in total.
    """
    n = comp.varcount
    top = [m for m in comp.terms if mono_degree(m) == d]
    lead = max(top, key=GRLEX_KEY)
    candidates = {_take_degree(lead, (d + 1) // 2)}
    for m2 in top:
        if m2 == lead:
            continue
        g = mono_gcd(lead, m2)
        if mono_degree(g) > d - 2:
            g = _take_degree(g, d - 2)
        if mono_degree(g) >= 2:
            candidates.add(g)
    best = None
    for cand in sorted(candidates, key=GRLEX_KEY):
        cd = mono_degree(cand)
        collected = []
        killed = 0
        for m, c in comp.terms.items():
            if mono_degree(m) - cd >= 2 and mono_divides(cand, m):
                collected.append((m, c))
                if mono_degree(m) == d:
                    killed += 1
        score = (killed, len(collected), GRLEX_KEY(cand))
        if best is None or score > best[0]:
            best = (score, cand, collected)
    _, cand, collected = best
    a = Poly(n, {cand: Fraction(1)})
    b = Poly(n, {mono_div(m, cand): c for m, c in collected})
    return a, b


def lower_degree(f: PolyMap, budget: Budget = DEFAULT_BUDGET,
                 group_factors: bool = False):
    """Rewrite f, two fresh variables at a time, until every component
    has total degree at most three.

    Each round picks the first component carrying a term of the map's
    maximal degree d, factors a collection of its terms as a*b with
    2 <= deg a, deg b <= d-2, and replaces them by -(y+a)(z+b) plus the
    two new components y+a and z+b.  The (max degree, count at max)
    pair drops strictly each round, so this terminates.

    Returns the cubic map and a certificate of the rewriting.
    """
    if not f.is_endomorphism():
        raise ValueError("degree lowering expects an endomorphism")
    start = time.monotonic()
    builder = CertificateBuilder(f, kind="degree-lowering")
    while True:
        cur = builder.current
        d = cur.degree()
        if d is None or d <= 3:
            break
        _check_time(start, budget, "degree lowering")
        n = cur.n_in
        if n + 2 > budget.max_dim:
            hint = ("; grouped splitting (group_factors=True) usually lands "
                    "far lower" if not group_factors else "")
            raise BudgetExceeded(
                f"degree lowering wants {n + 2} variables, over the cap of "
                f"{budget.max_dim}{hint}")
        ci, comp = _component_at_max(cur, d)
        if group_factors:
            a, b = _grouped_split(comp, d)
        else:
            a, b = _single_term_split(comp, d)
        m = n + 2
        builder.push(ExtendFreshVars(2))
        builder.push(PreCompose(Automorphism.shear(
            m, {n: a.extend(m), n + 1: b.extend(m)},
            "attach the split factors")))
        prod = Poly.variable(m, n) * Poly.variable(m, n + 1)
        builder.push(PostCompose(Automorphism.shear(
            m, {ci: prod.scale(-1)}, "cancel the split product")))
    return builder.current, builder.build()


# ---------------------------------------------------------------- stage 2


def _sparse_is_identity(rows: list, n: int) -> bool:
    for i in range(n):
        r = rows[i]
        if len(r) != 1 or r.get(i) != 1:
            return False
    return True


def normalize(f: PolyMap, seed: int = 0, budget: Budget = DEFAULT_BUDGET):
    """Find x0 with det J(f)(x0) != 0, move it to the origin, and
    straighten the differential, so the result G has G(0) = 0 and
    J(G)(0) = I.

    The origin is tried first, then seeded integer points in an
    expanding box; the acceptance test (an exact sparse determinant) is
    never probabilistic, only the point choice is.
    """
    if not f.is_endomorphism():
        raise ValueError("normalization expects an endomorphism")
    start = time.monotonic()
    n = f.n_in
    rng = random.Random(seed)

    def attempt(point):
        rows = eval_jacobian_sparse(f, point)
        if sparse_det(rows, n) != 0:
            return rows
        return None

    x0 = [Fraction(0)] * n
    rows = attempt(x0)
    if rows is None:
        found = False
        for box in (1, 2, 4, 8, 16, 64, 256, 1024):
            for _ in range(12):
                _check_time(start, budget, "base point search")
                x0 = [Fraction(rng.randrange(-box, box + 1)) for _ in range(n)]
                rows = attempt(x0)
                if rows is not None:
                    found = True
                    break
            if found:
                break
        else:
            raise GenericityError(
                "no base point with invertible differential was found; "
                "the map looks degenerate")

    builder = CertificateBuilder(f, kind="normalization")
    if any(x0):
        builder.push(PreCompose(Automorphism.translation(
            x0, "recenter the domain at the base point")))
    fx0 = f.eval_at(x0)
    if any(fx0):
        builder.push(PostCompose(Automorphism.translation(
            [-v for v in fx0], "send the base value to the origin")))
    if not _sparse_is_identity(rows, n):
        inv_rows = sparse_inverse(rows, n)
        builder.push(PostCompose(Automorphism.from_sparse_linear(
            inv_rows, rows, "straighten the differential at the origin")))
    return builder.current, builder.build()


# ---------------------------------------------------------------- stage 3


def segre_step(f: PolyMap, budget: Budget = DEFAULT_BUDGET):
    """Extend a normalized cubic map F = X + Q + C to (X + tQ + t^2 C, t).

    Requires every component to be x_i plus homogeneous parts of degree
    exactly 2 and 3.  When the dimension allows, the determinant
    identity j(G)(x, t) = j(F)(t x) is also checked symbolically.
    """
    if not f.is_endomorphism():
        raise ValueError("the Segre extension expects an endomorphism")
    n = f.n_in
    for i, c in enumerate(f.components):
        h = c - Poly.variable(n, i)
        for mono in h.terms:
            if mono_degree(mono) not in (2, 3):
                raise ValueError(
                    f"component {i} is not x_{i} + quadratic + cubic; "
                    "normalize first")
    builder = CertificateBuilder(f, kind="segre-extension")
    builder.push(SegreExtend())
    g = builder.current
    if n <= budget.max_exact_det_dim:
        jf = jacobian_det(f, budget)
        jg = jacobian_det(g, budget)
        if not isinstance(jf, Unknown) and not isinstance(jg, Unknown):
            t = Poly.variable(n + 1, n)
            scaled = [t * Poly.variable(n + 1, i) for i in range(n)]
            if jf.substitute(scaled) != jg:
                raise AssertionError(
                    "determinant identity for the Segre extension failed")
    return g, builder.build()


# ---------------------------------------------------------------- stage 4


def _split_t_shape(f: PolyMap):
    """Check f = (X + t*Q(X) + t^2*C(X), t) and return (n, Q, C) with
    the quadratic and cubic blocks as term dicts over the X variables."""
    if not f.is_endomorphism() or f.n_in < 2:
        raise ValueError("expected (X + t Q + t^2 C, t) with t last")
    m = f.n_in
    n = m - 1
    if f.components[n] != Poly.variable(m, n):
        raise ValueError("the last component must be the extension variable")
    q_parts, c_parts = [], []
    for i in range(n):
        h = f.components[i] - Poly.variable(m, i)
        q_terms, c_terms = {}, {}
        for mono, coeff in h.terms.items():
            e = mono_exponent(mono, n)
            rest = tuple(p for p in mono if p[0] != n)
            rd = mono_degree(rest)
            if e == 1 and rd == 2:
                q_terms[rest] = coeff
            elif e == 2 and rd == 3:
                c_terms[rest] = coeff
            else:
                raise ValueError(
                    f"component {i} is not x + t*(quadratic in X) "
                    "+ t^2*(cubic in X)")
        q_parts.append(q_terms)
        c_parts.append(c_terms)
    return n, q_parts, c_parts


def eliminate_quadratic(f: PolyMap, budget: Budget = DEFAULT_BUDGET):
    """Turn (X + tQ + t^2 C, t) into the cubic homogeneous correction
    form (X + tQ - t^2 Y, Y + C, t) with n fresh variables Y.

    Two shears do the work once t is moved behind the fresh block: one
    adds C to Y on the domain side, the other subtracts t^2 Y from X on
    the range side; the t^2 C block cancels between them.  The output
    passes is_yagzhev exactly.
    """
    n, _, c_parts = _split_t_shape(f)
    big = 2 * n + 1
    if big > budget.max_dim:
        raise BudgetExceeded(
            f"quadratic elimination doubles the variable count to {big}, "
            f"over the cap of {budget.max_dim}")
    builder = CertificateBuilder(f, kind="quadratic-elimination")
    builder.push(ExtendFreshVars(n))
    # fresh variables landed after t; relabel so the layout is (X, Y, t)
    builder.push(PreCompose(Automorphism.permutation(
        big, list(range(n)) + [2 * n] + list(range(n, 2 * n)),
        "read the domain as (X, Y, t)")))
    builder.push(PostCompose(Automorphism.permutation(
        big, list(range(n)) + list(range(n + 1, big)) + [n],
        "list the components as (X, Y, t)")))
    absorb = {
        n + i: Poly(big, terms)
        for i, terms in enumerate(c_parts)
        if terms
    }
    if absorb:
        builder.push(PreCompose(Automorphism.shear(
            big, absorb, "absorb the cubic block into Y")))
    t = Poly.variable(big, 2 * n)
    t2 = t * t
    cancel = {
        i: (t2 * Poly.variable(big, n + i)).scale(-1)
        for i in range(n)
    }
    builder.push(PostCompose(Automorphism.shear(
        big, cancel, "trade the degree-five block for -t^2 Y")))
    g = builder.current
    if not is_yagzhev(g):
        raise AssertionError("quadratic elimination left a non-cubic part")
    return g, builder.build()


# ---------------------------------------------------------------- pipeline


@dataclass
class ReductionTrace:
    """What the pipeline did: the end-to-end certificate plus the
    dimension after each stage ('input' names the starting point)."""

    certificate: Certificate
    stage_names: list
    stage_dims: list
    budgets_used: dict


def concat_certificates(certs, kind: str) -> Certificate:
    """Chain certificates whose endpoints meet into one."""
    moves = []
    inters = None
    for c in certs:
        if inters is None:
            inters = list(c.intermediates)
        else:
            if c.intermediates[0] != inters[-1]:
                raise ValueError("certificate chain endpoints do not meet")
            inters.extend(c.intermediates[1:])
        moves.extend(c.moves)
    return Certificate(inters[0], inters[-1], moves, inters, kind)


def to_yagzhev(f: PolyMap, seed: int = 0, budget: Budget = DEFAULT_BUDGET,
               group_factors: bool = False):
    """Run the full reduction and return (yagzhev map, trace).

    Stages that would be no-ops are skipped (an already-cubic map skips
    nothing but contributes no splitting moves; a map fixed at the
    origin with identity differential skips normalization).
    """
    if not f.is_endomorphism():
        raise ValueError("the reduction pipeline expects an endomorphism")
    start = time.monotonic()
    names = ["input"]
    dims = [f.n_in]
    if is_yagzhev(f):
        cert = Certificate(f, f, [], [f], kind="yagzhev-reduction")
        return f, ReductionTrace(cert, names, dims, {
            "elapsed_ms": 0, "seed": seed, "group_factors": group_factors})
    parts = []
    cur, c1 = lower_degree(f, budget=budget, group_factors=group_factors)
    parts.append(c1)
    names.append("lower-degree")
    dims.append(cur.n_in)
    if not (all(v == 0 for v in cur.constant_part())
            and has_identity_linear_part(cur)):
        cur, c2 = normalize(cur, seed=seed, budget=budget)
        parts.append(c2)
        names.append("normalize")
        dims.append(cur.n_in)
    cur, c3 = segre_step(cur, budget=budget)
    parts.append(c3)
    names.append("segre-extension")
    dims.append(cur.n_in)
    cur, c4 = eliminate_quadratic(cur, budget=budget)
    parts.append(c4)
    names.append("eliminate-quadratic")
    dims.append(cur.n_in)
    cert = concat_certificates(parts, "yagzhev-reduction")
    used = {
        "elapsed_ms": int((time.monotonic() - start) * 1000),
        "seed": seed,
        "group_factors": group_factors,
    }
    return cur, ReductionTrace(cert, names, dims, used)


# ---------------------------------------------------------------- Meng


def meng_symmetrize(f: PolyMap, budget: Budget = DEFAULT_BUDGET):
    """Produce G(x, v) = (F(v), x . J(F)(v)) with symmetric differential.

    G is the gradient of the scalar potential h(x, v) = x . F(v), which
    is returned as well.  The certificate realizes G as the extension
    (F, id) twisted by (x, v) -> (x, v J(F)(x)) and a block swap; the
    twist's inverse divides by det J(F), so it is polynomial exactly
    when F is Keller and a rational map otherwise.
    """
    if not f.is_endomorphism():
        raise ValueError("symmetrization expects an endomorphism")
    n = f.n_in
    j = jacobian_det(f, budget)
    if isinstance(j, Unknown):
        raise BudgetExceeded(
            "symmetrization needs the exact Jacobian determinant: " + j.reason)
    if j.is_zero():
        raise GenericityError(
            "the differential is singular everywhere; the twist has no inverse")
    jac = jacobian(f)
    big = 2 * n
    builder = CertificateBuilder(f, kind="symmetrization")
    builder.push(ExtendFreshVars(n))

    jac_ext = [[e.extend(big) for e in row] for row in jac]
    fwd = [Poly.variable(big, i) for i in range(n)]
    for col in range(n):
        s = Poly.zero(big)
        for i in range(n):
            s = s + Poly.variable(big, n + i) * jac_ext[i][col]
        fwd.append(s)
    adj = adjugate(jac, n)
    back = []
    for col in range(n):
        s = Poly.zero(big)
        for i in range(n):
            s = s + Poly.variable(big, n + i) * adj[i][col].extend(big)
        back.append(s)
    if j.is_constant():
        c = j.constant_term()
        inv = [Poly.variable(big, i) for i in range(n)]
        inv.extend(p.scale(1 / c) for p in back)
        inverse = PolyMap(inv)
    else:
        den = j.extend(big)
        nums = [Poly.variable(big, i) * den for i in range(n)]
        nums.extend(back)
        inverse = RationalMap(nums, den)
    builder.push(PreCompose(Automorphism(
        PolyMap(fwd), inverse, "twist by the transposed differential")))
    builder.push(PreCompose(Automorphism.permutation(
        big, list(range(n, big)) + list(range(n)), "swap the blocks")))
    g = builder.current

    shifted = [Poly.variable(big, n + k) for k in range(n)]
    h = Poly.zero(big)
    for i in range(n):
        h = h + Poly.variable(big, i) * f.components[i].substitute(shifted)
    return g, builder.build(), h
