"""Machine-checkable certificates connecting polynomial maps.

A certificate links a source map to a target map through a sequence of
moves, each one an elementary operation whose effect on a map is fully
determined by its stored data:

  * ExtendFreshVars(k): append k fresh variables, acting as the
    identity on them, at the end of both domain and codomain.
  * PostCompose(A): replace F by A.forward after F.
  * PreCompose(A): replace F by F after A.forward.
  * SegreExtend: replace F (no constant terms) by (F(t x)/t, t) with a
    fresh last variable t.

Every intermediate map is stored, so verification replays one move at a
time against known endpoints instead of recomputing whole pipelines.
Automorphisms carry their inverses and are checked two-sided and
symbolically; an inverse may be rational, in which case the identity is
checked in the fraction field (denominators cleared, exactly).

Each move also induces a correspondence of graph points: given x and
y = F(x), it says which (x', y') witnesses the next map.  Pushing
sampled fiber points through that correspondence and re-checking the
final equation is an independent, cheap consistency probe; it cannot
replace replay but catches broken bookkeeping fast.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Union

from .maps import PolyMap
from .poly import Poly


class RationalMap:
    """Numerators over one shared denominator, all exact."""

    __slots__ = ("nums", "den")

    def __init__(self, nums, den: Poly):
        self.nums = list(nums)
        self.den = den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        for p in self.nums:
            if p.varcount != den.varcount:
                raise ValueError("variable count mismatch in rational map")

    @property
    def n_in(self) -> int:
        return self.den.varcount

    @property
    def n_out(self) -> int:
        return len(self.nums)

    def eval_at(self, point):
        d = self.den.eval_at(point)
        if d == 0:
            return None
        return [p.eval_at(point) / d for p in self.nums]

    def __repr__(self) -> str:
        return f"RationalMap({self.n_in}->{self.n_out})"


def substitute_rational(p: Poly, nums, den: Poly):
    """p(nums/den) written over a single denominator: returns (q, k) with
    p(nums/den) = q / den**k and k = max(deg p, 0)."""
    d = p.degree() or 0
    target = den.varcount
    out = Poly(target)
    num_pows: dict = {}
    den_pows = {0: Poly.const(target, 1)}

    def npow(i, e):
        key = (i, e)
        v = num_pows.get(key)
        if v is None:
            v = nums[i] ** e
            num_pows[key] = v
        return v

    def dpow(e):
        v = den_pows.get(e)
        if v is None:
            v = den ** e
            den_pows[e] = v
        return v

    for m, c in p.terms.items():
        piece = Poly.const(target, c)
        total = 0
        for var, e in m:
            piece = piece * npow(var, e)
            total += e
        piece = piece * dpow(d - total)
        out = out + piece
    return out, d


class Automorphism:
    """An invertible polynomial map bundled with its inverse.

    The inverse is a PolyMap for genuine polynomial automorphisms and a
    RationalMap when only a birational inverse exists (then the forward
    direction is injective off the denominator's zero set and the
    composition identities hold in the fraction field).
    """

    __slots__ = ("forward", "inverse", "label")

    def __init__(self, forward: PolyMap, inverse, label: str = ""):
        if forward.n_in != forward.n_out:
            raise ValueError("an automorphism must be an endomorphism")
        self.forward = forward
        self.inverse = inverse
        self.label = label

    @property
    def dim(self) -> int:
        return self.forward.n_in

    def is_polynomial(self) -> bool:
        return isinstance(self.inverse, PolyMap)

    def verify_two_sided(self) -> Optional[str]:
        """None when both composition identities hold exactly, else a
        human-readable reason."""
        n = self.dim
        fwd = self.forward
        inv = self.inverse
        if isinstance(inv, PolyMap):
            if inv.n_in != n or inv.n_out != n:
                return "inverse has the wrong shape"
            if not fwd.compose(inv).is_identity():
                return "forward after inverse is not the identity"
            if not inv.compose(fwd).is_identity():
                return "inverse after forward is not the identity"
            return None
        if inv.n_in != n or inv.n_out != n:
            return "rational inverse has the wrong shape"
        # forward after inverse, in the fraction field
        for i, comp in enumerate(fwd.components):
            q, k = substitute_rational(comp, inv.nums, inv.den)
            expect = Poly.variable(n, i) * inv.den ** k
            if q != expect:
                return f"forward after rational inverse fails on component {i}"
        # inverse after forward: polynomial identities
        den_f = inv.den.substitute(fwd.components)
        for i, num in enumerate(inv.nums):
            if num.substitute(fwd.components) != Poly.variable(n, i) * den_f:
                return f"rational inverse after forward fails on component {i}"
        return None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_linear(m, inverse_m=None, label: str = "") -> "Automorphism":
        from .linalg import RatMatrix

        if inverse_m is None:
            inverse_m = m.inverse()
        return Automorphism(
            PolyMap.from_matrix(m), PolyMap.from_matrix(inverse_m), label
        )

    @staticmethod
    def from_sparse_linear(rows, inv_rows, label: str = "") -> "Automorphism":
        """Linear automorphism from sparse {col: coeff} rows."""
        n = len(rows)

        def mk(rs):
            comps = []
            for r in rs:
                p = Poly(n, {((j, 1),): Fraction(v) for j, v in sorted(r.items()) if v})
                comps.append(p)
            return PolyMap(comps)

        return Automorphism(mk(rows), mk(inv_rows), label)

    @staticmethod
    def translation(vec, label: str = "") -> "Automorphism":
        fwd = PolyMap.translation(vec)
        inv = PolyMap.translation([-Fraction(v) for v in vec])
        return Automorphism(fwd, inv, label)

    @staticmethod
    def block_shear(n: int, additions: dict, label: str = "") -> "Automorphism":
        """x_i -> x_i + g_i for (i, g_i) in additions, identity elsewhere.

        No g_i may involve any of the shifted variables; that makes the
        negated shear an exact inverse.
        """
        shifted = set(additions)
        for i, g in additions.items():
            if g.varcount != n:
                raise ValueError("shear addend has the wrong variable count")
            if g.variables_used() & shifted:
                raise ValueError("shear addend uses a shifted variable")
        fwd = []
        inv = []
        for i in range(n):
            x = Poly.variable(n, i)
            g = additions.get(i)
            if g is None:
                fwd.append(x)
                inv.append(x)
            else:
                fwd.append(x + g)
                inv.append(x - g)
        return Automorphism(PolyMap(fwd), PolyMap(inv), label)

    @staticmethod
    def shear(n: int, additions: dict, label: str = "") -> "ShearAutomorphism":
        """Like block_shear, but stores only the addends; the full maps
        are materialized on access.  The right choice inside long
        certificates, where thousands of near-identity automorphisms
        would otherwise each carry a full copy of the identity."""
        return ShearAutomorphism(n, additions, label)

    @staticmethod
    def permutation(n: int, perm, label: str = "") -> "Automorphism":
        """Sends x to (x[perm[0]], ..., x[perm[n-1]])."""
        if sorted(perm) != list(range(n)):
            raise ValueError("not a permutation")
        fwd = PolyMap([Poly.variable(n, perm[i]) for i in range(n)])
        inv_perm = [0] * n
        for i, p in enumerate(perm):
            inv_perm[p] = i
        inv = PolyMap([Poly.variable(n, inv_perm[i]) for i in range(n)])
        return Automorphism(fwd, inv, label)

    def __repr__(self) -> str:
        tag = self.label or ("poly" if self.is_polynomial() else "rational-inverse")
        return f"Automorphism(dim={self.dim}, {tag})"


class ShearAutomorphism:
    """x_i -> x_i + g_i on a sparse set of coordinates, lazily realized.

    Keeps the same interface as Automorphism (forward, inverse, dim,
    verify_two_sided) but owns only the addend dictionary.
    """

    __slots__ = ("n", "additions", "label")

    def __init__(self, n: int, additions: dict, label: str = ""):
        shifted = set(additions)
        for i, g in additions.items():
            if not 0 <= i < n:
                raise ValueError("shear index out of range")
            if g.varcount != n:
                raise ValueError("shear addend has the wrong variable count")
            if g.variables_used() & shifted:
                raise ValueError("shear addend uses a shifted variable")
        self.n = n
        self.additions = dict(additions)
        self.label = label

    @property
    def dim(self) -> int:
        return self.n

    def _realize(self, sign: int) -> PolyMap:
        comps = []
        for i in range(self.n):
            x = Poly.variable(self.n, i)
            g = self.additions.get(i)
            comps.append(x if g is None else (x + g if sign > 0 else x - g))
        return PolyMap(comps)

    @property
    def forward(self) -> PolyMap:
        return self._realize(1)

    @property
    def inverse(self) -> PolyMap:
        return self._realize(-1)

    def is_polynomial(self) -> bool:
        return True

    def verify_two_sided(self) -> Optional[str]:
        fwd = self.forward
        inv = self.inverse
        if not fwd.compose(inv).is_identity():
            return "forward after inverse is not the identity"
        if not inv.compose(fwd).is_identity():
            return "inverse after forward is not the identity"
        return None

    def __repr__(self) -> str:
        return f"ShearAutomorphism(dim={self.n}, shifts={sorted(self.additions)})"


@dataclass(frozen=True)
class ExtendFreshVars:
    count: int


@dataclass(frozen=True)
class PostCompose:
    auto: Automorphism


@dataclass(frozen=True)
class PreCompose:
    auto: Automorphism


@dataclass(frozen=True)
class SegreExtend:
    pass


Move = Union[ExtendFreshVars, PostCompose, PreCompose, SegreExtend]


def _is_plain_variable(p: Poly, index: int) -> bool:
    return len(p.terms) == 1 and p.terms.get(((index, 1),)) == 1


def apply_move(f: PolyMap, move: Move) -> PolyMap:
    """The map after one move.  Components a move does not touch are
    carried over as the same objects, which keeps long chained
    certificates cheap to store."""
    if isinstance(move, ExtendFreshVars):
        k = move.count
        if k < 1:
            raise ValueError("must add at least one fresh variable")
        n = f.n_in + k
        comps = [c.extend(n) for c in f.components]
        comps.extend(Poly.variable(n, f.n_in + i) for i in range(k))
        return PolyMap(comps)
    if isinstance(move, PostCompose):
        a = move.auto.forward
        if a.n_in != f.n_out:
            raise ValueError("post-composition shape mismatch")
        out = []
        for comp in a.components:
            lone = None
            if len(comp.terms) == 1:
                ((m, c),) = comp.terms.items()
                if c == 1 and len(m) == 1 and m[0][1] == 1:
                    lone = m[0][0]
            out.append(f.components[lone] if lone is not None else comp.substitute(f.components))
        return PolyMap(out)
    if isinstance(move, PreCompose):
        b = move.auto.forward
        if b.n_out != f.n_in:
            raise ValueError("pre-composition shape mismatch")
        moved = {
            i for i, c in enumerate(b.components) if not _is_plain_variable(c, i)
        }
        out = []
        for comp in f.components:
            if comp.variables_used() & moved:
                out.append(comp.substitute(b.components))
            else:
                out.append(comp)
        return PolyMap(out)
    if isinstance(move, SegreExtend):
        if not f.is_endomorphism():
            raise ValueError("the Segre move needs an endomorphism")
        if any(c.constant_term() != 0 for c in f.components):
            raise ValueError("the Segre move needs zero constant terms")
        n = f.n_in
        t = Poly.variable(n + 1, n)
        scaled = [Poly.variable(n + 1, i) * t for i in range(n)]
        comps = [c.extend(n + 1).substitute(scaled + [t]).exact_divide(t) for c in f.components]
        comps.append(t)
        return PolyMap(comps)
    raise TypeError(f"unknown move {move!r}")


class Certificate:
    """Source, target, the moves between them, and every stop on the way."""

    def __init__(self, source: PolyMap, target: PolyMap, moves: List[Move],
                 intermediates: List[PolyMap], kind: str = "reduction"):
        self.source = source
        self.target = target
        self.moves = moves
        self.intermediates = intermediates
        self.kind = kind

    def __repr__(self) -> str:
        return (
            f"Certificate({self.kind}, {self.source.n_in}->{self.target.n_in} vars, "
            f"{len(self.moves)} moves)"
        )


class CertificateBuilder:
    def __init__(self, source: PolyMap, kind: str = "reduction"):
        self.source = source
        self.kind = kind
        self.moves: List[Move] = []
        self.intermediates: List[PolyMap] = [source]

    @property
    def current(self) -> PolyMap:
        return self.intermediates[-1]

    def push(self, move: Move) -> PolyMap:
        nxt = apply_move(self.current, move)
        self.moves.append(move)
        self.intermediates.append(nxt)
        return nxt

    def build(self) -> Certificate:
        return Certificate(
            self.source, self.current, self.moves, list(self.intermediates), self.kind
        )


@dataclass
class CertReport:
    ok: bool
    moves_checked: int
    autos_checked: int
    issues: list = field(default_factory=list)


def verify_certificate(cert: Certificate) -> CertReport:
    """Structural replay: endpoints match, every stored step is the
    result of its move, every automorphism inverts exactly."""
    issues = []
    if not cert.intermediates:
        return CertReport(False, 0, 0, ["no intermediates stored"])
    if cert.intermediates[0] != cert.source:
        issues.append("first intermediate differs from the source")
    if cert.intermediates[-1] != cert.target:
        issues.append("last intermediate differs from the target")
    if len(cert.intermediates) != len(cert.moves) + 1:
        issues.append("intermediate count does not match move count")
        return CertReport(False, 0, 0, issues)
    autos = 0
    for idx, move in enumerate(cert.moves):
        if isinstance(move, (PostCompose, PreCompose)):
            reason = move.auto.verify_two_sided()
            autos += 1
            if reason is not None:
                issues.append(f"move {idx}: automorphism check failed: {reason}")
        try:
            got = apply_move(cert.intermediates[idx], move)
        except (ValueError, TypeError, ArithmeticError) as e:
            issues.append(f"move {idx}: replay raised: {e}")
            continue
        if got != cert.intermediates[idx + 1]:
            issues.append(f"move {idx}: replay disagrees with the stored map")
    return CertReport(not issues, len(cert.moves), autos, issues)


@dataclass
class FiberReport:
    ok: bool
    samples_run: int
    samples_skipped: int
    issues: list = field(default_factory=list)


def _transport(move: Move, x: list, y: list, rng: random.Random):
    """Push a graph point (x, F(x) = y) through one move; None skips."""
    if isinstance(move, ExtendFreshVars):
        z = [Fraction(rng.randrange(-9, 10), rng.randrange(1, 4)) for _ in range(move.count)]
        return x + z, y + z
    if isinstance(move, PostCompose):
        return x, move.auto.forward.eval_at(y)
    if isinstance(move, PreCompose):
        inv = move.auto.inverse
        nx = inv.eval_at(x)
        if nx is None:
            return None
        return nx, y
    if isinstance(move, SegreExtend):
        t = Fraction(rng.randrange(1, 7), rng.randrange(1, 4))
        if rng.randrange(2):
            t = -t
        return [xi / t for xi in x] + [t], [yi / t for yi in y] + [t]
    raise TypeError(f"unknown move {move!r}")


def fiber_transport_check(cert: Certificate, seed: int = 0, samples: int = 20) -> FiberReport:
    """Sample fiber points of the source and chase them through every
    move's point correspondence; the transported points must satisfy the
    target equation exactly.  Samples whose transport hits a rational
    inverse's vanishing denominator are skipped and counted."""
    rng = random.Random(seed)
    n = cert.source.n_in
    run = 0
    skipped = 0
    issues = []
    for s in range(samples):
        x = [Fraction(rng.randrange(-9, 10), rng.randrange(1, 4)) for _ in range(n)]
        y = cert.source.eval_at(x)
        dead = False
        for idx, move in enumerate(cert.moves):
            nxt = _transport(move, x, y, rng)
            if nxt is None:
                skipped += 1
                dead = True
                break
            x, y = nxt
        if dead:
            continue
        run += 1
        if cert.target.eval_at(x) != y:
            issues.append(f"sample {s}: transported point misses the target graph")
    return FiberReport(not issues, run, skipped, issues)
