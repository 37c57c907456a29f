"""Truncated graded series over a homogeneous quotient and the Magnus group.

Series are graded by a weight function; multiplication concatenates class
representatives and reduces them, discarding everything of weight above the
truncation degree.  The Magnus group is the set of series with constant
term 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .compat import check_compatibility
from .congruence import QuotientContext, WeightFn, reduce_tensor
from .errors import ConstantTermNotOne, NotInvertible, PreconditionViolated
from .freealg import Poly, word_coproduct, word_key
from .semiring import QQ, INTEGERS


class TruncSeries:
    def __init__(self, K, ctx: QuotientContext, weight: WeightFn, degree: int, coeffs=None):
        self.K = K
        self.ctx = ctx
        self.weight = weight
        self.degree = degree
        self.coeffs = {}
        for w, c in (coeffs or {}).items():
            if weight(w) <= degree and not K.is_zero(c):
                self.coeffs[w] = c

    @classmethod
    def one(cls, K, ctx, weight, degree):
        return cls(K, ctx, weight, degree, {(): K.one})

    @classmethod
    def from_poly(cls, P: Poly, ctx, weight, degree):
        K = P.K
        acc = {}
        for w, c in P.terms.items():
            if weight(w) > degree:
                continue
            r = _nf(ctx, w)
            acc[r] = K.add(acc.get(r, K.zero), c)
        return cls(K, ctx, weight, degree, acc)

    def _like(self, coeffs, K=None):
        return TruncSeries(K or self.K, self.ctx, self.weight, self.degree, coeffs)

    @property
    def constant(self):
        return self.coeffs.get((), self.K.zero)

    def coefficient(self, w):
        return self.coeffs.get(_nf(self.ctx, tuple(w)), self.K.zero)

    def grade(self, d):
        return {w: c for w, c in self.coeffs.items() if self.weight(w) == d}

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        K = self.K
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = K.add(out.get(w, K.zero), c)
        return self._like(out)

    def __neg__(self):
        return self._like({w: self.K.neg(c) for w, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return self._like({w: self.K.mul(s, c) for w, c in self.coeffs.items()})

    def __mul__(self, other):
        K, D, omega, ctx = self.K, self.degree, self.weight, self.ctx
        out = {}
        right = [(v, d, omega(v)) for v, d in other.coeffs.items()]
        for u, c in self.coeffs.items():
            wu = omega(u)
            for v, d, wv in right:
                if wu + wv > D:
                    continue
                r = _nf(ctx, u + v)
                out[r] = K.add(out.get(r, K.zero), K.mul(c, d))
        return self._like(out)

    def map_coefficients(self, K, f):
        return TruncSeries(K, self.ctx, self.weight, self.degree, {w: f(c) for w, c in self.coeffs.items()})

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: (self.weight(kv[0]), word_key(kv[0])))

    def format(self):
        P = Poly._raw(self.K, dict(self.coeffs), self.ctx.alphabet)
        return P.format()

    def graded(self):
        """``[(grade, Poly)]`` for the nonzero grades, ascending."""
        grades = sorted({self.weight(w) for w in self.coeffs})
        return [(d, Poly._raw(self.K, self.grade(d), self.ctx.alphabet)) for d in grades]

    def __repr__(self):
        return f"TruncSeries(D={self.degree}: {self.format()})"


def _nf(ctx, w):
    return ctx.normal_form(w)


def _require_unit_constant(S):
    if S.constant != S.K.one:
        raise ConstantTermNotOne("series constant term is not 1")


def _check_magnus_preconditions(ctx, weight, K):
    if not weight.is_homogeneous(ctx.presentation):
        raise PreconditionViolated("congruence is not homogeneous for the weight")
    if K is not QQ and not check_compatibility(ctx, K).compatible:
        raise PreconditionViolated(f"congruence is not {K}-shuffle compatible")


def magnus_transform(ctx: QuotientContext, weight: WeightFn, w, degree: int, K) -> TruncSeries:
    """mu(w): the product of (1 + a) over the letters of w, reduced and truncated."""
    _check_magnus_preconditions(ctx, weight, K)
    out = TruncSeries.one(K, ctx, weight, degree)
    for a in w:
        out = out * TruncSeries(K, ctx, weight, degree, {(): K.one, _nf(ctx, (a,)): K.one})
    return out


def free_magnus(w, K, alphabet=None) -> Poly:
    """mu(w) in K<A>: the sum of all subwords of w, counted with multiplicity."""
    out = Poly.one(K, alphabet)
    for a in w:
        out = out * Poly(K, {(): K.one, (a,): K.one}, alphabet)
    return out


def magnus_via_coproduct(ctx, weight, w, degree, K) -> TruncSeries:
    """(Id (x) ev) applied to the reduced coproduct of w."""
    T = reduce_tensor(ctx, word_coproduct(tuple(w), K))
    acc = {}
    for (x, _y), c in T.terms.items():
        acc[x] = K.add(acc.get(x, K.zero), c)
    return TruncSeries(K, ctx, weight, degree, acc)


def series_pow(S: TruncSeries, q: int) -> TruncSeries:
    _require_unit_constant(S)
    result = TruncSeries.one(S.K, S.ctx, S.weight, S.degree)
    base = S
    while q:
        if q & 1:
            result = result * base
        q >>= 1
        if q:
            base = base * base
    return result


def q_root(S: TruncSeries, q: int) -> TruncSeries:
    """Unique T with constant term 1 and T**q = S, solved grade by grade.

    Over Z the solve runs in the rationals and returns a rational series.
    """
    _require_unit_constant(S)
    if q < 1:
        raise NotInvertible("q must be positive")
    K = S.K
    if getattr(K, "kind", None) == INTEGERS:
        S = S.map_coefficients(QQ, QQ.normalize)
        K = QQ
    if not K.is_ring:
        if q != 1:
            raise NotInvertible(f"{q} is not invertible in {K}")
        return S
    qinv = K.inverse(K.from_int(q))
    T = TruncSeries.one(K, S.ctx, S.weight, S.degree)
    for d in range(1, S.degree + 1):
        power = series_pow(T, q)
        target = S.grade(d)
        current = power.grade(d)
        keys = set(target) | set(current)
        step = {w: K.mul(qinv, K.sub(target.get(w, K.zero), current.get(w, K.zero))) for w in keys}
        T = T + T._like(step)
    return T


def group_inverse(S: TruncSeries) -> TruncSeries:
    _require_unit_constant(S)
    if not S.K.is_ring:
        raise NotInvertible(f"no inverses in {S.K}")
    one = TruncSeries.one(S.K, S.ctx, S.weight, S.degree)
    X = one - S
    total, term = one, one
    for _ in range(S.degree):
        term = term * X
        if not term.coeffs:
            break
        total = total + term
    return total


def words_up_to_weight(alphabet, weight: WeightFn, maxweight: int):
    out = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for a in range(len(alphabet)):
                x = w + (a,)
                if weight(x) <= maxweight:
                    nxt.append(x)
        out.extend(nxt)
        frontier = nxt
    return out


@dataclass
class EmbedResult:
    ok: bool
    classes: int
    collision: tuple | None = None
    not_unitriangular: tuple | None = None


def embed_check(ctx: QuotientContext, weight: WeightFn, maxweight: int, K) -> EmbedResult:
    """mu is injective on classes of weight <= maxweight and unitriangular on top grade."""
    _check_magnus_preconditions(ctx, weight, K)
    classes = sorted({_nf(ctx, w) for w in words_up_to_weight(ctx.alphabet, weight, maxweight)}, key=word_key)
    seen = {}
    for c in classes:
        image = magnus_transform(ctx, weight, c, maxweight, K)
        top = image.grade(weight(c))
        if top != {c: K.one}:
            return EmbedResult(False, len(classes), not_unitriangular=c)
        key = frozenset(image.coeffs.items())
        if key in seen:
            return EmbedResult(False, len(classes), collision=(seen[key], c))
        seen[key] = c
    return EmbedResult(True, len(classes))


def random_series(ctx, weight, degree, K, rng, density=0.7, modulus=None):
    """Series with constant term 1 and random coefficients on the classes of weight <= degree."""
    classes = sorted({_nf(ctx, w) for w in words_up_to_weight(ctx.alphabet, weight, degree)}, key=word_key)
    coeffs = {(): K.one}
    span = modulus or getattr(K, "modulus", None) or 7
    for c in classes:
        if c and rng.random() < density:
            coeffs[c] = K.from_int(rng.randrange(-span, span + 1) if K.kind in ("Z", "Q") else rng.randrange(span))
    return TruncSeries(K, ctx, weight, degree, coeffs)
