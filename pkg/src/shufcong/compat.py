"""Shuffle compatibility, primitivity and the classification of quotients.

A congruence generated by R is compatible with the shuffle over K exactly
when, for every relator (u, v), the coproducts c(u) and c(v) have the same
image in K[A*/~] (x) K[A*/~].  Everything else in this module is built on
that test and on the primitivity test c(P) = P(x)1 + 1(x)P in the quotient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .congruence import (
    Presentation,
    QuotientContext,
    RewriteEngine,
    WeightFn,
    closure_of_relators,
    default_cap,
    find_weight,
    letg_potential,
    pre_normalize,
    reduce_tensors,
)
from .errors import (
    ClassificationConflict,
    CocycleViolation,
    Inconclusive,
    NonPrimeCharacteristic,
    NoProgress,
    PreconditionViolated,
    ShapeError,
)
from .freealg import Alphabet, Poly, TensorPoly, subwords, tensor, word_coproduct, word_key
from .semiring import SemiringClass, SemiringSpec, classify_semiring
from .trace import Theta, same_trace, trace_relators, traces

COMPATIBLE = "Compatible"
INCOMPATIBLE = "Incompatible"


@dataclass(frozen=True)
class Witness:
    relator: tuple
    pair: tuple
    coefficients: tuple


@dataclass(frozen=True)
class CompatReport:
    verdict: str
    witness: Witness | None = None

    @property
    def compatible(self):
        return self.verdict == COMPATIBLE


@dataclass
class PrimitivePartition:
    layers: list
    absorbed: list
    convention: str = "literal"

    @property
    def depth(self):
        return len(self.layers)


@dataclass
class Classification:
    kind: str
    theta: list = field(default_factory=list)
    identifications: list = field(default_factory=list)
    erasures: list = field(default_factory=list)
    p: int | None = None
    partition: PrimitivePartition | None = None
    report: CompatReport | None = None


# ---------------------------------------------------------------------------
# compatibility


def _compare(left: TensorPoly, right: TensorPoly):
    """First tensor key (sorted) where the two differ, or None."""
    keys = sorted(set(left.terms) | set(right.terms), key=lambda k: (word_key(k[0]), word_key(k[1])))
    for k in keys:
        if left.coefficient(k) != right.coefficient(k):
            return k
    return None


def check_compatibility(ctx: QuotientContext, K: SemiringSpec) -> CompatReport:
    if K in ctx.compat_cache:
        return ctx.compat_cache[K]
    report = CompatReport(COMPATIBLE)
    for u, v in ctx.presentation.relators:
        cu, cv = reduce_tensors(ctx, [word_coproduct(u, K), word_coproduct(v, K)])
        key = _compare(cu, cv)
        if key is not None:
            report = CompatReport(
                INCOMPATIBLE, Witness((u, v), key, (cu.coefficient(key), cv.coefficient(key)))
            )
            break
    ctx.compat_cache[K] = report
    return report


def witness_coefficient(ctx: QuotientContext, K, w, pair):
    """Coefficient of the class pair ``pair`` in the image of c(w), by subset enumeration."""
    x, y = pair
    total = K.zero
    for left, right in subwords(w):
        if ctx.equivalent(left, x) and ctx.equivalent(right, y):
            total = K.add(total, K.one)
    return total


def verify_witness(p: Presentation, K: SemiringSpec, witness: Witness, cap=None) -> bool:
    """Recompute both coefficients of an incompatibility witness from scratch."""
    if tuple(witness.relator) not in {tuple(r) for r in p.relators}:
        u, v = witness.relator
        if (tuple(v), tuple(u)) not in set(p.relators):
            return False
    ctx = QuotientContext(p, cap=cap)
    u, v = witness.relator
    cu = witness_coefficient(ctx, K, tuple(u), witness.pair)
    cv = witness_coefficient(ctx, K, tuple(v), witness.pair)
    return (cu, cv) == tuple(witness.coefficients) and cu != cv


# ---------------------------------------------------------------------------
# primitivity


def _require_compatible(ctx, K):
    report = check_compatibility(ctx, K)
    if not report.compatible:
        raise PreconditionViolated(f"congruence is not {K}-shuffle compatible")


def is_primitive(ctx: QuotientContext, K: SemiringSpec, P: Poly) -> bool:
    _require_compatible(ctx, K)
    one = Poly.one(K, P.alphabet)
    cp = TensorPoly._raw(K, {}, P.alphabet)
    for w, c in P.terms.items():
        cp = cp + word_coproduct(w, K).scale(c)
    lhs, rhs = reduce_tensors(ctx, [cp, tensor(P, one) + tensor(one, P)])
    return lhs == rhs


def _pair_primitive(ctx, K, u, v):
    """u - v primitive, tested without subtraction: c(u) + v(x)1 + 1(x)v = c(v) + u(x)1 + 1(x)u."""
    left = word_coproduct(u, K) + TensorPoly.pure(K, v, ()) + TensorPoly.pure(K, (), v)
    right = word_coproduct(v, K) + TensorPoly.pure(K, u, ()) + TensorPoly.pure(K, (), u)
    a, b = reduce_tensors(ctx, [left, right])
    return a == b


def primitive_partition(p: Presentation, K: SemiringSpec, convention="literal", cap=None) -> PrimitivePartition:
    """Layer the closed relator set so each layer is primitive over the previous ones.

    ``literal`` follows the construction word for word (R_i drawn from R minus
    the earlier S_j; S_i taken from R minus the earlier R_j and absorbed by
    R_i alone).  ``cumulative`` draws R_i from pairs in no earlier layer and
    absorbs with the union of all layers so far.
    """
    cls, char = classify_semiring(K)
    if cls is not SemiringClass.RING_CHAR_PRIME:
        raise NonPrimeCharacteristic(f"{K} does not have prime characteristic")
    if convention not in ("literal", "cumulative"):
        raise ValueError(convention)
    full = QuotientContext(p, cap=cap)
    _require_compatible(full, K)
    R = list(closure_of_relators(p, full).relators)
    A = p.alphabet
    layers, absorbed = [], []
    in_R, in_S = set(), set()
    union = []
    while True:
        stage = QuotientContext(Presentation(A, union), cap=cap)
        if all(stage.equivalent(u, v) for u, v in R):
            break
        _require_compatible(stage, K)
        earlier_R = set(in_R)
        if convention == "literal":
            candidates = [r for r in R if r not in in_S]
        else:
            candidates = [r for r in R if r not in in_S and r not in in_R]
        layer = [r for r in candidates if _pair_primitive(stage, K, *r)]
        if not layer:
            raise NoProgress(f"layer {len(layers) + 1} adds no relator")
        nxt = QuotientContext(Presentation(A, union + layer), cap=cap)
        layers.append(layer)
        in_R.update(layer)
        union = union + layer
        if convention == "literal":
            own = QuotientContext(Presentation(A, layer), cap=cap)
            s = [r for r in R if r not in earlier_R and own.equivalent(*r)]
        else:
            s = [r for r in R if r not in in_R and r not in in_S and nxt.equivalent(*r)]
        absorbed.append(s)
        in_S.update(s)
    leftover = [r for r in R if r not in in_R and r not in in_S]
    if leftover and absorbed:
        absorbed[-1] = absorbed[-1] + leftover
    part = PrimitivePartition(layers, absorbed, convention)
    _verify_partition(p, K, part, cap)
    return part


def _verify_partition(p, K, part, cap):
    A = p.alphabet
    union = []
    for i, layer in enumerate(part.layers):
        stage = QuotientContext(Presentation(A, union), cap=cap)
        for u, v in layer:
            if not _pair_primitive(stage, K, u, v):
                raise ClassificationConflict(f"layer {i + 1} relator is not primitive on re-check")
        union = union + layer
    final = QuotientContext(Presentation(A, union), cap=cap)
    for u, v in p.relators:
        if not final.equivalent(u, v):
            raise ClassificationConflict("layers do not generate the congruence")


# ---------------------------------------------------------------------------
# classification


@dataclass
class _PCAnalysis:
    commutative: bool | None
    theta: list
    pre: object


def _pc_analysis(p: Presentation, cap, allow_erasure) -> _PCAnalysis:
    """Decide whether the residual congruence equals a commutation congruence."""
    pre = pre_normalize(p, cap, strict=False)
    residual = pre.residual
    if pre.erasures and not allow_erasure:
        if pre.unresolved:
            raise Inconclusive(cap, "letter-level normalization unresolved")
        return _PCAnalysis(False, [], pre)
    engine = RewriteEngine(residual, cap, find_weight(residual))
    live = pre.live_letters
    proven, possible = [], []
    for a, b in itertools.combinations(live, 2):
        verdict = engine.decide((a, b), (b, a))
        if verdict:
            proven.append((a, b))
            possible.append((a, b))
        elif verdict is None:
            possible.append((a, b))
    th_proven, th_possible = Theta(proven), Theta(possible)
    if all(same_trace(th_proven, u, v) for u, v in residual.relators):
        return _PCAnalysis(True, proven, pre)
    if any(not same_trace(th_possible, u, v) for u, v in residual.relators) and not pre.unresolved:
        return _PCAnalysis(False, proven, pre)
    raise Inconclusive(cap, "cannot decide whether the quotient is partially commutative")


def _pc_classification(analysis, p):
    A = p.alphabet
    pre = analysis.pre
    return Classification(
        "PartiallyCommutative",
        theta=[(A.tokens[a], A.tokens[b]) for a, b in analysis.theta],
        identifications=[[A.tokens[x] for x in block] for block in pre.identifications],
        erasures=[A.tokens[x] for x in sorted(pre.erasures)],
    )


def boolean_classify(p: Presentation, cap=None) -> Classification:
    """Boolean case: compatible iff generated by a=1, a=b and ab=ba relators."""
    cap = default_cap(p) if cap is None else cap
    analysis = _pc_analysis(p, cap, allow_erasure=True)
    if analysis.commutative:
        return _pc_classification(analysis, p)
    report = check_compatibility(QuotientContext(p, cap=cap), SemiringSpec.boolean())
    if report.compatible:
        raise ClassificationConflict("residual is not partially commutative yet the coproduct check passes")
    return Classification("Incompatible", report=report)


def classify_quotient(p: Presentation, K: SemiringSpec, cap=None, convention="literal") -> Classification:
    cap = default_cap(p) if cap is None else cap
    cls, char = classify_semiring(K)
    if cls is SemiringClass.BOOLEAN_IDEMPOTENT:
        return boolean_classify(p, cap)
    ctx = QuotientContext(p, cap=cap)
    report = check_compatibility(ctx, K)
    if cls is SemiringClass.RING_CHAR_PRIME:
        if not report.compatible:
            return Classification("Incompatible", p=char, report=report)
        part = primitive_partition(p, K, convention=convention, cap=cap)
        return Classification("PrimeDecomposition", p=char, partition=part)
    analysis = _pc_analysis(p, cap, allow_erasure=False)
    if report.compatible and analysis.commutative:
        return _pc_classification(analysis, p)
    if not report.compatible and not analysis.commutative:
        return Classification("Incompatible", report=report)
    raise ClassificationConflict(
        f"coproduct check says {report.verdict} but the quotient is "
        f"{'' if analysis.commutative else 'not '}partially commutative"
    )


# ---------------------------------------------------------------------------
# primitive binomials in trace algebras


def classify_primitive_binomials(p: int, theta: Theta, maxlen: int, alphabet=None):
    """All pairs of distinct traces (|u|, |v| <= maxlen) with u - v primitive over Z/p."""
    K = SemiringSpec.mod(p)
    alphabet = alphabet or Alphabet("ab")
    ctx = QuotientContext(Presentation(alphabet, trace_relators(theta)))
    groups = {}
    for t in traces(theta, len(alphabet), maxlen):
        if not t:
            continue
        defect = word_coproduct(t, K) - TensorPoly.pure(K, t, ()) - TensorPoly.pure(K, (), t)
        (red,) = reduce_tensors(ctx, [defect])
        groups.setdefault(frozenset(red.terms.items()), []).append(t)
    pairs = []
    for members in groups.values():
        members.sort(key=word_key)
        for u, v in itertools.combinations(members, 2):
            pairs.append((u, v))
    pairs.sort(key=lambda pr: (word_key(pr[0]), word_key(pr[1])))
    return pairs


def _power_of(n, p):
    """alpha with n = p**alpha, or None."""
    alpha = 0
    while n % p == 0 and n > 1:
        n //= p
        alpha += 1
    return alpha if n == 1 else None


def _runs(w):
    out = []
    for x in w:
        if out and out[-1][0] == x:
            out[-1][1] += 1
        else:
            out.append([x, 1])
    return [tuple(r) for r in out]


def relator_shape(u, v, p):
    """('pLI', x, alpha, y, beta) | ('pLC', x, alpha, y, beta) | None."""
    ru, rv = _runs(u), _runs(v)
    if len(ru) == 1 and len(rv) == 1:
        (x, m), (y, n) = ru[0], rv[0]
        a, b = _power_of(m, p), _power_of(n, p)
        if a is not None and b is not None:
            return ("pLI", x, a, y, b)
    if len(ru) == 2 and len(rv) == 2:
        (x, m), (y, n) = ru
        if rv == [(y, n), (x, m)] and x != y:
            a, b = _power_of(m, p), _power_of(n, p)
            if a is not None and b is not None:
                return ("pLC", x, a, y, b)
    return None


@dataclass
class PLIResult:
    ok: bool
    d: dict = field(default_factory=dict)
    h: dict = field(default_factory=dict)
    weight: WeightFn | None = None
    conflict: tuple = ()


def pLI_consistency(pres: Presentation, p: int) -> PLIResult:
    """Potential and weight p**h from the letter-power relators, or a conflict."""
    d = {}
    source = {}
    for u, v in pres.relators:
        shape = relator_shape(u, v, p)
        if shape is None:
            A = pres.alphabet
            raise ShapeError(f"{A.format(u)} = {A.format(v)} is neither pLI nor pLC for p={p}")
        kind, x, a, y, b = shape
        if kind != "pLI":
            continue
        if x == y:
            if a != b:
                return PLIResult(False, conflict=((u, v),))
            continue
        key, val = ((x, y), a - b) if x < y else ((y, x), b - a)
        if key in d and d[key] != val:
            return PLIResult(False, conflict=(source[key], (u, v)))
        d.setdefault(key, val)
        source.setdefault(key, (u, v))
    n = len(pres.alphabet)
    # the pLI graph must be an equivalence graph: extend d along paths
    try:
        h = letg_potential(range(n), d)
    except CocycleViolation as exc:
        letters = set(exc.triple)
        involved = tuple(r for k, r in source.items() if set(k) <= letters)
        return PLIResult(False, conflict=involved)
    weight = WeightFn(tuple(p ** h[i] for i in range(n)))
    return PLIResult(True, d=d, h=h, weight=weight)


@dataclass(frozen=True)
class CancelWitness:
    x: tuple
    u: tuple
    v: tuple
    side: str  # "left": xu = xv ; "right": ux = vx


def cancellability_search(ctx: QuotientContext, bound: int):
    """A proven failure of cancellativity among words of length <= bound, or None."""
    words = list(ctx.alphabet.words(bound))
    best = None
    for x in words:
        for side in ("left", "right"):
            groups = {}
            for u in words:
                w = x + u if side == "left" else u + x
                groups.setdefault(ctx.engine.root(ctx.nat(w)), []).append(u)
            for members in groups.values():
                for u, v in itertools.combinations(members, 2):
                    if ctx.decide(u, v) is False:
                        key = (len(x) + len(u) + len(v), side != "left", word_key(x), word_key(u), word_key(v))
                        if best is None or key < best[0]:
                            best = (key, CancelWitness(x, u, v, side))
    return None if best is None else best[1]

