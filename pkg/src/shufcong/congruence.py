"""Finitely presented monoids and a bounded engine for their congruences.

Equivalence of words is explored by breadth-first rewriting with every
relator applied in both directions at every position.  When a positive
weight function makes the presentation homogeneous every class is finite
and exploration is exact.  Otherwise words longer than the exploration cap
are pruned, and a partially explored class only proves *equivalences*.
Non-equivalence between partially explored classes is then established by
congruence invariants (rational Parikh invariants and homomorphisms into
small transformation monoids); if neither settles it the engine raises
:class:`~shufcong.errors.Inconclusive`.

Before any of this, :func:`pre_normalize` removes letters equal to the unit
and identifies letters equal to each other, which turns many
non-homogeneous presentations into homogeneous ones.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .errors import CocycleViolation, EmptyAlphabet, Inconclusive, ParseError, PreconditionViolated, UsageError
from .freealg import Alphabet, Poly, TensorPoly, parikh, word_key
from .semiring import parse_semiring

MAX_CLASS_SIZE = 200_000


def _orient(u, v):
    return (u, v) if word_key(u) >= word_key(v) else (v, u)


class Presentation:
    """Alphabet plus relator pairs, oriented so that left >= right (length-lex)."""

    def __init__(self, alphabet, relators=(), semiring=None):
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(alphabet)
        self.alphabet = alphabet
        self.semiring = semiring
        seen = set()
        rels = []
        n = len(alphabet)
        for u, v in relators:
            u, v = tuple(u), tuple(v)
            if any(not 0 <= x < n for x in u + v):
                raise UsageError("relator word outside the alphabet")
            if u == v:
                continue
            pair = _orient(u, v)
            if pair not in seen:
                seen.add(pair)
                rels.append(pair)
        self.relators = tuple(rels)

    @classmethod
    def from_strings(cls, tokens, relators=(), semiring=None):
        """Convenience: ``Presentation.from_strings("ab", ["ab=ba"])``."""
        alphabet = tokens if isinstance(tokens, Alphabet) else Alphabet(tokens)
        pairs = []
        for text in relators:
            left, right = text.split("=")
            pairs.append((alphabet.word(left), alphabet.word(right)))
        return cls(alphabet, pairs, semiring)

    def __eq__(self, other):
        return (
            isinstance(other, Presentation)
            and self.alphabet == other.alphabet
            and set(self.relators) == set(other.relators)
        )

    def __hash__(self):
        return hash((self.alphabet, frozenset(self.relators)))

    def __repr__(self):
        rels = ", ".join(f"{self.alphabet.format(u)}={self.alphabet.format(v)}" for u, v in self.relators)
        return f"Presentation({' '.join(self.alphabet.tokens)}; {rels})"

    def with_relators(self, relators):
        return Presentation(self.alphabet, relators, self.semiring)

    def max_element(self):
        """Length-lex maximum over all relator words (None without relators)."""
        words = [w for pair in self.relators for w in pair]
        return max(words, key=word_key) if words else None

    def max_relator_length(self):
        return max((len(w) for pair in self.relators for w in pair), default=0)

    def letters_used(self):
        return sorted({x for pair in self.relators for w in pair for x in w})

    def to_text(self):
        lines = ["alphabet " + " ".join(self.alphabet.tokens)]
        if self.semiring is not None:
            lines.append(f"semiring {self.semiring}")
        for u, v in self.relators:
            lines.append(f"relator {_spaced(self.alphabet, u)} = {_spaced(self.alphabet, v)}")
        return "\n".join(lines) + "\n"


def _spaced(alphabet, w):
    return " ".join(alphabet.tokens[i] for i in w) if w else "1"


def parse_presentation(text: str) -> Presentation:
    """Parse the line-oriented presentation format.

    ``alphabet`` may be omitted, in which case letters are collected from the
    relators in order of first appearance.
    """
    alphabet_tokens = None
    semiring = None
    raw = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "alphabet":
            if alphabet_tokens is not None:
                raise ParseError("duplicate alphabet line", lineno)
            alphabet_tokens = rest.split()
            if not alphabet_tokens:
                raise EmptyAlphabet("empty alphabet", lineno)
            if len(set(alphabet_tokens)) != len(alphabet_tokens):
                raise ParseError("duplicate letter in alphabet", lineno)
        elif head == "semiring":
            if semiring is not None:
                raise ParseError("duplicate semiring line", lineno)
            try:
                semiring = parse_semiring(rest)
            except ParseError as exc:
                raise ParseError(str(exc), lineno) from None
        elif head == "relator":
            if rest.count("=") != 1:
                raise ParseError("relator needs exactly one '='", lineno)
            left, right = (side.split() for side in rest.split("="))
            if not left or not right:
                raise ParseError("relator side is empty (write 1 for the empty word)", lineno)
            raw.append((left, right, lineno))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    if alphabet_tokens is None:
        alphabet_tokens = []
        for left, right, _ in raw:
            for tok in left + right:
                if tok != "1" and tok not in alphabet_tokens:
                    alphabet_tokens.append(tok)
        if not alphabet_tokens:
            raise EmptyAlphabet("empty alphabet")
    try:
        alphabet = Alphabet(alphabet_tokens)
    except UsageError as exc:
        raise ParseError(str(exc)) from None
    pairs = []
    for left, right, lineno in raw:
        sides = []
        for side in (left, right):
            toks = [] if side == ["1"] else side
            if "1" in toks:
                raise ParseError("'1' may only stand alone as the empty word", lineno)
            sides.append(tuple(alphabet.index(t, lineno) for t in toks))
        pairs.append(tuple(sides))
    return Presentation(alphabet, pairs, semiring)


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class WeightFn:
    weights: tuple

    def __post_init__(self):
        if any(w < 1 for w in self.weights):
            raise UsageError("weights must be positive")

    def __call__(self, w):
        return sum(self.weights[x] for x in w)

    def is_homogeneous(self, presentation):
        return all(self(u) == self(v) for u, v in presentation.relators)

    def as_dict(self, alphabet):
        return {alphabet.tokens[i]: c for i, c in enumerate(self.weights)}


def _nullspace(rows, ncols):
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    basis = sympy.Matrix(rows).nullspace()
    return [[Fraction(int(x.p), int(x.q)) for x in vec] for vec in basis]


def find_weight(p: Presentation):
    """Smallest-max positive integer weights making every relator homogeneous."""
    n = len(p.alphabet)
    rows = []
    for u, v in p.relators:
        pu, pv = parikh(u, n), parikh(v, n)
        row = [a - b for a, b in zip(pu, pv)]
        if any(row):
            rows.append(row)
    active = [j for j in range(n) if any(r[j] for r in rows)]
    weights = [1] * n
    if not active:
        return WeightFn(tuple(weights))
    sub = [[r[j] for j in active] for r in rows]
    if all(sum(r) == 0 for r in sub):
        return WeightFn(tuple(weights))
    basis = _nullspace(sub, len(active))
    if not basis:
        return None
    span = 8 if len(basis) <= 3 else (3 if len(basis) <= 5 else 1)
    best = None
    for coeffs in itertools.product(range(-span, span + 1), repeat=len(basis)):
        if not any(coeffs):
            continue
        vec = [sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(len(active))]
        if not all(x > 0 for x in vec):
            continue
        den = math.lcm(*(x.denominator for x in vec))
        ints = [int(x * den) for x in vec]
        g = math.gcd(*ints)
        ints = tuple(x // g for x in ints)
        cand = (max(ints), ints)
        if best is None or cand < best:
            best = cand
    if best is None:
        return None
    for j, w in zip(active, best[1]):
        weights[j] = w
    return WeightFn(tuple(weights))


def letg_potential(vertices, d):
    """Potential ``h >= 1`` with ``d(a, b) = h(b) - h(a)`` on every given edge.

    ``d`` maps ordered pairs to integers; the reverse orientation is implied.
    """
    vertices = list(vertices)
    edges = {}
    for (a, b), val in d.items():
        if a == b:
            if val != 0:
                raise CocycleViolation(a, a, a)
            continue
        for key, x in (((a, b), val), ((b, a), -val)):
            if key in edges and edges[key] != x:
                raise CocycleViolation(a, b, a)
            edges[key] = x
    adj = {v: [] for v in vertices}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, [])
        if a not in vertices:
            vertices.append(a)
        if b not in vertices:
            vertices.append(b)
    for (a, b), x in edges.items():
        for c in adj[b]:
            if c != a and (c, a) in edges and x + edges[(b, c)] + edges[(c, a)] != 0:
                raise CocycleViolation(a, b, c)
    h = {}
    for root in vertices:
        if root in h:
            continue
        h[root] = 0
        comp = [root]
        parent = {root: root}
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                want = h[a] + edges[(a, b)]
                if b not in h:
                    h[b] = want
                    parent[b] = a
                    comp.append(b)
                    queue.append(b)
                elif h[b] != want:
                    raise CocycleViolation(parent[a], a, b)
        low = min(h[v] for v in comp)
        for v in comp:
            h[v] = h[v] - low + 1
    return h


# ---------------------------------------------------------------------------
# bounded rewriting engine


@dataclass
class _Component:
    words: set
    closed: bool
    minimum: tuple


def _transformations(n):
    return list(itertools.product(range(n), repeat=n))


def _compose(f, g):
    return tuple(g[i] for i in f)


class RewriteEngine:
    """Explores congruence classes of a presentation (no letter pre-processing)."""

    def __init__(self, presentation: Presentation, cap=None, weight=None):
        self.presentation = presentation
        self.weight = weight
        self.cap = None if weight is not None else cap
        self._rules = []
        for u, v in presentation.relators:
            self._rules.append((u, v))
            self._rules.append((v, u))
        self._parent = {}
        self._comp = {}
        self._invariants = None
        self._models = None
        self._decided = {}

    # union-find over explored words
    def _find(self, w):
        root = self._parent[w]
        if root == w:
            return w
        path = [w]
        while self._parent[root] != root:
            path.append(root)
            root = self._parent[root]
        for x in path:
            self._parent[x] = root
        return root

    def neighbors(self, w):
        for lhs, rhs in self._rules:
            k = len(lhs)
            if k == 0:
                for i in range(len(w) + 1):
                    yield w[:i] + rhs + w[i:]
                continue
            first = lhs[0]
            for i in range(len(w) - k + 1):
                if w[i] == first and w[i : i + k] == lhs:
                    yield w[:i] + rhs + w[i + k :]

    def root(self, w):
        w = tuple(w)
        if w not in self._parent:
            self._explore(w)
        return self._find(w)

    def component(self, w) -> _Component:
        return self._comp[self.root(w)]

    def _explore(self, start):
        cap = self.cap
        seen = {start}
        closed = True
        touched = set()
        if cap is not None and len(start) > cap:
            closed = False
            queue = deque()
        else:
            queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in self.neighbors(x):
                if y in seen:
                    continue
                if cap is not None and len(y) > cap:
                    closed = False
                    continue
                if y in self._parent:
                    touched.add(self._find(y))
                    closed = False
                    continue
                seen.add(y)
                if len(seen) > MAX_CLASS_SIZE:
                    closed = False
                    queue.clear()
                    break
                queue.append(y)
        minimum = min(seen, key=word_key)
        for x in seen:
            self._parent[x] = start
        comp = _Component(seen, closed, minimum)
        self._comp[start] = comp
        for r in touched:
            other = self._comp.pop(r)
            self._parent[r] = start
            comp.words |= other.words
            comp.closed = False
            comp.minimum = min(comp.minimum, other.minimum, key=word_key)
        if touched:
            self._decided.clear()

    # separation -----------------------------------------------------------
    def _linear_invariants(self):
        if self._invariants is None:
            n = len(self.presentation.alphabet)
            rows = []
            for u, v in self.presentation.relators:
                row = [a - b for a, b in zip(parikh(u, n), parikh(v, n))]
                if any(row):
                    rows.append(row)
            self._invariants = _nullspace(rows, n)
        return self._invariants

    def _finite_models(self):
        if self._models is None:
            k = len(self.presentation.alphabet)
            models = []
            for n in (2, 3):
                elems = _transformations(n)
                if len(elems) ** k > 20_000:
                    break
                for assign in itertools.product(elems, repeat=k):
                    if all(self._image(assign, u, n) == self._image(assign, v, n) for u, v in self.presentation.relators):
                        models.append((assign, n))
                        if len(models) >= 400:
                            break
            self._models = models
        return self._models

    @staticmethod
    def _image(assign, w, n):
        f = tuple(range(n))
        for x in w:
            f = _compose(f, assign[x])
        return f

    def separated(self, u, v):
        """True when an invariant proves ``u`` and ``v`` lie in different classes."""
        n = len(self.presentation.alphabet)
        diff = [a - b for a, b in zip(parikh(u, n), parikh(v, n))]
        for z in self._linear_invariants():
            if sum(a * b for a, b in zip(z, diff)) != 0:
                return True
        for assign, size in self._finite_models():
            if self._image(assign, u, size) != self._image(assign, v, size):
                return True
        return False

    def decide(self, u, v):
        """True (proved equivalent), False (proved distinct) or None."""
        ru, rv = self.root(u), self.root(v)
        if ru == rv:
            return True
        cu, cv = self._comp[ru], self._comp[rv]
        if cu.closed or cv.closed:
            return False
        key = (ru, rv) if word_key(ru) <= word_key(rv) else (rv, ru)
        if key not in self._decided:
            self._decided[key] = False if self.separated(cu.minimum, cv.minimum) else None
        return self._decided[key]


# ---------------------------------------------------------------------------
# letter-level pre-normalization


@dataclass
class PreNormalization:
    alphabet: Alphabet
    erasures: frozenset
    representative: dict  # letter -> block representative (erased letters absent)
    residual: Presentation
    unresolved: list = field(default_factory=list)

    @property
    def identifications(self):
        blocks = {}
        for a, r in self.representative.items():
            blocks.setdefault(r, []).append(a)
        return [tuple(sorted(b)) for _, b in sorted(blocks.items()) if len(b) > 1]

    @property
    def live_letters(self):
        return sorted(set(self.representative.values()))

    def apply(self, w):
        rep = self.representative
        return tuple(rep[x] for x in w if x in rep)

    def describe(self):
        A = self.alphabet
        return {
            "erasures": [A.tokens[a] for a in sorted(self.erasures)],
            "identifications": [[A.tokens[a] for a in b] for b in self.identifications],
            "residual": [[A.format(u), A.format(v)] for u, v in self.residual.relators],
        }


def default_cap(p: Presentation):
    return max(p.max_relator_length(), 1) * 4


def pre_normalize(p: Presentation, cap=None, strict=True) -> PreNormalization:
    """Erase letters equal to 1 and merge letters equal to each other, to a fixpoint."""
    cap = default_cap(p) if cap is None else cap
    n = len(p.alphabet)
    parent = list(range(n))
    erased = set()

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        lo, hi = min(ra, rb), max(ra, rb)
        parent[hi] = lo
        if hi in erased:
            erased.discard(hi)
            erased.add(lo)
        return True

    def erase(a):
        r = find(a)
        if r in erased:
            return False
        erased.add(r)
        return True

    def phi(w):
        out = []
        for x in w:
            r = find(x)
            if r not in erased:
                out.append(r)
        return tuple(out)

    unresolved = []
    while True:
        residual = Presentation(p.alphabet, [(phi(u), phi(v)) for u, v in p.relators], p.semiring)
        changed = False
        for u, v in residual.relators:
            if len(u) == 1 and not v:
                changed |= erase(u[0])
            elif len(u) == 1 and len(v) == 1:
                changed |= union(u[0], v[0])
        if changed:
            continue
        live = sorted({find(a) for a in range(n)} - erased)
        used = set(residual.letters_used())
        engine = RewriteEngine(residual, cap, find_weight(residual))
        unresolved = []
        for a in live:
            if a not in used:
                continue
            verdict = engine.decide((a,), ())
            if verdict:
                changed |= erase(a)
                break
            if verdict is None:
                unresolved.append(((a,), ()))
        if changed:
            continue
        for a, b in itertools.combinations([x for x in live if x in used], 2):
            verdict = engine.decide((a,), (b,))
            if verdict:
                changed |= union(a, b)
                break
            if verdict is None:
                unresolved.append(((a,), (b,)))
        if changed:
            continue
        break
    if strict and unresolved:
        u, v = unresolved[0]
        raise Inconclusive(cap, f"cannot settle {p.alphabet.format(u)} = {p.alphabet.format(v)}")
    representative = {a: find(a) for a in range(n) if find(a) not in erased}
    erasures = frozenset(a for a in range(n) if find(a) in erased)
    return PreNormalization(p.alphabet, erasures, representative, residual, unresolved)


# ---------------------------------------------------------------------------
# quotient context


class QuotientContext:
    """A presentation together with the machinery to compute in A*/~.

    ``weight`` is found automatically for the pre-normalized presentation
    unless given.  Classes are cached; a context may be shared once warm.
    """

    def __init__(self, presentation: Presentation, weight=None, cap=None):
        self.presentation = presentation
        self.alphabet = presentation.alphabet
        self.cap = default_cap(presentation) if cap is None else cap
        self.pre = pre_normalize(presentation, self.cap, strict=False)
        if weight is not None:
            if not weight.is_homogeneous(presentation):
                raise PreconditionViolated("presentation is not homogeneous for the given weight")
        else:
            weight = find_weight(self.pre.residual)
        self.weight = weight
        self.engine = RewriteEngine(self.pre.residual, self.cap, weight)
        self.compat_cache = {}

    def __repr__(self):
        return f"QuotientContext({self.presentation!r}, cap={self.cap})"

    @property
    def exact(self):
        return self.weight is not None

    def nat(self, w):
        return self.pre.apply(tuple(w))

    def normal_form(self, w):
        comp = self.engine.component(self.nat(w))
        if not comp.closed:
            raise Inconclusive(self.cap, f"class of {self.alphabet.format(tuple(w))} not closed")
        return comp.minimum

    def decide(self, u, v):
        return self.engine.decide(self.nat(u), self.nat(v))

    def equivalent(self, u, v):
        verdict = self.decide(u, v)
        if verdict is None:
            raise Inconclusive(
                self.cap, f"cannot decide {self.alphabet.format(tuple(u))} = {self.alphabet.format(tuple(v))}"
            )
        return verdict

    def representatives(self, words):
        """Map each word to the minimum of its (explored) class.

        Raises Inconclusive unless the grouping of ``words`` into classes is
        fully determined.
        """
        words = list(dict.fromkeys(tuple(w) for w in words))
        eng = self.engine
        images = {w: self.nat(w) for w in words}
        for x in images.values():
            eng.root(x)
        roots = {w: eng.root(x) for w, x in images.items()}
        open_roots = sorted({r for r in roots.values() if not eng._comp[r].closed}, key=word_key)
        for r1, r2 in itertools.combinations(open_roots, 2):
            if eng.decide(r1, r2) is None:
                A = self.alphabet
                raise Inconclusive(self.cap, f"cannot separate classes of {A.format(r1)} and {A.format(r2)}")
        return {w: eng._comp[eng.root(images[w])].minimum for w in words}

    def class_enumeration(self, w, maxlen):
        """Words of length <= maxlen equivalent to ``w`` (requires a closed class)."""
        target = self.normal_form(w)
        out = []
        for x in self.alphabet.words(maxlen):
            if self.decide(x, target):
                out.append(x)
        return out


def normal_form(ctx: QuotientContext, w):
    return ctx.normal_form(w)


def equivalent(ctx: QuotientContext, u, v):
    return ctx.equivalent(u, v)


def reduce_poly(ctx: QuotientContext, P: Poly) -> Poly:
    reps = ctx.representatives(P.terms)
    K = P.K
    out = {}
    for w, c in P.terms.items():
        r = reps[w]
        out[r] = K.add(out.get(r, K.zero), c)
    return Poly._raw(K, out, P.alphabet)


def reduce_tensors(ctx: QuotientContext, tensors):
    """Reduce several tensors with one consistent choice of representatives."""
    words = [w for T in tensors for pair in T.terms for w in pair]
    reps = ctx.representatives(words)
    out = []
    for T in tensors:
        K = T.K
        acc = {}
        for (x, y), c in T.terms.items():
            key = (reps[x], reps[y])
            acc[key] = K.add(acc.get(key, K.zero), c)
        out.append(TensorPoly._raw(K, acc, T.alphabet))
    return out


def reduce_tensor(ctx: QuotientContext, T: TensorPoly) -> TensorPoly:
    return reduce_tensors(ctx, [T])[0]


def group_words(ctx: QuotientContext, words):
    reps = ctx.representatives(words)
    groups = {}
    for w in words:
        groups.setdefault(reps[tuple(w)], []).append(tuple(w))
    return groups


def closure_of_relators(p: Presentation, ctx: QuotientContext | None = None) -> Presentation:
    """Add every equivalent pair whose larger word is <= the largest relator word."""
    top = p.max_element()
    if top is None:
        return p
    ctx = ctx or QuotientContext(p)
    bound = word_key(top)
    words = [w for w in p.alphabet.words(len(top)) if word_key(w) <= bound]
    extra = []
    for members in group_words(ctx, words).values():
        members.sort(key=word_key)
        for i, u in enumerate(members):
            for v in members[i + 1 :]:
                extra.append((v, u))
    extra.sort(key=lambda pr: (word_key(pr[0]), word_key(pr[1])))
    return p.with_relators(list(p.relators) + extra)


def lattice_join_meet(p1: Presentation, p2: Presentation, bound: int):
    """Join (union of relators) and a bounded meet of two congruences."""
    if p1.alphabet != p2.alphabet:
        raise UsageError("presentations over different alphabets")
    join = Presentation(p1.alphabet, list(p1.relators) + list(p2.relators), p1.semiring)
    c1, c2 = QuotientContext(p1), QuotientContext(p2)
    words = list(p1.alphabet.words(bound))
    g1 = group_words(c1, words)
    rep2 = c2.representatives(words)
    pairs = []
    for members in g1.values():
        members.sort(key=word_key)
        for i, u in enumerate(members):
            for v in members[i + 1 :]:
                if rep2[u] == rep2[v]:
                    pairs.append((v, u))
    pairs.sort(key=lambda pr: (word_key(pr[0]), word_key(pr[1])))
    return join, Presentation(p1.alphabet, pairs, p1.semiring)


def restrict_bounded(ctx: QuotientContext, letters, bound: int) -> Presentation:
    """Equivalent pairs of words over the sub-alphabet ``letters`` up to ``bound``.

    ``letters`` are tokens or indices; the result lives over the sub-alphabet
    in the original letter order.
    """
    A = ctx.alphabet
    idx = sorted(A.index(x) if isinstance(x, str) else x for x in letters)
    sub = Alphabet([A.tokens[i] for i in idx])
    if not idx:
        return Presentation(sub, ())
    relabel = {old: new for new, old in enumerate(idx)}
    words = list(A.words(bound, letters=idx))
    pairs = []
    for members in group_words(ctx, words).values():
        members.sort(key=word_key)
        for i, u in enumerate(members):
            for v in members[i + 1 :]:
                pairs.append((tuple(relabel[x] for x in v), tuple(relabel[x] for x in u)))
    pairs.sort(key=lambda pr: (word_key(pr[0]), word_key(pr[1])))
    return Presentation(sub, pairs, ctx.presentation.semiring)
