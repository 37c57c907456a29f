"""Words, noncommutative polynomials, and the products/coproducts on them.

A word is a tuple of letter indices into an :class:`Alphabet`; the empty
tuple is the unit and prints as ``1``.  Words are ordered length-lex by the
declared letter order (:func:`word_key`).

The q-product (shuffle at ``q=0``, infiltration at ``q=1``) is computed by
its defining recursion on last letters, while the dual coproduct ``c_q`` is
expanded letter by letter as a product of ``a(x)1 + 1(x)a + q a(x)a``.  The
two routes share no code so that the duality between them is a genuine
cross-check.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import product as _cartesian

from .errors import ParseError, UnknownLetter, UsageError

Word = tuple


def word_key(w):
    return (len(w), w)


def tensor_key(pair):
    return (word_key(pair[0]), word_key(pair[1]))


class Alphabet:
    """Ordered list of distinct letter tokens."""

    def __init__(self, tokens):
        tokens = tuple(tokens)
        if len(set(tokens)) != len(tokens):
            raise UsageError(f"duplicate letters in alphabet {tokens}")
        for t in tokens:
            if not t or t == "1" or any(ch in t for ch in " .+-*=#|"):
                raise UsageError(f"illegal letter token {t!r}")
        self.tokens = tokens
        self._index = {t: i for i, t in enumerate(tokens)}

    def __len__(self):
        return len(self.tokens)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.tokens == other.tokens

    def __hash__(self):
        return hash(self.tokens)

    def __repr__(self):
        return f"Alphabet({' '.join(self.tokens)})"

    @property
    def single_char(self):
        return all(len(t) == 1 for t in self.tokens)

    def index(self, token, line=None):
        try:
            return self._index[token]
        except KeyError:
            raise UnknownLetter(token, line) from None

    def word(self, text, line=None) -> Word:
        """Parse ``aab``, ``a a b``, ``x1.x2`` or ``1`` into a word."""
        text = text.strip()
        if text in ("", "1"):
            return ()
        if self.single_char and "." not in text:
            return tuple(self.index(ch, line) for ch in text if not ch.isspace())
        parts = [p for p in re.split(r"[.\s]+", text) if p]
        return tuple(self.index(p, line) for p in parts)

    def format(self, w) -> str:
        if not w:
            return "1"
        sep = "" if self.single_char else "."
        return sep.join(self.tokens[i] for i in w)

    def words(self, maxlen, minlen=0, letters=None):
        """All words with ``minlen <= |w| <= maxlen`` in length-lex order."""
        letters = range(len(self)) if letters is None else sorted(letters)
        for n in range(minlen, maxlen + 1):
            yield from _cartesian(letters, repeat=n)


def parikh(w, size):
    v = [0] * size
    for x in w:
        v[x] += 1
    return tuple(v)


def subwords(w):
    """Yield ``(left, right)`` for every split of the positions of ``w``."""
    n = len(w)
    for mask in range(1 << n):
        left = tuple(w[i] for i in range(n) if mask >> i & 1)
        right = tuple(w[i] for i in range(n) if not mask >> i & 1)
        yield left, right


class _Linear:
    """Finite coefficient mapping with no stored zeros."""

    _sort_key = staticmethod(word_key)

    def __init__(self, K, terms=None, alphabet=None):
        self.K = K
        self.alphabet = alphabet
        self.terms = {}
        if terms:
            for key, c in terms.items():
                c = K.normalize(c)
                if not K.is_zero(c):
                    self.terms[key] = c

    @classmethod
    def _raw(cls, K, terms, alphabet):
        out = cls.__new__(cls)
        out.K = K
        out.alphabet = alphabet
        out.terms = {k: c for k, c in terms.items() if not K.is_zero(c)}
        return out

    def _compatible(self, other):
        if self.K != other.K:
            raise UsageError(f"semiring mismatch: {self.K} vs {other.K}")
        if (
            self.alphabet is not None
            and other.alphabet is not None
            and self.alphabet != other.alphabet
        ):
            raise UsageError("alphabet mismatch")
        return self.alphabet if self.alphabet is not None else other.alphabet

    def coefficient(self, key):
        return self.terms.get(key, self.K.zero)

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: self._sort_key(kv[0]))

    def keys(self):
        return [k for k, _ in self.items()]

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, _Linear):
            return NotImplemented
        return self.K == other.K and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        alphabet = self._compatible(other)
        K = self.K
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = K.add(out.get(k, K.zero), c)
        return self._raw(K, out, alphabet)

    def __neg__(self):
        K = self.K
        return self._raw(K, {k: K.neg(c) for k, c in self.terms.items()}, self.alphabet)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        K = self.K
        s = K.normalize(s) if not isinstance(s, type(K.one)) else s
        return self._raw(K, {k: K.mul(s, c) for k, c in self.terms.items()}, self.alphabet)

    def with_semiring(self, K):
        """Push coefficients (read as integers) into another semiring."""
        return type(self)(K, {k: K.from_int(int(c)) for k, c in self.terms.items()}, self.alphabet)


class Poly(_Linear):
    """Element of K<A> (or, with normal-form keys, of K[A*/~])."""

    @classmethod
    def word(cls, K, w, alphabet=None, coeff=None):
        return cls(K, {tuple(w): K.one if coeff is None else coeff}, alphabet)

    @classmethod
    def one(cls, K, alphabet=None):
        return cls(K, {(): K.one}, alphabet)

    @classmethod
    def parse(cls, text, alphabet, K):
        """Parse ``2*aab + aba``, ``ab - ba``, ``1 + a``."""
        text = text.strip()
        if not text:
            raise ParseError("empty polynomial")
        terms = {}
        pieces = re.findall(r"([+-]?)\s*([^+-]+)", text)
        if "".join(s + b for s, b in pieces).replace(" ", "") != text.replace(" ", ""):
            raise ParseError(f"cannot parse polynomial {text!r}")
        for sign, body in pieces:
            body = body.strip()
            if "*" in body:
                coeff_text, word_text = body.split("*", 1)
                coeff = int(coeff_text)
            elif body.isdigit() and body != "1":
                coeff, word_text = int(body), "1"
            else:
                coeff, word_text = 1, body
            if sign == "-":
                coeff = -coeff
            w = alphabet.word(word_text)
            value = K.from_int(coeff) if coeff >= 0 else K.neg(K.from_int(-coeff))
            terms[w] = K.add(terms.get(w, K.zero), value)
        return cls(K, terms, alphabet)

    def __mul__(self, other):
        return concat_product(self, other)

    def format(self, alphabet=None):
        alphabet = alphabet or self.alphabet
        return _format_terms(self.K, [(alphabet.format(w), c) for w, c in self.items()])

    def __repr__(self):
        if self.alphabet is None:
            return f"Poly({self.K}, {dict(self.items())})"
        return f"Poly({self.format()})"

    def degree(self):
        return max((len(w) for w in self.terms), default=-1)


class TensorPoly(_Linear):
    """Element of K<A> (x) K<A>, keyed by pairs of words."""

    _sort_key = staticmethod(tensor_key)

    @classmethod
    def pure(cls, K, left, right, alphabet=None, coeff=None):
        return cls(K, {(tuple(left), tuple(right)): K.one if coeff is None else coeff}, alphabet)

    def format(self, alphabet=None):
        alphabet = alphabet or self.alphabet
        return _format_terms(
            self.K,
            [(f"{alphabet.format(x)} (x) {alphabet.format(y)}", c) for (x, y), c in self.items()],
        )

    def __repr__(self):
        if self.alphabet is None:
            return f"TensorPoly({self.K}, {dict(self.items())})"
        return f"TensorPoly({self.format()})"

    def __mul__(self, other):
        """Componentwise concatenation (the algebra structure of the tensor square)."""
        alphabet = self._compatible(other)
        K = self.K
        out = {}
        for (x1, y1), c1 in self.terms.items():
            for (x2, y2), c2 in other.terms.items():
                k = (x1 + x2, y1 + y2)
                out[k] = K.add(out.get(k, K.zero), K.mul(c1, c2))
        return self._raw(K, out, alphabet)


def _format_terms(K, terms):
    if not terms:
        return "0"
    parts = []
    for label, c in terms:
        negative = getattr(K, "kind", None) in ("Z", "Q") and c < 0
        mag = -c if negative else c
        body = label if mag == 1 else (f"{mag}" if label == "1" else f"{mag}*{label}")
        if not parts:
            parts.append(("-" if negative else "") + body)
        else:
            parts.append(("- " if negative else "+ ") + body)
    return " ".join(parts)


def tensor(P: Poly, Q: Poly) -> TensorPoly:
    alphabet = P._compatible(Q)
    K = P.K
    out = {}
    for x, c in P.terms.items():
        for y, d in Q.terms.items():
            out[(x, y)] = K.add(out.get((x, y), K.zero), K.mul(c, d))
    return TensorPoly._raw(K, out, alphabet)


# ---------------------------------------------------------------------------
# products


def concat_product(P: Poly, Q: Poly) -> Poly:
    alphabet = P._compatible(Q)
    K = P.K
    out = {}
    for u, c in P.terms.items():
        for v, d in Q.terms.items():
            w = u + v
            out[w] = K.add(out.get(w, K.zero), K.mul(c, d))
    return Poly._raw(K, out, alphabet)


@lru_cache(maxsize=None)
def _merge_counts(u, v, merges):
    """Map ``(word, k) -> number of ways`` for ``u * v`` with k merged letters.

    ``merges`` switches the diagonal (infiltration) term on or off.
    """
    if not u:
        return {(v, 0): 1}
    if not v:
        return {(u, 0): 1}
    out = {}
    a, b = u[-1], v[-1]

    def acc(sub, letter, extra):
        for (w, k), n in sub.items():
            key = (w + (letter,), k + extra)
            out[key] = out.get(key, 0) + n

    acc(_merge_counts(u[:-1], v, merges), a, 0)
    acc(_merge_counts(u, v[:-1], merges), b, 0)
    if merges and a == b:
        acc(_merge_counts(u[:-1], v[:-1], merges), a, 1)
    return out


def word_cq_product(u, v, K, q) -> Poly:
    """``u * v`` for single words; coefficient of w is sum_k N_k q^k."""
    q = K.normalize(q) if not isinstance(q, type(K.one)) else q
    merges = not K.is_zero(q)
    out = {}
    for (w, k), n in _merge_counts(tuple(u), tuple(v), merges).items():
        c = K.mul(K.from_int(n), K.pow(q, k))
        out[w] = K.add(out.get(w, K.zero), c)
    return Poly._raw(K, out, None)


def cq_product(P: Poly, Q: Poly, q=0) -> Poly:
    """Bilinear q-product: shuffle at ``q=0``, infiltration at ``q=1``."""
    alphabet = P._compatible(Q)
    K = P.K
    out = {}
    for u, c in P.terms.items():
        for v, d in Q.terms.items():
            cd = K.mul(c, d)
            for w, n in word_cq_product(u, v, K, q).terms.items():
                out[w] = K.add(out.get(w, K.zero), K.mul(cd, n))
    return Poly._raw(K, out, alphabet)


def shuffle(P: Poly, Q: Poly) -> Poly:
    return cq_product(P, Q, P.K.zero)


def hadamard_product(P: Poly, Q: Poly) -> Poly:
    alphabet = P._compatible(Q)
    K = P.K
    out = {w: K.mul(c, Q.terms[w]) for w, c in P.terms.items() if w in Q.terms}
    return Poly._raw(K, out, alphabet)


# ---------------------------------------------------------------------------
# coproducts


def word_coproduct(w, K, q=0) -> TensorPoly:
    """c_q(w) as the concatenation product of c_q on each letter."""
    q = K.normalize(q) if not isinstance(q, type(K.one)) else q
    acc = {((), ()): K.one}
    for a in w:
        step = {}
        for (x, y), c in acc.items():
            for key, coeff in (((x + (a,), y), c), ((x, y + (a,)), c), ((x + (a,), y + (a,)), K.mul(c, q))):
                if not K.is_zero(coeff):
                    step[key] = K.add(step.get(key, K.zero), coeff)
        acc = {k: c for k, c in step.items() if not K.is_zero(c)}
    return TensorPoly._raw(K, acc, None)


def cq_coproduct(P: Poly, q=0) -> TensorPoly:
    K = P.K
    out = {}
    for w, c in P.terms.items():
        for key, d in word_coproduct(w, K, q).terms.items():
            out[key] = K.add(out.get(key, K.zero), K.mul(c, d))
    return TensorPoly._raw(K, out, P.alphabet)


def coproduct(P: Poly) -> TensorPoly:
    return cq_coproduct(P, P.K.zero)


def counit(P: Poly):
    """Augmentation: the coefficient of the empty word."""
    return P.coefficient(())


def ev(P: Poly):
    """Linear map sending every word to 1."""
    K = P.K
    s = K.zero
    for c in P.terms.values():
        s = K.add(s, c)
    return s


def primitive_defect(P: Poly) -> TensorPoly:
    """``c(P) - P(x)1 - 1(x)P``; zero exactly when P is primitive in K<A>."""
    one = Poly.one(P.K, P.alphabet)
    return coproduct(P) - tensor(P, one) - tensor(one, P)
