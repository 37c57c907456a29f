"""Partially commutative (trace) monoids.

A trace is stored as the length-lex minimum word of its commutation class.
Traces are compared with the ``std`` order: ``t <_std t'`` iff the
lexicographically largest word of ``t`` is lexicographically smaller than
that of ``t'``.
"""

from __future__ import annotations

import itertools
from collections import deque
from functools import lru_cache

from .errors import NotLyndon
from .freealg import Alphabet, Poly
from .semiring import SemiringSpec


class Theta:
    """Undirected loop-free commutation graph on letter indices."""

    def __init__(self, pairs=()):
        edges = set()
        for a, b in pairs:
            if a == b:
                raise ValueError("commutation graph has no loops")
            edges.add(frozenset((a, b)))
        self.edges = frozenset(edges)

    @classmethod
    def parse(cls, text, alphabet: Alphabet):
        """``a:b,a:c`` -> Theta."""
        pairs = []
        for item in filter(None, (s.strip() for s in text.split(","))):
            x, y = item.split(":")
            pairs.append((alphabet.index(x.strip()), alphabet.index(y.strip())))
        return cls(pairs)

    def commute(self, a, b):
        return frozenset((a, b)) in self.edges

    def pairs(self):
        return sorted(tuple(sorted(e)) for e in self.edges)

    def __eq__(self, other):
        return isinstance(other, Theta) and self.edges == other.edges

    def __hash__(self):
        return hash(self.edges)

    def __repr__(self):
        return f"Theta({self.pairs()})"


def trace_relators(theta: Theta):
    return [((b, a), (a, b)) for a, b in theta.pairs()]


@lru_cache(maxsize=None)
def _class(theta, w):
    seen = {w}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        for i in range(len(x) - 1):
            if x[i] != x[i + 1] and theta.commute(x[i], x[i + 1]):
                y = x[:i] + (x[i + 1], x[i]) + x[i + 2 :]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    return frozenset(seen)


def commutation_class(theta: Theta, w):
    return set(_class(theta, tuple(w)))


def canonical(theta: Theta, w):
    return min(_class(theta, tuple(w)))


def std_word(theta: Theta, w):
    return max(_class(theta, tuple(w)))


def same_trace(theta: Theta, u, v):
    return len(u) == len(v) and tuple(v) in _class(theta, tuple(u))


def is_connected(theta: Theta, w):
    letters = sorted(set(w))
    if len(letters) <= 1:
        return True
    seen = {letters[0]}
    stack = [letters[0]]
    while stack:
        a = stack.pop()
        for b in letters:
            if b not in seen and not theta.commute(a, b):
                seen.add(b)
                stack.append(b)
    return len(seen) == len(letters)


def is_primitive_trace(theta: Theta, w):
    w = tuple(w)
    n = len(w)
    if n == 0:
        return False
    for k in range(1, n):
        if n % k:
            continue
        reps = n // k
        for x in _class(theta, w):
            if x[:k] * reps == x:
                return False
    return True


@lru_cache(maxsize=None)
def conjugates(theta, w):
    """Canonical words of all traces reachable by ``uv -> vu`` moves."""
    start = canonical(theta, w)
    seen = {start}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        for x in _class(theta, t):
            for i in range(1, len(x)):
                c = canonical(theta, x[i:] + x[:i])
                if c not in seen:
                    seen.add(c)
                    queue.append(c)
    return frozenset(seen)


@lru_cache(maxsize=None)
def is_lyndon_trace(theta, w):
    w = canonical(theta, tuple(w))
    if not w or not is_connected(theta, w) or not is_primitive_trace(theta, w):
        return False
    s = std_word(theta, w)
    return all(std_word(theta, c) > s for c in conjugates(theta, w) if c != w)


def traces(theta: Theta, nletters: int, maxlen: int):
    """Canonical words of all traces of length <= maxlen, length-lex sorted."""
    out = []
    for n in range(maxlen + 1):
        for w in itertools.product(range(nletters), repeat=n):
            if canonical(theta, w) == w:
                out.append(w)
    return out


def lyndon_traces(theta: Theta, nletters: int, maxlen: int):
    found = [t for t in traces(theta, nletters, maxlen) if t and is_lyndon_trace(theta, t)]
    return sorted(found, key=lambda t: std_word(theta, t))


def lalonde_factorization(theta: Theta, l):
    """``(l1, l2)`` Lyndon traces with ``l = l1 l2``, ``|l2|`` minimal, ties by std(l2)."""
    l = canonical(theta, tuple(l))
    best = None
    for x in sorted(_class(theta, l)):
        for i in range(1, len(x)):
            t1, t2 = canonical(theta, x[:i]), canonical(theta, x[i:])
            if is_lyndon_trace(theta, t1) and is_lyndon_trace(theta, t2):
                cand = (len(t2), std_word(theta, t2), t1, t2)
                if best is None or cand < best:
                    best = cand
    if best is None:
        raise NotLyndon(f"{l} has no factorization into Lyndon traces")
    return best[2], best[3]


def reduce_to_traces(theta: Theta, P: Poly) -> Poly:
    K = P.K
    out = {}
    for w, c in P.terms.items():
        t = canonical(theta, w)
        out[t] = K.add(out.get(t, K.zero), c)
    return Poly._raw(K, out, P.alphabet)


def lalonde_lambda(theta: Theta, l, alphabet: Alphabet | None = None) -> Poly:
    """Standard bracketing of a Lyndon trace, over Z, in trace normal forms."""
    l = canonical(theta, tuple(l))
    if not is_lyndon_trace(theta, l):
        raise NotLyndon(f"{alphabet.format(l) if alphabet else l} is not a Lyndon trace")
    return _lambda(theta, l, alphabet)


@lru_cache(maxsize=None)
def _lambda(theta, l, alphabet):
    Z = SemiringSpec.integers()
    if len(l) == 1:
        return Poly.word(Z, l, alphabet)
    l1, l2 = lalonde_factorization(theta, l)
    P, Q = _lambda(theta, l1, alphabet), _lambda(theta, l2, alphabet)
    return reduce_to_traces(theta, P * Q - Q * P)


def leading_check(theta: Theta, l, lam: Poly):
    """Lalonde triangularity: coefficient 1 on ``l``, every other trace std-larger."""
    s = std_word(theta, l)
    if lam.coefficient(canonical(theta, l)) != 1:
        return False
    return all(std_word(theta, t) > s for t in lam.terms if t != canonical(theta, l))
