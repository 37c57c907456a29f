import itertools

import pytest

from shufcong.congruence import Presentation, QuotientContext
from shufcong.freealg import Alphabet, Poly
from shufcong.semiring import QQ, SemiringSpec

Z = SemiringSpec.integers()
N = SemiringSpec.naturals()
B = SemiringSpec.boolean()
Z2 = SemiringSpec.mod(2)
Z3 = SemiringSpec.mod(3)
Z5 = SemiringSpec.mod(5)
Z6 = SemiringSpec.mod(6)

AB = Alphabet("ab")
ABC = Alphabet("abc")


def w(text, alphabet=AB):
    return alphabet.word(text)


def pres(tokens, *relators, semiring=None):
    return Presentation.from_strings(tokens, list(relators), semiring)


def ctx_of(tokens, *relators, **kw):
    return QuotientContext(pres(tokens, *relators), **kw)


def words_upto(n, letters=2):
    for k in range(n + 1):
        yield from itertools.product(range(letters), repeat=k)


def poly(text, K=Z, alphabet=AB):
    return Poly.parse(text, alphabet, K)


def duval(k, n):
    """Lyndon words over range(k) of length <= n, by Duval's successor rule."""
    out = []
    word = [-1]
    while word:
        word[-1] += 1
        out.append(tuple(word))
        m = len(word)
        while len(word) < n:
            word.append(word[len(word) - m])
        while word and word[-1] == k - 1:
            word.pop()
    return out


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
