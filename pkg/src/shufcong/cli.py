"""``shufcong`` command-line front end.

One analysis per invocation.  ``--json`` prints a single JSON document whose
layout is described in README.md (schema ``shufcong-report/1``); otherwise a
short text summary is printed.  Exit codes: 0 definite answer, 1 usage or
parse error, 2 inconclusive (an exploration bound was hit).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import compat, congruence, magnus, trace
from .errors import Inconclusive, ShapeError, ShufcongError, UsageError
from .freealg import Poly
from .semiring import SemiringClass, classify_semiring, parse_semiring

SCHEMA = "shufcong-report/1"

SUBCOMMANDS = (
    "check",
    "classify",
    "partition",
    "weight",
    "magnus",
    "qroot",
    "lyndon",
    "primitive-binomials",
    "cancel-search",
    "verify-witness",
)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="shufcong",
        description="Shuffle-compatibility analysis of finitely presented monoids.",
    )
    parser.add_argument("command", choices=SUBCOMMANDS)
    parser.add_argument("file", help="presentation file ('-' for stdin)")
    parser.add_argument("--json", action="store_true", help="print a machine-readable report")
    parser.add_argument("--semiring", help="override the file's semiring (N, B, Z, Z/n)")
    parser.add_argument("--cap", type=int, help="max word length explored for non-homogeneous classes")
    parser.add_argument("--max-weight", type=int, default=6, help="truncation degree for series")
    parser.add_argument("--q", type=int, help="root order for qroot")
    parser.add_argument("--maxlen", type=int, default=4, help="max trace/word length for enumerations")
    parser.add_argument("--bound", type=int, help="word length bound for cancel-search (default: --maxlen)")
    parser.add_argument("--theta", help="commutation pairs a:b,a:c (default: LC relators of the file)")
    parser.add_argument("--p", type=int, help="prime for primitive-binomials (default: file semiring)")
    parser.add_argument("--word", help="word for magnus/qroot")
    parser.add_argument("--series", help="series for qroot, in polynomial syntax")
    parser.add_argument("--convention", choices=("literal", "cumulative"), default="literal")
    parser.add_argument("--report", help="JSON report holding the witness, for verify-witness")
    parser.add_argument("--seed", type=int, default=0, help="recorded in the report; analyses are deterministic")
    return parser


# ---------------------------------------------------------------------------
# serialization helpers


def _value(c):
    if isinstance(c, Fraction):
        return str(c) if c.denominator != 1 else int(c)
    return c


def _pair(A, pair):
    return [A.format(pair[0]), A.format(pair[1])]


def _witness_dict(A, w):
    return {
        "relator": _pair(A, w.relator),
        "pair": _pair(A, w.pair),
        "coefficients": [_value(c) for c in w.coefficients],
    }


def _report_dict(A, report):
    out = {"verdict": report.verdict}
    if report.witness is not None:
        out["witness"] = _witness_dict(A, report.witness)
    return out


def _partition_dict(A, part):
    return {
        "depth": part.depth,
        "convention": part.convention,
        "layers": [[_pair(A, r) for r in layer] for layer in part.layers],
        "absorbed": [[_pair(A, r) for r in s] for s in part.absorbed],
    }


def _classification_dict(A, c):
    out = {"kind": c.kind}
    if c.kind == "PartiallyCommutative":
        out.update(
            theta=[list(t) for t in c.theta],
            identifications=c.identifications,
            erasures=c.erasures,
        )
    elif c.kind == "PrimeDecomposition":
        out.update(p=c.p, partition=_partition_dict(A, c.partition))
    else:
        out["report"] = _report_dict(A, c.report)
    return out


def _series_dict(S):
    return [
        {"grade": d, "terms": [[S.ctx.alphabet.format(w), _value(c)] for w, c in P.items()]}
        for d, P in S.graded()
    ]


def _series_text(S):
    if not S.coeffs:
        return "0"
    return "\n".join(f"  grade {d}: {P.format()}" for d, P in S.graded())


# ---------------------------------------------------------------------------
# commands


class _Run:
    def __init__(self, args, pres, raw):
        self.args = args
        self.pres = pres
        self.A = pres.alphabet
        self.raw = raw
        self.params = {"cap": args.cap}

    def semiring(self):
        if self.args.semiring:
            K = parse_semiring(self.args.semiring)
        elif self.pres.semiring is not None:
            K = self.pres.semiring
        else:
            raise UsageError("no semiring: add a 'semiring' line or pass --semiring")
        self.params["semiring"] = str(K)
        return K

    def context(self, weight=None):
        ctx = congruence.QuotientContext(self.pres, weight=weight, cap=self.args.cap)
        self.params["cap"] = ctx.cap
        return ctx

    def theta(self):
        if self.args.theta is not None:
            th = trace.Theta.parse(self.args.theta, self.A)
        else:
            pairs = []
            for u, v in self.pres.relators:
                if len(u) == 2 and len(v) == 2 and u == v[::-1] and u[0] != u[1]:
                    pairs.append((u[0], u[1]))
                else:
                    raise UsageError("file relators are not all commutations; pass --theta")
            th = trace.Theta(pairs)
        self.params["theta"] = [[self.A.tokens[a], self.A.tokens[b]] for a, b in th.pairs()]
        return th

    def weight_for(self, K):
        """Weight from the linear system, else from the letter-power relators."""
        w = congruence.find_weight(self.pres)
        if w is None:
            cls, p = classify_semiring(K)
            if cls is SemiringClass.RING_CHAR_PRIME:
                try:
                    res = compat.pLI_consistency(self.pres, p)
                except ShapeError:
                    res = None
                if res is not None and res.ok:
                    w = res.weight
        if w is None:
            raise UsageError("no positive weight makes the presentation homogeneous")
        self.params["weight"] = w.as_dict(self.A)
        return w

    # each handler returns (result dict, text)
    def check(self):
        K = self.semiring()
        report = compat.check_compatibility(self.context(), K)
        res = _report_dict(self.A, report)
        text = f"{report.verdict} over {K}"
        if report.witness:
            w = report.witness
            text += (
                f"\n  relator {self.A.format(w.relator[0])} = {self.A.format(w.relator[1])}"
                f"\n  class pair ({self.A.format(w.pair[0])}, {self.A.format(w.pair[1])}):"
                f" coefficient {w.coefficients[0]} vs {w.coefficients[1]}"
            )
        return res, text

    def classify(self):
        K = self.semiring()
        self.params["convention"] = self.args.convention
        c = compat.classify_quotient(self.pres, K, cap=self.args.cap, convention=self.args.convention)
        self.params["cap"] = self.args.cap or congruence.default_cap(self.pres)
        res = _classification_dict(self.A, c)
        text = f"{c.kind} over {K}"
        if c.kind == "PartiallyCommutative":
            text += f"\n  theta: {res['theta']}\n  identifications: {res['identifications']}\n  erasures: {res['erasures']}"
        elif c.kind == "PrimeDecomposition":
            text += f"\n  primitive partition of length {c.partition.depth}"
            for i, layer in enumerate(res["partition"]["layers"], 1):
                text += f"\n  R_{i}: " + ", ".join(f"{u}={v}" for u, v in layer)
        else:
            w = res["report"]["witness"]
            text += f"\n  witness: relator {w['relator']}, pair {w['pair']}, coefficients {w['coefficients']}"
        return res, text

    def partition(self):
        K = self.semiring()
        self.params["convention"] = self.args.convention
        part = compat.primitive_partition(self.pres, K, convention=self.args.convention, cap=self.args.cap)
        res = _partition_dict(self.A, part)
        text = f"primitive partition of length {part.depth} ({part.convention})"
        for i, layer in enumerate(res["layers"], 1):
            text += f"\n  R_{i}: " + ", ".join(f"{u}={v}" for u, v in layer)
        return res, text

    def weight(self):
        w = congruence.find_weight(self.pres)
        res = {"weight": None if w is None else w.as_dict(self.A)}
        text = "no positive weight" if w is None else f"weight {res['weight']}"
        K = self.pres.semiring if not self.args.semiring else parse_semiring(self.args.semiring)
        if K is not None:
            cls, p = classify_semiring(K)
            if cls is SemiringClass.RING_CHAR_PRIME:
                try:
                    pli = compat.pLI_consistency(self.pres, p)
                except ShapeError as exc:
                    res["pLI"] = {"shape_error": str(exc)}
                else:
                    if pli.ok:
                        res["pLI"] = {
                            "ok": True,
                            "h": {self.A.tokens[a]: v for a, v in sorted(pli.h.items())},
                            "weight": pli.weight.as_dict(self.A),
                        }
                        text += f"\npLI potential h {res['pLI']['h']}, weight p^h {res['pLI']['weight']}"
                    else:
                        res["pLI"] = {"ok": False, "conflict": [_pair(self.A, r) for r in pli.conflict]}
                        text += f"\nnot cancellable: conflicting relators {res['pLI']['conflict']}"
        return res, text

    def _word(self):
        if not self.args.word:
            raise UsageError("--word is required")
        self.params["word"] = self.args.word
        return self.A.word(self.args.word)

    def magnus(self):
        K = self.semiring()
        w = self._word()
        weight = self.weight_for(K)
        ctx = self.context(weight)
        D = self.args.max_weight
        self.params["max_weight"] = D
        S = magnus.magnus_transform(ctx, weight, w, D, K)
        return {"series": _series_dict(S)}, f"mu({self.args.word}) up to weight {D}:\n{_series_text(S)}"

    def qroot(self):
        K = self.semiring()
        if not self.args.q:
            raise UsageError("--q is required")
        q = self.args.q
        weight = self.weight_for(K)
        ctx = self.context(weight)
        D = self.args.max_weight
        self.params.update(max_weight=D, q=q)
        if self.args.series:
            self.params["series"] = self.args.series
            S = magnus.TruncSeries.from_poly(Poly.parse(self.args.series, self.A, K), ctx, weight, D)
        else:
            S = magnus.magnus_transform(ctx, weight, self._word(), D, K)
        T = magnus.q_root(S, q)
        check = magnus.series_pow(T, q)
        verified = check == S.map_coefficients(T.K, T.K.normalize)
        res = {"root": _series_dict(T), "verified": verified, "coefficients": str(T.K)}
        return res, f"root of order {q} up to weight {D} (verified: {verified}):\n{_series_text(T)}"

    def lyndon(self):
        th = self.theta()
        L = self.args.maxlen
        self.params["maxlen"] = L
        rows = []
        for l in trace.lyndon_traces(th, len(self.A), L):
            lam = trace.lalonde_lambda(th, l, self.A)
            rows.append(
                {
                    "trace": self.A.format(l),
                    "std": self.A.format(trace.std_word(th, l)),
                    "lambda": lam.format(),
                    "triangular": trace.leading_check(th, l, lam),
                }
            )
        text = "\n".join(f"{r['trace']:>8}  Lambda = {r['lambda']}" for r in rows)
        return {"lyndon_traces": rows}, text

    def primitive_binomials(self):
        if self.args.p:
            p = self.args.p
        else:
            cls, p = classify_semiring(self.semiring())
            if cls is not SemiringClass.RING_CHAR_PRIME:
                raise UsageError("primitive-binomials needs a prime: pass --p or use semiring Z/p")
        th = self.theta()
        self.params.update(p=p, maxlen=self.args.maxlen)
        pairs = compat.classify_primitive_binomials(p, th, self.args.maxlen, self.A)
        res = {"pairs": [_pair(self.A, pr) for pr in pairs]}
        return res, "\n".join(f"{u} - {v}" for u, v in res["pairs"]) or "none"

    def cancel_search(self):
        bound = self.args.bound if self.args.bound is not None else self.args.maxlen
        self.params["bound"] = bound
        w = compat.cancellability_search(self.context(), bound)
        if w is None:
            return {"witness": None}, f"no cancellation failure among words of length <= {bound}"
        fx, fu, fv = (self.A.format(x) for x in (w.x, w.u, w.v))
        res = {"witness": {"x": fx, "u": fu, "v": fv, "side": w.side}}
        eq = "x u = x v" if w.side == "left" else "u x = v x"
        return res, f"not cancellable: {eq} with x={fx}, u={fu}, v={fv}, yet u != v"

    def verify_witness(self):
        if not self.args.report:
            raise UsageError("--report is required")
        with open(self.args.report) as fh:
            doc = json.load(fh)
        result = doc.get("result", doc)
        data = result.get("witness") or result.get("report", {}).get("witness")
        if data is None:
            raise UsageError("report carries no incompatibility witness")
        if self.args.semiring:
            K = parse_semiring(self.args.semiring)
        else:
            K = parse_semiring(doc.get("parameters", {}).get("semiring") or str(self.semiring()))
        self.params["semiring"] = str(K)
        w = compat.Witness(
            tuple(self.A.word(x) for x in data["relator"]),
            tuple(self.A.word(x) for x in data["pair"]),
            tuple(K.normalize(c) for c in data["coefficients"]),
        )
        ok = compat.verify_witness(self.pres, K, w, cap=self.args.cap)
        return {"verified": ok, "witness": data}, f"witness {'verified' if ok else 'REJECTED'} over {K}"


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def run_command(argv, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    start = time.perf_counter()
    run = None
    try:
        raw = _read(args.file)
        pres = congruence.parse_presentation(raw)
        run = _Run(args, pres, raw)
        handler = getattr(run, args.command.replace("-", "_"))
        result, text = handler()
        code = 0
    except Inconclusive as exc:
        result = {"inconclusive": True, "cap": exc.cap, "detail": exc.detail}
        text = f"Inconclusive: {exc} (raise --cap to explore further)"
        code = 2
    except (ShufcongError, OSError) as exc:
        print(f"shufcong: error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    if args.json:
        doc = {
            "schema": SCHEMA,
            "command": args.command,
            "input_digest": "sha256:" + hashlib.sha256(raw.encode()).hexdigest(),
            "parameters": {**(run.params if run else {}), "seed": args.seed},
            "result": result,
            "timing_seconds": round(time.perf_counter() - start, 6),
        }
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")
    return code


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
