"""Verification of product identities between curve expansions.

An identity equates a product of curve expansions with a signed sum of
terms, each a product of curve expansions times an optional monomial
multiplier or an integer constant.  Question-mark signs are resolved by
searching both choices and reporting the assignment that balances.

Identity sections in spec files:

    identity <name> mode=<standard|sqrt|y1>
      lhs <curve>[^k] [* <curve>[^k] ...]
      rhs <+|-|?> <term> [<+|-|?> <term> ...]
    end

where a term is a curve product, optionally ``* mono(<monomial>)``, or
``const <int>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from . import curvespec, laurent, mpath
from .errors import DomainError, ParseError, ValidationError
from .laurent import canonical_string, one, parse_poly
from .mat2 import normalize_sign, trace

MODES = ("standard", "sqrt", "y1")


@dataclass(frozen=True)
class Term:
    sign: str  # '+', '-' or '?'
    factors: tuple  # ((curve_name, power), ...)
    multiplier: laurent.LaurentPoly | None = None
    const: int | None = None


@dataclass(frozen=True)
class IdentitySpec:
    name: str
    mode: str
    lhs: tuple  # ((curve_name, power), ...)
    rhs: tuple  # of Term


@dataclass
class Report:
    name: str
    holds: bool
    lhs: laurent.LaurentPoly
    rhs: laurent.LaurentPoly
    resolved_signs: tuple = ()
    items: list = field(default_factory=list)  # (label, holds, residual)

    @property
    def residual(self):
        return self.lhs - self.rhs


# -- parsing -------------------------------------------------------------------


def _parse_factors(tokens, lineno):
    factors = []
    expect_name = True
    for tok in tokens:
        if tok == "*":
            if expect_name:
                raise ParseError("dangling '*' in curve product", line=lineno)
            expect_name = True
            continue
        if not expect_name:
            raise ParseError(f"expected '*' before {tok!r}", line=lineno)
        name, power = tok, 1
        if "^" in tok:
            name, p = tok.split("^", 1)
            try:
                power = int(p)
            except ValueError:
                raise ParseError(f"bad power {p!r}", line=lineno)
            if power < 1:
                raise ParseError("curve powers must be positive", line=lineno)
        factors.append((name, power))
        expect_name = False
    if expect_name:
        raise ParseError("empty curve product", line=lineno)
    return tuple(factors)


def _split_mono(tokens, lineno):
    """Split off a trailing '* mono(...)' from a term's tokens."""
    text = " ".join(tokens)
    if "mono(" not in text:
        return tokens, None
    head, _, tail = text.partition("mono(")
    if not tail.endswith(")"):
        raise ParseError("unterminated mono(...)", line=lineno)
    multiplier = parse_poly(tail[:-1])
    if not multiplier.is_monomial():
        raise ParseError("mono(...) must contain a single monomial", line=lineno)
    head = head.strip()
    if head.endswith("*"):
        head = head[:-1].strip()
    return head.split() if head else [], multiplier


def load_identities(parsed):
    """Interpret the raw identity blocks of a parsed spec file."""
    out = []
    for block in parsed.identities:
        lhs = None
        rhs = []
        for lineno, line in block.lines:
            words = line.split()
            if words[0] == "lhs":
                lhs = _parse_factors(words[1:], lineno)
            elif words[0] == "rhs":
                rhs = _parse_rhs(words[1:], lineno)
            else:
                raise ParseError(f"unknown identity directive {words[0]!r}", line=lineno)
        if lhs is None or not rhs:
            raise ParseError(f"identity {block.name!r} needs lhs and rhs")
        out.append(IdentitySpec(block.name, block.mode, lhs, tuple(rhs)))
    return out


def _parse_rhs(words, lineno):
    terms = []
    i = 0
    while i < len(words):
        sign = words[i]
        if sign not in ("+", "-", "?"):
            raise ParseError(f"expected sign before term, got {sign!r}", line=lineno)
        i += 1
        body = []
        while i < len(words) and words[i] not in ("+", "-", "?"):
            body.append(words[i])
            i += 1
        if not body:
            raise ParseError("empty identity term", line=lineno)
        if body[0] == "const":
            if len(body) != 2:
                raise ParseError("expected: const <int>", line=lineno)
            terms.append(Term(sign, (), None, int(body[1])))
            continue
        body, multiplier = _split_mono(body, lineno)
        factors = _parse_factors(body, lineno) if body else ()
        if not factors and multiplier is None:
            raise ParseError("identity term has no content", line=lineno)
        terms.append(Term(sign, factors, multiplier))
    return terms


# -- evaluation ---------------------------------------------------------------


def _chi_in_mode(spec, signs, mode):
    if mode == "sqrt":
        return mpath.chi(spec, signs, sqrt=True)
    value = mpath.chi(spec, signs, sqrt=False)
    if mode == "y1":
        return value.specialize({v: one() for v in signs.coefficient_vars()})
    return value


def _eval_factors(factors, curves, signs, mode, cache):
    value = one()
    for name, power in factors:
        if name not in cache:
            if name not in curves:
                raise ValidationError(f"identity references unknown curve {name!r}")
            cache[name] = _chi_in_mode(curves[name], signs, mode)
        value = value * cache[name] ** power
    return value


def verify_identity(ident, curves, signs):
    """Check one identity; '?' signs are resolved by exhaustive search."""
    cache = {}
    lhs = _eval_factors(ident.lhs, curves, signs, mode=ident.mode, cache=cache)
    fixed = []
    for t in ident.rhs:
        value = _eval_factors(t.factors, curves, signs, ident.mode, cache)
        if t.multiplier is not None:
            value = value * t.multiplier
        if t.const is not None:
            value = value * laurent.const(t.const)
        fixed.append((t.sign, value))
    open_idx = [i for i, (s, _) in enumerate(fixed) if s == "?"]
    for choice in iproduct((1, -1), repeat=len(open_idx)):
        total = laurent.zero()
        picked = {}
        for i, (s, v) in enumerate(fixed):
            if s == "?":
                sgn = choice[open_idx.index(i)]
            else:
                sgn = 1 if s == "+" else -1
            picked[i] = sgn
            total = total + (v if sgn > 0 else -v)
        if total == lhs:
            resolved = tuple("+" if picked[i] > 0 else "-" for i in range(len(fixed)))
            return Report(ident.name, True, lhs, total, resolved)
    # Report the all-plus reading of '?' signs on failure.
    total = laurent.zero()
    for s, v in fixed:
        total = total + (-v if s == "-" else v)
    resolved = tuple("+" if s in "+?" else "-" for s, _ in fixed)
    return Report(ident.name, False, lhs, total, resolved)


def verify_square_relation(alpha, signs, mode="sqrt"):
    """chi(alpha)^2 = chi(alpha traversed twice) - 2, both sides computed
    from reduced step products (the crosscap passage excluded)."""
    if alpha.kind != "onesided":
        raise DomainError("square relation applies to one-sided curves only")
    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}")
    sqrt = mode == "sqrt"
    reduced = mpath.reduced_path_matrix(alpha, signs, sqrt=sqrt)
    reduced_ref = mpath.reduced_path_matrix(curvespec.reflect(alpha), signs, sqrt=sqrt)
    lhs = mpath.chi(alpha, signs, sqrt=sqrt)
    rhs = trace(reduced_ref @ reduced)
    if mode == "y1":
        y1 = {v: one() for v in signs.coefficient_vars()}
        lhs = lhs.specialize(y1)
        rhs = rhs.specialize(y1)
    rhs = normalize_sign(rhs)
    report = Report(
        f"square[{alpha.label}]", lhs * lhs == rhs - 2, lhs * lhs, rhs - laurent.const(2)
    )
    return report


_MUTATION_FORMS = {
    1: ("t*tprime", "a*c + b*d"),
    2: ("t*tprime", "a"),
    3: ("t*tprime", "a"),
    4: ("t*tprime", "(a+b)^2 + d^2*a*b"),
}


def verify_mutation(case, data, include_sub=False):
    """Check one of the four exchange relations on supplied expansions.

    ``data`` maps the relation's symbols to Laurent polynomials, already
    specialized as the caller wants (typically all coefficients set to one).
    Case 4 optionally checks the two auxiliary resolution identities
    c = 2 + d^2 and e*d^2 = a*d + b*d.
    """
    if case not in _MUTATION_FORMS:
        raise ValidationError(f"unknown mutation case {case!r}")
    need = {1: ["t", "tprime", "a", "b", "c", "d"], 2: ["t", "tprime", "a"],
            3: ["t", "tprime", "a"], 4: ["t", "tprime", "a", "b", "d"]}[case]
    if include_sub and case == 4:
        need = need + ["c", "e"]
    missing = [k for k in need if k not in data]
    if missing:
        raise ValidationError(f"mutation case {case}: missing expansions {missing}")
    g = lambda k: data[k]
    items = []
    lhs = g("t") * g("tprime")
    if case == 1:
        rhs = g("a") * g("c") + g("b") * g("d")
    elif case in (2, 3):
        rhs = g("a")
    else:
        s = g("a") + g("b")
        rhs = s * s + g("d") * g("d") * g("a") * g("b")
    items.append(("exchange", lhs == rhs, lhs - rhs))
    if include_sub and case == 4:
        c_lhs = g("c")
        c_rhs = laurent.const(2) + g("d") * g("d")
        items.append(("c = 2 + d^2", c_lhs == c_rhs, c_lhs - c_rhs))
        e_lhs = g("e") * g("d") * g("d")
        e_rhs = g("a") * g("d") + g("b") * g("d")
        items.append(("e*d^2 = a*d + b*d", e_lhs == e_rhs, e_lhs - e_rhs))
    holds = all(ok for _, ok, _ in items)
    return Report(f"mutation-{case}", holds, lhs, rhs, items=items)


def run_identity_file(parsed):
    """Verify every identity block of a parsed file; returns the reports."""
    idents = load_identities(parsed)
    return [verify_identity(i, parsed.curves, parsed.signs) for i in idents]


def describe(report):
    lines = [f"identity {report.name}: {'holds' if report.holds else 'FAILS'}"]
    if report.resolved_signs:
        lines.append(f"  signs: {' '.join(report.resolved_signs)}")
    if not report.holds:
        lines.append(f"  lhs      = {canonical_string(report.lhs)}")
        lines.append(f"  rhs      = {canonical_string(report.rhs)}")
        lines.append(f"  residual = {canonical_string(report.residual)}")
    for label, ok, residual in report.items:
        mark = "holds" if ok else "FAILS"
        extra = "" if ok else f" (residual {canonical_string(residual)})"
        lines.append(f"  {label}: {mark}{extra}")
    return "\n".join(lines)
