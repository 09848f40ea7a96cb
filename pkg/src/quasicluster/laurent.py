"""Sparse multivariate Laurent polynomials with exact integer coefficients.

Exponents live on the half-integer lattice and are stored as doubled
integers, so ``y^{1/2}`` and ``y^{-3/2}`` are exact ring elements and no
rational-function field is ever needed.  Values are immutable after
construction and all operations are pure.

Example
-------
>>> p = mono(1, {"x": 1}) + mono(1, {"y": 1})
>>> q = mono(1, {"x": 1}) - mono(1, {"y": 1})
>>> canonical_string(p * q)
'x^2 - y^2'
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import DomainError, InputError, ParseError

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

# An exponent vector is a tuple of (variable, doubled exponent) pairs,
# sorted by variable name, with no zero entries.
ExpVec = tuple


def _check_name(name):
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise InputError(f"malformed variable name: {name!r}")
    return name


def _doubled(exp):
    """Convert an int/Fraction exponent to its doubled-integer form."""
    if isinstance(exp, bool):
        raise InputError(f"bad exponent: {exp!r}")
    if isinstance(exp, int):
        return 2 * exp
    if isinstance(exp, Fraction):
        d = 2 * exp
        if d.denominator != 1:
            raise InputError(f"exponent {exp} is not on the half-integer lattice")
        return int(d)
    raise InputError(f"bad exponent: {exp!r}")


class Monomial:
    """A single term: nonzero integer coefficient times a product of powers."""

    __slots__ = ("coeff", "exps")

    def __init__(self, coeff, exps):
        # exps: ExpVec with doubled exponents, already canonical
        self.coeff = coeff
        self.exps = exps

    def degree2(self):
        """Total degree, doubled."""
        return sum(d for _, d in self.exps)

    def as_poly(self):
        if self.coeff == 0:
            return LaurentPoly({})
        return LaurentPoly({self.exps: self.coeff})

    def exponent(self, name):
        """Exponent of ``name`` as a Fraction."""
        for v, d in self.exps:
            if v == name:
                return Fraction(d, 2)
        return Fraction(0)

    def __eq__(self, other):
        return (
            isinstance(other, Monomial)
            and self.coeff == other.coeff
            and self.exps == other.exps
        )

    def __hash__(self):
        return hash((self.coeff, self.exps))

    def __repr__(self):
        return f"Monomial({canonical_string(self.as_poly())!r})"


class LaurentPoly:
    """A finite sum of monomials with pairwise distinct exponent vectors."""

    __slots__ = ("_terms",)

    def __init__(self, terms):
        # terms: dict mapping ExpVec -> nonzero int coefficient.  Trusted.
        self._terms = terms

    # -- inspection ---------------------------------------------------------

    def is_zero(self):
        return not self._terms

    def is_monomial(self):
        return len(self._terms) == 1

    def is_one(self):
        return self._terms == {(): 1}

    def terms(self):
        """Monomials in canonical (graded-lex descending) order."""
        return [Monomial(self._terms[e], e) for e in _sorted_exps(self._terms)]

    def monomial(self):
        if not self.is_monomial():
            raise DomainError("polynomial is not a single monomial")
        ((exps, coeff),) = self._terms.items()
        return Monomial(coeff, exps)

    def variables(self):
        names = set()
        for exps in self._terms:
            for v, _ in exps:
                names.add(v)
        return sorted(names)

    def coefficients(self):
        return [self._terms[e] for e in _sorted_exps(self._terms)]

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self._terms)
        for exps, c in other._terms.items():
            s = out.get(exps, 0) + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _mul_exps(e1, e2)
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            raise InputError("exponent must be an integer")
        if n < 0:
            return one() / (self ** (-n))
        result = one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        """Exact division by a single monomial (unit in the Laurent ring)."""
        other = _coerce(other)
        m = other.monomial()
        inv = _mul_exps_inv(m.exps)
        out = {}
        for e, c in self._terms.items():
            q, r = divmod(c, m.coeff)
            if r:
                raise DomainError("coefficient not divisible in exact division")
            out[_mul_exps(e, inv)] = q
        return LaurentPoly(out)

    def __eq__(self, other):
        if isinstance(other, int):
            other = const(other)
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return f"LaurentPoly({canonical_string(self)!r})"

    __str__ = __repr__

    # -- substitution -------------------------------------------------------

    def specialize(self, assignments):
        """Substitute polynomials for variables.

        A variable occurring with a negative or fractional exponent may only
        receive a single-monomial value; anything else raises DomainError.
        """
        vals = {}
        for name, val in assignments.items():
            _check_name(name)
            vals[name] = _coerce(val)
        total = zero()
        for exps, c in self._terms.items():
            term = LaurentPoly({(): c})
            kept = []
            for v, d in exps:
                if v in vals:
                    term = term * _pow_doubled(vals[v], d)
                else:
                    kept.append((v, d))
            term = term * LaurentPoly({tuple(kept): 1})
            total = total + term
        return total


def _coerce(value):
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return const(value)
    raise InputError(f"cannot coerce {value!r} to a Laurent polynomial")


def _mul_exps(e1, e2):
    if not e1:
        return e2
    if not e2:
        return e1
    merged = dict(e1)
    for v, d in e2:
        s = merged.get(v, 0) + d
        if s:
            merged[v] = s
        else:
            del merged[v]
    return tuple(sorted(merged.items()))


def _mul_exps_inv(exps):
    return tuple((v, -d) for v, d in exps)


def _pow_doubled(base, dexp):
    """base ** (dexp/2) where dexp is a doubled-integer exponent."""
    if dexp == 0:
        return one()
    if dexp % 2 == 0 and dexp > 0:
        return base ** (dexp // 2)
    # Negative or half-integer power: base must be a single monomial.
    m = base.monomial()
    new = []
    for v, d in m.exps:
        nd, r = divmod(d * dexp, 2)
        if r:
            raise DomainError(
                f"substitution takes {v} off the half-integer lattice"
            )
        if nd:
            new.append((v, nd))
    if m.coeff == 1:
        c = 1
    elif m.coeff == -1 and dexp % 2 == 0:
        c = (-1) ** (dexp // 2)
    elif dexp % 2 == 0 and dexp > 0:
        c = m.coeff ** (dexp // 2)
    else:
        raise DomainError("cannot raise a non-unit coefficient to this power")
    return LaurentPoly({tuple(sorted(new)): c})


# -- constructors -----------------------------------------------------------


def zero():
    return LaurentPoly({})


def one():
    return LaurentPoly({(): 1})


def const(n):
    if not isinstance(n, int) or isinstance(n, bool):
        raise InputError("constant must be an integer")
    return LaurentPoly({(): n}) if n else LaurentPoly({})


def mono(coeff, exps=None):
    """Build a single-term polynomial.  Zero coefficient gives the zero poly.

    ``exps`` maps variable names to int or Fraction exponents on the
    half-integer lattice, e.g. ``mono(1, {"y1": Fraction(1, 2)})``.
    """
    if not isinstance(coeff, int) or isinstance(coeff, bool):
        raise InputError("coefficient must be an integer")
    if coeff == 0:
        return zero()
    pairs = []
    for name, exp in (exps or {}).items():
        _check_name(name)
        d = _doubled(exp)
        if d:
            pairs.append((name, d))
    return LaurentPoly({tuple(sorted(pairs)): coeff})


def var(name):
    return mono(1, {name: 1})


# -- canonical rendering ----------------------------------------------------


def _sorted_exps(terms):
    # Graded-lexicographic, descending: higher total degree first, then
    # higher exponent on the lexicographically earliest variable.
    all_names = sorted({v for e in terms for v, _ in e})

    def key(exps):
        d = dict(exps)
        vec = tuple(-d.get(n, 0) for n in all_names)
        return (-sum(d.values()), vec)

    return sorted(terms, key=key)


def _exp_str(dexp):
    if dexp == 2:
        return ""
    if dexp % 2 == 0:
        return f"^{dexp // 2}"
    return f"^{{{dexp}/2}}"


def _monomial_str(coeff, exps):
    factors = [f"{v}{_exp_str(d)}" for v, d in sorted(exps)]
    body = "*".join(factors)
    a = abs(coeff)
    if not body:
        return str(a)
    if a == 1:
        return body
    return f"{a}*{body}"


def canonical_string(p):
    """Deterministic text form; parse_poly inverts it exactly."""
    p = _coerce(p)
    if p.is_zero():
        return "0"
    parts = []
    for i, exps in enumerate(_sorted_exps(p._terms)):
        c = p._terms[exps]
        body = _monomial_str(c, exps)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


# -- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[\^\*\+\-\{\}/\(\)]))"
)


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"bad character {text[pos]!r} in polynomial", col=pos)
        pos = m.end()
        if m.group("int") is not None:
            out.append(("int", int(m.group("int"))))
        elif m.group("name") is not None:
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in polynomial")

    def parse(self):
        p = self.parse_term(first=True)
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.parse_term(first=False)
                p = p + t if val == "+" else p - t
            elif kind is None:
                return p
            else:
                raise ParseError(f"unexpected token {val!r} in polynomial")

    def parse_term(self, first):
        sign = 1
        kind, val = self.peek()
        if first and kind == "op" and val == "-":
            self.take()
            sign = -1
        coeff = 1
        factors = []
        kind, val = self.peek()
        if kind == "int":
            self.take()
            coeff = val
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
            else:
                return const(sign * coeff)
        while True:
            kind, val = self.take()
            if kind != "name":
                raise ParseError("expected variable name in polynomial term")
            name = val
            exp = 2  # doubled
            kind, val = self.peek()
            if kind == "op" and val == "^":
                self.take()
                exp = self.parse_exponent()
            factors.append((name, exp))
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                continue
            break
        merged = {}
        for name, d in factors:
            merged[name] = merged.get(name, 0) + d
        pairs = tuple(sorted((v, d) for v, d in merged.items() if d))
        return LaurentPoly({pairs: sign * coeff})

    def parse_exponent(self):
        kind, val = self.peek()
        if kind == "op" and val == "{":
            self.take()
            neg = False
            kind, val = self.peek()
            if kind == "op" and val == "-":
                self.take()
                neg = True
            kind, val = self.take()
            if kind != "int":
                raise ParseError("expected integer in half exponent")
            num = -val if neg else val
            self.expect_op("/")
            kind, val = self.take()
            if kind != "int" or val != 2:
                raise ParseError("half exponents must have denominator 2")
            self.expect_op("}")
            return num
        neg = False
        if kind == "op" and val == "-":
            self.take()
            neg = True
        kind, val = self.take()
        if kind != "int":
            raise ParseError("expected integer exponent")
        return 2 * (-val if neg else val)


def parse_poly(text):
    """Parse the canonical_string grammar back into a LaurentPoly."""
    text = text.strip()
    if text == "0":
        return zero()
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial")
    p = _Parser(tokens).parse()
    return p
