"""
Exact multivariate polynomials over Q with a base/normal split of the variables.

Variables are ordered ``base_vars + normal_vars``. Base variables are the
coordinates ``x`` on the submanifold S = {y = 0}, normal variables are the
fiber coordinates ``y``. Monomials are exponent tuples, coefficients are
:class:`fractions.Fraction`; no floating point is used anywhere.

Canonical printing uses graded order: ascending total degree, and within one
degree descending lexicographic order of the exponent tuple, so that::

    >>> ctx = VarContext(["x1", "x2"], ["y1"])
    >>> str(parse_poly("y1 + x2*x1 + 1 + x1^2", ctx))
    '1 + y1 + x1^2 + x1*x2'
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

DEFAULT_MAX_EXPONENT = 64


class ParseError(ValueError):
    """Malformed polynomial text. ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class ExponentOverflow(ArithmeticError):
    pass


class VarContext:
    """Ordered variable names split into base (x) and normal (y) coordinates."""

    __slots__ = ("base_vars", "normal_vars", "names", "max_exponent", "_index")

    def __init__(self, base_vars: Iterable[str], normal_vars: Iterable[str] = (),
                 max_exponent: int = DEFAULT_MAX_EXPONENT):
        base_vars = tuple(base_vars)
        normal_vars = tuple(normal_vars)
        names = base_vars + normal_vars
        if not names:
            raise ValueError("a variable context needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise ValueError(f"invalid variable name {name!r}")
        if max_exponent < 1:
            raise ValueError("max_exponent must be positive")
        self.base_vars = base_vars
        self.normal_vars = normal_vars
        self.names = names
        self.max_exponent = max_exponent
        self._index = {name: i for i, name in enumerate(names)}

    @property
    def m(self) -> int:
        return len(self.base_vars)

    @property
    def q(self) -> int:
        return len(self.normal_vars)

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def is_normal(self, i: int) -> bool:
        return i >= self.m

    def __eq__(self, other):
        return (isinstance(other, VarContext) and self.names == other.names
                and self.base_vars == other.base_vars)

    def __hash__(self):
        return hash((self.base_vars, self.normal_vars))

    def __repr__(self):
        return f"VarContext({list(self.base_vars)}, {list(self.normal_vars)})"


def _graded_key(exps):
    # ascending total degree, then descending lex
    return (sum(exps), tuple(-e for e in exps))


class Poly:
    """Immutable sparse polynomial ``{exponent tuple: nonzero Fraction}``."""

    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: VarContext, terms: Mapping[tuple, object] | None = None):
        self.ctx = ctx
        clean = {}
        if terms:
            n = ctx.n
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != n:
                    raise ValueError(f"exponent vector {exps} has wrong length for {ctx}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                if any(e > ctx.max_exponent for e in exps):
                    raise ExponentOverflow(f"exponent above cap {ctx.max_exponent}: {exps}")
                c = Fraction(c)
                if c:
                    clean[exps] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ctx, terms):
        # trusted constructor; terms already clean
        p = object.__new__(cls)
        p.ctx = ctx
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, ctx):
        return cls._raw(ctx, {})

    @classmethod
    def const(cls, ctx, c):
        c = Fraction(c)
        return cls._raw(ctx, {(0,) * ctx.n: c} if c else {})

    @classmethod
    def var(cls, ctx, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else ctx.index(name_or_index)
        exps = [0] * ctx.n
        exps[i] = 1
        return cls._raw(ctx, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, ctx, exps, c=1):
        return cls(ctx, {tuple(exps): c})

    @property
    def terms(self) -> Mapping[tuple, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: _graded_key(kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def x_degrees(self) -> set:
        m = self.ctx.m
        return {sum(e[:m]) for e in self._terms}

    def fiber_degrees(self) -> set:
        m = self.ctx.m
        return {sum(e[m:]) for e in self._terms}

    def is_y_free(self) -> bool:
        m = self.ctx.m
        return all(not any(e[m:]) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.ctx.n, Fraction(0))

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ctx != self.ctx:
                raise ValueError("polynomials live in different variable contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.ctx, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Poly._raw(self.ctx, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ctx, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly.zero(self.ctx)
        return Poly._raw(self.ctx, {e: c * v for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        cap = self.ctx.max_exponent
        terms: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if max(e, default=0) > cap:
                    raise ExponentOverflow(f"exponent above cap {cap}")
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return Poly._raw(self.ctx, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = Poly.const(self.ctx, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def diff(self, i: int) -> "Poly":
        terms = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                terms[e2] = c * k
        return Poly._raw(self.ctx, terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.ctx, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def _format_monomial(exps, names):
    parts = []
    for e, name in zip(exps, names):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    """Canonical text: graded order, explicit ``*`` and ``^``."""
    if p.is_zero():
        return "0"
    out = []
    for i, (exps, c) in enumerate(p.sorted_items()):
        mono = _format_monomial(exps, p.ctx.names)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))")


def _tokenize(text):
    pos = 0
    tokens = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = mt.start(mt.lastgroup)
        tokens.append((mt.lastgroup, mt.group(mt.lastgroup), start))
        pos = mt.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, ctx):
        self.text = text
        self.ctx = ctx
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            p = p + rhs if op == "+" else p - rhs
        return p

    def term(self):
        p = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            p = p * self.unary()
        return p

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            p = self.unary()
            return -p if tok[1] == "-" else p
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[:2] == ("op", "-"):
                self.fail("negative exponent")
            if tok[0] != "num" or "/" in tok[1]:
                self.fail("exponent must be a nonnegative integer literal")
            self.take()
            k = int(tok[1])
            if k > self.ctx.max_exponent:
                self.fail(f"exponent exceeds cap {self.ctx.max_exponent}", tok)
            try:
                return base ** k
            except ExponentOverflow:
                self.fail(f"exponent exceeds cap {self.ctx.max_exponent}", tok)
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            num, _, den = val.partition("/")
            if den and int(den) == 0:
                raise ParseError("division by zero in literal", pos, self.text)
            return Poly.const(self.ctx, Fraction(int(num), int(den) if den else 1))
        if kind == "name":
            if val not in self.ctx.names:
                raise ParseError(f"unknown variable {val!r}", pos, self.text)
            return Poly.var(self.ctx, val)
        if kind == "op" and val == "(":
            p = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return p
        if kind == "end":
            raise ParseError("unexpected end of input", pos, self.text)
        raise ParseError(f"unexpected {val!r}", pos, self.text)


def parse_poly(text: str, ctx: VarContext) -> Poly:
    """Parse ``+ - * ^``, integer and ``p/q`` literals, variables and parentheses."""
    try:
        return _Parser(text, ctx).parse()
    except ExponentOverflow as exc:
        raise ParseError(str(exc), 0, text) from None


def partial(p: Poly, var) -> Poly:
    i = var if isinstance(var, int) else p.ctx.index(var)
    if not 0 <= i < p.ctx.n:
        raise KeyError(f"unknown variable index {i}")
    return p.diff(i)


def restrict_to_S(p: Poly) -> Poly:
    """Set every normal variable to zero."""
    m = p.ctx.m
    return Poly._raw(p.ctx, {e: c for e, c in p.items() if not any(e[m:])})


def fiber_component(p: Poly, k: int) -> Poly:
    """Monomials of fiber degree exactly ``k``."""
    m = p.ctx.m
    return Poly._raw(p.ctx, {e: c for e, c in p.items() if sum(e[m:]) == k})


def monomials(ctx: VarContext, degree: int, base_only: bool = True):
    """Exponent tuples of total degree ``degree`` in the base variables (graded order)."""
    if degree < 0:
        return []
    m = ctx.m if base_only else ctx.n
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for e in range(left, -1, -1):
            rec(prefix + (e,), left - e, slots - 1)

    if m == 0:
        return [(0,) * ctx.n] if degree == 0 else []
    rec((), degree, m)
    pad = (0,) * (ctx.n - m)
    return [e + pad for e in out]
