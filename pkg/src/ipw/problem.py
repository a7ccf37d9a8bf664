"""
Problem files: a small sectioned key-value format read with configparser.

::

    [manifold]
    dim = 3
    coordinates = x1, x2, y1

    [submanifold]
    normal = y1

    [poisson]
    x1,x2 = 1 + y1

    [options]
    w_max = 3
    format = json

``[poisson]`` keys name a coordinate pair ``a,b`` with ``a`` before ``b`` in
the ``coordinates`` list (1-based indices are accepted too); the value is the
polynomial ``pi^{ab}``. Missing components are zero and the lower triangle is
filled in by antisymmetry. ``dim`` and ``[options]`` are optional; lines
starting with ``#`` or ``;`` are comments.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from .multivector import Multivector
from .polyring import ParseError, VarContext, parse_poly

FORMATS = ("json", "text")


class ProblemError(ValueError):
    """Malformed problem file; ``where`` names the offending entry."""

    def __init__(self, message, where=""):
        super().__init__(f"{message} ({where})" if where else message)
        self.where = where


@dataclass
class Problem:
    coordinates: tuple
    normal: tuple
    components: dict      # {(a, b): source text}, a before b
    ctx: VarContext
    pi: Multivector
    w_max: int = 3
    format: str = "json"

    def echo(self):
        """Normalized copy of the input, for reports."""
        return {
            "coordinates": list(self.coordinates),
            "normal": list(self.normal),
            "poisson": {f"{a},{b}": str(self.pi[(self.ctx.index(a), self.ctx.index(b))])
                        for (a, b) in sorted(self.components, key=self._order)},
        }

    def _order(self, pair):
        return tuple(self.coordinates.index(v) for v in pair)


def _names(value):
    return tuple(v.strip() for v in value.replace(",", " ").split() if v.strip())


def _resolve(token, coords, key):
    token = token.strip()
    if token in coords:
        return token
    if token.isdigit() and 1 <= int(token) <= len(coords):
        return coords[int(token) - 1]
    raise ProblemError(f"unknown coordinate {token!r}", f"[poisson] {key}")


def parse_problem(text: str) -> Problem:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ProblemError(f"malformed problem file: {exc}") from None

    if not cp.has_option("manifold", "coordinates"):
        raise ProblemError("missing [manifold] coordinates")
    coords = _names(cp.get("manifold", "coordinates"))
    if len(set(coords)) != len(coords):
        raise ProblemError("coordinate names must be unique", "[manifold] coordinates")
    if cp.has_option("manifold", "dim"):
        try:
            dim = int(cp.get("manifold", "dim"))
        except ValueError:
            raise ProblemError("dim must be an integer", "[manifold] dim") from None
        if dim != len(coords):
            raise ProblemError(f"dim = {dim} but {len(coords)} coordinates given",
                               "[manifold] dim")

    normal = _names(cp.get("submanifold", "normal", fallback=""))
    for v in normal:
        if v not in coords:
            raise ProblemError(f"normal variable {v!r} is not a coordinate",
                               "[submanifold] normal")
    if len(set(normal)) != len(normal):
        raise ProblemError("normal variables repeated", "[submanifold] normal")
    normal = tuple(v for v in coords if v in normal)
    base = tuple(v for v in coords if v not in normal)
    ctx = VarContext(base, normal)

    components, comps = {}, {}
    if cp.has_section("poisson"):
        for key, value in cp.items("poisson"):
            parts = key.split(",")
            if len(parts) != 2:
                raise ProblemError("expected a key of the form 'a,b'", f"[poisson] {key}")
            a, b = (_resolve(t, coords, key) for t in parts)
            if coords.index(a) >= coords.index(b):
                raise ProblemError("only upper-triangular components (a before b) are accepted",
                                   f"[poisson] {key}")
            if (a, b) in components:
                raise ProblemError("component given twice", f"[poisson] {key}")
            components[(a, b)] = value
            try:
                comps[(ctx.index(a), ctx.index(b))] = parse_poly(value, ctx)
            except ParseError as exc:
                exc.component = f"{a},{b}"
                raise
    pi = Multivector(ctx, 2, comps)

    w_max = 3
    if cp.has_option("options", "w_max"):
        try:
            w_max = int(cp.get("options", "w_max"))
        except ValueError:
            raise ProblemError("w_max must be an integer", "[options] w_max") from None
        if w_max < 0:
            raise ProblemError("w_max must be nonnegative", "[options] w_max")
    fmt = cp.get("options", "format", fallback="json").strip()
    if fmt not in FORMATS:
        raise ProblemError(f"format must be one of {FORMATS}", "[options] format")
    return Problem(coords, normal, components, ctx, pi, w_max, fmt)


def load_problem(path) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())
