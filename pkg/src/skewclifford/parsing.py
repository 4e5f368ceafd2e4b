"""Input documents and the form-expression mini-language.

Grammar of form expressions (whitespace ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' INT]
    atom   := INT | 'z' INT | '[' INT (',' INT)* ']' | '(' expr ')'

Products are taken in S, so ``z2*z1`` is rewritten with mu.  Division is only
by nonzero scalars.
"""

from __future__ import annotations

import json
import re
import sys
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import (
    InputError,
    NonHomogeneous,
    ParseError,
    SchemaError,
)
from .field import Field, make_field
from .quadforms import tau_inv
from .quadsys import DEFAULT_BUDGET, QuadricSystem
from .skewring import SkewPoly, SkewRing, parse_monomial

ORDER_POLICIES = ("given", "search")
TOP_LEVEL_KEYS = {"field", "n", "mu", "matrices", "forms", "options", "notes"}
OPTION_KEYS = {"max_ext", "order_policy", "budget", "ext_degree", "hilbert_dmax"}

_TOKEN = re.compile(r"\s*(?:(\d+)|(z\d+)|(\[[^\]]*\])|(.))")


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == m.start() or not m.group(0).strip():
            break
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(Token("int", m.group(1), start))
        elif m.group(2):
            out.append(Token("var", m.group(2), start))
        elif m.group(3):
            out.append(Token("scalar", m.group(3), start))
        elif m.group(4) in "+-*/^()":
            out.append(Token(m.group(4), m.group(4), start))
        else:
            raise ParseError(f"unexpected character {m.group(4)!r}", start)
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, ring: SkewRing):
        self.ring = ring
        self.F = ring.field
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def take(self, kind: str) -> Token:
        t = self.tok
        if t.kind != kind:
            what = "end of input" if t.kind == "end" else repr(t.text)
            raise ParseError(f"expected {kind!r}, found {what}", t.pos)
        self.i += 1
        return t

    def parse(self) -> SkewPoly:
        value = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return value

    def expr(self) -> SkewPoly:
        sign = None
        if self.tok.kind in ("+", "-"):
            sign = self.take(self.tok.kind).kind
        value = self.term()
        if sign == "-":
            value = -value
        while self.tok.kind in ("+", "-"):
            op = self.take(self.tok.kind).kind
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> SkewPoly:
        value = self.factor()
        while self.tok.kind in ("*", "/"):
            op = self.take(self.tok.kind)
            rhs = self.factor()
            if op.kind == "*":
                value = value * rhs
            else:
                if rhs.degree() != 0:
                    raise ParseError("division only by nonzero scalars", op.pos)
                value = value.scale(self.F.inv(rhs.coefficient((0,) * self.ring.n)))
        return value

    def factor(self) -> SkewPoly:
        value = self.atom()
        if self.tok.kind == "^":
            self.take("^")
            e = int(self.take("int").text)
            value = value**e
        return value

    def atom(self) -> SkewPoly:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return self.ring.one().scale(self.F.from_int(int(t.text)))
        if t.kind == "var":
            self.i += 1
            k = int(t.text[1:])
            if not 1 <= k <= self.ring.n:
                raise ParseError(f"generator {t.text} out of range 1..{self.ring.n}", t.pos)
            return self.ring.gen(k - 1)
        if t.kind == "scalar":
            self.i += 1
            try:
                coeffs = [int(x) for x in t.text[1:-1].split(",")]
                c = self.F.coerce(coeffs)
            except (ValueError, InputError) as exc:
                raise ParseError(f"bad scalar {t.text}: {exc}", t.pos) from None
            return self.ring.one().scale(c)
        if t.kind == "(":
            self.i += 1
            value = self.expr()
            self.take(")")
            return value
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.pos)


def parse_expression(text: str, ring: SkewRing) -> SkewPoly:
    return _Parser(text, ring).parse()


def parse_form_expression(text: str, ring: SkewRing) -> SkewPoly:
    """A homogeneous quadratic form written in the expression grammar."""
    f = parse_expression(text, ring)
    if not f.is_zero() and f.degrees() != {2}:
        raise NonHomogeneous(f"{text!r} is not a homogeneous quadratic form")
    return f


# -- documents --------------------------------------------------------------

@dataclass
class Options:
    max_ext: int = 2
    order_policy: str = "given"
    budget: int = DEFAULT_BUDGET
    ext_degree: int | None = None
    hilbert_dmax: int = 4


@dataclass
class InputDocument:
    field: Field
    ring: SkewRing
    system: QuadricSystem | None
    options: Options = dc_field(default_factory=Options)
    notes: Any = None

    @property
    def n(self) -> int:
        return self.ring.n


def _int(value, pointer: str, minimum: int | None = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError("expected an integer", pointer)
    if minimum is not None and value < minimum:
        raise SchemaError(f"expected an integer >= {minimum}", pointer)
    return value


def _scalar(F: Field, value, pointer: str) -> int:
    try:
        return F.coerce(value)
    except InputError as exc:
        raise SchemaError(str(exc), pointer) from None


def _field(doc) -> Field:
    if not isinstance(doc, dict):
        raise SchemaError("field must be an object", "/field")
    unknown = set(doc) - {"p", "k", "min_poly"}
    if unknown:
        raise SchemaError(f"unknown keys {sorted(unknown)}", "/field")
    if "p" not in doc:
        raise SchemaError("missing p", "/field")
    p = _int(doc["p"], "/field/p")
    k = _int(doc.get("k", 1), "/field/k", 1)
    mp = doc.get("min_poly")
    if mp is not None and (not isinstance(mp, list) or not all(isinstance(c, int) for c in mp)):
        raise SchemaError("min_poly must be a list of integers", "/field/min_poly")
    try:
        return make_field(p, k, mp)
    except InputError as exc:
        exc.pointer = exc.pointer or "/field"
        raise


def _options(doc) -> Options:
    if doc is None:
        return Options()
    if not isinstance(doc, dict):
        raise SchemaError("options must be an object", "/options")
    unknown = set(doc) - OPTION_KEYS
    if unknown:
        raise SchemaError(f"unknown option keys {sorted(unknown)}", "/options")
    opts = Options()
    if "max_ext" in doc:
        opts.max_ext = _int(doc["max_ext"], "/options/max_ext", 1)
    if "ext_degree" in doc:
        opts.ext_degree = _int(doc["ext_degree"], "/options/ext_degree", 1)
    if "budget" in doc:
        opts.budget = _int(doc["budget"], "/options/budget", 1)
    if "hilbert_dmax" in doc:
        opts.hilbert_dmax = _int(doc["hilbert_dmax"], "/options/hilbert_dmax", 0)
    if "order_policy" in doc:
        if doc["order_policy"] not in ORDER_POLICIES:
            raise SchemaError(f"order_policy must be one of {ORDER_POLICIES}", "/options/order_policy")
        opts.order_policy = doc["order_policy"]
    return opts


def _form(entry, ring: SkewRing, pointer: str) -> SkewPoly:
    if isinstance(entry, str):
        try:
            return parse_form_expression(entry, ring)
        except InputError as exc:
            exc.pointer = pointer
            raise
    if isinstance(entry, dict):
        terms = {}
        for key, value in entry.items():
            try:
                mono = parse_monomial(key, ring.n)
            except (ValueError, InputError):
                raise SchemaError(f"bad monomial {key!r}", f"{pointer}/{key}") from None
            if sum(mono) != 2:
                raise NonHomogeneous(f"monomial {key!r} is not quadratic", f"{pointer}/{key}")
            c = _scalar(ring.field, value, f"{pointer}/{key}")
            terms[mono] = ring.field.add(terms.get(mono, 0), c)
        return SkewPoly(ring, terms)
    raise SchemaError("a form is an expression string or a {monomial: scalar} object", pointer)


def parse_document(doc: Any, *, require_system: bool = True) -> InputDocument:
    if not isinstance(doc, dict):
        raise SchemaError("the document must be a JSON object", "")
    unknown = set(doc) - TOP_LEVEL_KEYS
    if unknown:
        raise SchemaError(f"unknown keys {sorted(unknown)}", "")
    for key in ("field", "n", "mu"):
        if key not in doc:
            raise SchemaError(f"missing {key}", f"/{key}")
    F = _field(doc["field"])
    n = _int(doc["n"], "/n", 1)
    mu = doc["mu"]
    if not isinstance(mu, list) or len(mu) != n or any(not isinstance(r, list) or len(r) != n for r in mu):
        raise SchemaError(f"mu must be a {n}x{n} matrix", "/mu")
    mu = [[_scalar(F, x, f"/mu/{i}/{j}") for j, x in enumerate(row)] for i, row in enumerate(mu)]
    ring = SkewRing(F, mu)
    has_m, has_f = "matrices" in doc, "forms" in doc
    if has_m and has_f:
        raise SchemaError("give exactly one of matrices or forms, not both", "")
    system = None
    if has_m:
        mats = doc["matrices"]
        if not isinstance(mats, list) or len(mats) != n:
            raise SchemaError(f"expected {n} matrices", "/matrices")
        parsed = []
        for k, M in enumerate(mats):
            if not isinstance(M, list) or len(M) != n or any(not isinstance(r, list) or len(r) != n for r in M):
                raise SchemaError(f"matrix must be {n}x{n}", f"/matrices/{k}")
            parsed.append(
                [[_scalar(F, x, f"/matrices/{k}/{i}/{j}") for j, x in enumerate(r)] for i, r in enumerate(M)]
            )
        system = QuadricSystem(ring, parsed)
    elif has_f:
        forms = doc["forms"]
        if not isinstance(forms, list) or len(forms) != n:
            raise SchemaError(f"expected {n} forms", "/forms")
        qs = [_form(e, ring, f"/forms/{k}") for k, e in enumerate(forms)]
        system = QuadricSystem(ring, [tau_inv(q) for q in qs])
    elif require_system:
        raise SchemaError("give exactly one of matrices or forms", "")
    return InputDocument(F, ring, system, _options(doc.get("options")), doc.get("notes"))


def parse_input(data: bytes | str, *, require_system: bool = True) -> InputDocument:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(f"input is not UTF-8: {exc}", "") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}", "") from None
    return parse_document(doc, require_system=require_system)


FIXTURES = ("vvw-gca", "cv-5-3")


def fixture_text(name: str) -> str:
    """Text of a bundled fixture, e.g. ``fixture_text("cv-5-3")``."""
    if name not in FIXTURES:
        raise InputError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    return resources.files("skewclifford").joinpath("data", f"{name}.json").read_text("utf-8")


def read_source(source: str) -> str:
    """Read an input path, ``-`` for stdin, or ``fixture:NAME``."""
    if source == "-":
        return sys.stdin.read()
    if source.startswith("fixture:"):
        return fixture_text(source.split(":", 1)[1])
    try:
        return Path(source).read_text("utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc}") from None


__all__ = [
    "InputDocument",
    "Options",
    "parse_document",
    "parse_expression",
    "parse_form_expression",
    "parse_input",
    "fixture_text",
    "read_source",
    "tokenize",
]
