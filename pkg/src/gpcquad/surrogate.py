"""Scalar surrogate models over independent random parameters.

A model file declares each random parameter with its distribution and then
gives a single scalar expression, e.g.::

    xi1 ~ N(0, 1)
    xi4 ~ U(-0.5, 0.5)
    f = xi1 + 0.3*sqrt(2.1*abs(xi4))

`N(mu, sigma)` takes the standard deviation as its second argument.
Statements are separated by newlines or semicolons; `#` starts a comment.
Supported operators: + - * / ^ (right-associative power); functions:
exp, sin, cos, sqrt, abs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSamplesError, EvaluationError, ModelSyntaxError

__all__ = [
    "Distribution",
    "SurrogateModel",
    "SampleSet",
    "parse_model",
    "print_model",
    "evaluate",
    "sample",
    "load_samples",
    "save_samples",
    "SYNTHETIC_MODEL",
]

FUNCTIONS = ("exp", "sin", "cos", "sqrt", "abs")

# Built-in demonstration model: strongly nonlinear in all four parameters
# and non-smooth at xi4 = 0.
SYNTHETIC_MODEL = """\
xi1 ~ N(0, 1)
xi2 ~ N(0, 1)
xi3 ~ N(0, 1)
xi4 ~ U(-0.5, 0.5)
f = xi1 + 0.5*exp(0.52*xi2) + 0.3*sqrt(2.1*abs(xi4)) + sin(xi3)*cos(3.91*xi4)
"""


@dataclass(frozen=True)
class Distribution:
    """A declared input distribution: gaussian(mean, stddev) or uniform(lo, hi)."""

    kind: str
    p1: float
    p2: float

    def __post_init__(self):
        if self.kind == "gaussian":
            if not self.p2 > 0:
                raise ValueError(f"gaussian stddev must be positive, got {self.p2}")
        elif self.kind == "uniform":
            if not self.p1 < self.p2:
                raise ValueError(f"uniform requires lo < hi, got ({self.p1}, {self.p2})")
        else:
            raise ValueError(f"unknown distribution kind {self.kind!r}")

    def mean(self) -> float:
        if self.kind == "gaussian":
            return self.p1
        return 0.5 * (self.p1 + self.p2)

    def variance(self) -> float:
        if self.kind == "gaussian":
            return self.p2**2
        return (self.p2 - self.p1) ** 2 / 12.0

    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        if self.kind == "gaussian":
            return rng.normal(self.p1, self.p2, count)
        return rng.uniform(self.p1, self.p2, count)


@dataclass(frozen=True)
class SurrogateModel:
    """Parsed scalar model: an expression tree over declared variables.

    Immutable after parsing; safe for concurrent evaluation.
    """

    names: tuple[str, ...]
    distributions: tuple[Distribution, ...]
    expr: tuple

    @property
    def dim(self) -> int:
        return len(self.names)


@dataclass(frozen=True)
class SampleSet:
    """Model outputs at `count` i.i.d. parameter draws from a single seeded stream."""

    values: np.ndarray
    count: int
    seed: int


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<num>   \d+\.\d*(?:[eE][+-]?\d+)? | \.\d+(?:[eE][+-]?\d+)? | \d+(?:[eE][+-]?\d+)? )
  | (?P<name>  [A-Za-z_][A-Za-z_0-9]* )
  | (?P<op>    [-+*/^()=,~;] )
  | (?P<ws>    [ \t\r]+ )
  | (?P<comment> \#[^\n]* )
  | (?P<nl>    \n )
    """,
    re.VERBOSE,
)


def _tokenize(source: str) -> list[tuple[str, str, int, int]]:
    """Return (kind, text, line, col) tokens; newlines kept as statement breaks."""
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ModelSyntaxError(f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            tokens.append(("break", "\n", line, col))
            line += 1
            col = 1
        else:
            if kind == "op" and text == ";":
                tokens.append(("break", ";", line, col))
            elif kind not in ("ws", "comment"):
                tokens.append((kind, text, line, col))
            col += len(text)
        pos = m.end()
    tokens.append(("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens, var_index):
        self.tokens = tokens
        self.i = 0
        self.var_index = var_index

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message):
        _, text, line, col = self.peek()
        raise ModelSyntaxError(message, line, col)

    def expect_op(self, op):
        kind, text, _, _ = self.peek()
        if kind == "op" and text == op:
            return self.next()
        self.error(f"expected {op!r}")

    def expr(self):
        node = self.term()
        while True:
            kind, text, _, _ = self.peek()
            if kind == "op" and text in "+-":
                self.next()
                rhs = self.term()
                node = ("add" if text == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, text, _, _ = self.peek()
            if kind == "op" and text in "*/":
                self.next()
                rhs = self.unary()
                node = ("mul" if text == "*" else "div", node, rhs)
            else:
                return node

    def unary(self):
        kind, text, _, _ = self.peek()
        if kind == "op" and text in "+-":
            self.next()
            child = self.unary()
            return child if text == "+" else ("neg", child)
        return self.power()

    def power(self):
        base = self.atom()
        kind, text, _, _ = self.peek()
        if kind == "op" and text == "^":
            self.next()
            return ("pow", base, self.unary())
        return base

    def atom(self):
        kind, text, line, col = self.peek()
        if kind == "num":
            self.next()
            return ("num", float(text))
        if kind == "name":
            self.next()
            nkind, ntext, _, _ = self.peek()
            if nkind == "op" and ntext == "(":
                if text not in FUNCTIONS:
                    raise ModelSyntaxError(f"unknown function {text!r}", line, col)
                self.next()
                arg = self.expr()
                self.expect_op(")")
                return ("fun", text, arg)
            if text not in self.var_index:
                raise ModelSyntaxError(f"undeclared variable {text!r}", line, col)
            return ("var", self.var_index[text])
        if kind == "op" and text == "(":
            self.next()
            node = self.expr()
            self.expect_op(")")
            return node
        self.error("expected a number, variable, function call or '('")


def _parse_signed_number(p: _Parser) -> float:
    sign = 1.0
    kind, text, _, _ = p.peek()
    while kind == "op" and text in "+-":
        if text == "-":
            sign = -sign
        p.next()
        kind, text, _, _ = p.peek()
    if kind != "num":
        p.error("expected a number")
    p.next()
    return sign * float(text)


def parse_model(source: str) -> SurrogateModel:
    """Parse model source text; see the module docstring for the grammar.

    Raises ModelSyntaxError (with line/column) on malformed input,
    undeclared or duplicated variables, and unknown functions.
    """
    tokens = _tokenize(source)
    # split into statements on break tokens
    statements = []
    current = []
    for tok in tokens:
        if tok[0] in ("break", "eof"):
            if current:
                statements.append(current + [("eof", "", tok[2], tok[3])])
            current = []
        else:
            current.append(tok)

    names: list[str] = []
    dists: list[Distribution] = []
    expr = None
    for stmt in statements:
        kind, text, line, col = stmt[0]
        is_decl = (
            kind == "name"
            and len(stmt) > 1
            and stmt[1][0] == "op"
            and stmt[1][1] == "~"
        )
        if is_decl:
            if text == "f":
                raise ModelSyntaxError("'f' is reserved for the model expression", line, col)
            if text in names:
                raise ModelSyntaxError(f"duplicate declaration of {text!r}", line, col)
            p = _Parser(stmt, {})
            p.next()  # name
            p.next()  # ~
            dkind, dtext, dline, dcol = p.next()
            if dkind != "name" or dtext not in ("N", "U"):
                raise ModelSyntaxError("expected distribution N(...) or U(...)", dline, dcol)
            p.expect_op("(")
            a = _parse_signed_number(p)
            p.expect_op(",")
            b = _parse_signed_number(p)
            p.expect_op(")")
            if p.peek()[0] != "eof":
                p.error("unexpected trailing input after declaration")
            try:
                dist = Distribution("gaussian" if dtext == "N" else "uniform", a, b)
            except ValueError as exc:
                raise ModelSyntaxError(str(exc), dline, dcol) from None
            names.append(text)
            dists.append(dist)
        elif kind == "name" and text == "f":
            if expr is not None:
                raise ModelSyntaxError("duplicate model expression 'f = ...'", line, col)
            p = _Parser(stmt, {n: i for i, n in enumerate(names)})
            p.next()  # f
            nkind, ntext, nline, ncol = p.next()
            if nkind != "op" or ntext != "=":
                raise ModelSyntaxError("expected '=' after 'f'", nline, ncol)
            expr = p.expr()
            if p.peek()[0] != "eof":
                p.error("unexpected trailing input after expression")
        else:
            raise ModelSyntaxError(
                "expected a declaration 'name ~ N(...)' or 'f = <expr>'", line, col
            )
    if expr is None:
        raise ModelSyntaxError("model has no expression line 'f = ...'", 1, 1)
    return SurrogateModel(tuple(names), tuple(dists), expr)


# ---------------------------------------------------------------------------
# canonical printer (parse . print . parse == parse)
# ---------------------------------------------------------------------------

_ATOM, _POW, _NEG, _MULDIV, _ADDSUB = 5, 4, 3, 2, 1


def _fmt(node) -> tuple[str, int]:
    op = node[0]
    if op == "num":
        return repr(node[1]), _ATOM
    if op == "var":
        return f"@{node[1]}", _ATOM  # placeholder, replaced by caller
    if op == "fun":
        arg, _ = _fmt(node[2])
        return f"{node[1]}({arg})", _ATOM
    if op == "neg":
        body, prec = _fmt(node[1])
        if prec <= _MULDIV:
            body = f"({body})"
        return f"-{body}", _NEG
    if op in ("add", "sub"):
        lt, lp = _fmt(node[1])
        rt, rp = _fmt(node[2])
        if lp < _ADDSUB:
            lt = f"({lt})"
        if rp <= _ADDSUB:
            rt = f"({rt})"
        return f"{lt} {'+' if op == 'add' else '-'} {rt}", _ADDSUB
    if op in ("mul", "div"):
        lt, lp = _fmt(node[1])
        rt, rp = _fmt(node[2])
        if lp < _MULDIV:
            lt = f"({lt})"
        if rp <= _MULDIV:
            rt = f"({rt})"
        return f"{lt}{'*' if op == 'mul' else '/'}{rt}", _MULDIV
    if op == "pow":
        lt, lp = _fmt(node[1])
        rt, rp = _fmt(node[2])
        if lp <= _POW:
            lt = f"({lt})"
        if rp < _NEG:
            rt = f"({rt})"
        return f"{lt}^{rt}", _POW
    raise AssertionError(f"unreachable node {op!r}")


def print_model(model: SurrogateModel) -> str:
    """Render a model back to canonical source text."""
    lines = []
    for name, dist in zip(model.names, model.distributions):
        letter = "N" if dist.kind == "gaussian" else "U"
        lines.append(f"{name} ~ {letter}({dist.p1!r}, {dist.p2!r})")
    body, _ = _fmt(model.expr)
    body = re.sub(r"@(\d+)", lambda m: model.names[int(m.group(1))], body)
    lines.append(f"f = {body}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# evaluation / sampling
# ---------------------------------------------------------------------------


def _eval_tree(node, columns):
    op = node[0]
    if op == "num":
        return node[1]
    if op == "var":
        return columns[node[1]]
    if op == "neg":
        return -_eval_tree(node[1], columns)
    if op == "fun":
        arg = _eval_tree(node[2], columns)
        if node[1] == "sqrt":
            if np.any(np.asarray(arg) < 0):
                raise EvaluationError("sqrt of a negative argument")
            return np.sqrt(arg)
        if node[1] == "abs":
            return np.abs(arg)
        return getattr(np, node[1])(arg)
    a = _eval_tree(node[1], columns)
    b = _eval_tree(node[2], columns)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a**b
    raise AssertionError(f"unreachable node {op!r}")


def evaluate(model: SurrogateModel, point) -> float:
    """Evaluate the model at one parameter point (length = number of variables)."""
    point = np.asarray(point, dtype=float)
    if point.shape != (model.dim,):
        raise EvaluationError(
            f"point has shape {point.shape}, model expects ({model.dim},)"
        )
    with np.errstate(all="ignore"):
        value = _eval_tree(model.expr, list(point))
    value = float(value)
    if not np.isfinite(value):
        raise EvaluationError(f"model evaluated to a non-finite value at {point.tolist()}")
    return value


def sample(model: SurrogateModel, count: int, seed: int) -> SampleSet:
    """Draw `count` i.i.d. parameter vectors and evaluate the model at each.

    Deterministic for a fixed seed: one PCG64 stream, variables drawn in
    declaration order.
    """
    if count < 2:
        raise DegenerateSamplesError(f"need at least 2 samples, got {count}")
    rng = np.random.default_rng(seed)
    columns = [dist.draw(rng, count) for dist in model.distributions]
    with np.errstate(all="ignore"):
        values = np.asarray(_eval_tree(model.expr, columns), dtype=float)
    values = np.broadcast_to(values, (count,)).copy()
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise EvaluationError(f"model evaluated to a non-finite value at draw {bad}")
    return SampleSet(values=values, count=count, seed=seed)


# ---------------------------------------------------------------------------
# sample file I/O: one value per line, or CSV with a single column
# (optional header detected by a failed parse of the first line)
# ---------------------------------------------------------------------------


def load_samples(path) -> np.ndarray:
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise DegenerateSamplesError(f"no samples in {path}")
    start = 0
    try:
        float(lines[0].split(",")[0])
    except ValueError:
        start = 1  # header line
    for ln in lines[start:]:
        fields = [f for f in ln.split(",") if f.strip()]
        if len(fields) != 1:
            raise DegenerateSamplesError(
                f"expected a single value per row in {path}, got {ln!r}"
            )
        values.append(float(fields[0]))
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DegenerateSamplesError(f"non-finite sample in {path}")
    return arr


def save_samples(values: np.ndarray, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in np.asarray(values, dtype=float):
            fh.write(f"{float(v)!r}\n")
