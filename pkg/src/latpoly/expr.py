"""Term expressions over a lattice.

Grammar (whitespace between tokens is ignored)::

    expr := term  ("\\/" term)*
    term := atom  ("/\\" atom)*
    atom := "x" digits | "'" name "'" | "med(" expr "," expr "," expr ")" | "(" expr ")"

Both binary operators are left-associative and meet binds tighter than
join.  Variables are one-based.  Constant names are resolved against a
lattice only when an expression is evaluated or lowered.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import ExprSyntaxError, UnknownConstant, VariableOutOfRange
from .lattice import Lattice
from .poly import PolynomialFn, characteristic_vector


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Meet:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Join:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Med:
    first: "Expr"
    second: "Expr"
    third: "Expr"


Expr = Union[Var, Const, Meet, Join, Med]


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def error(self, message, pos=None):
        raise ExprSyntaxError(message, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self, token: str) -> bool:
        self.skip()
        return self.src.startswith(token, self.pos)

    def expect(self, token: str):
        if not self.peek(token):
            found = self.src[self.pos : self.pos + len(token)] or "end of input"
            self.error(f"expected {token!r}, found {found!r}")
        self.pos += len(token)

    def parse(self) -> Expr:
        e = self.expr()
        self.skip()
        if self.pos != len(self.src):
            self.error(f"unexpected {self.src[self.pos]!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek("\\/"):
            self.pos += 2
            e = Join(e, self.term())
        return e

    def term(self) -> Expr:
        e = self.atom()
        while self.peek("/\\"):
            self.pos += 2
            e = Meet(e, self.atom())
        return e

    def atom(self) -> Expr:
        self.skip()
        src, start = self.src, self.pos
        if self.peek("med"):
            self.pos += 3
            self.expect("(")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(",")
            c = self.expr()
            self.expect(")")
            return Med(a, b, c)
        if self.peek("x"):
            self.pos += 1
            end = self.pos
            while end < len(src) and src[end].isdigit():
                end += 1
            if end == self.pos:
                self.error("expected digits after 'x'")
            index = int(src[self.pos : end])
            self.pos = end
            if index < 1:
                self.error("variables are numbered from 1", start)
            return Var(index)
        if self.peek("'"):
            end = src.find("'", self.pos + 1)
            if end < 0:
                self.error("unterminated constant")
            name = src[self.pos + 1 : end]
            if not name:
                self.error("empty constant name")
            self.pos = end + 1
            return Const(name)
        if self.peek("("):
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        if self.pos >= len(src):
            self.error("unexpected end of input")
        self.error(f"unexpected {src[self.pos]!r}")


def variables(e: Expr) -> set[int]:
    if isinstance(e, Var):
        return {e.index}
    if isinstance(e, Const):
        return set()
    if isinstance(e, Med):
        return variables(e.first) | variables(e.second) | variables(e.third)
    return variables(e.left) | variables(e.right)


def parse(src: str, arity: int | None = None) -> Expr:
    """Parse ``src``; with ``arity`` given, reject variables beyond ``x{arity}``."""
    e = _Parser(src).parse()
    if arity is not None:
        bad = [i for i in sorted(variables(e)) if i > arity]
        if bad:
            raise VariableOutOfRange(f"x{bad[0]} used with arity {arity}")
    return e


def max_variable(e: Expr) -> int:
    return max(variables(e), default=0)


_JOIN, _MEET, _ATOM = 0, 1, 2


def _prec(e: Expr) -> int:
    if isinstance(e, Join):
        return _JOIN
    if isinstance(e, Meet):
        return _MEET
    return _ATOM


def pretty(e: Expr) -> str:
    """Render with the minimal parentheses that parse back to ``e``."""
    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, Const):
        return f"'{e.name}'"
    if isinstance(e, Med):
        return f"med({pretty(e.first)}, {pretty(e.second)}, {pretty(e.third)})"
    level = _prec(e)
    op = " \\/ " if level == _JOIN else " /\\ "
    left = pretty(e.left)
    if _prec(e.left) < level:
        left = f"({left})"
    right = pretty(e.right)
    # a same-level right child needs brackets to defeat left associativity
    if _prec(e.right) <= level:
        right = f"({right})"
    return left + op + right


def _resolve(lat: Lattice, name: str) -> int:
    try:
        return lat._index[name]
    except KeyError:
        raise UnknownConstant(f"constant {name!r} is not an element of {lat.label}") from None


def evaluate(e: Expr, lat: Lattice, x: Sequence):
    """Direct AST evaluation.

    ``x`` holds one value per variable; numpy arrays of element ids are
    accepted and evaluated elementwise.
    """
    if isinstance(e, Var):
        if e.index > len(x):
            raise VariableOutOfRange(f"x{e.index} used with {len(x)} arguments")
        return x[e.index - 1]
    if isinstance(e, Const):
        return _resolve(lat, e.name)
    if isinstance(e, Meet):
        return lat.meet_table[evaluate(e.left, lat, x), evaluate(e.right, lat, x)]
    if isinstance(e, Join):
        return lat.join_table[evaluate(e.left, lat, x), evaluate(e.right, lat, x)]
    return lat.med_table[
        evaluate(e.first, lat, x), evaluate(e.second, lat, x), evaluate(e.third, lat, x)
    ]


def lower(e: Expr, lat: Lattice, arity: int) -> PolynomialFn:
    """The polynomial function of ``e``, read off the characteristic vectors."""
    bad = [i for i in sorted(variables(e)) if i > arity]
    if bad:
        raise VariableOutOfRange(f"x{bad[0]} used with arity {arity}")
    alpha = tuple(
        int(evaluate(e, lat, characteristic_vector(lat, arity, m)))
        for m in range(1 << arity)
    )
    return PolynomialFn(lat, arity, alpha)


def evaluate_table(e: Expr, lat: Lattice, arity: int) -> np.ndarray:
    """AST values on every tuple of ``L^arity``."""
    grid = list(np.indices((lat.size,) * arity))
    out = np.asarray(evaluate(e, lat, grid))
    return np.broadcast_to(out, grid[0].shape) if grid else out
