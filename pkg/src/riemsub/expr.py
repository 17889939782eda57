"""Scalar expressions in chart coordinates.

Expressions are immutable trees over constants, coordinate variables
``x1..xm``, the unary functions ``sqrt, ln, exp, sin, cos``, negation, the
four arithmetic operators, and ``^`` with a constant exponent.  They can be
parsed from strings, evaluated at points, differentiated exactly, and
printed back to a re-parseable form.  Every geometric object in this
package (metrics, complex structures, maps, Clairaut exponents) is a tree
or an array of trees.
"""

from __future__ import annotations

import math


class ExprError(Exception):
    """Base class for expression-level failures."""


class ParseError(ExprError):
    """Raised on malformed input; carries a 1-based character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


class DomainError(ExprError):
    """Raised when evaluation hits a singular point of the expression."""

    def __init__(self, message: str, node: "Expr"):
        super().__init__(f"{message} in {node}")
        self.node = node


# Printing precedence levels: addition < multiplication < unary minus on the
# left factor < power < atoms.
_P_ADD, _P_MUL, _P_NEG, _P_POW, _P_ATOM = 1, 2, 3, 4, 5


def _as_expr(value) -> "Expr":
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float)):
        return Const(float(value))
    raise TypeError(f"cannot convert {value!r} to an expression")


class Expr:
    """Immutable expression tree node."""

    __slots__ = ()

    def eval(self, point) -> float:
        raise NotImplementedError

    def diff(self, index: int) -> "Expr":
        """Exact partial derivative with respect to coordinate ``index`` (1-based)."""
        raise NotImplementedError

    def _prec(self) -> int:
        return _P_ATOM

    # Arithmetic sugar used when building derived fields (e.g. matrix
    # products of expression matrices).
    def __add__(self, other):
        return Add(self, _as_expr(other))

    def __radd__(self, other):
        return Add(_as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, _as_expr(other))

    def __rsub__(self, other):
        return Sub(_as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, _as_expr(other))

    def __rmul__(self, other):
        return Mul(_as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, _as_expr(other))

    def __neg__(self):
        return Neg(self)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value: float):
        object.__setattr__(self, "value", float(value))

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")

    def eval(self, point) -> float:
        return self.value

    def diff(self, index: int) -> Expr:
        return Const(0.0)

    def _prec(self) -> int:
        return _P_ATOM if self.value >= 0 else _P_NEG

    def __str__(self) -> str:
        return repr(self.value)


class Var(Expr):
    """Coordinate variable with 1-based index (prints as ``x<index>``)."""

    __slots__ = ("index",)

    def __init__(self, index: int):
        if index < 1:
            raise ValueError("variable index must be >= 1")
        object.__setattr__(self, "index", int(index))

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")

    def eval(self, point) -> float:
        return float(point[self.index - 1])

    def diff(self, index: int) -> Expr:
        return Const(1.0 if index == self.index else 0.0)

    def __str__(self) -> str:
        return f"x{self.index}"


class _Binary(Expr):
    __slots__ = ("a", "b")
    _symbol = "?"
    _level = _P_ADD

    def __init__(self, a: Expr, b: Expr):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")

    def _prec(self) -> int:
        return self._level

    def __str__(self) -> str:
        left = str(self.a)
        if self.a._prec() < self._level:
            left = f"({left})"
        right = str(self.b)
        # +,-,*,/ associate left; parenthesize a right child of equal level.
        if self.b._prec() <= self._level:
            right = f"({right})"
        return f"{left} {self._symbol} {right}"


class Add(_Binary):
    __slots__ = ()
    _symbol = "+"
    _level = _P_ADD

    def eval(self, point) -> float:
        return self.a.eval(point) + self.b.eval(point)

    def diff(self, index: int) -> Expr:
        return Add(self.a.diff(index), self.b.diff(index))

    def __str__(self) -> str:
        left = str(self.a)
        if self.a._prec() < self._level:
            left = f"({left})"
        right = str(self.b)
        if self.b._prec() < self._level:
            right = f"({right})"
        return f"{left} + {right}"


class Sub(_Binary):
    __slots__ = ()
    _symbol = "-"
    _level = _P_ADD

    def eval(self, point) -> float:
        return self.a.eval(point) - self.b.eval(point)

    def diff(self, index: int) -> Expr:
        return Sub(self.a.diff(index), self.b.diff(index))


class Mul(_Binary):
    __slots__ = ()
    _symbol = "*"
    _level = _P_MUL

    def eval(self, point) -> float:
        return self.a.eval(point) * self.b.eval(point)

    def diff(self, index: int) -> Expr:
        return Add(Mul(self.a.diff(index), self.b), Mul(self.a, self.b.diff(index)))

    def __str__(self) -> str:
        left = str(self.a)
        if self.a._prec() < self._level:
            left = f"({left})"
        right = str(self.b)
        if self.b._prec() < self._level:
            right = f"({right})"
        return f"{left} * {right}"


class Div(_Binary):
    __slots__ = ()
    _symbol = "/"
    _level = _P_MUL

    def eval(self, point) -> float:
        denom = self.b.eval(point)
        if denom == 0.0:
            raise DomainError("division by zero", self)
        return self.a.eval(point) / denom

    def diff(self, index: int) -> Expr:
        num = Sub(Mul(self.a.diff(index), self.b), Mul(self.a, self.b.diff(index)))
        return Div(num, Mul(self.b, self.b))


class Pow(Expr):
    """Power with a constant real exponent."""

    __slots__ = ("base", "exponent")

    def __init__(self, base: Expr, exponent: float):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "exponent", float(exponent))

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")

    def eval(self, point) -> float:
        b = self.base.eval(point)
        c = self.exponent
        if b == 0.0 and c < 0.0:
            raise DomainError("zero raised to a negative exponent", self)
        try:
            return math.pow(b, c)
        except ValueError:
            raise DomainError("negative base with non-integer exponent", self) from None

    def diff(self, index: int) -> Expr:
        c = self.exponent
        if c == 0.0:
            return Const(0.0)
        return Mul(Mul(Const(c), Pow(self.base, c - 1.0)), self.base.diff(index))

    def _prec(self) -> int:
        return _P_POW

    def __str__(self) -> str:
        base = str(self.base)
        if self.base._prec() <= _P_POW:
            base = f"({base})"
        return f"{base}^{repr(self.exponent)}"


class Neg(Expr):
    __slots__ = ("a",)

    def __init__(self, a: Expr):
        object.__setattr__(self, "a", a)

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")

    def eval(self, point) -> float:
        return -self.a.eval(point)

    def diff(self, index: int) -> Expr:
        return Neg(self.a.diff(index))

    def _prec(self) -> int:
        return _P_NEG

    def __str__(self) -> str:
        inner = str(self.a)
        if self.a._prec() < _P_NEG:
            inner = f"({inner})"
        return f"-{inner}"


class Func(Expr):
    """Call of one of the built-in unary functions."""

    __slots__ = ("name", "arg")

    def __init__(self, name: str, arg: Expr):
        if name not in _FUNCTIONS:
            raise ValueError(f"unknown function {name!r}")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "arg", arg)

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")

    def eval(self, point) -> float:
        v = self.arg.eval(point)
        if self.name == "sqrt":
            if v < 0.0:
                raise DomainError("square root of a negative value", self)
            return math.sqrt(v)
        if self.name == "ln":
            if v <= 0.0:
                raise DomainError("logarithm of a non-positive value", self)
            return math.log(v)
        if self.name == "exp":
            return math.exp(v)
        if self.name == "sin":
            return math.sin(v)
        return math.cos(v)

    def diff(self, index: int) -> Expr:
        u = self.arg
        du = u.diff(index)
        if self.name == "sqrt":
            return Div(du, Mul(Const(2.0), Func("sqrt", u)))
        if self.name == "ln":
            return Div(du, u)
        if self.name == "exp":
            return Mul(Func("exp", u), du)
        if self.name == "sin":
            return Mul(Func("cos", u), du)
        return Mul(Neg(Func("sin", u)), du)

    def __str__(self) -> str:
        return f"{self.name}({self.arg})"


_FUNCTIONS = ("sqrt", "ln", "exp", "sin", "cos")


def is_zero(e: Expr) -> bool:
    """Structural test for the literal zero constant (no simplification)."""
    return isinstance(e, Const) and e.value == 0.0


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_OPS = set("+-*/^()")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        pos = i + 1  # 1-based
        if ch in _OPS:
            tokens.append((ch, ch, pos))
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            lit = text[i:j]
            try:
                value = float(lit)
            except ValueError:
                raise ParseError(f"bad number literal {lit!r}", pos) from None
            tokens.append(("num", value, pos))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], pos))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", pos)
    tokens.append(("end", "", n + 1))
    return tokens


class _Parser:
    def __init__(self, tokens, dim: int):
        self.tokens = tokens
        self.dim = dim
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}", tok[2])
        return tok

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.parse_term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while self.peek()[0] in ("*", "/"):
            op = self.next()[0]
            rhs = self.parse_unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def parse_unary(self) -> Expr:
        if self.peek()[0] == "-":
            self.next()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        if self.peek()[0] == "^":
            self.next()
            return Pow(base, self.parse_exponent())
        return base

    def parse_exponent(self) -> float:
        # Exponents are constants; a chained ^ folds right-associatively.
        sign = 1.0
        if self.peek()[0] == "-":
            self.next()
            sign = -1.0
        tok = self.next()
        if tok[0] != "num":
            raise ParseError("exponent must be a numeric constant", tok[2])
        value = sign * tok[1]
        if self.peek()[0] == "^":
            self.next()
            value = math.pow(value, self.parse_exponent())
        return value

    def parse_atom(self) -> Expr:
        tok = self.next()
        kind, value, pos = tok
        if kind == "num":
            return Const(value)
        if kind == "(":
            node = self.parse_expr()
            self.expect(")")
            return node
        if kind == "ident":
            if value in _FUNCTIONS:
                self.expect("(")
                arg = self.parse_expr()
                self.expect(")")
                return Func(value, arg)
            if value.startswith("x") and value[1:].isdigit():
                index = int(value[1:])
                if index < 1 or index > self.dim:
                    raise ParseError(
                        f"variable {value} exceeds dimension {self.dim}", pos
                    )
                return Var(index)
            raise ParseError(f"unknown identifier {value!r}", pos)
        raise ParseError("expected a value", pos)


def parse(text: str, dim: int) -> Expr:
    """Parse ``text`` into an expression over coordinates ``x1..x<dim>``."""
    if dim < 1:
        raise ValueError("dim must be positive")
    parser = _Parser(_tokenize(text), dim)
    node = parser.parse_expr()
    tail = parser.peek()
    if tail[0] != "end":
        raise ParseError("unexpected trailing input", tail[2])
    return node


def evaluate(e: Expr, point) -> float:
    """Value of ``e`` at ``point`` (an m-tuple of reals)."""
    return e.eval(point)


def differentiate(e: Expr, index: int) -> Expr:
    """Exact symbolic partial derivative of ``e`` with respect to ``x<index>``."""
    if index < 1:
        raise ValueError("coordinate index must be >= 1")
    return e.diff(index)


def fd_derivative(e: Expr, index: int, point, scale: float = 1.0) -> float:
    """Central finite-difference estimate of a partial derivative.

    Independent cross-check for :func:`differentiate`; step is
    ``eps**(1/3) * max(1, |p_i|) * scale``.
    """
    h = (2.220446049250313e-16) ** (1.0 / 3.0) * max(1.0, abs(point[index - 1])) * scale
    plus = list(point)
    minus = list(point)
    plus[index - 1] += h
    minus[index - 1] -= h
    return (e.eval(plus) - e.eval(minus)) / (2.0 * h)
