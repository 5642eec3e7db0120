"""Expression trees for entire functions of one complex variable.

The node set is deliberately small: constants, the variable, sums,
products, scalar multiples, negation, nonnegative integer powers and
exp.  Every well-formed tree therefore defines an entire function,
which the rest of the package relies on (no poles, no branch cuts).
The parser accepts division only when the divisor folds to a nonzero
constant, so ``z/2`` is sugar for ``0.5 * z`` while ``1/z`` is
rejected.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import singledispatch
from typing import Callable, Union

from .errors import EntiretyViolation, EvaluationOverflow, ParseError, UnsupportedAntiderivative

__all__ = [
    "Add",
    "Constant",
    "Exp",
    "FuncExpr",
    "IntPower",
    "Mul",
    "Negate",
    "Scale",
    "Variable",
    "antiderivative",
    "compile_fn",
    "constant_value",
    "derivative",
    "is_constant",
    "normalize",
    "parse_expr",
    "poly_coeffs",
    "to_text",
]


@dataclass(frozen=True)
class Constant:
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True)
class Variable:
    pass


@dataclass(frozen=True)
class Add:
    left: "FuncExpr"
    right: "FuncExpr"


@dataclass(frozen=True)
class Mul:
    left: "FuncExpr"
    right: "FuncExpr"


@dataclass(frozen=True)
class Negate:
    arg: "FuncExpr"


@dataclass(frozen=True)
class Exp:
    arg: "FuncExpr"


@dataclass(frozen=True)
class IntPower:
    arg: "FuncExpr"
    power: int

    def __post_init__(self):
        if not isinstance(self.power, int) or self.power < 0:
            raise ValueError(f"IntPower exponent must be a nonnegative integer, got {self.power!r}")


@dataclass(frozen=True)
class Scale:
    factor: complex
    arg: "FuncExpr"

    def __post_init__(self):
        object.__setattr__(self, "factor", complex(self.factor))


FuncExpr = Union[Constant, Variable, Add, Mul, Negate, Exp, IntPower, Scale]

_Z = Variable()
_ZERO = Constant(0.0)


# ---------------------------------------------------------------------------
# basic queries and folding constructors


def is_constant(expr: FuncExpr) -> bool:
    """True when the tree contains no Variable leaf."""
    if isinstance(expr, Variable):
        return False
    if isinstance(expr, Constant):
        return True
    if isinstance(expr, (Add, Mul)):
        return is_constant(expr.left) and is_constant(expr.right)
    if isinstance(expr, (Negate, Exp)):
        return is_constant(expr.arg)
    if isinstance(expr, IntPower):
        return expr.power == 0 or is_constant(expr.arg)
    if isinstance(expr, Scale):
        return expr.factor == 0 or is_constant(expr.arg)
    raise TypeError(f"not a FuncExpr node: {expr!r}")


def constant_value(expr: FuncExpr) -> complex:
    """Value of a constant subtree (caller must check is_constant)."""
    return compile_fn(expr)(0.0)


def _scale(c: complex, e: FuncExpr) -> FuncExpr:
    c = complex(c)
    if c == 0:
        return _ZERO
    if isinstance(e, Constant):
        return Constant(c * e.value)
    if c == 1:
        return e
    if c == -1:
        return Negate(e)
    if isinstance(e, Scale):
        return _scale(c * e.factor, e.arg)
    return Scale(c, e)


def _add(l: FuncExpr, r: FuncExpr) -> FuncExpr:
    if isinstance(l, Constant) and isinstance(r, Constant):
        return Constant(l.value + r.value)
    if isinstance(l, Constant) and l.value == 0:
        return r
    if isinstance(r, Constant) and r.value == 0:
        return l
    return Add(l, r)


def _mul(l: FuncExpr, r: FuncExpr) -> FuncExpr:
    if isinstance(l, Constant):
        return _scale(l.value, r)
    if isinstance(r, Constant):
        return _scale(r.value, l)
    return Mul(l, r)


def normalize(expr: FuncExpr) -> FuncExpr:
    """Canonical form used for round-trip comparisons.

    Folds constant factors into Scale, negated constants into the
    constant, and constant subtrees reached by those rewrites.  The
    function value is unchanged.
    """
    if isinstance(expr, (Constant, Variable)):
        return expr
    if isinstance(expr, Add):
        return _add(normalize(expr.left), normalize(expr.right))
    if isinstance(expr, Mul):
        return _mul(normalize(expr.left), normalize(expr.right))
    if isinstance(expr, Negate):
        a = normalize(expr.arg)
        if isinstance(a, Constant):
            return Constant(-a.value)
        if isinstance(a, Negate):
            return a.arg
        return Negate(a)
    if isinstance(expr, Exp):
        return Exp(normalize(expr.arg))
    if isinstance(expr, IntPower):
        return IntPower(normalize(expr.arg), expr.power)
    if isinstance(expr, Scale):
        return _scale(expr.factor, normalize(expr.arg))
    raise TypeError(f"not a FuncExpr node: {expr!r}")


# ---------------------------------------------------------------------------
# compiled point evaluation


def compile_fn(expr: FuncExpr) -> Callable[[complex], complex]:
    """Build a fast closure computing expr(z).

    The returned callable raises EvaluationOverflow when the value (or
    an exp along the way) leaves the double range.
    """
    fn = _build(expr)

    def call(z: complex) -> complex:
        w = fn(complex(z))
        if not cmath.isfinite(w):
            raise EvaluationOverflow(expr, at=z)
        return w

    return call


def _build(expr: FuncExpr) -> Callable[[complex], complex]:
    if isinstance(expr, Constant):
        c = expr.value
        return lambda z: c
    if isinstance(expr, Variable):
        return lambda z: z
    if isinstance(expr, Add):
        fl, fr = _build(expr.left), _build(expr.right)
        return lambda z: fl(z) + fr(z)
    if isinstance(expr, Mul):
        fl, fr = _build(expr.left), _build(expr.right)
        return lambda z: fl(z) * fr(z)
    if isinstance(expr, Negate):
        fa = _build(expr.arg)
        return lambda z: -fa(z)
    if isinstance(expr, Exp):
        fa = _build(expr.arg)
        node = expr

        def _exp(z):
            try:
                return cmath.exp(fa(z))
            except OverflowError:
                raise EvaluationOverflow(node, at=z) from None

        return _exp
    if isinstance(expr, IntPower):
        fa = _build(expr.arg)
        k = expr.power
        return lambda z: fa(z) ** k
    if isinstance(expr, Scale):
        fa = _build(expr.arg)
        c = expr.factor
        return lambda z: c * fa(z)
    raise TypeError(f"not a FuncExpr node: {expr!r}")


# ---------------------------------------------------------------------------
# symbolic derivative and antiderivative


@singledispatch
def derivative(expr: FuncExpr) -> FuncExpr:
    """Exact derivative tree; the class is closed under differentiation."""
    raise TypeError(f"not a FuncExpr node: {expr!r}")


@derivative.register
def _(expr: Constant) -> FuncExpr:
    return _ZERO


@derivative.register
def _(expr: Variable) -> FuncExpr:
    return Constant(1.0)


@derivative.register
def _(expr: Add) -> FuncExpr:
    return _add(derivative(expr.left), derivative(expr.right))


@derivative.register
def _(expr: Mul) -> FuncExpr:
    return _add(_mul(derivative(expr.left), expr.right), _mul(expr.left, derivative(expr.right)))


@derivative.register
def _(expr: Negate) -> FuncExpr:
    d = derivative(expr.arg)
    return _ZERO if (isinstance(d, Constant) and d.value == 0) else Negate(d)


@derivative.register
def _(expr: Exp) -> FuncExpr:
    return _mul(derivative(expr.arg), expr)


@derivative.register
def _(expr: IntPower) -> FuncExpr:
    k = expr.power
    if k == 0:
        return _ZERO
    inner = derivative(expr.arg)
    if k == 1:
        return inner
    return _scale(k, _mul(IntPower(expr.arg, k - 1), inner))


@derivative.register
def _(expr: Scale) -> FuncExpr:
    return _scale(expr.factor, derivative(expr.arg))


def _as_affine(expr: FuncExpr):
    """Decompose expr as a*z + b, or return None."""
    if is_constant(expr):
        return 0j, constant_value(expr)
    if isinstance(expr, Variable):
        return 1 + 0j, 0j
    if isinstance(expr, Add):
        l, r = _as_affine(expr.left), _as_affine(expr.right)
        if l is None or r is None:
            return None
        return l[0] + r[0], l[1] + r[1]
    if isinstance(expr, Negate):
        p = _as_affine(expr.arg)
        return None if p is None else (-p[0], -p[1])
    if isinstance(expr, Scale):
        p = _as_affine(expr.arg)
        return None if p is None else (expr.factor * p[0], expr.factor * p[1])
    if isinstance(expr, Mul):
        if is_constant(expr.left):
            c, p = constant_value(expr.left), _as_affine(expr.right)
        elif is_constant(expr.right):
            c, p = constant_value(expr.right), _as_affine(expr.left)
        else:
            return None
        return None if p is None else (c * p[0], c * p[1])
    if isinstance(expr, IntPower) and expr.power == 1:
        return _as_affine(expr.arg)
    return None


def antiderivative(expr: FuncExpr) -> FuncExpr:
    """Symbolic antiderivative with the integration constant fixed to 0.

    Supported class: linear combinations of monomials in z and of
    exp(affine) terms.  Anything else (general products, nested exp,
    powers of non-monomials) raises UnsupportedAntiderivative naming
    the first offending node.  The result is verified to differentiate
    back to the input at five fixed sample points.
    """
    out = _anti(expr)
    _verify_antiderivative(expr, out)
    return out


def _anti(expr: FuncExpr) -> FuncExpr:
    if is_constant(expr):
        return _scale(constant_value(expr), _Z)
    if isinstance(expr, Variable):
        return Scale(0.5, IntPower(_Z, 2))
    if isinstance(expr, Add):
        return _add(_anti(expr.left), _anti(expr.right))
    if isinstance(expr, Negate):
        return Negate(_anti(expr.arg))
    if isinstance(expr, Scale):
        return _scale(expr.factor, _anti(expr.arg))
    if isinstance(expr, Mul):
        if is_constant(expr.left):
            return _scale(constant_value(expr.left), _anti(expr.right))
        if is_constant(expr.right):
            return _scale(constant_value(expr.right), _anti(expr.left))
        raise UnsupportedAntiderivative(expr)
    if isinstance(expr, IntPower):
        if isinstance(expr.arg, Variable):
            k = expr.power
            return _scale(1.0 / (k + 1), IntPower(_Z, k + 1))
        raise UnsupportedAntiderivative(expr)
    if isinstance(expr, Exp):
        aff = _as_affine(expr.arg)
        if aff is None:
            raise UnsupportedAntiderivative(expr)
        a, b = aff
        if a == 0:
            return _scale(cmath.exp(b), _Z)
        return _scale(1.0 / a, expr)
    raise TypeError(f"not a FuncExpr node: {expr!r}")


# Fixed generic sample points; shared by the self-check below.
_CHECK_POINTS = (
    0.3 + 0.7j,
    -1.1 + 0.4j,
    0.9 - 1.3j,
    -0.5 - 0.8j,
    1.7 + 0.2j,
)


def _verify_antiderivative(g: FuncExpr, big_g: FuncExpr) -> None:
    from .jets import eval_jet  # local import to avoid a cycle

    for z in _CHECK_POINTS:
        got = eval_jet(big_g, z, 1).coeffs[1]
        want = eval_jet(g, z, 0).coeffs[0]
        if abs(got - want) > 1e-10 * (1.0 + abs(want)):
            raise UnsupportedAntiderivative(g)


# ---------------------------------------------------------------------------
# polynomial extraction

_POLY_DEGREE_CAP = 64


def poly_coeffs(expr: FuncExpr):
    """Coefficients (ascending) when expr is a polynomial in z, else None."""
    c = _poly(expr)
    if c is None:
        return None
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _poly(expr: FuncExpr):
    if isinstance(expr, Constant):
        return [expr.value]
    if isinstance(expr, Variable):
        return [0j, 1 + 0j]
    if isinstance(expr, Add):
        l, r = _poly(expr.left), _poly(expr.right)
        if l is None or r is None:
            return None
        if len(l) < len(r):
            l, r = r, l
        return [a + (r[i] if i < len(r) else 0) for i, a in enumerate(l)]
    if isinstance(expr, Mul):
        l, r = _poly(expr.left), _poly(expr.right)
        if l is None or r is None or len(l) + len(r) - 1 > _POLY_DEGREE_CAP:
            return None
        out = [0j] * (len(l) + len(r) - 1)
        for i, a in enumerate(l):
            for j, b in enumerate(r):
                out[i + j] += a * b
        return out
    if isinstance(expr, Negate):
        l = _poly(expr.arg)
        return None if l is None else [-a for a in l]
    if isinstance(expr, Scale):
        l = _poly(expr.arg)
        return None if l is None else [expr.factor * a for a in l]
    if isinstance(expr, IntPower):
        base = _poly(expr.arg)
        if base is None or (len(base) - 1) * expr.power > _POLY_DEGREE_CAP:
            return None
        out = [1 + 0j]
        for _ in range(expr.power):
            nxt = [0j] * (len(out) + len(base) - 1)
            for i, a in enumerate(out):
                for j, b in enumerate(base):
                    nxt[i + j] += a * b
            out = nxt
        return out
    if isinstance(expr, Exp):
        if is_constant(expr.arg):
            return [cmath.exp(constant_value(expr.arg))]
        return None
    raise TypeError(f"not a FuncExpr node: {expr!r}")


# ---------------------------------------------------------------------------
# parsing

_DIGITS = set("0123456789")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "+-*/^()":
            tokens.append((c, c, i))
            i += 1
            continue
        if c in _DIGITS or c == ".":
            j = i
            while j < n and text[j] in _DIGITS:
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j] in _DIGITS:
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k] in _DIGITS:
                    while k < n and text[k] in _DIGITS:
                        k += 1
                    j = k
            lit = text[i:j]
            if j < n and text[j] == "i":
                tokens.append(("num", lit + "i", i))
                j += 1
            else:
                tokens.append(("num", lit, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.take()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> FuncExpr:
        e = self.sum()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return e

    def sum(self) -> FuncExpr:
        e = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()
            rhs = self.term()
            if op[0] == "-":
                rhs = Constant(-rhs.value) if isinstance(rhs, Constant) else Negate(rhs)
            e = Add(e, rhs)
        return e

    def term(self) -> FuncExpr:
        e = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op[0] == "*":
                e = Mul(e, rhs)
            else:
                if not is_constant(rhs):
                    raise EntiretyViolation(
                        f"division by non-constant {to_text(rhs)!r}", op[2]
                    )
                d = constant_value(rhs)
                if d == 0:
                    raise EntiretyViolation("division by zero", op[2])
                if isinstance(e, Constant):
                    e = Constant(e.value / d)
                else:
                    e = Scale(1.0 / d, e)
        return e

    def unary(self) -> FuncExpr:
        if self.peek()[0] == "-":
            self.take()
            e = self.unary()
            return Constant(-e.value) if isinstance(e, Constant) else Negate(e)
        return self.postfix()

    def postfix(self) -> FuncExpr:
        e = self.atom()
        while self.peek()[0] == "^":
            caret = self.take()
            tok = self.take()
            if tok[0] == "-":
                raise EntiretyViolation("negative exponent is not entire", caret[2])
            if tok[0] != "num" or tok[1].endswith("i") or not tok[1].isdigit():
                raise EntiretyViolation(
                    f"exponent must be a nonnegative integer, found {tok[1]!r}", tok[2]
                )
            e = IntPower(e, int(tok[1]))
        return e

    def atom(self) -> FuncExpr:
        tok = self.take()
        kind, lit, off = tok
        if kind == "num":
            if lit.endswith("i"):
                body = lit[:-1]
                return Constant(complex(0.0, float(body) if body else 1.0))
            return Constant(complex(float(lit), 0.0))
        if kind == "name":
            if lit == "z":
                return Variable()
            if lit == "i":
                return Constant(1j)
            if lit == "exp":
                self.expect("(")
                inner = self.sum()
                self.expect(")")
                return Exp(inner)
            raise ParseError(f"unknown name {lit!r}", off)
        if kind == "(":
            inner = self.sum()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {lit!r}", off)


def parse_expr(text: str) -> FuncExpr:
    """Parse the ASCII expression grammar into a FuncExpr tree.

    Grammar: complex literals ``a``, ``bi``, ``(a+bi)``; variable ``z``;
    ``+ - *`` and unary ``-``; ``^k`` with integer k >= 0; ``exp(...)``;
    division only by a nonzero constant.  Whitespace is insignificant.
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing


def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _fmt_complex(v: complex) -> str:
    if v.imag == 0:
        return _fmt_real(v.real)
    if v.real == 0:
        return _fmt_real(v.imag) + "i"
    sign = "+" if v.imag >= 0 else "-"
    return f"({_fmt_real(v.real)}{sign}{_fmt_real(abs(v.imag))}i)"


# precedence levels used while printing
_P_SUM, _P_PROD, _P_UNARY, _P_POW = 1, 2, 3, 4


def to_text(expr: FuncExpr) -> str:
    """Render a tree in the parser's grammar (parse(to_text(e)) ~ e)."""
    return _render(expr, 0)


def _render(expr: FuncExpr, ctx: int) -> str:
    if isinstance(expr, Constant):
        s = _fmt_complex(expr.value)
        if s.startswith("-") and ctx >= _P_POW:
            return f"({s})"
        return s
    if isinstance(expr, Variable):
        return "z"
    if isinstance(expr, Add):
        l = _render(expr.left, _P_SUM)
        r = _render(expr.right, _P_SUM + 1)
        body = f"{l} - {r[1:]}" if r.startswith("-") else f"{l} + {r}"
        return f"({body})" if ctx > _P_SUM else body
    if isinstance(expr, Mul):
        body = f"{_render(expr.left, _P_PROD)} * {_render(expr.right, _P_PROD + 1)}"
        return f"({body})" if ctx > _P_PROD else body
    if isinstance(expr, Scale):
        body = f"{_fmt_complex(expr.factor)} * {_render(expr.arg, _P_PROD + 1)}"
        return f"({body})" if ctx > _P_PROD else body
    if isinstance(expr, Negate):
        body = f"-{_render(expr.arg, _P_UNARY)}"
        return f"({body})" if ctx > _P_UNARY else body
    if isinstance(expr, Exp):
        return f"exp({_render(expr.arg, 0)})"
    if isinstance(expr, IntPower):
        return f"{_render(expr.arg, _P_POW)}^{expr.power}"
    raise TypeError(f"not a FuncExpr node: {expr!r}")
