"""Exact symbolic scalar expressions over the variables x1..xn.

Every expression is kept in a canonical form: a sum of terms, each term a
rational coefficient times a product of factors ``atom^k``.  Polynomial
subexpressions are always expanded, so equality of polynomials is plain
structural equality of the canonical forms.  Beyond monomial factors the
atom set contains:

* ``exp(u)``,
* ``bump(u)``  -- e^(-1/u^2) extended by 0 at u = 0,
* ``bumpp(u)`` -- e^(-1/u^2) for u > 0 and identically 0 for u <= 0,
* negative integer powers of a polynomial base, produced by
  differentiating the flat functions or by division that does not cancel.

Negative powers of a variable are legitimate only as companions of a
bump/bumpp factor in the same argument (that is how differentiation closes
over the flat functions); such a product extends by zero at the argument's
zero and floating evaluation honours that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

__all__ = [
    "Expr",
    "ExprError",
    "ParseError",
    "EvalError",
    "const",
    "var",
    "exp_of",
    "bump",
    "bumpp",
    "parse",
    "ZERO",
    "ONE",
    "poly_coeff_dict",
    "poly_from_coeff_dict",
]

Rat = Union[int, Fraction]

# |u| below this counts as the extension point of a flat function.
FLAT_EVAL_EPS = 1e-12

_KIND_RANK = {"var": 0, "exp": 1, "bump": 2, "bumpp": 3, "invbase": 4}


class ExprError(Exception):
    """Malformed symbolic operation (division by zero, bad exponent...)."""


class ParseError(ExprError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class EvalError(ExprError):
    """Evaluation hit a pole or an undefined extension."""


@dataclass(frozen=True)
class Atom:
    """A non-trivial factor base: a variable or a function node.

    ``invbase`` marks a general polynomial base carrying a negative
    exponent; positive powers of polynomials are always expanded away.
    """

    kind: str
    index: int = 0
    arg: Optional["Expr"] = None

    def sort_key(self):
        if self.kind == "var":
            return (0, self.index)
        return (_KIND_RANK[self.kind], self.arg.sort_key())

    def __str__(self):
        if self.kind == "var":
            return f"x{self.index}"
        if self.kind == "invbase":
            return f"({self.arg})"
        return f"{self.kind}({self.arg})"


# A factor is (Atom, nonzero int exponent); a term is (Fraction, factors).
Factors = tuple


def _merge_factors(f1, f2):
    d = {}
    for atom, k in f1:
        d[atom] = d.get(atom, 0) + k
    for atom, k in f2:
        d[atom] = d.get(atom, 0) + k
    return tuple(
        sorted(((a, k) for a, k in d.items() if k != 0), key=lambda p: p[0].sort_key())
    )


def _sorted_factors(pairs):
    return tuple(sorted(pairs, key=lambda p: p[0].sort_key()))


def _factors_key(factors):
    return tuple((a.sort_key(), k) for a, k in factors)


class Expr:
    """Canonical symbolic expression.  Immutable; safe to share."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms):
        object.__setattr__(self, "terms", tuple(terms))
        object.__setattr__(self, "_hash", None)

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def _from_dict(d):
        items = [(f, c) for f, c in d.items() if c != 0]
        items.sort(key=lambda fc: _factors_key(fc[0]))
        return Expr(tuple((c, f) for f, c in items))

    def _as_dict(self):
        return {f: c for c, f in self.terms}

    # -- basic predicates ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not self.terms[0][1])

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and not self.terms[0][1]:
            return self.terms[0][0]
        raise ExprError("not a constant expression")

    def is_polynomial(self):
        for _, factors in self.terms:
            for atom, k in factors:
                if atom.kind != "var" or k < 0:
                    return False
        return True

    def has_flat_factor(self):
        for _, factors in self.terms:
            for atom, _ in factors:
                if atom.kind in ("bump", "bumpp"):
                    return True
                if atom.kind in ("exp", "invbase") and atom.arg.has_flat_factor():
                    return True
        return False

    def total_degree(self):
        """Total degree of a polynomial expression (zero polynomial -> -1)."""
        if not self.is_polynomial():
            raise ExprError("total_degree needs a polynomial expression")
        if not self.terms:
            return -1
        return max(sum(k for _, k in factors) for _, factors in self.terms)

    def max_var(self):
        out = 0
        for _, factors in self.terms:
            for atom, _ in factors:
                if atom.kind == "var":
                    out = max(out, atom.index)
                else:
                    out = max(out, atom.arg.max_var())
        return out

    # -- identity ---------------------------------------------------------------

    def sort_key(self):
        return tuple((_factors_key(f), c) for c, f in self.terms)

    def __eq__(self, other):
        return isinstance(other, Expr) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.terms))
        return self._hash

    # -- ring operations ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        d = self._as_dict()
        for c, f in other.terms:
            d[f] = d.get(f, 0) + c
        return Expr._from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return Expr(tuple((-c, f) for c, f in self.terms))

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        out = {}
        pending = []
        for c1, f1 in self.terms:
            for c2, f2 in other.terms:
                c = c1 * c2
                merged = _merge_factors(f1, f2)
                expand = [
                    (a, k)
                    for a, k in merged
                    if a.kind == "invbase" and k > 0 and a.arg.is_polynomial()
                ]
                if expand:
                    rest = tuple(p for p in merged if p not in expand)
                    pending.append((c, rest, expand))
                else:
                    out[merged] = out.get(merged, 0) + c
        result = Expr._from_dict(out)
        for c, rest, expand in pending:
            piece = Expr(((c, rest),))
            for atom, k in expand:
                piece = piece * atom.arg.int_pow(k)
            result = result + piece
        return result

    __rmul__ = __mul__

    def __truediv__(self, other):
        return divide(self, _coerce(other))

    def __rtruediv__(self, other):
        return divide(_coerce(other), self)

    def __pow__(self, k):
        return self.int_pow(k)

    def int_pow(self, k):
        if not isinstance(k, int):
            raise ExprError("exponent must be an integer")
        if k == 0:
            if self.is_zero():
                raise ExprError("0^0 is undefined here")
            return ONE
        if self.is_zero():
            if k < 0:
                raise ExprError("division by zero: negative power of 0")
            return ZERO
        if len(self.terms) == 1:
            c, factors = self.terms[0]
            coeff = Fraction(c) ** k
            newf = _sorted_factors((a, e * k) for a, e in factors)
            return Expr(((coeff, newf),))
        if k > 0:
            if k > 64:
                raise ExprError("exponent too large to expand")
            out = ONE
            base = self
            e = k
            while e:
                if e & 1:
                    out = out * base
                e >>= 1
                if e:
                    base = base * base
            return out
        # multi-term base, negative power: keep as an opaque inverse base
        return Expr(((Fraction(1), ((Atom("invbase", arg=self), k),)),))

    def diff(self, i):
        """Exact partial derivative with respect to x_i, canonical form."""
        out = ZERO
        for c, factors in self.terms:
            for pos, (atom, k) in enumerate(factors):
                rest = factors[:pos] + factors[pos + 1 :]
                base_term = Expr(((c, rest),))
                d = _atom_power_diff(atom, k, i)
                if not d.is_zero():
                    out = out + base_term * d
        return out

    # -- evaluation ----------------------------------------------------------------

    def eval(self, point):
        """Evaluate at a point (sequence of numbers, 1-based variables).

        Returns an exact Fraction when the expression is polynomial (or
        every non-polynomial term sits exactly on its flat extension) and
        the point entries are int/Fraction; otherwise returns a float.
        """
        exact_pt = all(isinstance(v, (int, Fraction)) for v in point)
        if exact_pt:
            got = self._eval_exact(tuple(Fraction(v) for v in point))
            if got is not None:
                return got
        return self.eval_float(point)

    def _eval_exact(self, point):
        total = Fraction(0)
        for c, factors in self.terms:
            term = Fraction(c)
            flat_zero_args = set()
            poles = []
            plain = []
            for atom, k in factors:
                if atom.kind in ("bump", "bumpp") and k > 0:
                    u = atom.arg._eval_exact(point)
                    if u is None:
                        return None
                    if (atom.kind == "bump" and u == 0) or (
                        atom.kind == "bumpp" and u <= 0
                    ):
                        flat_zero_args.add(atom.arg)
                    else:
                        return None  # genuinely transcendental value
                elif atom.kind == "var":
                    if k < 0:
                        poles.append((atom, k))
                    else:
                        plain.append((atom, k))
                else:
                    return None
            if flat_zero_args:
                for atom, _ in poles:
                    if var(atom.index) not in flat_zero_args:
                        if point[atom.index - 1] == 0:
                            raise EvalError("division by zero at a pole")
                continue  # the flat factor pins this term to exactly 0
            for atom, k in poles:
                v = point[atom.index - 1]
                if v == 0:
                    raise EvalError("division by zero at a pole")
                term *= v**k
            for atom, k in plain:
                term *= point[atom.index - 1] ** k
            total += term
        return total

    def eval_float(self, point):
        pt = [float(v) for v in point]
        total = 0.0
        for c, factors in self.terms:
            total += _term_eval_float(c, factors, pt)
        return total

    # -- printing ---------------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, factors in self.terms:
            body = _term_str(abs(c), factors)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"Expr({self})"


def _atom_power_diff(atom, k, i):
    """d(atom^k)/dx_i divided by atom^... -> full Expr for the factor."""
    if atom.kind == "var":
        if atom.index != i:
            return ZERO
        coeff = Fraction(k)
        if k == 1:
            return Expr(((coeff, ()),))
        return Expr(((coeff, ((atom, k - 1),)),))
    darg = atom.arg.diff(i)
    if darg.is_zero():
        return ZERO
    if atom.kind == "exp":
        head = Expr(((Fraction(k), ((atom, k),)),))
        return head * darg
    if atom.kind in ("bump", "bumpp"):
        # d bump(u) = 2 u^-3 bump(u); the one-sided variant differentiates
        # to the same flat product, which also vanishes on u <= 0.
        head = Expr(((Fraction(2 * k), ((atom, k),)),))
        return head * atom.arg.int_pow(-3) * darg
    if atom.kind == "invbase":
        head = Expr(((Fraction(k), ((Atom("invbase", arg=atom.arg), k - 1),)),))
        if k - 1 == 0:
            head = Expr(((Fraction(k), ()),))
        return head * darg
    raise ExprError(f"unknown atom kind {atom.kind}")


def _term_eval_float(coeff, factors, pt):
    """One term in log-space so monomial*bump products cannot overflow."""
    if not factors:
        return float(coeff)
    flat_zero_args = []
    for atom, k in factors:
        if atom.kind in ("bump", "bumpp") and k > 0:
            u = atom.arg.eval_float(pt)
            if atom.kind == "bump" and abs(u) < FLAT_EVAL_EPS:
                flat_zero_args.append(atom.arg)
            elif atom.kind == "bumpp" and u < FLAT_EVAL_EPS:
                flat_zero_args.append(atom.arg)
    if flat_zero_args:
        # the flat factor pins the term to 0; only an unrelated pole objects
        for atom, k in factors:
            if atom.kind == "var" and k < 0:
                if abs(pt[atom.index - 1]) < FLAT_EVAL_EPS and not any(
                    a == var(atom.index) for a in flat_zero_args
                ):
                    raise EvalError("division by zero at a pole")
            if atom.kind == "invbase":
                if abs(atom.arg.eval_float(pt)) < FLAT_EVAL_EPS and not any(
                    a == atom.arg for a in flat_zero_args
                ):
                    raise EvalError("division by zero at a pole")
        return 0.0
    sign = 1.0 if coeff > 0 else -1.0
    logmag = math.log(abs(float(coeff)))
    for atom, k in factors:
        if atom.kind == "var":
            v = pt[atom.index - 1]
            if v == 0.0:
                if k > 0:
                    return 0.0
                raise EvalError("division by zero at a pole")
            if v < 0 and k % 2:
                sign = -sign
            logmag += k * math.log(abs(v))
        elif atom.kind == "exp":
            logmag += k * atom.arg.eval_float(pt)
        elif atom.kind in ("bump", "bumpp"):
            u = atom.arg.eval_float(pt)
            logmag += k * (-1.0 / (u * u))
        elif atom.kind == "invbase":
            v = atom.arg.eval_float(pt)
            if v == 0.0:
                if k > 0:
                    return 0.0
                raise EvalError("division by zero at a pole")
            if v < 0 and k % 2:
                sign = -sign
            logmag += k * math.log(abs(v))
        else:
            raise ExprError(f"unknown atom kind {atom.kind}")
    try:
        return sign * math.exp(logmag)
    except OverflowError:
        return sign * math.inf


def _term_str(coeff, factors):
    pieces = []
    if coeff != 1 or not factors:
        pieces.append(str(coeff))
    for atom, k in factors:
        pieces.append(str(atom) if k == 1 else f"{atom}^{k}")
    return "*".join(pieces)


def _coerce(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return const(x)
    raise TypeError(f"cannot use {type(x).__name__} as an expression")


# -- constructors ------------------------------------------------------------------


def const(q):
    q = Fraction(q)
    if q == 0:
        return ZERO
    return Expr(((q, ()),))


def var(i):
    if i < 1:
        raise ExprError("variable indices are 1-based")
    return Expr(((Fraction(1), ((Atom("var", index=i), 1),)),))


def _func(kind, e):
    e = _coerce(e)
    return Expr(((Fraction(1), ((Atom(kind, arg=e), 1),)),))


def exp_of(e):
    e = _coerce(e)
    if e.is_zero():
        return ONE
    return _func("exp", e)


def bump(e):
    return _func("bump", e)


def bumpp(e):
    return _func("bumpp", e)


ZERO = Expr(())
ONE = Expr(((Fraction(1), ()),))


# -- division ------------------------------------------------------------------------


def divide(num, den):
    num = _coerce(num)
    den = _coerce(den)
    if den.is_zero():
        raise ExprError("division by zero")
    if den.is_constant():
        return num * const(Fraction(1) / den.constant_value())
    if len(den.terms) == 1:
        return num * den.int_pow(-1)
    if num.is_polynomial() and den.is_polynomial():
        q = _poly_exact_divide(num, den)
        if q is not None:
            return q
    return num * den.int_pow(-1)


def _poly_exact_divide(num, den):
    """num / den over the rationals when the remainder is zero, else None."""
    n = max(num.max_var(), den.max_var())
    r = dict(poly_coeff_dict(num, n))
    d = poly_coeff_dict(den, n)
    dlead = max(d, key=_mono_order)
    q = {}
    while r:
        rlead = max(r, key=_mono_order)
        diff = tuple(a - b for a, b in zip(rlead, dlead))
        if any(e < 0 for e in diff):
            return None
        coeff = r[rlead] / d[dlead]
        q[diff] = q.get(diff, 0) + coeff
        for mono, c in d.items():
            m = tuple(a + b for a, b in zip(diff, mono))
            nc = r.get(m, Fraction(0)) - coeff * c
            if nc == 0:
                r.pop(m, None)
            else:
                r[m] = nc
    return poly_from_coeff_dict(q, n)


def _mono_order(mono):
    return (sum(mono), mono)


# -- polynomial coefficient views ---------------------------------------------------


def poly_coeff_dict(e, n):
    """Map exponent tuples (length n) to rational coefficients."""
    if not e.is_polynomial():
        raise ExprError("expression is not polynomial")
    out = {}
    for c, factors in e.terms:
        exps = [0] * n
        for atom, k in factors:
            if atom.index > n:
                raise ExprError(f"variable x{atom.index} exceeds dimension {n}")
            exps[atom.index - 1] = k
        out[tuple(exps)] = Fraction(c)
    return out


def poly_from_coeff_dict(d, n):
    e = ZERO
    for mono, c in d.items():
        if c == 0:
            continue
        term = const(c)
        for j, k in enumerate(mono):
            if k:
                term = term * var(j + 1).int_pow(k)
        e = e + term
    return e


# -- parser ---------------------------------------------------------------------------

_FUNCS = {"exp": exp_of, "bump": bump, "bumpp": bumpp}


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.tokens = []
        self._scan()
        self.idx = 0

    def _scan(self):
        text = self.text
        i = 0
        while i < len(text):
            ch = text[i]
            if ch in " \t\r\n":
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                if j < len(text) and text[j] == ".":
                    raise ParseError(
                        "decimal literals are not supported; use rationals like 1/2",
                        *self._linecol(i),
                    )
                self.tokens.append(("int", text[i:j], i))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(("ident", text[i:j], i))
                i = j
                continue
            if ch in "+-*/^()":
                self.tokens.append((ch, ch, i))
                i += 1
                continue
            raise ParseError(f"unexpected character {ch!r}", *self._linecol(i))
        self.tokens.append(("end", "", len(text)))

    def _linecol(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def peek(self):
        return self.tokens[self.idx]

    def next(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, *self._linecol(tok[2]))


def parse(text, n):
    """Parse the expression grammar into a canonical Expr of dimension n."""
    toks = _Tokens(text)
    e = _parse_expr(toks, n)
    if toks.peek()[0] != "end":
        toks.error(f"unexpected token {toks.peek()[1]!r}")
    return e


def _parse_expr(toks, n):
    e = _parse_term(toks, n)
    while toks.peek()[0] in ("+", "-"):
        op = toks.next()[0]
        rhs = _parse_term(toks, n)
        e = e + rhs if op == "+" else e - rhs
    return e


def _parse_term(toks, n):
    e = _parse_factor(toks, n)
    while toks.peek()[0] in ("*", "/"):
        op = toks.next()[0]
        rhs = _parse_factor(toks, n)
        e = e * rhs if op == "*" else divide(e, rhs)
    return e


def _parse_factor(toks, n):
    base = _parse_base(toks, n)
    if toks.peek()[0] == "^":
        toks.next()
        sign = 1
        if toks.peek()[0] == "-":
            toks.next()
            sign = -1
        elif toks.peek()[0] == "+":
            toks.next()
        tok = toks.next()
        if tok[0] != "int":
            toks.error("exponent must be an integer", tok)
        return base.int_pow(sign * int(tok[1]))
    return base


def _parse_base(toks, n):
    tok = toks.next()
    kind, text, pos = tok
    if kind == "-":
        return -_parse_factor(toks, n)
    if kind == "(":
        e = _parse_expr(toks, n)
        closing = toks.next()
        if closing[0] != ")":
            toks.error("expected ')'", closing)
        return e
    if kind == "int":
        value = Fraction(int(text))
        return const(value)
    if kind == "ident":
        if text in _FUNCS:
            opening = toks.next()
            if opening[0] != "(":
                toks.error(f"expected '(' after {text}", opening)
            argument = _parse_expr(toks, n)
            closing = toks.next()
            if closing[0] != ")":
                toks.error("expected ')'", closing)
            return _FUNCS[text](argument)
        if text.startswith("x") and text[1:].isdigit():
            i = int(text[1:])
            if i < 1 or i > n:
                toks.error(f"unknown variable {text} (dimension is {n})", tok)
            return var(i)
        toks.error(f"unknown identifier {text!r}", tok)
    toks.error(f"unexpected token {text!r}", tok)
