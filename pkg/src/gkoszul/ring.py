"""Exact multivariate polynomial arithmetic over the rationals.

A polynomial is a sparse map from exponent vectors to nonzero Fraction
coefficients, attached to a ring descriptor (ordered variable names plus a
monomial order).  Zero coefficients are never stored, so two polynomials are
equal exactly when their term maps are equal.

The string grammar is deliberately small and round-trips bit-exactly:
integers, rationals ``a/b``, variable identifiers, ``+ - * ^`` and
parentheses.  Juxtaposition is not multiplication: ``x*y``, never ``xy``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError, RingMismatchError

ORDER_KINDS = ("grevlex", "lex", "grlex")


class MonomialOrder:
    """A multiplicative total order on monomials with 1 minimal.

    ``perm`` optionally reorders the variables before comparison: perm[i] is
    the index of the variable that is ranked i-th.  The identity permutation
    is represented by None.
    """

    __slots__ = ("kind", "perm")

    def __init__(self, kind: str = "grevlex", perm: tuple[int, ...] | None = None):
        if kind not in ORDER_KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        if perm is not None:
            perm = tuple(perm)
            if sorted(perm) != list(range(len(perm))):
                raise ValueError(f"not a permutation: {perm!r}")
        self.perm = perm

    def key(self, exp: tuple[int, ...]):
        """Sort key; larger key means larger monomial."""
        if self.perm is not None:
            exp = tuple(exp[i] for i in self.perm)
        if self.kind == "lex":
            return exp
        deg = sum(exp)
        if self.kind == "grlex":
            return (deg, exp)
        # grevlex: higher degree wins, ties broken by the smallest exponent
        # in the last position where they differ.
        return (deg, tuple(-e for e in reversed(exp)))

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.perm == other.perm
        )

    def __hash__(self):
        return hash((self.kind, self.perm))

    def __repr__(self):
        if self.perm is None:
            return f"MonomialOrder({self.kind!r})"
        return f"MonomialOrder({self.kind!r}, perm={self.perm!r})"

    def to_json(self) -> dict:
        data = {"kind": self.kind}
        if self.perm is not None:
            data["perm"] = list(self.perm)
        return data

    @classmethod
    def from_json(cls, data) -> "MonomialOrder":
        if isinstance(data, str):
            return cls(data)
        perm = data.get("perm")
        return cls(data["kind"], tuple(perm) if perm is not None else None)


class PolyRing:
    """QQ[x1..xk] with a fixed variable list and monomial order."""

    __slots__ = ("variables", "order", "_var_index")

    def __init__(self, variables, order: MonomialOrder | str = "grevlex"):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        if isinstance(order, str):
            order = MonomialOrder(order)
        self.order = order
        self._var_index = {v: i for i, v in enumerate(self.variables)}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.variables, self.order))

    def __repr__(self):
        return f"PolyRing({list(self.variables)!r}, {self.order.kind!r})"

    # -- constructors -------------------------------------------------

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return Poly(self, {(0,) * self.nvars: c})

    def gen(self, i: int) -> "Poly":
        exp = [0] * self.nvars
        exp[i] = 1
        return Poly(self, {tuple(exp): Fraction(1)})

    def gens(self) -> list["Poly"]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exp, coeff=1) -> "Poly":
        exp = tuple(exp)
        if len(exp) != self.nvars:
            raise ValueError("exponent length mismatch")
        c = Fraction(coeff)
        if c == 0:
            return self.zero()
        return Poly(self, {exp: c})

    def poly(self, terms: dict) -> "Poly":
        clean = {}
        for exp, c in terms.items():
            exp = tuple(exp)
            if len(exp) != self.nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp!r}")
            c = Fraction(c)
            if c != 0:
                clean[exp] = c
        return Poly(self, clean)

    def extend(self, extra_variable: str) -> "PolyRing":
        """Ring with one fresh variable appended (used for radical tests)."""
        if extra_variable in self._var_index:
            raise ValueError(f"variable {extra_variable!r} already present")
        return PolyRing(self.variables + (extra_variable,), self.order.kind)

    def lift(self, p: "Poly", target: "PolyRing") -> "Poly":
        """Reinterpret p in a ring whose first variables match this ring."""
        if target.variables[: self.nvars] != self.variables:
            raise RingMismatchError("target ring does not extend this one")
        pad = (0,) * (target.nvars - self.nvars)
        return Poly(target, {exp + pad: c for exp, c in p.terms.items()})

    # -- parsing ------------------------------------------------------

    def parse(self, text: str) -> "Poly":
        return _Parser(self, text).parse()

    def to_json(self) -> dict:
        return {"variables": list(self.variables), "order": self.order.to_json()}

    @classmethod
    def from_json(cls, data) -> "PolyRing":
        return cls(tuple(data["variables"]), MonomialOrder.from_json(data["order"]))


class Poly:
    """Immutable sparse polynomial.  Do not mutate ``terms``."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(exp) for exp in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Degree of the zero polynomial is -1 by convention here."""
        if not self.terms:
            return -1
        return max(sum(exp) for exp in self.terms)

    def homogeneous_degree(self) -> int | None:
        """Common degree of all terms, or None if inhomogeneous / zero."""
        degs = {sum(exp) for exp in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    # -- leading data -------------------------------------------------

    def lead_exp(self) -> tuple[int, ...]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=self.ring.order.key)

    def lead_coeff(self) -> Fraction:
        return self.terms[self.lead_exp()]

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "Poly"):
        if self.ring != other.ring:
            raise RingMismatchError(
                f"ring mismatch: {self.ring!r} vs {other.ring!r}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        self._check(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp, 0) + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        return Poly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {exp: -c for exp, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return self.ring.zero()
            return Poly(self.ring, {e: k * c for e, k in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(exp, 0) + c1 * c2
                if s:
                    out[exp] = s
                else:
                    out.pop(exp, None)
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- printing -----------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms, key=self.ring.order.key, reverse=True)
        pieces = []
        for i, exp in enumerate(items):
            c = self.terms[exp]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.ring.variables, exp)
                if e
            )
            if not mono:
                body = _coeff_str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{_coeff_str(abs(c))}*{mono}"
            if i == 0:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(pieces)

    def __repr__(self):
        return f"<Poly {self}>"


def _coeff_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([-+*^/()]))")


class _Parser:
    """Recursive-descent parser for the polynomial grammar."""

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                rest = text[pos:].strip()
                if not rest:
                    break
                raise ParseError(f"bad character at {text[pos:pos + 10]!r}")
            if m.group(1) is not None:
                self.tokens.append(("num", int(m.group(1))))
            elif m.group(2) is not None:
                self.tokens.append(("name", m.group(2)))
            else:
                self.tokens.append(("op", m.group(3)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, got {val!r}")

    def parse(self) -> Poly:
        p = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input near {self.peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self) -> Poly:
        p = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.factor()
            elif kind in ("name", "num") or (kind == "op" and val == "("):
                raise ParseError("juxtaposition is not multiplication; use '*'")
            else:
                return p

    def factor(self) -> Poly:
        kind, val = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.factor()
        if kind == "op" and val == "+":
            self.take()
            return self.factor()
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            ekind, eval_ = self.take()
            if ekind != "num":
                raise ParseError("exponent must be a non-negative integer")
            return base ** eval_
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            nkind, nval = self.peek()
            if nkind == "op" and nval == "/":
                self.take()
                dkind, dval = self.take()
                if dkind != "num":
                    raise ParseError("denominator must be an integer")
                if dval == 0:
                    raise ParseError("zero denominator")
                return self.ring.const(Fraction(val, dval))
            return self.ring.const(val)
        if kind == "name":
            idx = self.ring._var_index.get(val)
            if idx is None:
                raise ParseError(f"unknown variable {val!r}")
            return self.ring.gen(idx)
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        raise ParseError(f"unexpected token {val!r}")
