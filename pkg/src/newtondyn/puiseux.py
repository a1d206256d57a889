"""Truncated Puiseux series sum a_q t^q with rational exponents.

A series stores its nonzero terms below a truncation order ``trunc``: the
true value is the stored sum plus O(t^trunc). Exponents are exact
``Fraction`` values; coefficients are complex floats. A coefficient that
comes out of a sum is pruned when it is below 1e-12 relative to the terms
that were added to form it, which removes cancellation noise without
touching small but genuine coefficients.

The absolute value is |x| = exp(-v(x)) with v the leading exponent. A series
whose terms all cancelled below its truncation order has no known valuation;
asking for it raises :class:`TruncationUnderflowError`.
"""
from __future__ import annotations

import ast
import cmath
import math
from fractions import Fraction

__all__ = [
    "PuiseuxSeries",
    "TruncationUnderflowError",
    "DEFAULT_ORDER",
    "parse_series",
    "parse_family",
    "series",
    "T",
]

DEFAULT_ORDER = Fraction(8)
PRUNE = 1e-12
MAX_DENOMINATOR = 10**6
INF_ORDER = math.inf


class TruncationUnderflowError(ArithmeticError):
    """No terms survive below the truncation order; raise the order."""


def _frac(q):
    if isinstance(q, Fraction):
        f = q
    elif isinstance(q, float):
        f = Fraction(q).limit_denominator(MAX_DENOMINATOR)
    else:
        f = Fraction(q)
    if f.denominator > MAX_DENOMINATOR or abs(f.numerator) > MAX_DENOMINATOR**2:
        raise OverflowError(f"exponent {f} exceeds the exact-rational bounds")
    return f


def _min(a, b):
    return a if a <= b else b


class PuiseuxSeries:
    __slots__ = ("terms", "trunc")

    def __init__(self, terms=(), trunc=DEFAULT_ORDER):
        # terms are (q, c) or (q, c, gross) where gross bounds the magnitude
        # of the summands that produced c
        acc = {}
        for term in terms:
            q, c = _frac(term[0]), complex(term[1])
            g = term[2] if len(term) > 2 else abs(c)
            s, h = acc.get(q, (0j, 0.0))
            acc[q] = (s + c, h + g)
        if trunc is not INF_ORDER and trunc != math.inf:
            trunc = _frac(trunc)
        items = [(q, c) for q, (c, g) in sorted(acc.items()) if q < trunc and c != 0 and abs(c) > PRUNE * g]
        object.__setattr__(self, "terms", tuple(items))
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, *a):
        raise AttributeError("PuiseuxSeries is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, c, trunc=DEFAULT_ORDER):
        return cls([(0, c)], trunc)

    @classmethod
    def monomial(cls, c, q, trunc=DEFAULT_ORDER):
        return cls([(q, c)], trunc)

    @classmethod
    def zero(cls):
        return cls((), INF_ORDER)

    # -- basic queries ------------------------------------------------------

    @property
    def is_exact_zero(self):
        return not self.terms and self.trunc == INF_ORDER

    @property
    def is_underflow(self):
        return not self.terms and self.trunc != INF_ORDER

    @property
    def valuation(self):
        if self.terms:
            return self.terms[0][0]
        if self.trunc == INF_ORDER:
            return INF_ORDER
        raise TruncationUnderflowError(f"all terms cancelled below O(t^{self.trunc})")

    @property
    def leading(self):
        if not self.terms:
            if self.trunc == INF_ORDER:
                return 0j
            raise TruncationUnderflowError(f"all terms cancelled below O(t^{self.trunc})")
        return self.terms[0][1]

    def abs(self):
        v = self.valuation
        return 0.0 if v == INF_ORDER else math.exp(-v)

    def __abs__(self):
        return self.abs()

    def reduce(self):
        """Residue in C of an element of the valuation ring."""
        v = self.valuation
        if v < 0:
            raise ValueError(f"|x| = e^{-v} > 1: not in the ring of integers")
        if v == 0:
            return self.terms[0][1]
        return 0j

    def evaluate_at(self, t0):
        """(value, error bound) at t = t0 using the principal branch."""
        t0 = complex(t0)
        val = 0j
        for q, c in self.terms:
            val += c * _cpow(t0, q)
        err = 0.0 if self.trunc == INF_ORDER else abs(t0) ** float(self.trunc)
        return val, err

    def __call__(self, t0):
        return self.evaluate_at(t0)[0]

    def truncate(self, order):
        return PuiseuxSeries(self.terms, _min(self.trunc, _frac(order)))

    def coefficient(self, q):
        q = _frac(q)
        for e, c in self.terms:
            if e == q:
                return c
        return 0j

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def coerce(x):
        if isinstance(x, PuiseuxSeries):
            return x
        if isinstance(x, (int, float, complex, Fraction)):
            if x == 0:
                return PuiseuxSeries.zero()
            return PuiseuxSeries([(0, complex(x))], INF_ORDER)
        raise TypeError(f"cannot coerce {type(x).__name__} to a Puiseux series")

    def __neg__(self):
        return PuiseuxSeries([(q, -c) for q, c in self.terms], self.trunc)

    def __add__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        trunc = _min(self.trunc, other.trunc)
        return PuiseuxSeries(self.terms + other.terms, trunc)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self.coerce(other) - self

    def __mul__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_exact_zero or other.is_exact_zero:
            return PuiseuxSeries.zero()
        vx, vy = self.valuation, other.valuation
        trunc = _min(_add_order(self.trunc, vy), _add_order(other.trunc, vx))
        terms = []
        for q1, c1 in self.terms:
            for q2, c2 in other.terms:
                q = q1 + q2
                if q < trunc:
                    terms.append((q, c1 * c2))
        return PuiseuxSeries(terms, trunc)

    __rmul__ = __mul__

    def inverse(self, order=None):
        """1/x; the relative precision of x carries over, or ``order`` terms if exact."""
        if self.is_exact_zero:
            raise ZeroDivisionError("division by the zero series")
        v, c = self.valuation, self.leading
        rel = self.trunc - v if self.trunc != INF_ORDER else (order if order is not None else DEFAULT_ORDER)
        # x = c t^v (1 + u) with v(u) > 0
        u = [(q - v, a / c) for q, a in self.terms[1:]]
        inv_unit = _unit_power(u, -1, rel)
        return PuiseuxSeries([(q - v, a / c, g / abs(c)) for q, a, g in inv_unit], -v + rel)

    def __truediv__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_exact_zero:
            if other.is_exact_zero:
                raise ZeroDivisionError("division by the zero series")
            return PuiseuxSeries.zero()
        return self * other.inverse(order=_rel_order(self))

    def __rtruediv__(self, other):
        return self.coerce(other) / self

    def __pow__(self, p):
        if isinstance(p, int):
            if p == 0:
                return PuiseuxSeries.coerce(1)
            if p < 0:
                return (self**-p).inverse()
            out, base = None, self
            while p:
                if p & 1:
                    out = base if out is None else out * base
                base = base * base
                p >>= 1
            return out
        return self.rpow(p)

    def rpow(self, p, order=None):
        """x^p for rational p, principal branch of the leading coefficient."""
        p = _frac(p)
        if p.denominator == 1:
            return self ** int(p)
        if self.is_exact_zero:
            if p > 0:
                return PuiseuxSeries.zero()
            raise ZeroDivisionError("negative power of zero")
        v, c = self.valuation, self.leading
        rel = self.trunc - v if self.trunc != INF_ORDER else (order if order is not None else DEFAULT_ORDER)
        u = [(q - v, a / c) for q, a in self.terms[1:]]
        unit = _unit_power(u, p, rel)
        cp = _cpow(c, p)
        return PuiseuxSeries([(q + v * p, cp * a, abs(cp) * g) for q, a, g in unit], v * p + rel)

    def sqrt(self, order=None):
        return self.rpow(Fraction(1, 2), order)

    # -- comparisons and display --------------------------------------------

    def close_to(self, other, tol=1e-9):
        """Equal as truncated series: same exponents below the common order."""
        other = self.coerce(other)
        trunc = _min(self.trunc, other.trunc)
        a = {q: c for q, c in self.terms if q < trunc}
        b = {q: c for q, c in other.terms if q < trunc}
        scale = max([1.0] + [abs(c) for c in a.values()] + [abs(c) for c in b.values()])
        for q in set(a) | set(b):
            if abs(a.get(q, 0) - b.get(q, 0)) > tol * scale:
                return False
        return True

    def __eq__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return self.trunc == other.trunc and self.close_to(other, 0.0)

    def __hash__(self):
        return hash((self.terms, self.trunc))

    def __repr__(self):
        return f"PuiseuxSeries({self})"

    def __str__(self):
        parts = []
        for q, c in self.terms:
            parts.append(f"{_fmt_c(c)}*t^({q})" if q != 0 else _fmt_c(c))
        if self.trunc != INF_ORDER:
            parts.append(f"O(t^({self.trunc}))")
        return " + ".join(parts) if parts else "0"

    def to_dict(self):
        return {
            "terms": [[str(q), [c.real, c.imag]] for q, c in self.terms],
            "truncation_order": None if self.trunc == INF_ORDER else str(self.trunc),
        }


def _fmt_c(c):
    if c.imag == 0:
        return f"{c.real:.12g}"
    return f"({c.real:.12g}{c.imag:+.12g}j)"


def _add_order(trunc, v):
    if trunc == INF_ORDER or v == INF_ORDER:
        return INF_ORDER
    return trunc + v


def _rel_order(x):
    if x.trunc == INF_ORDER or not x.terms:
        return None
    return x.trunc - x.valuation


def _cpow(z, q):
    if q == 0:
        return 1 + 0j
    if z == 0:
        return 0j
    q = Fraction(q)
    if q.denominator == 1:
        return complex(z) ** int(q)
    return cmath.exp(float(q) * cmath.log(complex(z)))


def _unit_power(u, p, rel):
    """Terms (q, c, gross) of (1 + u)^p below exponent ``rel`` (u has positive exponents)."""
    p = Fraction(p)
    result = [(Fraction(0), 1 + 0j, 1.0)]
    if not u:
        return result
    vmin = min(q for q, _ in u)
    kmax = int(math.ceil(rel / vmin)) + 1 if vmin > 0 else 0
    power = {Fraction(0): (1 + 0j, 1.0)}  # u^k as q -> (coefficient, gross)
    binom = 1.0
    for k in range(1, kmax + 1):
        nxt = {}
        for q1, (c1, g1) in power.items():
            for q2, c2 in u:
                q = q1 + q2
                if q < rel:
                    s, h = nxt.get(q, (0j, 0.0))
                    nxt[q] = (s + c1 * c2, h + g1 * abs(c2))
        power = nxt
        if not power:
            break
        binom *= float(p - k + 1) / k
        if binom == 0:
            break
        result.extend((q, binom * c, abs(binom) * g) for q, (c, g) in power.items())
    return result


def series(x, trunc=DEFAULT_ORDER):
    """Coerce numbers or strings to a series with the given truncation order."""
    if isinstance(x, PuiseuxSeries):
        return x
    if isinstance(x, str):
        return parse_series(x, trunc)
    if x == 0:
        return PuiseuxSeries.zero()
    return PuiseuxSeries([(0, complex(x))], trunc)


T = PuiseuxSeries([(1, 1.0)], DEFAULT_ORDER)


# --------------------------------------------------------------------------
# the family mini-language


class _Eval(ast.NodeVisitor):
    def __init__(self, trunc):
        self.trunc = trunc

    def generic_visit(self, node):
        raise ValueError(f"unsupported syntax: {ast.dump(node)}")

    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_Constant(self, node):
        v = node.value
        if isinstance(v, bool) or not isinstance(v, (int, float, complex)):
            raise ValueError(f"unsupported literal {v!r}")
        if isinstance(v, float):
            return Fraction(repr(v))
        if isinstance(v, complex):
            return complex(v)
        return Fraction(v)

    def visit_Name(self, node):
        if node.id == "t":
            return PuiseuxSeries([(1, 1.0)], self.trunc)
        if node.id in ("i", "I", "j"):
            return 1j
        raise ValueError(f"unknown name {node.id!r}; only t and i are allowed")

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise ValueError("unsupported unary operator")

    def visit_BinOp(self, node):
        a = self.visit(node.left)
        b = self.visit(node.right)
        op = node.op
        if isinstance(op, ast.Add):
            return _lift(a, self.trunc) + _lift(b, self.trunc) if _is_series(a, b) else a + b
        if isinstance(op, ast.Sub):
            return _lift(a, self.trunc) - _lift(b, self.trunc) if _is_series(a, b) else a - b
        if isinstance(op, ast.Mult):
            return _lift(a, self.trunc) * _lift(b, self.trunc) if _is_series(a, b) else a * b
        if isinstance(op, ast.Div):
            if _is_series(a, b):
                return _lift(a, self.trunc) / _lift(b, self.trunc)
            return a / b
        if isinstance(op, ast.Pow):
            if isinstance(b, PuiseuxSeries) or isinstance(b, complex):
                raise ValueError("exponents must be rational constants")
            if isinstance(a, PuiseuxSeries):
                return a.rpow(b) if Fraction(b).denominator != 1 else a ** int(b)
            if Fraction(b).denominator != 1:
                return _cpow(complex(a), b)
            return a ** int(b)
        raise ValueError("unsupported operator")


def _is_series(a, b):
    return isinstance(a, PuiseuxSeries) or isinstance(b, PuiseuxSeries)


def _lift(x, trunc):
    if isinstance(x, PuiseuxSeries):
        return x
    return series(complex(x), trunc)


def parse_series(text, trunc=DEFAULT_ORDER):
    """Parse e.g. ``"t^(3/2) + 2*t^2"`` or ``"1/2 - i*t"``."""
    src = text.strip().replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse series {text!r}: {exc.msg}") from None
    val = _Eval(Fraction(trunc)).visit(tree)
    return _lift(val, Fraction(trunc)) if not isinstance(val, PuiseuxSeries) else val


def parse_family(text, trunc=DEFAULT_ORDER):
    """Parse ``"r = t; s = 1/2"`` or ``"roots = -1, -t, 0, t, 1"``.

    Returns a dict with keys ``r``/``s`` or ``roots``.
    """
    out = {}
    for part in [p for p in text.split(";") if p.strip()]:
        if "=" not in part:
            raise ValueError(f"expected name = value in {part!r}")
        name, val = (s.strip() for s in part.split("=", 1))
        if name == "roots":
            vals = _split_top_level(val.strip().strip("[]"))
            out["roots"] = [parse_series(v, trunc) for v in vals]
        elif name in ("r", "s"):
            out[name] = parse_series(val, trunc)
        else:
            raise ValueError(f"unknown family key {name!r}")
    if "roots" not in out and not ("r" in out and "s" in out):
        raise ValueError("a family needs r and s, or roots")
    return out


def _split_top_level(s):
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return [p.strip() for p in parts]
