"""Exact arithmetic in the degree-16 real field Q(u, t), u^4 = 2, t^4 = t^2 + 1.

Here u = 2^(1/4) is the square root of the string value da = sqrt(2) and
t = sqrt((1 + sqrt(5))/2) is the square root of the golden ratio db.  Every
scalar in the workbench lives in this field: the vertex weights are monomials
da^eps * db^m, their square roots are u^eps * t^m, and all coefficient tables
are (half-integer) powers of db, i.e. integer powers of t.

Elements are stored as sparse dicts {(i, j): mpq} over the basis u^i t^j with
0 <= i, j <= 3.
"""

from __future__ import annotations

from typing import NamedTuple

import mpmath
from gmpy2 import mpq

__all__ = [
    "FieldElement",
    "WeightMonomial",
    "ZERO",
    "ONE",
    "U",
    "T",
    "DELTA_A",
    "DELTA_B",
    "DELTA",
    "upow",
    "tpow",
    "db_pow",
    "db_half",
    "fe_add",
    "fe_sub",
    "fe_mul",
    "fe_neg",
    "fe_inv",
    "fe_sign",
    "fe_sqrt_ratio",
    "from_int",
]

_MPQ0 = mpq(0)
_MPQ1 = mpq(1)

# t^e reduced to sum(coeff * t^j), as tuples of (j, coeff), for e = 0..6.
# t^4 = t^2 + 1, t^5 = t^3 + t, t^6 = 2 t^2 + 1.
_T_RED = {
    0: ((0, _MPQ1),),
    1: ((1, _MPQ1),),
    2: ((2, _MPQ1),),
    3: ((3, _MPQ1),),
    4: ((0, _MPQ1), (2, _MPQ1)),
    5: ((1, _MPQ1), (3, _MPQ1)),
    6: ((0, _MPQ1), (2, mpq(2))),
}


class FieldElement:
    """Immutable element of Q(u, t); sparse coords over the basis u^i t^j."""

    __slots__ = ("c", "_hash")

    def __init__(self, coords=None, _clean=False):
        if coords is None:
            self.c = {}
        elif _clean:
            self.c = coords
        else:
            self.c = {
                k: mpq(v) for k, v in dict(coords).items() if v != 0
            }
        self._hash = None

    # -- basic predicates ------------------------------------------------
    def is_zero(self):
        return not self.c

    def __bool__(self):
        return bool(self.c)

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.c)
        for k, v in other.c.items():
            s = out.get(k, _MPQ0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return FieldElement(out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement({k: -v for k, v in self.c.items()}, _clean=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = {}
        for (i1, j1), c1 in self.c.items():
            for (i2, j2), c2 in other.c.items():
                e = i1 + i2
                coeff = c1 * c2
                if e >= 4:
                    e -= 4
                    coeff *= 2
                for j, tc in _T_RED[j1 + j2]:
                    k = (e, j)
                    s = out.get(k, _MPQ0) + coeff * tc
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return FieldElement(out, _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inv(self):
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        if not self.c:
            raise ZeroDivisionError("inverse of zero field element")
        # Solve self * y = 1 as a 16x16 rational linear system: the columns
        # of the matrix are self * (basis monomial).
        basis = [(i, j) for i in range(4) for j in range(4)]
        idx = {b: r for r, b in enumerate(basis)}
        mat = [[_MPQ0] * 16 for _ in range(16)]
        rhs = [_MPQ0] * 16
        rhs[0] = _MPQ1
        for col, b in enumerate(basis):
            prod = self * FieldElement({b: _MPQ1}, _clean=True)
            for k, v in prod.c.items():
                mat[idx[k]][col] = v
        sol = _solve16(mat, rhs)
        return FieldElement(
            {basis[r]: sol[r] for r in range(16) if sol[r]}, _clean=True
        )

    # -- comparisons -----------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.c.items()))
        return self._hash

    # -- real embedding --------------------------------------------------
    def sign(self):
        return fe_sign(self)

    def interval(self, prec=80):
        """Enclosing interval under the real embedding u, t > 0."""
        iv = mpmath.iv
        old = iv.prec
        try:
            iv.prec = prec
            uu = iv.sqrt(iv.sqrt(2))
            tt = iv.sqrt((1 + iv.sqrt(5)) / 2)
            upows = [iv.mpf(1), uu, uu * uu, uu * uu * uu]
            tpows = [iv.mpf(1), tt, tt * tt, tt * tt * tt]
            total = iv.mpf(0)
            for (i, j), v in self.c.items():
                total += (
                    iv.mpf(int(v.numerator)) / iv.mpf(int(v.denominator))
                ) * upows[i] * tpows[j]
            return total
        finally:
            iv.prec = old

    def approx(self):
        """Float approximation under the real embedding (for display only)."""
        import math

        uu = 2 ** 0.25
        tt = math.sqrt((1 + math.sqrt(5)) / 2)
        return sum(float(v) * uu**i * tt**j for (i, j), v in self.c.items())

    # -- serialization ---------------------------------------------------
    def to_json(self):
        """16 'p/q' strings in row-major (i, j) order."""
        return [
            str(self.c.get((i, j), _MPQ0))
            for i in range(4)
            for j in range(4)
        ]

    @classmethod
    def from_json(cls, strings):
        coords = {}
        it = iter(strings)
        for i in range(4):
            for j in range(4):
                v = mpq(next(it))
                if v:
                    coords[(i, j)] = v
        return cls(coords, _clean=True)

    def __repr__(self):
        if not self.c:
            return "0"
        # Pretty-print a +-t^k value as a half-integer power of phi.
        if all(i == 0 for (i, _) in self.c):
            tk = _t_exponent_of(self)
            if tk is not None:
                sign = "-" if self == -tpow(tk) else ""
                if tk % 2 == 0:
                    return f"{sign}phi^{tk // 2}"
                return f"{sign}phi^({tk}/2)"
        parts = []
        for (i, j) in sorted(self.c):
            v = self.c[(i, j)]
            mon = []
            if i:
                mon.append("u" if i == 1 else f"u^{i}")
            if j:
                mon.append("t" if j == 1 else f"t^{j}")
            s = f"({v})"
            if mon:
                s += "*" + "*".join(mon)
            parts.append(s)
        return " + ".join(parts)


def _coerce(x):
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, int) or isinstance(x, type(_MPQ0)):
        v = mpq(x)
        if v == 0:
            return ZERO
        return FieldElement({(0, 0): v}, _clean=True)
    return NotImplemented


def _solve16(mat, rhs):
    """Gaussian elimination for a dense 16x16 rational system."""
    n = 16
    a = [row[:] + [rhs[r]] for r, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                arow, prow = a[r], a[col]
                for cc in range(col, n + 1):
                    arow[cc] -= f * prow[cc]
    return [a[r][n] for r in range(n)]


def _t_exponent_of(x):
    """If x = +- t^k (k any integer), return k, else None."""
    for k in range(-64, 65):
        p = tpow(k)
        if x == p or x == -p:
            return k
    return None


# -- distinguished constants ----------------------------------------------
ZERO = FieldElement({}, _clean=True)
ONE = FieldElement({(0, 0): _MPQ1}, _clean=True)
U = FieldElement({(1, 0): _MPQ1}, _clean=True)
T = FieldElement({(0, 1): _MPQ1}, _clean=True)
DELTA_A = FieldElement({(2, 0): _MPQ1}, _clean=True)
DELTA_B = FieldElement({(0, 2): _MPQ1}, _clean=True)
DELTA = FieldElement({(2, 2): _MPQ1}, _clean=True)

# t^-1 = t^3 - t, u^-1 = u^3 / 2.
_T_INV = FieldElement({(0, 3): _MPQ1, (0, 1): -_MPQ1}, _clean=True)
_U_INV = FieldElement({(3, 0): mpq(1, 2)}, _clean=True)

_tpow_cache = {0: ONE, 1: T, -1: _T_INV}
_upow_cache = {0: ONE, 1: U, -1: _U_INV}


def tpow(k):
    """t^k = db^(k/2) for any integer k."""
    v = _tpow_cache.get(k)
    if v is None:
        if k > 0:
            v = tpow(k - 1) * T
        else:
            v = tpow(k + 1) * _T_INV
        _tpow_cache[k] = v
    return v


def upow(k):
    """u^k = da^(k/2) for any integer k."""
    v = _upow_cache.get(k)
    if v is None:
        if k > 0:
            v = upow(k - 1) * U
        else:
            v = upow(k + 1) * _U_INV
        _upow_cache[k] = v
    return v


def db_pow(m):
    """db^m for integer m."""
    return tpow(2 * m)


def db_half(k):
    """db^(k/2) for integer k (the coefficient tables' half-powers)."""
    return tpow(k)


def from_int(v):
    return _coerce(v)


def fe_add(x, y):
    return x + y


def fe_sub(x, y):
    return x - y


def fe_mul(x, y):
    return x * y


def fe_neg(x):
    return -x


def fe_inv(x):
    return x.inv()


def fe_sign(x):
    """Sign of x under the real embedding u -> 2^(1/4), t -> sqrt(phi).

    Zero is decided symbolically; otherwise interval refinement terminates
    because the embedding is injective.
    """
    if x.is_zero():
        return 0
    prec = 64
    while True:
        iv = x.interval(prec)
        if iv.a > 0:
            return 1
        if iv.b < 0:
            return -1
        prec *= 2
        if prec > 1 << 20:  # pragma: no cover - safety net
            raise RuntimeError("interval refinement failed to separate from 0")


class WeightMonomial(NamedTuple):
    """A vertex weight coeff * da^eps * db^m with an exact square root when
    coeff == 1 (the only case the tangle formulas take roots of)."""

    eps: int
    m: int
    coeff: int = 1

    def value(self):
        return from_int(self.coeff) * upow(2 * self.eps) * tpow(2 * self.m)

    def sqrt(self):
        if self.coeff != 1:
            raise ValueError("square root only available for monic weights")
        return upow(self.eps) * tpow(self.m)

    def __str__(self):
        parts = []
        if self.coeff != 1:
            parts.append(str(self.coeff))
        if self.eps:
            parts.append("da" if self.eps == 1 else f"da^{self.eps}")
        if self.m:
            parts.append(f"db^{self.m}" if self.m != 1 else "db")
        return "*".join(parts) if parts else "1"


def fe_sqrt_ratio(num: WeightMonomial, den: WeightMonomial) -> FieldElement:
    """Exact square root of num/den for monomial weights."""
    if num.coeff != den.coeff:
        raise ValueError("sqrt of a non-monic weight ratio")
    return upow(num.eps - den.eps) * tpow(num.m - den.m)
