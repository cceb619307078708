"""Exact scalar arithmetic: rationals and real algebraic numbers.

Every interval endpoint in the games lives in one of two worlds:

* plain rationals, represented by :class:`fractions.Fraction`;
* elements of Q(beta) for an algebraic beta pinned down by an integer
  polynomial together with an isolating enclosure (a rational interval
  containing exactly one real root).

All comparisons are decided exactly.  Quadratic fields (the common case:
golden-ratio style bases, quadratic continued-fraction targets) get a
closed-form sign test; higher degrees fall back to enclosure refinement
with a Sturm-based zero test, guarded by a bisection budget.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "AlgebraicField",
    "AlgebraicNumber",
    "RefinementBudgetExceeded",
    "Scalar",
    "as_fraction",
    "scalar_add",
    "scalar_mul",
    "scalar_neg",
    "scalar_inv",
    "scalar_sub",
    "scalar_div",
    "scalar_compare",
    "scalar_sign",
    "scalar_floor",
    "scalar_min",
    "scalar_max",
    "scalar_abs",
    "scalar_to_float",
    "scalar_to_json",
    "scalar_from_json",
]

Scalar = Union[Fraction, "AlgebraicNumber"]

DEFAULT_BISECTION_BUDGET = 64


class RefinementBudgetExceeded(Exception):
    """Enclosure refinement did not resolve a sign within the budget.

    Signals a mis-specified defining polynomial (or an adversarially tiny
    value); the budget is configurable per field.
    """


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


# ---------------------------------------------------------------------------
# dense polynomial helpers over Fraction, lowest degree first


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(p: Sequence[Fraction], q: Sequence[Fraction]) -> list:
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return _trim(out)


def poly_neg(p: Sequence[Fraction]) -> list:
    return [-c for c in p]


def poly_sub(p, q) -> list:
    return poly_add(p, poly_neg(q))


def poly_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> list:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def poly_divmod(p: Sequence[Fraction], q: Sequence[Fraction]) -> tuple[list, list]:
    q = _trim(list(q))
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    _trim(rem)
    quot = [Fraction(0)] * max(0, len(rem) - len(q) + 1)
    lead = q[-1]
    while len(rem) >= len(q):
        factor = rem[-1] / lead
        shift = len(rem) - len(q)
        quot[shift] = factor
        for i, c in enumerate(q):
            rem[shift + i] -= factor * c
        _trim(rem)
        if not rem:
            break
    return _trim(quot), rem


def poly_mod(p, q) -> list:
    return poly_divmod(p, q)[1]


def poly_gcd(p: Sequence[Fraction], q: Sequence[Fraction]) -> list:
    a, b = _trim(list(p)), _trim(list(q))
    while b:
        a, b = b, poly_mod(a, b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def poly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_deriv(p: Sequence[Fraction]) -> list:
    return _trim([c * i for i, c in enumerate(p)][1:])


def poly_eval_interval(p: Sequence[Fraction], lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Interval Horner evaluation: encloses {p(x) : x in [lo, hi]}."""
    alo, ahi = Fraction(0), Fraction(0)
    for c in reversed(p):
        cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(cands) + c, max(cands) + c
    return alo, ahi


def sturm_chain(p: Sequence[Fraction]) -> list:
    chain = [_trim(list(p)), poly_deriv(p)]
    while chain[-1]:
        nxt = poly_neg(poly_mod(chain[-2], chain[-1]))
        if not nxt:
            break
        chain.append(nxt)
    return [c for c in chain if c]


def _sign_changes(chain: list, x: Fraction) -> int:
    signs = []
    for p in chain:
        v = poly_eval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Sequence[Fraction], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of p in (lo, hi], via Sturm's theorem."""
    chain = sturm_chain(p)
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


# ---------------------------------------------------------------------------


class AlgebraicField(object):
    """Q(beta) for the unique root beta of ``poly`` inside an enclosure.

    ``poly`` has integer coefficients, lowest degree first, and need not be
    irreducible: the isolating enclosure, not factorization, pins the root.
    The enclosure always brackets a strict sign change of ``poly`` and is
    refined in place by bisection when comparisons demand it.
    """

    __slots__ = (
        "poly",
        "lo",
        "hi",
        "degree",
        "budget",
        "_monic_rule",
        "_zero",
        "_one",
        "_key",
        "_int_poly",
        "_plo_sign",
    )

    def __init__(self, poly: Iterable[int], lo, hi, budget: int = DEFAULT_BISECTION_BUDGET):
        self.poly = [Fraction(c) for c in poly]
        _trim(self.poly)
        if len(self.poly) < 3:
            raise ValueError("defining polynomial must have degree >= 2")
        if any(c.denominator != 1 for c in self.poly):
            raise ValueError("defining polynomial must have integer coefficients")
        self._int_poly = [int(c) for c in self.poly]
        self.degree = len(self.poly) - 1
        self.lo = as_fraction(lo)
        self.hi = as_fraction(hi)
        self.budget = budget
        self._key = (tuple(self.poly), self.lo, self.hi)
        plo, phi = poly_eval(self.poly, self.lo), poly_eval(self.poly, self.hi)
        if plo == 0 or phi == 0 or (plo > 0) == (phi > 0):
            raise ValueError("enclosure endpoints must give a strict sign change")
        self._plo_sign = 1 if plo > 0 else -1
        if count_roots(self.poly, self.lo, self.hi) != 1:
            raise ValueError("enclosure must isolate exactly one root")
        n = self.lo.__ceil__()
        while n <= self.hi:
            if poly_eval(self.poly, Fraction(n)) == 0:
                raise ValueError("isolated root is an integer; use a Fraction instead")
            n += 1
        # beta**degree expressed in lower powers, used to reduce products.
        lead = self.poly[-1]
        self._monic_rule = [-c / lead for c in self.poly[:-1]]
        self._zero = AlgebraicNumber(self, ())
        self._one = AlgebraicNumber(self, (Fraction(1),))

    def __repr__(self):
        return f"AlgebraicField(poly={[str(c) for c in self.poly]}, enclosure=({self.lo},{self.hi}))"

    def __eq__(self, other):
        # keyed on construction data; the live enclosure shrinks over time
        return isinstance(other, AlgebraicField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    # -- construction helpers

    @classmethod
    def from_root_in(cls, poly: Iterable[int], lo, hi, bisections: int = 16, **kw) -> "AlgebraicField":
        """Isolate a root of poly inside [lo, hi] by bisection, then build the field."""
        poly = [Fraction(c) for c in poly]
        lo, hi = as_fraction(lo), as_fraction(hi)
        if poly_eval(poly, lo) == 0 or poly_eval(poly, hi) == 0:
            raise ValueError("bracket endpoints must not be roots")
        if (poly_eval(poly, lo) > 0) == (poly_eval(poly, hi) > 0):
            raise ValueError("no sign change on the bracket")
        for _ in range(bisections):
            if count_roots(poly, lo, hi) == 1:
                break
            mid = (lo + hi) / 2
            if poly_eval(poly, mid) == 0:
                mid = (lo + 2 * hi) / 3
            if (poly_eval(poly, lo) > 0) != (poly_eval(poly, mid) > 0):
                hi = mid
            else:
                lo = mid
        return cls(poly, lo, hi, **kw)

    def element(self, coeffs) -> "AlgebraicNumber":
        return AlgebraicNumber(self, coeffs)

    def generator(self) -> "AlgebraicNumber":
        """The root beta itself."""
        return AlgebraicNumber(self, (Fraction(0), Fraction(1)))

    def zero(self) -> "AlgebraicNumber":
        return self._zero

    def one(self) -> "AlgebraicNumber":
        return self._one

    def lift(self, x) -> "AlgebraicNumber":
        if isinstance(x, AlgebraicNumber):
            if x.field is not self and x.field != self:
                raise ValueError("cannot mix elements of different fields")
            return x
        return AlgebraicNumber(self, (as_fraction(x),))

    # -- root enclosure maintenance

    def refine_once(self) -> None:
        mid = (self.lo + self.hi) / 2
        pm = poly_eval(self.poly, mid)
        if pm == 0:  # impossible for irrational isolated roots; keep a strict bracket
            mid = (self.lo + 2 * self.hi) / 3
            pm = poly_eval(self.poly, mid)
        if (pm > 0) == (self._plo_sign > 0):
            self.lo = mid
        else:
            self.hi = mid

    def reduce(self, coeffs: Sequence[Fraction]) -> tuple:
        """Reduce a coefficient vector modulo the defining polynomial."""
        coeffs = list(coeffs)
        while len(coeffs) > self.degree:
            top = coeffs.pop()
            if top == 0:
                continue
            shift = len(coeffs) - self.degree
            for i, c in enumerate(self._monic_rule):
                coeffs[shift + i] += top * c
        return tuple(_trim(coeffs))

    # -- exact sign determination

    def sign_of(self, coeffs: Sequence[Fraction]) -> int:
        if isinstance(coeffs, tuple) and len(coeffs) <= self.degree:
            r = coeffs  # element coefficients are kept reduced
        else:
            r = self.reduce(coeffs)
        if not r:
            return 0
        if len(r) == 1:
            v = r[0]
            return 1 if v > 0 else (-1 if v < 0 else 0)
        if self.degree == 2:
            return self._sign_quadratic(r)
        return self._sign_refine(r)

    def _root_greater_than(self, t: Fraction) -> bool:
        """Exact comparison beta > t for rational t (t not equal to beta)."""
        if t <= self.lo:
            return True
        if t >= self.hi:
            return False
        pt = poly_eval(self.poly, t)
        # the sign change lies in [t, hi] iff p(t) agrees in sign with p(lo)
        return (pt > 0) == (self._plo_sign > 0)

    def _sign_quadratic(self, r: tuple) -> int:
        """sign(a + b*beta) for quadratic fields, in pure integer arithmetic.

        Writing -a/b = u/v with v > 0, the sign is sb * sign(beta - u/v);
        the comparison against the enclosure and the evaluation of the
        defining polynomial at u/v clear denominators to stay in Z.
        """
        a, b = r[0], r[1]
        sb = 1 if b > 0 else -1
        u = -a.numerator * b.denominator
        v = a.denominator * b.numerator
        if v < 0:
            u, v = -u, -v
        c0, c1, c2 = self._int_poly
        pt = c2 * u * u + c1 * u * v + c0 * v * v  # sign of p(u/v)
        lo, hi = self.lo, self.hi
        lo_cmp = u * lo.denominator - lo.numerator * v  # sign of t - lo
        if pt == 0 and lo_cmp > 0 and u * hi.denominator < hi.numerator * v:
            return 0  # t is the isolated root itself
        if lo_cmp <= 0:
            root_gt = True
        elif u * hi.denominator >= hi.numerator * v:
            root_gt = False
        else:
            root_gt = (pt > 0) == (self._plo_sign > 0)
        return sb if root_gt else -sb

    def _sign_refine(self, r: tuple) -> int:
        rl = list(r)
        g = poly_gcd(rl, self.poly)
        if len(g) > 1:
            glo, ghi = poly_eval(g, self.lo), poly_eval(g, self.hi)
            if glo == 0 or ghi == 0:
                raise ArithmeticError("enclosure endpoint is a root of the gcd")
            if (glo > 0) != (ghi > 0):
                return 0  # beta is a root of the expression
        for _ in range(self.budget):
            vlo, vhi = poly_eval_interval(rl, self.lo, self.hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            self.refine_once()
        raise RefinementBudgetExceeded(
            f"sign of degree-{len(r) - 1} expression unresolved after {self.budget} bisections"
        )

    def float_root(self) -> float:
        return float((self.lo + self.hi) / 2)


class AlgebraicNumber(object):
    """An element of an :class:`AlgebraicField`, as a polynomial in beta.

    Immutable; supports mixed arithmetic with ints and Fractions and exact
    total-order comparison.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: AlgebraicField, coeffs):
        self.field = field
        self.coeffs = field.reduce([as_fraction(c) for c in coeffs])

    @classmethod
    def _raw(cls, field, coeffs: tuple) -> "AlgebraicNumber":
        """Construct from already-reduced coefficients, no copies."""
        self = object.__new__(cls)
        self.field = field
        self.coeffs = coeffs
        return self

    # -- helpers

    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("cannot mix elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.field, (as_fraction(other),))
        return NotImplemented

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def rational_value(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        if len(self.coeffs) == 1:
            return self.coeffs[0]
        raise ValueError("not a rational element")

    def sign(self) -> int:
        return self.field.sign_of(self.coeffs)

    # -- arithmetic

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        # sums never leave the reduced range
        return AlgebraicNumber._raw(self.field, tuple(poly_add(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber._raw(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return AlgebraicNumber._raw(self.field, tuple(poly_sub(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return AlgebraicNumber._raw(self.field, tuple(poly_sub(o.coeffs, self.coeffs)))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if self.field.degree == 2:
            a0 = a[0] if a else None
            b0 = b[0] if b else None
            if a0 is None or b0 is None:
                return self.field._zero
            a1 = a[1] if len(a) > 1 else None
            b1 = b[1] if len(b) > 1 else None
            if a1 is None and b1 is None:
                return AlgebraicNumber._raw(self.field, (a0 * b0,))
            r0, r1 = self.field._monic_rule
            if a1 is None:
                return AlgebraicNumber._raw(self.field, (a0 * b0, a0 * b1))
            if b1 is None:
                return AlgebraicNumber._raw(self.field, (a0 * b0, a1 * b0))
            cross = a1 * b1
            c0 = a0 * b0 + cross * r0
            c1 = a0 * b1 + a1 * b0 + cross * r1
            if c1 == 0:
                return AlgebraicNumber._raw(self.field, (c0,) if c0 else ())
            return AlgebraicNumber._raw(self.field, (c0, c1))
        return AlgebraicNumber(self.field, poly_mul(a, b))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        """Multiplicative inverse, valid as a value at beta.

        The defining polynomial may be reducible, so we strip common factors
        until the element is coprime with the modulus that still carries the
        isolated root, then run the extended Euclidean algorithm.
        """
        if self.sign() == 0:
            raise ZeroDivisionError("inverse of zero")
        a = list(self.coeffs)
        modulus = list(self.field.poly)
        while True:
            g = poly_gcd(a, modulus)
            if len(g) <= 1:
                break
            # beta is not a root of g (else self would be zero), so it is a
            # root of modulus / g; inverting modulo the cofactor preserves
            # the value at beta.
            modulus, rem = poly_divmod(modulus, g)
            if rem:
                raise ArithmeticError("gcd does not divide modulus")
        # extended Euclid: find u with a*u = 1 mod modulus
        r0, r1 = modulus, a
        s0, s1 = [], [Fraction(1)]
        while _trim(r1):
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        if len(r0) != 1:
            raise ArithmeticError("element not invertible at the isolated root")
        inv = [c / r0[0] for c in s0]
        return AlgebraicNumber(self.field, inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = AlgebraicNumber(self.field, (Fraction(1),))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparisons

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare AlgebraicNumber with {type(other)}")
        return (self - o).sign()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return self._cmp(other) == 0
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    __hash__ = None  # representation-dependent hashing would be a trap

    # -- conversion / display

    def __float__(self):
        if self.is_rational():
            return float(self.rational_value())
        lo, hi = poly_eval_interval(list(self.coeffs), self.field.lo, self.field.hi)
        for _ in range(80):
            if hi - lo < Fraction(1, 10**17) * (1 + abs(hi)):
                break
            self.field.refine_once()
            lo, hi = poly_eval_interval(list(self.coeffs), self.field.lo, self.field.hi)
        return float((lo + hi) / 2)

    def __repr__(self):
        terms = " + ".join(f"{c}*b^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs)) or "0"
        return f"<{terms} ~ {float(self):.6g}>"


# ---------------------------------------------------------------------------
# scalar-level dispatch


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, AlgebraicNumber))


def _pair(a, b):
    """Lift a mixed pair into a common world."""
    if isinstance(a, AlgebraicNumber):
        return a, a._coerce(b)
    if isinstance(b, AlgebraicNumber):
        return b._coerce(a), b
    return as_fraction(a), as_fraction(b)


def scalar_add(a, b):
    x, y = _pair(a, b)
    return x + y


def scalar_sub(a, b):
    x, y = _pair(a, b)
    return x - y


def scalar_mul(a, b):
    x, y = _pair(a, b)
    return x * y


def scalar_neg(a):
    return -a if isinstance(a, AlgebraicNumber) else -as_fraction(a)


def scalar_inv(a):
    if isinstance(a, AlgebraicNumber):
        return a.inverse()
    a = as_fraction(a)
    if a == 0:
        raise ZeroDivisionError("inverse of zero")
    return 1 / a


def scalar_div(a, b):
    x, y = _pair(a, b)
    if isinstance(y, Fraction) and y == 0:
        raise ZeroDivisionError("division by zero")
    return x / y


def scalar_sign(a) -> int:
    if isinstance(a, AlgebraicNumber):
        return a.sign()
    a = as_fraction(a)
    return 1 if a > 0 else (-1 if a < 0 else 0)


def scalar_compare(a, b) -> int:
    """-1, 0 or 1 as a < b, a == b, a > b.  Exact, always terminates."""
    x, y = _pair(a, b)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return 1 if x > y else (-1 if x < y else 0)
    return scalar_sign(x - y)


def scalar_floor(a) -> int:
    if isinstance(a, AlgebraicNumber):
        if a.is_rational():
            return a.rational_value().__floor__()
        if a.field.degree == 2:
            # exponential bracket plus integer bisection on exact sign
            # tests; immune to the catastrophic cancellation that makes
            # interval evaluation useless here
            if a._cmp(0) >= 0:
                lo, hi = 0, 1
                while a._cmp(hi) >= 0:
                    lo, hi = hi, hi * 2
            else:
                lo, hi = -1, 0
                while a._cmp(lo) < 0:
                    lo, hi = lo * 2, lo
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if a._cmp(mid) >= 0:
                    lo = mid
                else:
                    hi = mid
            return lo
        lo, hi = poly_eval_interval(list(a.coeffs), a.field.lo, a.field.hi)
        while hi.__floor__() - lo.__floor__() > 1:
            a.field.refine_once()
            lo, hi = poly_eval_interval(list(a.coeffs), a.field.lo, a.field.hi)
        n = hi.__floor__()
        return n if scalar_compare(a, n) >= 0 else n - 1
    return as_fraction(a).__floor__()


def scalar_min(a, b):
    return a if scalar_compare(a, b) <= 0 else b


def scalar_max(a, b):
    return a if scalar_compare(a, b) >= 0 else b


def scalar_abs(a):
    return a if scalar_sign(a) >= 0 else scalar_neg(a)


def scalar_to_float(a) -> float:
    return float(a) if not isinstance(a, Fraction) else a.numerator / a.denominator


# ---------------------------------------------------------------------------
# serialization: rationals as "p/q" strings, algebraics as a structured dict


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def scalar_to_json(a):
    if isinstance(a, int):
        a = Fraction(a)
    if isinstance(a, Fraction):
        return _frac_str(a)
    if isinstance(a, AlgebraicNumber):
        return {
            "poly": [int(c) for c in a.field.poly],
            "coeffs": [_frac_str(c) for c in a.coeffs],
            "enclosure": [_frac_str(a.field.lo), _frac_str(a.field.hi)],
        }
    raise TypeError(f"not a scalar: {a!r}")


def scalar_from_json(obj, field: AlgebraicField | None = None):
    if isinstance(obj, str):
        return Fraction(obj)
    if isinstance(obj, dict):
        if field is None:
            field = AlgebraicField(obj["poly"], Fraction(obj["enclosure"][0]), Fraction(obj["enclosure"][1]))
        return AlgebraicNumber(field, [Fraction(c) for c in obj["coeffs"]])
    raise TypeError(f"not a serialized scalar: {obj!r}")
