"""Truncated power series over exact rationals.

TruncSeries is a plain series in z; AuxSeries carries polynomial
coefficients in a declared set of auxiliary variables (subset of u, v, t).
On top of these the module provides Newton solving of algebraic equations,
per-order solvers for the functional equations used by the counting
formulas, residual checks for those equations, and the substitution that
turns a valley-marked matching series into a set-partition series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DivisibilityError, SeriesError

__all__ = [
    "TruncSeries",
    "AuxSeries",
    "catalan_series",
    "narayana_series",
    "poly_eval",
    "algebraic_solve",
    "fe_iterate",
    "residual",
    "partition_transform",
    "substitution_sum",
    "FE_NAMES",
]


def _norm(x):
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return x
    if isinstance(x, int):
        return x
    return Fraction(x)


# ---------------------------------------------------------------------------
# plain series


@dataclass(frozen=True)
class TruncSeries:
    """Power series in z known exactly through z^order."""

    order: int
    coeffs: tuple

    def __post_init__(self):
        if self.order < 0:
            raise SeriesError("order must be nonnegative")
        cs = tuple(_norm(c) for c in self.coeffs)
        if len(cs) != self.order + 1:
            raise SeriesError(
                f"expected {self.order + 1} coefficients, got {len(cs)}"
            )
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_coeffs(cls, coeffs, order: int | None = None) -> "TruncSeries":
        cs = list(coeffs)
        if order is None:
            order = len(cs) - 1
        cs = cs[: order + 1] + [0] * (order + 1 - len(cs))
        return cls(order, tuple(cs))

    @classmethod
    def constant(cls, value, order: int) -> "TruncSeries":
        return cls.from_coeffs([value], order)

    @classmethod
    def zero(cls, order: int) -> "TruncSeries":
        return cls.constant(0, order)

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls.constant(1, order)

    @classmethod
    def z(cls, order: int) -> "TruncSeries":
        return cls.from_coeffs([0, 1], order)

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def trunc(self, order: int) -> "TruncSeries":
        if order >= self.order:
            return self
        return TruncSeries(order, self.coeffs[: order + 1])

    def extend(self, order: int) -> "TruncSeries":
        """Pad with zero coefficients; only sound inside iterations that
        subsequently correct the new orders."""
        if order <= self.order:
            return self.trunc(order)
        return TruncSeries(order, self.coeffs + (0,) * (order - self.order))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return TruncSeries.constant(other, self.order)
        return None

    def __add__(self, other):
        s = self._coerce(other)
        if s is None:
            return NotImplemented
        n = min(self.order, s.order)
        return TruncSeries(n, tuple(a + b for a, b in zip(self.coeffs, s.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        s = self._coerce(other)
        if s is None:
            return NotImplemented
        return self + (-s)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncSeries(self.order, tuple(c * other for c in self.coeffs))
        if not isinstance(other, TruncSeries):
            return NotImplemented
        n = min(self.order, other.order)
        out = [0] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return TruncSeries(n, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "TruncSeries":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise SeriesError("cannot invert a series with zero constant term")
        inv0 = Fraction(1, 1) / c0
        out = [inv0]
        for n in range(1, self.order + 1):
            acc = 0
            for i in range(1, n + 1):
                if self.coeffs[i]:
                    acc += self.coeffs[i] * out[n - i]
            out.append(-inv0 * acc)
        return TruncSeries(self.order, tuple(out))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise SeriesError("division by zero")
            return self * (Fraction(1, 1) / other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = TruncSeries.one(self.order)
        for _ in range(k):
            out = out * self
        return out

    def sqrt(self) -> "TruncSeries":
        """Square root with constant term 1, by Newton iteration."""
        if self.coeffs[0] != 1:
            raise SeriesError("sqrt requires constant term 1")
        y = TruncSeries.one(0)
        prec = 0
        while prec < self.order:
            prec = min(2 * prec + 1, self.order)
            y = (y.extend(prec) + self.trunc(prec) / y.extend(prec)) * Fraction(1, 2)
        return y

    def compose(self, inner: "TruncSeries") -> "TruncSeries":
        """Substitute inner (valuation >= 1) for z."""
        if inner.coeffs[0] != 0:
            raise SeriesError("compose requires inner valuation >= 1")
        n = min(self.order, inner.order)
        res = TruncSeries.zero(n)
        for c in reversed(self.coeffs[: n + 1]):
            res = res * inner.trunc(n) + c
        return res

    def scale_z(self, factor) -> "TruncSeries":
        """Substitute factor*z for z."""
        out = []
        p = 1
        for c in self.coeffs:
            out.append(c * p)
            p *= factor
        return TruncSeries(self.order, tuple(out))

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by z^k."""
        return TruncSeries(self.order + k, (0,) * k + self.coeffs)

    def unshift(self, k: int) -> "TruncSeries":
        """Divide by z^k; the low-order coefficients must vanish."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise DivisibilityError(f"series is not divisible by z^{k}")
        return TruncSeries(self.order - k, self.coeffs[k:])


# ---------------------------------------------------------------------------
# polynomial coefficient helpers (dicts exponent-tuple -> rational)


def _pacc(target: dict, src: dict, scale=1) -> None:
    for k, c in src.items():
        v = target.get(k, 0) + c * scale
        if v:
            target[k] = v
        elif k in target:
            del target[k]


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            v = out.get(k, 0) + ca * cb
            if v:
                out[k] = v
            elif k in out:
                del out[k]
    return out


def _pshift(p: dict, axis: int, k: int = 1) -> dict:
    return {
        tuple(e + k if i == axis else e for i, e in enumerate(key)): c
        for key, c in p.items()
    }


def _pdown(p: dict, axis: int) -> dict:
    """(p - p|var=0) / var for the variable on the given axis; always exact."""
    return {
        tuple(e - 1 if i == axis else e for i, e in enumerate(key)): c
        for key, c in p.items()
        if key[axis] > 0
    }


def _pscale(p: dict, c) -> dict:
    return {k: v * c for k, v in p.items()} if c else {}


# ---------------------------------------------------------------------------
# auxiliary-variable series


@dataclass(frozen=True)
class AuxSeries:
    """Series in z whose coefficients are polynomials in the declared
    auxiliary variables, stored as sorted (exponents, value) pairs."""

    variables: tuple[str, ...]
    order: int
    coeffs: tuple

    def __post_init__(self):
        norm = []
        for poly in self.coeffs:
            items = poly.items() if isinstance(poly, dict) else poly
            d: dict = {}
            for k, c in items:
                c = _norm(c)
                if c:
                    d[tuple(k)] = d.get(tuple(k), 0) + c
            norm.append(tuple(sorted((k, c) for k, c in d.items() if c)))
        if len(norm) != self.order + 1:
            raise SeriesError(
                f"expected {self.order + 1} coefficients, got {len(norm)}"
            )
        object.__setattr__(self, "coeffs", tuple(norm))

    # construction -----------------------------------------------------

    @classmethod
    def from_dicts(cls, variables, dicts, order: int | None = None) -> "AuxSeries":
        ds = list(dicts)
        if order is None:
            order = len(ds) - 1
        ds = ds[: order + 1] + [{}] * (order + 1 - len(ds))
        return cls(tuple(variables), order, tuple(ds))

    @classmethod
    def constant(cls, value, variables, order: int) -> "AuxSeries":
        zero = (0,) * len(variables)
        return cls.from_dicts(variables, [{zero: value}], order)

    @classmethod
    def var(cls, name: str, variables, order: int) -> "AuxSeries":
        variables = tuple(variables)
        key = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise SeriesError(f"unknown variable {name!r}")
        return cls.from_dicts(variables, [{key: 1}], order)

    @classmethod
    def lift(cls, s: TruncSeries, variables) -> "AuxSeries":
        zero = (0,) * len(tuple(variables))
        return cls.from_dicts(
            variables, [{zero: c} if c else {} for c in s.coeffs], s.order
        )

    # views ------------------------------------------------------------

    def dicts(self) -> list[dict]:
        return [dict(poly) for poly in self.coeffs]

    def _axis(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise SeriesError(f"unknown variable {name!r}") from None

    def coefficient(self, n: int, exponents) -> int | Fraction:
        """Coefficient of z^n times the given variable exponents."""
        return dict(self.coeffs[n]).get(tuple(exponents), 0)

    def var_degree(self, name: str) -> int:
        axis = self._axis(name)
        return max(
            (k[axis] for poly in self.coeffs for k, _ in poly), default=0
        )

    def is_zero(self) -> bool:
        return all(not poly for poly in self.coeffs)

    def trunc(self, order: int) -> "AuxSeries":
        if order >= self.order:
            return self
        return AuxSeries(self.variables, order, self.coeffs[: order + 1])

    def to_trunc(self) -> TruncSeries:
        out = []
        zero = (0,) * len(self.variables)
        for poly in self.coeffs:
            d = dict(poly)
            if any(k != zero for k in d):
                raise SeriesError("series still depends on auxiliary variables")
            out.append(d.get(zero, 0))
        return TruncSeries(self.order, tuple(out))

    # arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, AuxSeries):
            if other.variables != self.variables:
                raise SeriesError("mismatched auxiliary variable sets")
            return other
        if isinstance(other, TruncSeries):
            return AuxSeries.lift(other, self.variables)
        if isinstance(other, (int, Fraction)):
            return AuxSeries.constant(other, self.variables, self.order)
        return None

    def __add__(self, other):
        s = self._coerce(other)
        if s is None:
            return NotImplemented
        n = min(self.order, s.order)
        out = []
        for a, b in zip(self.coeffs[: n + 1], s.coeffs[: n + 1]):
            d = dict(a)
            _pacc(d, dict(b))
            out.append(d)
        return AuxSeries.from_dicts(self.variables, out, n)

    __radd__ = __add__

    def __neg__(self):
        return AuxSeries(
            self.variables,
            self.order,
            tuple(tuple((k, -c) for k, c in poly) for poly in self.coeffs),
        )

    def __sub__(self, other):
        s = self._coerce(other)
        if s is None:
            return NotImplemented
        return self + (-s)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AuxSeries(
                self.variables,
                self.order,
                tuple(tuple((k, c * other) for k, c in poly) for poly in self.coeffs),
            )
        s = self._coerce(other)
        if s is None:
            return NotImplemented
        n = min(self.order, s.order)
        a = [dict(p) for p in self.coeffs[: n + 1]]
        b = [dict(p) for p in s.coeffs[: n + 1]]
        out = [dict() for _ in range(n + 1)]
        for i, pa in enumerate(a):
            if not pa:
                continue
            for j in range(n + 1 - i):
                if b[j]:
                    _pacc(out[i + j], _pmul(pa, b[j]))
        return AuxSeries.from_dicts(self.variables, out, n)

    __rmul__ = __mul__

    def inverse(self) -> "AuxSeries":
        zero = (0,) * len(self.variables)
        c0 = dict(self.coeffs[0])
        if list(c0.keys()) not in ([zero], []) or not c0:
            raise SeriesError(
                "inverse requires a constant (variable-free) nonzero z^0 term"
            )
        inv0 = Fraction(1, 1) / c0[zero]
        polys = [dict(p) for p in self.coeffs]
        out = [{zero: inv0}]
        for n in range(1, self.order + 1):
            acc: dict = {}
            for i in range(1, n + 1):
                if polys[i]:
                    _pacc(acc, _pmul(polys[i], out[n - i]))
            out.append(_pscale(acc, -inv0))
        return AuxSeries.from_dicts(self.variables, out, self.order)

    def __truediv__(self, other):
        s = self._coerce(other)
        if s is None:
            return NotImplemented
        return self * s.inverse()

    def mul_z(self, k: int = 1) -> "AuxSeries":
        return AuxSeries(
            self.variables, self.order + k, ((),) * k + self.coeffs
        )

    def scale_z(self, factor) -> "AuxSeries":
        """Substitute factor*z for z."""
        out = []
        p = 1
        for poly in self.coeffs:
            out.append({k: c * p for k, c in poly})
            p *= factor
        return AuxSeries.from_dicts(self.variables, out, self.order)

    def drop_variable(self, name: str) -> "AuxSeries":
        """Forget a variable the series no longer depends on."""
        axis = self._axis(name)
        out = []
        for n, poly in enumerate(self.coeffs):
            d: dict = {}
            for k, c in poly:
                if k[axis] != 0:
                    raise SeriesError(
                        f"z^{n} coefficient still depends on {name}"
                    )
                d[k[:axis] + k[axis + 1:]] = c
            out.append(d)
        variables = self.variables[:axis] + self.variables[axis + 1:]
        return AuxSeries.from_dicts(variables, out, self.order)

    # substitutions ----------------------------------------------------

    def subs_zero(self, name: str) -> "AuxSeries":
        axis = self._axis(name)
        out = [
            {k: c for k, c in poly if k[axis] == 0} for poly in self.coeffs
        ]
        return AuxSeries.from_dicts(self.variables, [dict(p) for p in out], self.order)

    def subs(self, name: str, value) -> "AuxSeries":
        axis = self._axis(name)
        out = []
        for poly in self.coeffs:
            d: dict = {}
            for k, c in poly:
                key = tuple(0 if i == axis else e for i, e in enumerate(k))
                _pacc(d, {key: c * value ** k[axis]})
            out.append(d)
        return AuxSeries.from_dicts(self.variables, out, self.order)

    def subs_prod(self, name: str, other: str) -> "AuxSeries":
        """Substitute name -> name*other (e.g. t -> t*u)."""
        a = self._axis(name)
        b = self._axis(other)
        out = []
        for poly in self.coeffs:
            d: dict = {}
            for k, c in poly:
                key = tuple(
                    e + k[a] if i == b else e for i, e in enumerate(k)
                )
                _pacc(d, {key: c})
            out.append(d)
        return AuxSeries.from_dicts(self.variables, out, self.order)

    def divide_by_var(self, name: str) -> "AuxSeries":
        axis = self._axis(name)
        out = []
        for n, poly in enumerate(self.coeffs):
            for k, _ in poly:
                if k[axis] == 0:
                    raise DivisibilityError(
                        f"z^{n} coefficient is not divisible by {name}"
                    )
            out.append(_pdown(dict(poly), axis))
        return AuxSeries.from_dicts(self.variables, out, self.order)

    def divide_by_one_minus(self, name: str) -> "AuxSeries":
        """Exact division by (1 - name)."""
        axis = self._axis(name)
        out = []
        for n, poly in enumerate(self.coeffs):
            groups: dict = {}
            for k, c in poly:
                rest = tuple(0 if i == axis else e for i, e in enumerate(k))
                groups.setdefault(rest, {})[k[axis]] = c
            d: dict = {}
            for rest, along in groups.items():
                top = max(along)
                running = 0
                for j in range(top + 1):
                    running += along.get(j, 0)
                    if j < top:
                        key = tuple(
                            j if i == axis else e for i, e in enumerate(rest)
                        )
                        if running:
                            d[key] = running
                if running != 0:
                    raise DivisibilityError(
                        f"z^{n} coefficient is not divisible by (1 - {name})"
                    )
            out.append(d)
        return AuxSeries.from_dicts(self.variables, out, self.order)


# ---------------------------------------------------------------------------
# Catalan and Narayana series


@lru_cache(maxsize=None)
def narayana_series(order: int) -> AuxSeries:
    """Border paths counted by semilength (z) and valleys (v): the series
    C(v,z) with C = 1 + zC + vzC(C-1)."""
    C = [{(0,): 1}]
    for n in range(1, order + 1):
        conv: dict = {}
        for i in range(n):
            _pacc(conv, _pmul(C[i], C[n - 1 - i]))
        cn = dict(C[n - 1])
        diff = dict(conv)
        _pacc(diff, C[n - 1], -1)
        _pacc(cn, _pshift(diff, 0))
        C.append(cn)
    return AuxSeries.from_dicts(("v",), C, order)


def catalan_series(order: int) -> TruncSeries:
    return narayana_series(order).subs("v", 1).to_trunc()


# ---------------------------------------------------------------------------
# algebraic equations


def poly_eval(polys, s: TruncSeries) -> TruncSeries:
    """Evaluate sum p_i * s^i by Horner's rule."""
    polys = [p if isinstance(p, TruncSeries) else TruncSeries.from_coeffs(p, s.order) for p in polys]
    res = TruncSeries.zero(min(s.order, min(p.order for p in polys)))
    for p in reversed(polys):
        res = res * s + p
    return res


def algebraic_solve(polys, seed, order: int | None = None) -> TruncSeries:
    """Power-series root of sum p_i(z) F^i with F(0) = seed, by Newton
    iteration; the seed must be a simple root of the z = 0 polynomial."""
    polys = [
        p if isinstance(p, TruncSeries) else TruncSeries.from_coeffs(p)
        for p in polys
    ]
    if order is None:
        order = min(p.order for p in polys)
    polys = [p.extend(order) for p in polys]
    seed = _norm(Fraction(seed))
    value = sum(p[0] * seed**i for i, p in enumerate(polys))
    if value != 0:
        raise SeriesError(f"seed {seed} is not a root at z = 0")
    deriv = sum(i * p[0] * seed ** (i - 1) for i, p in enumerate(polys) if i)
    if deriv == 0:
        raise SeriesError(f"seed {seed} is not a simple root at z = 0")
    dpolys = [p * i for i, p in enumerate(polys) if i]
    f = TruncSeries.constant(seed, order)
    for _ in range(order + 2):
        val = poly_eval(polys, f)
        if val.is_zero():
            return f
        f = (f - val / poly_eval(dpolys, f)).trunc(order)
    if poly_eval(polys, f).is_zero():
        return f
    raise SeriesError("Newton iteration did not converge")


# ---------------------------------------------------------------------------
# functional equation solvers (one new z-order per pass)


def _fe_K_Ll(order: int) -> AuxSeries:
    def bracket(kj: dict) -> dict:
        out = _pscale(kj, 2)
        _pacc(out, _pshift(kj, 0))
        _pacc(out, _pdown(kj, 0))
        return out

    K = [{(0,): 1}]
    A = [bracket(K[0])]
    for n in range(1, order + 1):
        kn: dict = {}
        for i in range(n):
            _pacc(kn, _pmul(K[i], A[n - 1 - i]))
        K.append(kn)
        A.append(bracket(kn))
    return AuxSeries.from_dicts(("u",), K, order)


def _fe_K_Llv(order: int) -> AuxSeries:
    def bracket(kj: dict) -> dict:
        out = _pscale(kj, 2)
        _pacc(out, _pshift(kj, 0))
        _pacc(out, _pdown(kj, 0))
        return out

    def prefix(kj: dict, j: int) -> dict:
        out = _pshift(kj, 1)
        if j == 0:
            _pacc(out, {(0, 0): 1, (0, 1): -1})
        return out

    K = [{(0, 0): 1}]
    A = [bracket(K[0])]
    B = [prefix(K[0], 0)]
    for n in range(1, order + 1):
        kn: dict = {}
        for i in range(n):
            _pacc(kn, _pmul(B[i], A[n - 1 - i]))
        K.append(kn)
        A.append(bracket(kn))
        B.append(prefix(kn, n))
    return AuxSeries.from_dicts(("u", "v"), K, order)


def _fe_K_lt2(order: int) -> AuxSeries:
    C = [
        {(0, k): c for (k,), c in dict(p).items()}
        for p in narayana_series(order).coeffs
    ]

    def marked(kj: dict, j: int) -> dict:
        out = _pshift(kj, 1)
        if j == 0:
            _pacc(out, {(0, 0): 1, (0, 1): -1})
        return out

    def middle(kj: dict, cj: dict) -> dict:
        out = dict(kj)
        _pacc(out, _pdown(kj, 0))
        _pacc(out, _pshift(cj, 0))
        return out

    K = [{(0, 0): 1}]
    K0 = [dict(K[0])]
    D = [marked(K[0], 0)]
    E = [middle(K[0], C[0])]
    F = [marked(K0[0], 0)]
    for n in range(1, order + 1):
        kn: dict = {}
        for i in range(n):
            j = n - 1 - i
            _pacc(kn, _pmul(C[i], D[j]))
            _pacc(kn, _pmul(E[i], F[j]))
        K.append(kn)
        k0 = {k: c for k, c in kn.items() if k[0] == 0}
        K0.append(k0)
        D.append(marked(kn, n))
        E.append(middle(kn, C[n]))
        F.append(marked(k0, n))
    return AuxSeries.from_dicts(("u", "v"), K, order)


def _fe_K_peak(order: int) -> AuxSeries:
    def bracket(kj: dict, j: int) -> dict:
        out = dict(kj)
        km1 = dict(kj)
        if j == 0:
            _pacc(km1, {(0,): 1}, -1)
        _pacc(out, _pshift(km1, 0))
        _pacc(out, km1)
        _pacc(out, _pdown(kj, 0))
        return out

    K = [{(0,): 1}]
    A = [bracket(K[0], 0)]
    for n in range(1, order + 1):
        kn: dict = {}
        for i in range(n):
            _pacc(kn, _pmul(K[i], A[n - 1 - i]))
        K.append(kn)
        A.append(bracket(kn, n))
    return AuxSeries.from_dicts(("u",), K, order)


def _fe_G_classV(order: int) -> AuxSeries:
    G = [{(0, 0): 1}]
    for n in range(1, order + 1):
        p = G[n - 1]
        pt0 = {k: c for k, c in p.items() if k[1] == 0}
        gn: dict = {}
        _pacc(gn, _pshift(p, 0))
        for (dt, du), c in p.items():
            if du > 0:
                if dt == 0:
                    raise DivisibilityError(
                        "term with positive u-degree and zero t-degree"
                    )
                _pacc(gn, {(dt - 1, du - 1): c})
        for (dt, _), c in pt0.items():
            if dt > 0:
                _pacc(gn, {(dt - 1, 0): c})
        for (i, _), c in pt0.items():
            if i > 0:
                for m in range(1, i + 1):
                    _pacc(gn, {(i + 1, m): c})
        G.append(gn)
    return AuxSeries.from_dicts(("t", "u"), G, order)


FE_NAMES = ("K_Ll", "K_Llv", "K_lt2", "K_peak", "G_classV")

_FE_SOLVERS = {
    "K_Ll": _fe_K_Ll,
    "K_Llv": _fe_K_Llv,
    "K_lt2": _fe_K_lt2,
    "K_peak": _fe_K_peak,
    "G_classV": _fe_G_classV,
}


def _check_degree_caps(name: str, sol: AuxSeries) -> None:
    for n, poly in enumerate(sol.coeffs):
        for k, _ in poly:
            if name in ("K_Ll", "K_peak"):
                ok = k[0] <= n
            elif name in ("K_Llv", "K_lt2"):
                ok = k[0] <= n and k[1] <= max(n - 1, 0)
            else:
                ok = k[0] <= n and k[1] <= k[0]
            if not ok:
                raise SeriesError(
                    f"{name}: z^{n} coefficient exceeds its degree cap at {k}"
                )


@lru_cache(maxsize=None)
def fe_iterate(name: str, order: int) -> AuxSeries:
    """Solve one of the built-in functional equations through z^order."""
    if name not in _FE_SOLVERS:
        raise SeriesError(f"unknown functional equation {name!r}")
    if order < 0:
        raise SeriesError("order must be nonnegative")
    sol = _FE_SOLVERS[name](order)
    _check_degree_caps(name, sol)
    return sol


def residual(name: str, sol: AuxSeries) -> AuxSeries:
    """Plug a solution back into its equation; zero when correct.  Uses the
    generic series operations rather than the solver's recurrences."""
    N = sol.order
    if name == "K_Ll":
        K = sol
        u = AuxSeries.var("u", K.variables, N)
        K0 = K.subs_zero("u")
        inner = K * 2 + u * K + (K - K0).divide_by_var("u")
        return (1 + (K * inner).mul_z().trunc(N)) - K
    if name == "K_Llv":
        K = sol
        u = AuxSeries.var("u", K.variables, N)
        v = AuxSeries.var("v", K.variables, N)
        K0 = K.subs_zero("u")
        inner = K * 2 + u * K + (K - K0).divide_by_var("u")
        return (1 + ((v * K - v + 1) * inner).mul_z().trunc(N)) - K
    if name == "K_lt2":
        K = sol
        u = AuxSeries.var("u", K.variables, N)
        v = AuxSeries.var("v", K.variables, N)
        C = AuxSeries.from_dicts(
            K.variables,
            [
                {(0, k): c for (k,), c in dict(poly).items()}
                for poly in narayana_series(N).coeffs
            ],
            N,
        )
        K0 = K.subs_zero("u")
        diff = (K - K0).divide_by_var("u") + (K - K0)
        mid = (K0 - C) + diff + (1 + u) * C
        rhs = (
            1
            + (C * (v * K - v + 1)).mul_z().trunc(N)
            + (mid * (v * K0 - v + 1)).mul_z().trunc(N)
        )
        return rhs - K
    if name == "K_peak":
        K = sol
        u = AuxSeries.var("u", K.variables, N)
        K0 = K.subs_zero("u")
        inner = K + u * (K - 1) + (K - 1) + (K - K0).divide_by_var("u")
        return (1 + (K * inner).mul_z().trunc(N)) - K
    if name == "G_classV":
        G = sol
        t = AuxSeries.var("t", G.variables, N)
        u = AuxSeries.var("u", G.variables, N)
        Gt0 = G.subs_zero("u")
        G00 = Gt0.subs_zero("t")
        term2 = (G - Gt0).divide_by_var("t").divide_by_var("u")
        term3 = (Gt0 - G00).divide_by_var("t")
        term4 = t * (
            ((Gt0 - Gt0.subs_prod("t", "u")) * u).divide_by_one_minus("u")
        )
        rhs = 1 + (t * G + term2 + term3 + term4).mul_z().trunc(N)
        return rhs - G
    raise SeriesError(f"unknown functional equation {name!r}")


# ---------------------------------------------------------------------------
# matching -> partition substitution


def substitution_sum(a, order: int, extra_denominator: int = 1) -> TruncSeries:
    """Evaluate sum c_{n,k} z^(2n-k) / (1-z)^(2n+extra) for a series
    a = sum c_{n,k} v^k z^n; requires the valley bound k <= n - 1 for n >= 1
    and a.order >= order - 1."""
    if isinstance(a, TruncSeries):
        a = AuxSeries.lift(a, ("v",))
    if a.variables != ("v",):
        raise SeriesError("substitution expects a series in v only")
    if a.order < max(0, order - 1):
        raise SeriesError(
            f"input order {a.order} too small for output order {order}"
        )
    geom = (1 - TruncSeries.z(order)).inverse()
    geom2 = geom * geom
    power = geom**extra_denominator
    result = TruncSeries.zero(order)
    for n, poly in enumerate(a.coeffs):
        for (k,), c in poly:
            if n >= 1 and k >= n:
                raise SeriesError(
                    f"valley bound violated: v^{k} at z^{n}"
                )
            if 2 * n - k <= order:
                result = result + (power * c).shift(2 * n - k).trunc(order)
        power = (power * geom2).trunc(order)
        if 2 * (n + 1) - n > order:
            break
    return result


def partition_transform(a, order: int) -> TruncSeries:
    """Turn a valley-marked avoiding-matchings series A(v,z) into the
    series for avoiding set partitions: (1/(1-z)) A(1/z, z^2/(1-z)^2)."""
    return substitution_sum(a, order, extra_denominator=1)
