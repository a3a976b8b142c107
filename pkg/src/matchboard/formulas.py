"""Named coefficient-sequence producers, one per counting sequence.

Each formula id has a documented primary computation route, an independent
secondary route where one exists, and a designated brute-force oracle from
the families module.  ``cross_check`` compares formula output against the
oracle for every n within the enumeration caps.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from . import families
from .bijections import LabeledPathClass
from .errors import SeriesError
from .series import (
    AuxSeries,
    TruncSeries,
    algebraic_solve,
    catalan_series,
    fe_iterate,
    narayana_series,
    partition_transform,
    poly_eval,
    substitution_sum,
)

__all__ = [
    "FORMULA_IDS",
    "ORDER_CAP",
    "coefficients",
    "secondary_coefficients",
    "cross_check",
    "oracle_value",
    "valley_marked_m312",
    "valley_marked_classI",
    "valley_marked_classII_III",
    "valley_marked_classIV",
    "polHz_polynomials",
    "classII_III_cubic",
    "returns_valleys_series",
]

FORMULA_IDS = (
    "m312",
    "p312",
    "maps",
    "s1342",
    "s3124",
    "classI_m",
    "classI_p",
    "classII_III_m",
    "classII_III_p",
    "classIV_m",
    "classIV_p",
    "classIV_exact",
    "classV_m",
    "catalan_v",
    "dyck_rv",
    "gouyou_m123",
    "dnk_pairs",
)

ORDER_CAP = 30


def _check_order(n: int) -> None:
    if n < 0:
        raise SeriesError("order must be nonnegative")
    if n > ORDER_CAP:
        raise SeriesError(f"order {n} exceeds the cap {ORDER_CAP}")


def _catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def _rational(num_coeffs, den_coeffs, order: int) -> TruncSeries:
    num = TruncSeries.from_coeffs(num_coeffs, order)
    den = TruncSeries.from_coeffs(den_coeffs, order)
    return num / den


# ---------------------------------------------------------------------------
# closed forms and derived series


def _m312_closed(order: int) -> TruncSeries:
    # 54z / (1 + 36z - (1-12z)^(3/2))
    s = TruncSeries.from_coeffs([1, -12], order + 1)
    den = 1 + TruncSeries.z(order + 1) * 36 - s * s.sqrt()
    num = TruncSeries.z(order + 1) * 54
    return (num.unshift(1)) / (den.unshift(1))


def _K0(order: int) -> TruncSeries:
    return fe_iterate("K_Ll", order).subs_zero("u").to_trunc()


def valley_marked_m312(order: int) -> AuxSeries:
    """L(v,z): 312-avoiding matchings by size (z) and valleys (v)."""
    K0 = fe_iterate("K_Llv", order).subs_zero("u").drop_variable("u")
    v = AuxSeries.var("v", ("v",), order)
    zK0 = K0.mul_z().trunc(order)
    return 1 + zK0 * (1 - v * zK0).inverse()


def polHz_polynomials(order: int) -> list[TruncSeries]:
    """The cubic (ascending in B) satisfied by the 312-avoiding partition
    series."""
    p3 = (
        TruncSeries.from_coeffs([-1, 1], order)
        * TruncSeries.from_coeffs([1, -2, 5], order) ** 2
    )
    return [
        TruncSeries.from_coeffs([1, -4, 23, -9], order),
        TruncSeries.from_coeffs([-3, 13, -64, 60, -9], order),
        TruncSeries.from_coeffs([3, -14, 59, -85, 54, -9], order),
        p3,
    ]


def _p312_closed(order: int) -> TruncSeries:
    # R is the simple-root branch of 4z^2 R^3 + (3z^2-4z) R^2
    # + (3z^2-6z+1) R - z^2; the partition series is a rational
    # expression in R
    R = algebraic_solve(
        [
            TruncSeries.from_coeffs([0, 0, -1], order),
            TruncSeries.from_coeffs([1, -6, 3], order),
            TruncSeries.from_coeffs([0, -4, 3], order),
            TruncSeries.from_coeffs([0, 0, 4], order),
        ],
        0,
        order,
    )
    z3 = TruncSeries.z(order) ** 3
    c2 = z3 * TruncSeries.from_coeffs([3, -26, 7, 12], order) * 4
    c1 = (TruncSeries.z(order) ** 2) * TruncSeries.from_coeffs(
        [-12, 81, 50, -179, 48], order
    )
    c0 = TruncSeries.from_coeffs([3, -19, 73, -168, 270, -211, 48], order)
    den = (
        TruncSeries.from_coeffs([1, -1], order)
        * TruncSeries.from_coeffs([3, -7], order)
        * TruncSeries.from_coeffs([1, -2, 5], order) ** 2
    )
    return (c2 * R * R + c1 * R + c0) / den


def _classI_m_closed(order: int) -> TruncSeries:
    s = TruncSeries.from_coeffs([1, -8], order).sqrt()
    return (s + 3).inverse() * 4


def valley_marked_classI(order: int) -> AuxSeries:
    """A1(v,z) = (1 + z(1-v)C(v,2z)) / (1 - vzC(v,2z))."""
    C2 = narayana_series(order).scale_z(2)
    v = AuxSeries.var("v", ("v",), order)
    zC2 = C2.mul_z().trunc(order)
    return (1 + (1 - v) * zC2) * (1 - v * zC2).inverse()


def _classI_p_closed(order: int) -> TruncSeries:
    s = TruncSeries.from_coeffs([1, -6, 1], order).sqrt()
    num = TruncSeries.from_coeffs([2, -3, 1], order) - TruncSeries.z(order) * s
    den = TruncSeries.from_coeffs([1, -3, 3], order) * 2
    return num / den


def valley_marked_classII_III(order: int) -> AuxSeries:
    """A2(v,z): {123,231}-avoiding matchings by size and valleys."""
    K0 = fe_iterate("K_lt2", order).subs_zero("u").drop_variable("u")
    v = AuxSeries.var("v", ("v",), order)
    zK0 = K0.mul_z().trunc(order)
    return 1 + zK0 * (1 - v * zK0).inverse()


def classII_III_cubic(order: int, v_value) -> list[TruncSeries]:
    """Coefficients (ascending in H) of the cubic satisfied by the
    valley-marked height-below-2 kernel, at a fixed rational v.

    Derived by the kernel method from the functional equation: with
    W = 1-v+vH and D = 1-z+vz(1-C-H), setting u = zW/D kills the kernel
    and leaves 0 = D + z(1-v)C*D + z^2*W^2*C - H*D^2.
    """
    v = Fraction(v_value)
    C = narayana_series(order).subs("v", v).to_trunc()
    z = TruncSeries.z(order)
    a = 1 - z + z * v - z * v * C
    b = -v
    d0 = a + z * (1 - v) * C * a + z * z * ((1 - v) ** 2) * C
    d1 = z * b + z * (1 - v) * C * z * b + z * z * (2 * v * (1 - v)) * C - a * a
    d2 = z * z * (v**2) * C - 2 * a * z * b
    d3 = -(z * z) * v**2
    return [d0, d1, d2, d3]


def _classII_III_p_closed(order: int) -> TruncSeries:
    # 1 + z(1-z) / ((1-z)^2 - z*Hsub), with Hsub the diagonal substitution
    # of the valley-marked kernel
    H = fe_iterate("K_lt2", order).subs_zero("u").drop_variable("u")
    Hsub = substitution_sum(H, order, extra_denominator=0)
    z = TruncSeries.z(order)
    one_minus = TruncSeries.from_coeffs([1, -1], order)
    return 1 + (z * one_minus) / (one_minus * one_minus - z * Hsub)


def valley_marked_classIV(order: int, u_value: int = 2) -> AuxSeries:
    """Q at the given u: boards of height below 5 weighted u^eta, by size
    and valleys, via four nested return decompositions."""
    v = AuxSeries.var("v", ("v",), order)
    z = AuxSeries.lift(TruncSeries.z(order), ("v",))

    def T(x: AuxSeries) -> AuxSeries:
        return 1 + x * (1 - v.trunc(x.order) * x).inverse()

    t1 = T(z)
    t2 = T((z * t1).trunc(order) * u_value)
    t3 = T((z * t2).trunc(order) * u_value)
    return T((z * t3).trunc(order))


def _classV_series(order: int) -> TruncSeries:
    g = fe_iterate("G_classV", 2 * order).subs_zero("t").subs_zero("u").to_trunc()
    for m in range(1, 2 * order + 1, 2):
        if g[m] != 0:
            raise SeriesError(f"odd coefficient z^{m} of G(0,0,z) is nonzero")
    return TruncSeries.from_coeffs([g[2 * n] for n in range(order + 1)], order)


def _s1342_closed(order: int) -> TruncSeries:
    s = TruncSeries.from_coeffs([1, -8], order + 1)
    den = TruncSeries.from_coeffs([1, 20, -8], order + 1) - s * s.sqrt()
    num = TruncSeries.z(order + 1) * 32
    return num.unshift(1) / den.unshift(1)


def _kx0_closed(order: int) -> TruncSeries:
    s = TruncSeries.from_coeffs([1, -8], order + 2)
    num = TruncSeries.from_coeffs([-1, 12, 8], order + 2) + s * s.sqrt()
    return num.unshift(2) / 32


def _s3124_series(order: int) -> TruncSeries:
    kx0 = fe_iterate("K_peak", order).subs_zero("u").to_trunc()
    return (1 - kx0.shift(1).trunc(order)).inverse()


def returns_valleys_series(order: int) -> AuxSeries:
    """Border paths counted by returns (t) and valleys (v):
    (1 + t(1-v)zC(v,z)) / (1 - tvzC(v,z))."""
    C = AuxSeries.from_dicts(
        ("t", "v"),
        [
            {(0, k): c for (k,), c in dict(p).items()}
            for p in narayana_series(order).coeffs
        ],
        order,
    )
    t = AuxSeries.var("t", ("t", "v"), order)
    v = AuxSeries.var("v", ("t", "v"), order)
    zC = C.mul_z().trunc(order)
    return (1 + t * (1 - v) * zC) * (1 - t * v * zC).inverse()


# ---------------------------------------------------------------------------
# the id table


def _ints(s: TruncSeries) -> tuple[int, ...]:
    out = []
    for c in s.coeffs:
        if isinstance(c, Fraction):
            raise SeriesError(f"non-integer coefficient {c}")
        out.append(c)
    return tuple(out)


@lru_cache(maxsize=None)
def coefficients(formula_id: str, order: int) -> tuple[int, ...]:
    """Primary-route coefficient sequence c_0..c_order for a formula id."""
    _check_order(order)
    if formula_id == "m312":
        return _ints(_m312_closed(order))
    if formula_id == "p312":
        return _ints(_p312_closed(order))
    if formula_id == "maps":
        return tuple(
            2 * 3**n * factorial(2 * n) // (factorial(n) * factorial(n + 2))
            for n in range(order + 1)
        )
    if formula_id == "s1342":
        return _ints(_s1342_closed(order))
    if formula_id == "s3124":
        return _ints(_s3124_series(order))
    if formula_id == "classI_m":
        return _ints(_classI_m_closed(order))
    if formula_id == "classI_p":
        return _ints(_classI_p_closed(order))
    if formula_id == "classII_III_m":
        return _ints(
            valley_marked_classII_III(order).subs("v", 1).to_trunc()
        )
    if formula_id == "classII_III_p":
        return _ints(partition_transform(valley_marked_classII_III(order), order))
    if formula_id == "classIV_m":
        return _ints(_rational([1, -5, 2], [1, -6, 5], order))
    if formula_id == "classIV_p":
        den = TruncSeries.from_coeffs([1, -1], order) * TruncSeries.from_coeffs(
            [1, -10, 31, -30, 1], order
        )
        return _ints(TruncSeries.from_coeffs([1, -10, 32, -37, 12], order) / den)
    if formula_id == "classIV_exact":
        return (1,) + tuple((5 ** (n - 1) + 1) // 2 for n in range(1, order + 1))
    if formula_id == "classV_m":
        return _ints(_classV_series(order))
    if formula_id == "catalan_v":
        return _ints(catalan_series(order))
    if formula_id == "dyck_rv":
        return _ints(
            returns_valleys_series(order).subs("t", 1).subs("v", 1).to_trunc()
        )
    if formula_id == "gouyou_m123":
        return tuple(
            _catalan(n) * _catalan(n + 2) - _catalan(n + 1) ** 2
            for n in range(order + 1)
        )
    if formula_id == "dnk_pairs":
        return tuple(
            families.pair_count_ending_south(n, 0) for n in range(order + 1)
        )
    raise SeriesError(f"unknown formula id {formula_id!r}")


@lru_cache(maxsize=None)
def secondary_coefficients(formula_id: str, order: int) -> tuple[int, ...]:
    """Independent second route for each id, used for route-agreement
    checks."""
    _check_order(order)
    if formula_id == "m312":
        k0 = _K0(order)
        return _ints((1 - k0.shift(1).trunc(order)).inverse())
    if formula_id == "p312":
        return _ints(partition_transform(valley_marked_m312(order), order))
    if formula_id == "maps":
        return _ints(_K0(order))
    if formula_id == "s1342":
        kx0 = _kx0_closed(order)
        return _ints((1 - kx0.shift(1).trunc(order)).inverse())
    if formula_id == "s3124":
        return _ints(_s1342_closed(order))
    if formula_id == "classI_m":
        return _ints(valley_marked_classI(order).subs("v", 1).to_trunc())
    if formula_id == "classI_p":
        return _ints(partition_transform(valley_marked_classI(order), order))
    if formula_id == "classII_III_m":
        H = algebraic_solve(classII_III_cubic(order, 1), 1, order)
        return _ints((1 - H.shift(1).trunc(order)).inverse())
    if formula_id == "classII_III_p":
        return _ints(_classII_III_p_closed(order))
    if formula_id == "classIV_m":
        return _ints(valley_marked_classIV(order).subs("v", 1).to_trunc())
    if formula_id == "classIV_p":
        return _ints(partition_transform(valley_marked_classIV(order), order))
    if formula_id == "classIV_exact":
        return coefficients("classIV_m", order)
    if formula_id == "classV_m":
        # no second closed route; the residual of the functional equation
        # is the independent check
        return coefficients("classV_m", order)
    if formula_id == "catalan_v":
        s = TruncSeries.from_coeffs([1, -4], order + 1).sqrt()
        return _ints((1 - s).unshift(1) / 2)
    if formula_id == "dyck_rv":
        return _ints(catalan_series(order))
    if formula_id == "gouyou_m123":
        return coefficients("dnk_pairs", order)
    if formula_id == "dnk_pairs":
        return coefficients("gouyou_m123", order)
    raise SeriesError(f"unknown formula id {formula_id!r}")


# ---------------------------------------------------------------------------
# brute-force oracles

_ORACLE_AVOID = {
    "m312": ("matching", ("312",)),
    "p312": ("partition", ("312",)),
    "classI_m": ("matching", ("123", "213")),
    "classI_p": ("partition", ("123", "213")),
    "classII_III_m": ("matching", ("123", "231")),
    "classII_III_p": ("partition", ("123", "231")),
    "classIV_m": ("matching", ("123", "321")),
    "classIV_p": ("partition", ("123", "321")),
    "classIV_exact": ("matching", ("123", "321")),
    "classV_m": ("matching", ("213", "321")),
    "gouyou_m123": ("matching", ("123",)),
}


def oracle_value(formula_id: str, n: int, caps=families.DEFAULT_CAPS) -> int:
    """Brute-force value matching coefficient n of the formula."""
    if formula_id in _ORACLE_AVOID:
        family, avoid = _ORACLE_AVOID[formula_id]
        return families.count(family, n, avoid=avoid, caps=caps).total
    if formula_id == "maps":
        total = 0
        for lp in families.labeled_paths(n, LabeledPathClass.K):
            if lp.labels[0] == 0:
                total += 1
        return total
    if formula_id == "s1342":
        return families.count("permutation", n, avoid=("1342",), caps=caps).total
    if formula_id == "s3124":
        return families.count("permutation", n, avoid=("3124",), caps=caps).total
    if formula_id in ("catalan_v", "dyck_rv"):
        return sum(1 for _ in families.dyck_paths(n))
    if formula_id == "dnk_pairs":
        return families.count("pair", n, caps=caps).total
    raise SeriesError(f"unknown formula id {formula_id!r}")


def cross_check(formula_id: str, n_max: int, caps=families.DEFAULT_CAPS) -> dict:
    """Compare the formula against its oracle for n = 0..n_max."""
    seq = coefficients(formula_id, n_max)
    results = []
    for n in range(n_max + 1):
        got = oracle_value(formula_id, n, caps=caps)
        results.append(
            {
                "n": n,
                "formula": seq[n],
                "oracle": got,
                "equal": seq[n] == got,
            }
        )
    return {"id": formula_id, "results": results}
