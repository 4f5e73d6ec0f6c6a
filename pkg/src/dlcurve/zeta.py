"""L-polynomials from point counts, Hasse-Weil checks and p-ranks.

Everything here is exact integer arithmetic.  For a curve of genus g over F_l
with N_m points over F_{l^m}, the power sums of the reciprocal Frobenius roots
are s_m = l^m + 1 - N_m and the L-polynomial prod(1 - a_i t) follows from
Newton's identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .curve import DEFAULT_SCAN_LOG2, CurveContext, count_points, genus
from .errors import CountInconsistent, FieldTooLarge, InvalidLPolynomial


@dataclass(frozen=True)
class LPolynomial:
    l: int
    coeffs: tuple[int, ...]
    genus: int

    def __post_init__(self):
        g, l, a = self.genus, self.l, self.coeffs
        if len(a) != 2 * g + 1 or a[0] != 1:
            raise InvalidLPolynomial(f"bad shape for genus {g}: {a}")
        for i in range(g + 1):
            if a[2 * g - i] != l ** (g - i) * a[i]:
                raise InvalidLPolynomial(f"functional equation fails at degree {i}")

    def __call__(self, t):
        return sum(c * t ** i for i, c in enumerate(self.coeffs))

    def power_sums(self, n: int) -> list[int]:
        """[s_1..s_n] with s_m the m-th power sum of the reciprocal roots."""
        return _power_sums(self.coeffs, n)

    def roots_abs_ok(self, tol: float = 1e-6) -> bool:
        """Diagnostic only: all reciprocal roots have modulus sqrt(l)."""
        import numpy as np
        import sympy

        if self.genus == 0:
            return True
        # reciprocal roots are the roots of t^{2g} L(1/t); repeated roots are
        # removed first since they wreck numerical root finding
        t = sympy.symbols("t")
        sqf = sympy.Poly(list(self.coeffs), t).sqf_part()
        roots = np.roots([float(c) for c in sqf.all_coeffs()])
        return bool(np.all(np.abs(np.abs(roots) - math.sqrt(self.l)) < tol * math.sqrt(self.l)))

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mon = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(f"{c}{mon}" if mon else str(c))
        return " + ".join(terms).replace("+ -", "- ")


def _power_sums(a, n):
    s = []
    for m in range(1, n + 1):
        am = a[m] if m < len(a) else 0
        val = -m * am
        for j in range(1, m):
            aj = a[j] if j < len(a) else 0
            val -= aj * s[m - j - 1]
        s.append(val)
    return s


def count_series(ctx: CurveContext, base_degree: int, M: int,
                 max_log2: int = DEFAULT_SCAN_LOG2) -> list[int]:
    """[N_1..N_M], N_m = |Z(F_{(q^base_degree)^m})|."""
    if ctx.q ** (base_degree * M) > 1 << max_log2:
        raise FieldTooLarge(
            f"counts up to F_{ctx.q}^{base_degree * M} exceed 2^{max_log2}", op="count_series")
    return [count_points(ctx, base_degree * m, max_log2) for m in range(1, M + 1)]


def l_polynomial(counts, g: int, l: int) -> LPolynomial:
    """Fit L from N_1..N_g; any further counts must be reproduced exactly."""
    counts = list(counts)
    if len(counts) < g:
        raise ValueError(f"need at least {g} counts, got {len(counts)}")
    s = [l ** m + 1 - n for m, n in enumerate(counts, start=1)]
    a = [Fraction(1)]
    for i in range(1, g + 1):
        a.append(-sum(s[j - 1] * a[i - j] for j in range(1, i + 1)) / i)
    if any(c.denominator != 1 for c in a):
        raise CountInconsistent(f"non-integral coefficients {a}", op="l_polynomial")
    a = [int(c) for c in a]
    full = a + [l ** (g - i) * a[i] for i in range(g - 1, -1, -1)]
    L = LPolynomial(l, tuple(full), g)
    predicted = L.power_sums(len(s))
    if predicted != s:
        bad = next(m for m in range(len(s)) if predicted[m] != s[m]) + 1
        raise CountInconsistent(
            f"fitted L predicts N_{bad} = {l ** bad + 1 - predicted[bad - 1]}, "
            f"observed {counts[bad - 1]}", op="l_polynomial")
    return L


def predict_count(L: LPolynomial, m: int) -> int:
    """N_m = l^m + 1 - s_m."""
    return L.l ** m + 1 - L.power_sums(m)[-1]


def base_change(L: LPolynomial, r: int) -> LPolynomial:
    """The L-polynomial over F_{l^r}: reciprocal roots raised to the r-th power."""
    g = L.genus
    s = L.power_sums(r * g)
    counts = [L.l ** (r * m) + 1 - s[r * m - 1] for m in range(1, g + 1)]
    return l_polynomial(counts, g, L.l ** r)


def root_square(L: LPolynomial) -> LPolynomial:
    """Base change to F_{l^2} via L(x) L(-x) = L2(x^2)."""
    a = L.coeffs
    neg = [c if i % 2 == 0 else -c for i, c in enumerate(a)]
    prod = [0] * (2 * len(a) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(neg):
            prod[i + j] += x * y
    return LPolynomial(L.l ** 2, tuple(prod[0::2]), L.genus)


def hasse_weil_check(counts, g: int, l: int) -> bool:
    """|N - (l+1)| <= 2 g sqrt(l), compared in squares; ``counts`` is N or a list."""
    if isinstance(counts, LPolynomial):
        counts = [predict_count(counts, 1)]
    if isinstance(counts, int):
        counts = [counts]
    ok = True
    for m, n in enumerate(counts, start=1):
        lm = l ** m
        ok &= (n - lm - 1) ** 2 <= 4 * g * g * lm
    return ok


def p_rank(L: LPolynomial, p: int) -> int:
    """Degree of L mod p."""
    for i in range(len(L.coeffs) - 1, 0, -1):
        if L.coeffs[i] % p:
            return i
    return 0


def jacobian_order(L: LPolynomial) -> int:
    n = sum(L.coeffs)
    if n <= 0:
        raise InvalidLPolynomial(f"L(1) = {n} is not a group order", op="jacobian_order")
    return n


def _binomial_power(c: int, n: int) -> tuple[int, ...]:
    """Coefficients of (1 + c t)^n."""
    return tuple(math.comb(n, i) * c ** i for i in range(n + 1))


@dataclass
class ExtremalReport:
    q: int
    count: int
    lower: int
    upper: int
    attained_upper: bool
    attained_lower: bool
    l_polynomial: LPolynomial | None
    is_plus_shape: bool | None
    is_minus_shape: bool | None
    l_routes: dict = field(default_factory=dict)
    partial_reason: str | None = None


def l_polynomial_over_base(ctx: CurveContext, base_degree: int = 1,
                           max_log2: int = DEFAULT_SCAN_LOG2) -> LPolynomial:
    g = genus(ctx)
    counts = count_series(ctx, base_degree, max(g, 1), max_log2)
    return l_polynomial(counts[:g], g, ctx.q ** base_degree)


def classify_extremal(ctx: CurveContext, max_log2: int = DEFAULT_SCAN_LOG2) -> ExtremalReport:
    """Bound attainment and L-shape over F_{q^2}.

    L over F_{q^2} is computed by direct counts when (q^2)^g fits under the
    scan cap, and by squaring the roots of L over F_q when q^g does; when both
    run they must agree.
    """
    q, g = ctx.q, genus(ctx)
    l = q * q
    count = count_points(ctx, 2, max_log2)
    lower, upper = 1 + l - 2 * g * q, 1 + l + 2 * g * q
    routes = {}
    reasons = []
    for name, base, conv in (("direct", 2, lambda L: L), ("root_square", 1, root_square)):
        try:
            routes[name] = conv(l_polynomial_over_base(ctx, base, max_log2))
        except FieldTooLarge as exc:
            reasons.append(f"{name}: {exc}")
    if len(set(routes.values())) > 1:
        raise CountInconsistent(
            f"L over F_{l} differs between routes: {routes}", op="classify_extremal")
    L = next(iter(routes.values()), None)
    plus = minus = None
    if L is not None:
        plus = L.coeffs == _binomial_power(q, 2 * g)
        minus = L.coeffs == _binomial_power(-q, 2 * g)
    return ExtremalReport(
        q=q, count=count, lower=lower, upper=upper,
        attained_upper=count == upper, attained_lower=count == lower,
        l_polynomial=L, is_plus_shape=plus, is_minus_shape=minus,
        l_routes={k: v.coeffs for k, v in routes.items()},
        partial_reason="; ".join(reasons) if not routes else None)


def geometric_irreducibility_check(ctx: CurveContext, M: int, counts=None,
                                   g: int | None = None, l: int | None = None,
                                   max_log2: int = DEFAULT_SCAN_LOG2) -> bool:
    """All N_m, m <= M, respect the Weil bound of one genus-g component.

    A curve splitting into k components over F_{q^c} has N_m close to k q^m
    along m divisible by c, which breaks the bound for large m.  ``counts``,
    ``g`` and ``l`` may be supplied to check other curves.
    """
    if counts is None:
        counts = count_series(ctx, 1, M, max_log2)
    g = genus(ctx) if g is None else g
    l = ctx.q if l is None else l
    return hasse_weil_check(list(counts)[:M], g, l)
