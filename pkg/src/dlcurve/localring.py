"""Local expansions at points of Z, valuations and principal divisors.

A local chart at a point P writes the three homogeneous coordinates as power
series in a uniformiser t, with the coordinate normalized to 1 at P held
constant.  The valuation of a form G at P is then the order of G(chart(t)),
and that of a ratio of forms of equal degree is the difference of orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .curve import CurveContext, ProjectivePoint, boundary_points, enumerate_points
from .errors import DomainError, InvalidInput, PrecisionError, SupportNotFound
from .ffield import FieldElement
from .forms import Form, FormRatio, boundary_form, reduce_mod_curve
from .series import TruncatedSeries

MAX_PRECISION = 4096


def default_precision(ctx: CurveContext) -> int:
    return (ctx.q + 1) * (ctx.q + 2)


@dataclass(frozen=True)
class Place:
    """A Frobenius orbit of points over F_l, l = q^base_degree.

    ``rep`` lies in F_{l^degree} and is the lexicographically smallest point of
    its orbit.
    """

    rep: ProjectivePoint
    degree: int
    base_degree: int = 1

    def key(self):
        return (self.degree, self.rep.key())

    def __repr__(self):
        return f"Place{self.rep!r}[deg {self.degree}]"


class Divisor:
    """A finite formal sum of places with integer weights."""

    def __init__(self, weights=None):
        self.weights = {P: int(w) for P, w in (weights or {}).items() if w}

    @property
    def degree(self) -> int:
        return sum(w * P.degree for P, w in self.weights.items())

    def __getitem__(self, P) -> int:
        return self.weights.get(P, 0)

    def support(self):
        return sorted(self.weights, key=Place.key)

    def __add__(self, other):
        w = dict(self.weights)
        for P, n in other.weights.items():
            w[P] = w.get(P, 0) + n
        return Divisor(w)

    def __neg__(self):
        return Divisor({P: -n for P, n in self.weights.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, n: int):
        return Divisor({P: n * w for P, w in self.weights.items()})

    def __eq__(self, other):
        return isinstance(other, Divisor) and self.weights == other.weights

    def __repr__(self):
        if not self.weights:
            return "0"
        return " + ".join(f"{self.weights[P]}*{P!r}" for P in self.support())

    def as_json(self):
        return [{"point": repr(P.rep), "degree": P.degree, "weight": self.weights[P]}
                for P in self.support()]


@dataclass(frozen=True)
class LocalChart:
    point: ProjectivePoint
    chart: int
    param: int
    coords: tuple
    prec: int

    def evaluate(self, form: Form):
        return form(*self.coords)


def _residual_ok(ctx, coords):
    r = ctx.equation(*coords)
    return r.order() is None


def expand_at_boundary(ctx: CurveContext, P: ProjectivePoint, prec: int | None = None) -> LocalChart:
    """Chart at a boundary point (a:b:0).

    For a != 0, put X = 1, t = Z/X and Y/X = b + eps; the curve becomes
    eps^q - eps = t^(q+1), solved by iterating eps <- eps^q - t^(q+1).
    At (0:1:0) put Y = 1, t = Z/Y and X/Y = eps with eps - eps^q = t^(q+1).
    """
    N = default_precision(ctx) if prec is None else prec
    if N < default_precision(ctx):
        raise PrecisionError(f"precision {N} < (q+1)(q+2)", op="expand_at_boundary")
    if P.Z:
        raise DomainError(f"{P!r} is not a boundary point", op="expand_at_boundary")
    return _boundary_chart(ctx, P, N)


@lru_cache(maxsize=4096)
def _boundary_chart(ctx, P, N):
    K, q = P.field, ctx.q
    t = TruncatedSeries.variable(K, N)
    tq1 = t ** (q + 1)
    one = TruncatedSeries.constant(K, 1, N)
    eps = TruncatedSeries(K, [], N)
    affine_x = not P.X.is_zero()
    while True:
        if affine_x:
            nxt = eps.frobenius_power(ctx.e) - tq1
        else:
            nxt = eps.frobenius_power(ctx.e) + tq1
        if nxt == eps:
            break
        eps = nxt
    if affine_x:
        coords = (one, eps + P.Y, t)
        chart = LocalChart(P, 0, 2, coords, N)
    else:
        coords = (eps, one, t)
        chart = LocalChart(P, 1, 2, coords, N)
    if not _residual_ok(ctx, coords):
        raise PrecisionError("boundary expansion did not converge", op="expand_at_boundary")
    return chart


def expand_at_smooth_point(ctx: CurveContext, P: ProjectivePoint, prec: int | None = None) -> LocalChart:
    """Chart at any point, via Newton iteration on the dehomogenized equation.

    The chart is the one where P's normalizing coordinate is 1.  Of the other
    two coordinates, the first (in X, Y, Z order) is the parameter when the
    equation's partial in the second is nonzero at P; otherwise the roles swap.
    """
    N = default_precision(ctx) if prec is None else prec
    if N < 2 * (ctx.q + 1):
        raise PrecisionError(f"precision {N} < 2(q+1)", op="expand_at_smooth_point")
    return _smooth_chart(ctx, P, N)


@lru_cache(maxsize=4096)
def _smooth_chart(ctx, P, N):
    K = P.field
    F = ctx.equation
    c = P.chart()
    i, j = [k for k in range(3) if k != c]
    di = F.derivative(i)(*P.coords)
    dj = F.derivative(j)(*P.coords)
    if dj:
        param, solve = i, j
    elif di:
        param, solve = j, i
    else:
        raise DomainError(f"{P!r} is singular", op="expand_at_smooth_point")
    coords = [None, None, None]
    coords[c] = TruncatedSeries.constant(K, 1, N)
    coords[param] = TruncatedSeries.variable(K, N, shift=P.coords[param])
    S = TruncatedSeries.constant(K, P.coords[solve], N)
    dF = F.derivative(solve)
    for _ in range(math.ceil(math.log2(N)) + 2):
        coords[solve] = S
        r = F(*coords)
        if r.order() is None:
            break
        S = S - r / dF(*coords)
    coords[solve] = S
    coords = tuple(coords)
    if not _residual_ok(ctx, coords):
        raise PrecisionError("Newton iteration did not converge", op="expand_at_smooth_point")
    return LocalChart(P, c, param, coords, N)


def local_chart(ctx: CurveContext, P, prec: int | None = None) -> LocalChart:
    pt = P.rep if isinstance(P, Place) else P
    if not pt.Z:
        return expand_at_boundary(ctx, pt, max(prec or 0, default_precision(ctx)))
    return expand_at_smooth_point(ctx, pt, prec)


def _series_order(val):
    if isinstance(val, FieldElement):
        return 0 if val else None
    return val.order()


def _check_not_multiple(ctx, form: Form, role: str):
    if reduce_mod_curve(form, ctx.q).is_zero():
        raise InvalidInput(f"{role} vanishes identically on the curve", op="valuation")


def form_order(ctx: CurveContext, P, G: Form, prec: int | None = None) -> int:
    """Order of vanishing of the form G at P, in the chart where P is normalized."""
    _check_not_multiple(ctx, G, "form")
    N = prec or default_precision(ctx)
    while True:
        val = local_chart(ctx, P, N).evaluate(G)
        o = _series_order(val)
        if o is not None:
            return o
        if N >= MAX_PRECISION:
            raise PrecisionError(f"order not visible at precision {N}", op="valuation")
        N = min(2 * N, MAX_PRECISION)


def valuation(ctx: CurveContext, P, f, prec: int | None = None) -> int:
    """nu_P(f) for a FormRatio (or a bare Form, measured in P's chart)."""
    if isinstance(f, Form):
        return form_order(ctx, P, f, prec)
    _check_not_multiple(ctx, f.den, "denominator")
    _check_not_multiple(ctx, f.num, "numerator")
    return form_order(ctx, P, f.num, prec) - form_order(ctx, P, f.den, prec)


@lru_cache(maxsize=256)
def _places_cached(ctx, degree, base_degree):
    q_l = ctx.q ** base_degree
    pts = enumerate_points(ctx, base_degree * degree)
    seen = set()
    out = []
    for pt in pts:
        if pt in seen:
            continue
        orbit = [pt]
        cur = pt.map(lambda x: x ** q_l)
        while cur != pt:
            orbit.append(cur)
            cur = cur.map(lambda x: x ** q_l)
        seen.update(orbit)
        if len(orbit) == degree:
            out.append(Place(min(orbit, key=ProjectivePoint.key), degree, base_degree))
    out.sort(key=Place.key)
    return tuple(out)


def places(ctx: CurveContext, degree: int, base_degree: int = 1) -> list[Place]:
    """Places of exact degree ``degree`` over F_{q^base_degree}."""
    return list(_places_cached(ctx, degree, base_degree))


def place_of(ctx: CurveContext, pt: ProjectivePoint, base_degree: int = 1) -> Place:
    """The place through a point given over any extension of the base."""
    q_l = ctx.q ** base_degree
    orbit = [pt]
    cur = pt.map(lambda x: x ** q_l)
    while cur != pt:
        orbit.append(cur)
        cur = cur.map(lambda x: x ** q_l)
    d = len(orbit)
    mine = ctx.degree_of(pt.field)
    for P in places(ctx, d, base_degree):
        emb = ctx.embedding(base_degree * d, mine)
        if P.rep.map(emb) in orbit:
            return P
    raise AssertionError(f"no place found for {pt!r}")  # pragma: no cover


def principal_divisor(ctx: CurveContext, f: FormRatio, search_degree: int | None = None,
                      base_degree: int = 1, prec: int | None = None) -> Divisor:
    """div(f) over F_{q^base_degree}.

    A form of degree e not divisible by the curve equation meets the curve in
    a zero divisor of degree e(q+1), so places are scanned by increasing degree
    until both numerator and denominator zeros are fully accounted for.
    """
    e = f.num.degree
    _check_not_multiple(ctx, f.den, "denominator")
    _check_not_multiple(ctx, f.num, "numerator")
    target = e * (ctx.q + 1)
    if target == 0:
        return Divisor()
    M = search_degree if search_degree is not None else target
    found = [0, 0]
    weights = {}
    for d in range(1, M + 1):
        for P in places(ctx, d, base_degree):
            nu = []
            for k, G in enumerate((f.num, f.den)):
                if G(*P.rep.coords):
                    nu.append(0)
                else:
                    o = form_order(ctx, P, G, prec)
                    found[k] += d * o
                    nu.append(o)
            if nu[0] != nu[1]:
                weights[P] = nu[0] - nu[1]
        if found[0] > target or found[1] > target:
            raise AssertionError("zero count exceeds the intersection number")
        if found == [target, target]:
            return Divisor(weights)
    raise SupportNotFound(
        f"only {found} of {target} zeros found in places of degree <= {M}",
        op="principal_divisor")


def boundary_divisor_report(ctx: CurveContext, place_degree_bound: int = 2,
                            prec: int | None = None) -> dict:
    """Check div(H_P / H_P') = (q+1)P - (q+1)P' for all ordered pairs of
    boundary points, with H_(c:d) = dX - cY, plus the uniformisers Z/X, Z/Y.

    Returns a JSON-friendly summary; ``ok`` is the conjunction of all checks.
    """
    K = ctx.base
    q1 = ctx.q + 1
    bpts = boundary_points(ctx)
    bplaces = [place_of(ctx, pt) for pt in bpts]
    others = [P for d in range(1, place_degree_bound + 1) for P in places(ctx, d)
              if P not in bplaces]
    forms = [boundary_form(K, pt.X, pt.Y) for pt in bpts]
    failures = []
    pairs = 0
    for i, Pi in enumerate(bplaces):
        for j, Pj in enumerate(bplaces):
            if i == j:
                continue
            pairs += 1
            f = FormRatio(forms[i], forms[j])
            expected = Divisor({Pi: q1, Pj: -q1})
            got = principal_divisor(ctx, f, prec=prec)
            stray = [P for P in others if valuation(ctx, P, f, prec)]
            if got != expected or got.degree != 0 or stray:
                failures.append({"pair": [repr(bpts[i]), repr(bpts[j])],
                                 "divisor": got.as_json(), "stray": [repr(P) for P in stray]})
    X, Y, Z = (Form.linear(K, *v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    unif = []
    for pt, P in zip(bpts, bplaces):
        for den, coord in ((X, pt.X), (Y, pt.Y)):
            if coord:
                nu = valuation(ctx, P, FormRatio(Z, den), prec)
                unif.append(nu)
                if nu != 1:
                    failures.append({"uniformiser": repr(pt), "valuation": nu})
    return {"pairs": pairs, "other_places": len(others), "uniformiser_checks": len(unif),
            "failures": failures, "ok": not failures}
