"""The affine curve u v^q - v u^q = 1 and its projective closure
X Y^q - Y X^q = Z^(q+1) over finite extensions of F_q.

The extension F_{q^m} is always ``make_field(p, e*m)`` for q = p^e, so every
field in a tower is deterministic and embeddings between them are fixed by
:func:`dlcurve.ffield.embed`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import DomainError, FieldMismatch, FieldTooLarge, InvalidInput
from .ffield import FieldElement, FiniteField, embed, make_field, prime_power
from .forms import Form, curve_form

MAX_Q = 1 << 13
DEFAULT_SCAN_LOG2 = 27
# enumerate_points materializes point objects; counting has no such limit
ENUM_LIMIT = 1 << 20
SCAN_BLOCK = 1 << 18


@dataclass(frozen=True)
class CurveContext:
    q: int
    p: int
    e: int

    @property
    def base(self) -> FiniteField:
        return make_field(self.p, self.e)

    def field(self, m: int = 1) -> FiniteField:
        """F_{q^m}."""
        return make_field(self.p, self.e * m)

    def embedding(self, a: int, b: int):
        return embed(self.field(a), self.field(b))

    def degree_of(self, field: FiniteField) -> int:
        """m with field = F_{q^m}."""
        if field.p != self.p or field.k % self.e:
            raise FieldMismatch(f"{field!r} is not an extension of F_{self.q}")
        return field.k // self.e

    @cached_property
    def equation(self) -> Form:
        return curve_form(self.q, self.p)

    def __repr__(self):
        return f"CurveContext(q={self.q})"


def curve_context(q: int) -> CurveContext:
    pe = prime_power(q)
    if pe is None:
        raise InvalidInput(f"q = {q} is not a prime power", op="curve_context")
    if q > MAX_Q:
        raise InvalidInput(f"q = {q} exceeds the desk-scale limit {MAX_Q}", op="curve_context")
    return CurveContext(q, *pe)


@dataclass(frozen=True, order=False)
class ProjectivePoint:
    """A point (X:Y:Z) normalized so its first nonzero coordinate is 1."""

    X: FieldElement
    Y: FieldElement
    Z: FieldElement

    @classmethod
    def normalized(cls, X, Y, Z) -> "ProjectivePoint":
        for c in (X, Y, Z):
            if c:
                inv = c.inverse()
                return cls(X * inv, Y * inv, Z * inv)
        raise DomainError("(0:0:0) is not a projective point", op="normalize")

    @property
    def field(self) -> FiniteField:
        return self.X.field

    @property
    def coords(self):
        return (self.X, self.Y, self.Z)

    def key(self):
        return (self.X.coeffs, self.Y.coeffs, self.Z.coeffs)

    def chart(self) -> int:
        """Index of the coordinate normalized to 1."""
        return next(i for i, c in enumerate(self.coords) if c)

    def map(self, f) -> "ProjectivePoint":
        return ProjectivePoint(f(self.X), f(self.Y), f(self.Z))

    def __repr__(self):
        return f"({self.X!r} : {self.Y!r} : {self.Z!r})"


@dataclass(frozen=True)
class AffinePoint:
    u: FieldElement
    v: FieldElement


@dataclass(frozen=True)
class SpecialFibrePoint:
    y: FieldElement
    t: FieldElement


def _same_field(*xs):
    f = xs[0].field
    if any(x.field != f for x in xs):
        raise FieldMismatch("coordinates lie in different fields", op="eval_Z")
    return f


def eval_Z(ctx: CurveContext, X, Y, Z) -> FieldElement:
    """X Y^q - Y X^q - Z^(q+1)."""
    _same_field(X, Y, Z)
    q = ctx.q
    return X * Y ** q - Y * X ** q - Z ** (q + 1)


def eval_Y(ctx: CurveContext, u, v) -> FieldElement:
    """u v^q - v u^q - 1."""
    _same_field(u, v)
    q = ctx.q
    return u * v ** q - v * u ** q - 1


def genus(ctx: CurveContext) -> int:
    return ctx.q * (ctx.q - 1) // 2


def boundary_points(ctx: CurveContext, m: int = 1) -> list[ProjectivePoint]:
    """P_0 = (1:0:0), then (1:b:0) for b in F_q^* in code order, then (0:1:0).

    With ``m > 1`` the same points are returned embedded in F_{q^m}.
    """
    F = ctx.base
    pts = [ProjectivePoint(F.one, F.element(c), F.zero) for c in range(F.order)]
    pts.append(ProjectivePoint(F.zero, F.one, F.zero))
    if m > 1:
        emb = ctx.embedding(1, m)
        pts = [pt.map(emb) for pt in pts]
    return pts


def _check_scan(Q: int, max_log2: int, op: str):
    if Q > 1 << max_log2:
        raise FieldTooLarge(f"scan over {Q} elements exceeds 2^{max_log2}", op=op)


def _artin_schreier_matrix(ctx: CurveContext, K: FiniteField) -> np.ndarray:
    """Digit matrix of the F_p-linear map b -> b^q - b on K."""
    M = K.frobenius_matrix(ctx.e) - np.eye(K.k, dtype=np.int64)
    return M % K.p


def _fiber_targets(ctx: CurveContext, K: FiniteField, codes: np.ndarray) -> np.ndarray:
    return K.vlinear(codes, _artin_schreier_matrix(ctx, K))


def count_points(ctx: CurveContext, m: int, max_log2: int = DEFAULT_SCAN_LOG2) -> int:
    """|Z(F_{q^m})| = 1 + sum_b #{c : c^(q+1) = b^q - b}.

    The leading 1 is (0:1:0).  A nonzero v has gcd(q+1, Q-1) preimages under
    c -> c^(q+1) when it is a gcd-th power, and none otherwise; the gcd-th powers
    are marked by walking the subgroup they form.
    """
    K = ctx.field(m)
    Q = K.order
    _check_scan(Q, max_log2, "count_points")
    d = math.gcd(ctx.q + 1, Q - 1)
    if d > 1:
        is_power = np.zeros(Q, dtype=bool)
        h = K.primitive_element() ** d
        for blk in K.power_blocks(h, (Q - 1) // d, SCAN_BLOCK):
            is_power[blk] = True
    total = 1
    M = _artin_schreier_matrix(ctx, K)
    for start in range(0, Q, SCAN_BLOCK):
        codes = np.arange(start, min(start + SCAN_BLOCK, Q), dtype=np.int64)
        v = K.vlinear(codes, M)
        zeros = int(np.count_nonzero(v == 0))
        if d > 1:
            total += zeros + d * int(np.count_nonzero(is_power[v[v != 0]]))
        else:
            total += len(codes)
    return total


def enumerate_points(ctx: CurveContext, m: int) -> list[ProjectivePoint]:
    """All points of Z(F_{q^m}), normalized and sorted by coefficient vectors."""
    K = ctx.field(m)
    Q = K.order
    if Q > ENUM_LIMIT:
        raise FieldTooLarge(
            f"enumerating F_{Q} points exceeds {ENUM_LIMIT}; use count_points",
            op="enumerate_points")
    return list(_enumerate_cached(ctx, m))


@lru_cache(maxsize=64)
def _enumerate_cached(ctx: CurveContext, m: int) -> tuple[ProjectivePoint, ...]:
    K = ctx.field(m)
    Q = K.order
    n = Q - 1
    q1 = ctx.q + 1
    d = math.gcd(q1, n)
    b = np.arange(Q, dtype=np.int64)
    v = _fiber_targets(ctx, K, b)
    pts = [ProjectivePoint(K.zero, K.one, K.zero)]
    # v = 0 gives c = 0
    for bc in b[v == 0].tolist():
        pts.append(ProjectivePoint(K.one, K.element(bc), K.zero))
    nz = v != 0
    if Q > 2:
        log = K.log_table()
        exp = K.exp_table()
        lv = log[v[nz]]
        ok = lv % d == 0
        bs = b[nz][ok]
        lv = lv[ok]
        nd = n // d
        inv = pow(q1 // d, -1, nd) if nd > 1 else 0
        x0 = ((lv // d) * inv) % nd if nd > 1 else np.zeros_like(lv)
        for j in range(d):
            cs = exp[(x0 + j * nd) % n]
            for bc, cc in zip(bs.tolist(), cs.tolist()):
                pts.append(ProjectivePoint(K.one, K.element(bc), K.element(cc)))
    else:
        # F_2: c^(q+1) = 1 forces c = 1
        for bc in b[nz].tolist():
            pts.append(ProjectivePoint(K.one, K.element(bc), K.one))
    pts.sort(key=ProjectivePoint.key)
    return tuple(pts)


def affine_points(ctx: CurveContext, m: int) -> list[AffinePoint]:
    """Y(F_{q^m}) read off from the Z != 0 part of Z(F_{q^m})."""
    return [AffinePoint(pt.X / pt.Z, pt.Y / pt.Z)
            for pt in enumerate_points(ctx, m) if pt.Z]


def count_affine_points(ctx: CurveContext, m: int, max_pairs_log2: int = 24) -> int:
    """|Y(F_{q^m})| by brute force over all pairs (u, v)."""
    K = ctx.field(m)
    Q = K.order
    _check_scan(Q * Q, max_pairs_log2, "count_affine_points")
    q = ctx.q
    vs = np.arange(Q, dtype=np.int64)
    vq = K.vpow(vs, q)
    total = 0
    for u in range(Q):
        uq = K.vpow(np.array([u]), q)[0]
        lhs = K.vsub(K.vmul(np.full(Q, u), vq), K.vmul(vs, np.full(Q, uq)))
        total += int(np.count_nonzero(lhs == 1))
    return total


@dataclass(frozen=True)
class SmoothnessResult:
    smooth: bool
    witness: ProjectivePoint | None
    max_ext: int
    points_checked: int


def is_smooth(ctx: CurveContext, max_ext: int = 6) -> SmoothnessResult:
    """Search for a common zero of the partial derivatives over F_{q^m}, m <= max_ext.

    The derivatives are taken with integer exponents reduced in characteristic
    p, so q X^(q-1) Y and (q+1) Z^q become 0 and Z^q.  Since q+1 = 1 in F_p,
    Euler's identity X dF/dX + Y dF/dY + Z dF/dZ = F puts every common zero of
    the gradient on the curve, so scanning curve points is exhaustive.
    """
    F = ctx.equation
    grads = [F.derivative(i) for i in range(3)]
    checked = 0
    for m in range(1, max_ext + 1):
        if ctx.field(m).order > ENUM_LIMIT:
            raise FieldTooLarge(f"smoothness scan over F_{ctx.q}^{m} too large", op="is_smooth")
        for pt in enumerate_points(ctx, m):
            checked += 1
            if all(not g(*pt.coords) for g in grads):
                return SmoothnessResult(False, pt, m, checked)
    return SmoothnessResult(True, None, max_ext, checked)


def special_fibre_points(ctx: CurveContext, m: int) -> list[SpecialFibrePoint]:
    """All (y, t) over F_{q^m} with t^(q+1) = y^q - y and t != 0, by direct scan."""
    K = ctx.field(m)
    if K.order > ENUM_LIMIT:
        raise FieldTooLarge("special fibre scan too large", op="special_fibre_points")
    q = ctx.q
    ys = np.arange(K.order, dtype=np.int64)
    rhs = K.vsub(K.vpow(ys, q), ys)
    tq = K.vpow(ys, q + 1)
    by_value: dict[int, list[int]] = {}
    for yc, r in enumerate(rhs.tolist()):
        by_value.setdefault(r, []).append(yc)
    out = []
    for tc in range(1, K.order):
        for yc in by_value.get(int(tq[tc]), ()):
            out.append(SpecialFibrePoint(K.element(yc), K.element(tc)))
    return out


def affiso_forward(ctx: CurveContext, pt: SpecialFibrePoint) -> AffinePoint:
    """(y, t) -> (u, v) = (1/t, y/t)."""
    if not pt.t:
        raise DomainError("t = 0 is not on the special fibre", op="affiso_forward")
    inv = pt.t.inverse()
    return AffinePoint(inv, pt.y * inv)


def affiso_backward(ctx: CurveContext, pt: AffinePoint) -> SpecialFibrePoint:
    """(u, v) -> (y, t) = (v/u, 1/u)."""
    if not pt.u:
        raise DomainError("u = 0 cannot occur on u v^q - v u^q = 1", op="affiso_backward")
    inv = pt.u.inverse()
    return SpecialFibrePoint(pt.v * inv, inv)
