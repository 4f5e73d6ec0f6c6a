"""Homogeneous polynomials in X, Y, Z and ratios of them."""

from __future__ import annotations

from dataclasses import dataclass

from .ffield import FieldElement, FiniteField, embed, make_field

VARS = "XYZ"


class Form:
    """A homogeneous form sum c_{ijk} X^i Y^j Z^k with coefficients in ``field``.

    The zero form has no terms; its degree is whatever was passed in.
    """

    __slots__ = ("field", "terms", "degree")

    def __init__(self, field: FiniteField, terms: dict, degree: int | None = None):
        clean = {}
        for mon, c in terms.items():
            c = field(c)
            if c:
                clean[tuple(mon)] = c
        degs = {sum(m) for m in clean}
        if len(degs) > 1:
            raise ValueError(f"form is not homogeneous: degrees {sorted(degs)}")
        if degree is None:
            if not degs:
                raise ValueError("degree of a zero form must be given")
            degree = degs.pop()
        elif degs and degs.pop() != degree:
            raise ValueError("declared degree does not match the terms")
        self.field = field
        self.terms = clean
        self.degree = degree

    @classmethod
    def constant(cls, field, c=1):
        return cls(field, {(0, 0, 0): c}, 0)

    @classmethod
    def linear(cls, field, a, b, c=0):
        """a X + b Y + c Z."""
        return cls(field, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c}, 1)

    @classmethod
    def monomial(cls, field, exps, c=1):
        return cls(field, {tuple(exps): c})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, Form) and self.field == other.field
                and self.degree == other.degree and self.terms == other.terms)

    def __hash__(self):
        return hash((self.field, self.degree, frozenset(self.terms.items())))

    def __add__(self, other):
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return Form(self.field, terms, self.degree)

    def __neg__(self):
        return Form(self.field, {m: -c for m, c in self.terms.items()}, self.degree)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Form):
            terms = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                    terms[m] = terms[m] + c1 * c2 if m in terms else c1 * c2
            return Form(self.field, terms, self.degree + other.degree)
        return Form(self.field, {m: c * other for m, c in self.terms.items()}, self.degree)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Form.constant(self.field)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self, var: int) -> "Form":
        """Partial derivative in X (0), Y (1) or Z (2); exponents reduce mod p."""
        terms = {}
        for m, c in self.terms.items():
            if m[var]:
                mm = list(m)
                mm[var] -= 1
                terms[tuple(mm)] = c * m[var]
        return Form(self.field, terms, max(self.degree - 1, 0))

    def change_field(self, target: FiniteField) -> "Form":
        if target == self.field:
            return self
        emb = embed(self.field, target)
        return Form(target, {m: emb(c) for m, c in self.terms.items()}, self.degree)

    def __call__(self, x, y, z):
        """Evaluate at field elements or truncated series (all in one ring)."""
        target = x.field
        emb = None if target == self.field else embed(self.field, target)
        acc = None
        cache = {}

        def power(v, i, n):
            key = (i, n)
            if key not in cache:
                cache[key] = v ** n
            return cache[key]

        for m, c in self.terms.items():
            term = emb(c) if emb is not None else c
            val = None
            for i, (v, n) in enumerate(zip((x, y, z), m)):
                if n:
                    pv = power(v, i, n)
                    val = pv if val is None else val * pv
            val = term if val is None else val * term
            acc = val if acc is None else acc + val
        if acc is None:
            return x * 0
        return acc

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), reverse=True):
            mon = "*".join(f"{v}^{n}" if n > 1 else v for v, n in zip(VARS, m) if n)
            coef = repr(c)
            if not mon:
                parts.append(coef)
            elif coef == "1":
                parts.append(mon)
            else:
                parts.append(f"({coef})*{mon}")
        return " + ".join(parts)


def curve_form(q: int, p: int) -> Form:
    """X Y^q - Y X^q - Z^(q+1) over the prime field."""
    Fp = make_field(p)
    return Form(Fp, {(1, q, 0): 1, (q, 1, 0): -1, (0, 0, q + 1): -1})


def reduce_mod_curve(form: Form, q: int) -> Form:
    """Normal form modulo the curve: rewrite Z^(q+1) as X Y^q - Y X^q."""
    terms = dict(form.terms)
    while True:
        hit = [m for m in terms if m[2] >= q + 1]
        if not hit:
            break
        m = max(hit, key=lambda mm: mm[2])
        c = terms.pop(m)
        base = (m[0], m[1], m[2] - q - 1)
        for shift, sign in (((1, q, 0), 1), ((q, 1, 0), -1)):
            mm = (base[0] + shift[0], base[1] + shift[1], base[2])
            val = c * sign
            if mm in terms:
                val = terms[mm] + val
            terms[mm] = val
        terms = {k: v for k, v in terms.items() if v}
    return Form(form.field, terms, form.degree)


@dataclass(frozen=True)
class FormRatio:
    """A rational function num/den on the curve, both forms of one degree."""

    num: Form
    den: Form

    def __post_init__(self):
        if self.num.degree != self.den.degree:
            raise ValueError("numerator and denominator need equal degrees")
        if self.den.is_zero():
            raise ValueError("zero denominator")

    def __mul__(self, other: "FormRatio") -> "FormRatio":
        return FormRatio(self.num * other.num, self.den * other.den)

    def inverse(self) -> "FormRatio":
        return FormRatio(self.den, self.num)


def boundary_form(field: FiniteField, c, d) -> Form:
    """H_(c:d) = d X - c Y, vanishing on the boundary point (c:d:0)."""
    return Form.linear(field, d, -field(c))
