"""Power series over a finite field truncated at a fixed precision."""

from __future__ import annotations

from .ffield import FieldElement, FiniteField


class TruncatedSeries:
    """c_0 + c_1 t + ... + c_{N-1} t^{N-1} + O(t^N), coefficients as field codes."""

    __slots__ = ("field", "coeffs", "prec")

    def __init__(self, field: FiniteField, coeffs, prec: int):
        coeffs = [c.code if isinstance(c, FieldElement) else int(c) for c in coeffs][:prec]
        coeffs += [0] * (prec - len(coeffs))
        self.field = field
        self.coeffs = coeffs
        self.prec = prec

    @classmethod
    def constant(cls, field, c, prec):
        return cls(field, [field(c)], prec)

    @classmethod
    def variable(cls, field, prec, shift=None):
        """t, or shift + t."""
        c0 = field(shift).code if shift is not None else 0
        return cls(field, [c0, 1], prec)

    def __getitem__(self, i) -> FieldElement:
        return FieldElement(self.field, self.coeffs[i])

    def order(self) -> int | None:
        """Index of the first nonzero coefficient; None if zero to this precision."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def _lift(self, other):
        if isinstance(other, TruncatedSeries):
            if other.field != self.field or other.prec != self.prec:
                raise ValueError("series live in different rings")
            return other
        return TruncatedSeries.constant(self.field, other, self.prec)

    def __add__(self, other):
        other = self._lift(other)
        add = self.field._add
        return TruncatedSeries(self.field, [add(a, b) for a, b in zip(self.coeffs, other.coeffs)],
                               self.prec)

    __radd__ = __add__

    def __neg__(self):
        neg = self.field._neg
        return TruncatedSeries(self.field, [neg(a) for a in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = self.field(other).code
            mul = self.field._mul
            return TruncatedSeries(self.field, [mul(a, c) for a in self.coeffs], self.prec)
        other = self._lift(other)
        f, n = self.field, self.prec
        mul, add = f._mul, f._add
        out = [0] * n
        b = other.coeffs
        nz_b = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            for j, y in nz_b:
                if i + j >= n:
                    break
                out[i + j] = add(out[i + j], mul(x, y))
        return TruncatedSeries(f, out, n)

    __rmul__ = __mul__

    def inverse(self):
        f, n = self.field, self.prec
        a = self.coeffs
        if not a[0]:
            raise ZeroDivisionError("series with zero constant term is not a unit")
        inv0 = f._inv(a[0])
        mul, add, neg = f._mul, f._add, f._neg
        out = [inv0] + [0] * (n - 1)
        for k in range(1, n):
            acc = 0
            for j in range(1, k + 1):
                if a[j] and out[k - j]:
                    acc = add(acc, mul(a[j], out[k - j]))
            out[k] = mul(neg(acc), inv0)
        return TruncatedSeries(f, out, n)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def frobenius_power(self, j: int = 1):
        """self^(p^j): (sum c_i t^i)^(p^j) = sum c_i^(p^j) t^(i p^j) in characteristic p."""
        f, n = self.field, self.prec
        e = f.p ** j
        out = [0] * n
        for i, c in enumerate(self.coeffs):
            if i * e >= n:
                break
            if c:
                out[i * e] = f._pow(c, e)
        return TruncatedSeries(f, out, n)

    def __pow__(self, m: int):
        if m < 0:
            return self.inverse() ** (-m)
        p = self.field.p
        result = None
        base = self
        # write m in base p; base^(p^j) via Frobenius
        while m:
            m, r = divmod(m, p)
            for _ in range(r):
                result = base if result is None else result * base
            if m:
                base = base.frobenius_power(1)
        return result if result is not None else TruncatedSeries.constant(self.field, 1, self.prec)

    def truncate(self, prec: int):
        return TruncatedSeries(self.field, self.coeffs[:prec], prec)

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries) and self.field == other.field
                and self.prec == other.prec and self.coeffs == other.coeffs)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                e = self[i]
                mon = "" if i == 0 else (" t" if i == 1 else f" t^{i}")
                terms.append(f"({e!r}){mon}")
        return (" + ".join(terms) or "0") + f" + O(t^{self.prec})"
