"""Exact arithmetic in F_p and its extensions F_{p^k}.

Elements are stored as integer codes: the coefficient vector
``(c_0, ..., c_{k-1})`` of ``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` read as
base-p digits.  Fields of moderate size get lazily built log/exp tables, and
bulk operations over whole fields are vectorized with numpy by treating
multiplication-by-a-constant and Frobenius as F_p-linear maps on digit vectors.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np
import sympy

from .errors import FieldMismatch, FieldTooLarge, InvalidPrime, NoEmbedding

MAX_FIELD_LOG2 = 60
MAX_DEGREE = 24
# element-level log/exp tables (python lists)
TABLE_LIMIT = 1 << 20
# numpy log/exp tables for vectorized scans
VEC_TABLE_LIMIT = 1 << 24
DEFAULT_BLOCK = 1 << 18


def is_prime(n: int) -> bool:
    return n >= 2 and bool(sympy.isprime(n))


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``q == p**e``, or None if q is not a prime power."""
    if q < 2:
        return None
    f = sympy.factorint(q)
    if len(f) != 1:
        return None
    (p, e), = f.items()
    return int(p), int(e)


# -- polynomials over F_p: coefficient lists, constant term first ------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p
                  for i in range(n)])


def _psub(a, b, p):
    return _padd(a, [(-c) % p for c in b], p)


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _pdivmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j in range(len(b)):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _trim(q), _trim(a[:db])


def _pmod(a, f, p):
    if len(a) < len(f):
        return _trim(list(a))
    return _pdivmod(a, f, p)[1]


def _pmulmod(a, b, f, p):
    return _pmod(_pmul(a, b, p), f, p)


def _ppowmod(a, n, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while n:
        if n & 1:
            result = _pmulmod(result, base, f, p)
        n >>= 1
        if n:
            base = _pmulmod(base, base, f, p)
    return result


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    return a


def _peval(f, a, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * a + c) % p
    return acc


def is_irreducible(f, p: int) -> bool:
    """Rabin's test for a monic polynomial ``f`` (constant term first)."""
    f = _trim([c % p for c in f])
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if _ppowmod(x, p ** k, f, p) != x:
        return False
    for r in sympy.primefactors(k):
        h = _psub(_ppowmod(x, p ** (k // r), f, p), x, p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


def lex_smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return (0, 1)
    # c_0 = 0 means x | f; product() varies the last entry fastest, so c_0 is the
    # most significant key
    for c0 in range(1, p):
        for rest in itertools.product(range(p), repeat=k - 1):
            f = [c0, *rest, 1]
            if p <= 64 and any(_peval(f, a, p) == 0 for a in range(p)):
                continue
            if is_irreducible(f, p):
                return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# -- fields --------------------------------------------------------------------

class FiniteField:
    """The field F_p[x]/(modulus) for a monic irreducible ``modulus``."""

    def __init__(self, p: int, modulus):
        if not is_prime(p):
            raise InvalidPrime(f"{p} is not prime", op="make_field")
        modulus = tuple(int(c) % p for c in modulus)
        if not modulus or modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        k = len(modulus) - 1
        if k < 1 or not is_irreducible(list(modulus), p):
            raise ValueError(f"{modulus} is not irreducible over F_{p}")
        self.p = p
        self.k = k
        self.modulus = modulus
        self.order = p ** k
        self._mod = list(modulus)
        self._pw = [p ** i for i in range(k)]
        self._exp = None
        self._log = None
        self._vtables = None
        self._primitive = None
        self._building = False

    @property
    def defining_poly(self) -> list[int]:
        return list(self.modulus)

    def __eq__(self, other):
        return (isinstance(other, FiniteField) and self.p == other.p
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __len__(self):
        return self.order

    # -- element construction
    def __call__(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field != self:
                raise FieldMismatch(f"{x!r} does not lie in {self!r}")
            return x
        if isinstance(x, (int, np.integer)):
            return FieldElement(self, int(x) % self.p)
        return self.from_coeffs(x)

    def from_coeffs(self, coeffs) -> "FieldElement":
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            raise ValueError("too many coefficients")
        return FieldElement(self, self._code(c % self.p for c in coeffs))

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, code)

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    @property
    def gen(self):
        """The class of x."""
        return self.from_coeffs([0, 1]) if self.k > 1 else FieldElement(self, (-self.modulus[0]) % self.p)

    def elements(self):
        for c in range(self.order):
            yield FieldElement(self, c)

    # -- code-level arithmetic
    def _digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.k):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def _code(self, digits) -> int:
        return sum(d * w for d, w in zip(digits, self._pw))

    def _add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % p
        r, w = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            r += ((x + y) % p) * w
            w *= p
        return r

    def _neg(self, a: int) -> int:
        p = self.p
        if p == 2 or a == 0:
            return a
        if self.k == 1:
            return p - a
        r, w = 0, 1
        while a:
            a, x = divmod(a, p)
            r += ((p - x) % p) * w
            w *= p
        return r

    def _poly_mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        r = _pmulmod(_trim(self._digits(a)), _trim(self._digits(b)), self._mod, self.p)
        return self._code(r)

    def _poly_pow(self, a: int, n: int) -> int:
        if self.k == 1:
            return pow(a, n, self.p)
        r = _ppowmod(_trim(self._digits(a)), n, self._mod, self.p)
        return self._code(r)

    def _ensure_tables(self):
        if self._exp is None and not self._building and self.order <= TABLE_LIMIT:
            exp = self.exp_table()
            log = self.log_table()
            self._exp = exp.tolist() * 2
            self._log = log.tolist()
        return self._exp is not None

    def _mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None or self._ensure_tables():
            return self._exp[self._log[a] + self._log[b]]
        return self._poly_mul(a, b)

    def _pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self._inv(a), -n
        if n == 0:
            return 1
        if a == 0:
            return 0
        if self._exp is not None or self._ensure_tables():
            return self._exp[self._log[a] * n % (self.order - 1)]
        return self._poly_pow(a, n)

    def _inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._exp is not None or self._ensure_tables():
            return self._exp[(-self._log[a]) % (self.order - 1)]
        return self._poly_pow(a, self.order - 2)

    # -- structure
    def primitive_element(self) -> "FieldElement":
        """Smallest-code generator of the multiplicative group."""
        if self._primitive is None:
            n = self.order - 1
            primes = sympy.primefactors(n) if n > 1 else []
            for c in range(1, self.order):
                if all(self._poly_pow(c, n // r) != 1 for r in primes):
                    self._primitive = c
                    break
        return FieldElement(self, self._primitive)

    def subfield_elements(self, a: int) -> list["FieldElement"]:
        """The p^a elements of the unique subfield of degree a."""
        if self.k % a:
            raise NoEmbedding(f"no subfield of degree {a} in {self!r}", op="embed")
        if a == self.k:
            return list(self.elements())
        g = self.primitive_element()
        h = g ** ((self.order - 1) // (self.p ** a - 1))
        out, x = [self.zero], self.one
        for _ in range(self.p ** a - 1):
            out.append(x)
            x = x * h
        return out

    # -- vectorized helpers
    def _check_vec(self):
        if self.p >= 1 << 20:
            raise FieldTooLarge("vectorized scans need p < 2^20", op="scan")

    def mul_matrix(self, c) -> np.ndarray:
        """k x k matrix M over F_p with digits(c*y) = digits(y) @ M."""
        c = self(c).code
        rows, xj = [], 1
        for _ in range(self.k):
            rows.append(self._digits(self._mul(c, xj)))
            xj = self._poly_mul(xj, self.p) if self.k > 1 else xj
        return np.array(rows, dtype=np.int64)

    def frobenius_matrix(self, times: int = 1) -> np.ndarray:
        """Matrix of y -> y^(p^times)."""
        e = self.p ** (times % self.k)
        rows, xj = [], 1
        for _ in range(self.k):
            rows.append(self._digits(self._pow(xj, e)))
            xj = self._poly_mul(xj, self.p) if self.k > 1 else xj
        return np.array(rows, dtype=np.int64)

    def vdigits(self, codes: np.ndarray) -> np.ndarray:
        pw = np.array(self._pw, dtype=np.int64)
        return (np.asarray(codes, dtype=np.int64)[:, None] // pw) % self.p

    def vcodes(self, digits: np.ndarray) -> np.ndarray:
        pw = np.array(self._pw, dtype=np.int64)
        return (np.asarray(digits, dtype=np.int64) % self.p) @ pw

    def vlinear(self, codes: np.ndarray, matrix: np.ndarray) -> np.ndarray:
        """Apply an F_p-linear map given as a digit matrix to an array of codes."""
        self._check_vec()
        d = self.vdigits(codes).astype(np.float64)
        out = np.rint(d @ matrix.astype(np.float64)).astype(np.int64) % self.p
        return out @ np.array(self._pw, dtype=np.int64)

    def power_blocks(self, h, count: int, block: int = DEFAULT_BLOCK):
        """Yield arrays with the codes of h^0, h^1, ..., h^(count-1) in order."""
        h = self(h)
        first = np.array([1], dtype=np.int64)
        size = min(block, count)
        while len(first) < size:
            step = h ** len(first)
            nxt = self.vlinear(first, self.mul_matrix(step))
            first = np.concatenate([first, nxt])[:size]
        done = 0
        jump = h ** size
        cur = first
        while done < count:
            n = min(size, count - done)
            yield cur[:n]
            done += n
            if done < count:
                cur = self.vlinear(cur, self.mul_matrix(jump))

    def exp_table(self) -> np.ndarray:
        if self.order > VEC_TABLE_LIMIT:
            raise FieldTooLarge(f"log tables for {self!r} exceed the size limit", op="scan")
        if self._vtables is None:
            n = self.order - 1
            self._building = True
            try:
                exp = np.concatenate(list(self.power_blocks(self.primitive_element(), n)))
            finally:
                self._building = False
            log = np.zeros(self.order, dtype=np.int64)
            log[exp] = np.arange(n, dtype=np.int64)
            self._vtables = (exp, log)
        return self._vtables[0]

    def log_table(self) -> np.ndarray:
        """log[c] w.r.t. the primitive element; log[0] is a meaningless 0."""
        self.exp_table()
        return self._vtables[1]

    def vmul(self, a, b):
        exp, log = self.exp_table(), self.log_table()
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        out = exp[(log[a] + log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a, n: int):
        exp, log = self.exp_table(), self.log_table()
        a = np.asarray(a, dtype=np.int64)
        out = exp[(log[a] * (n % (self.order - 1))) % (self.order - 1)]
        if n == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def vadd(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        return self.vcodes(self.vdigits(a) + self.vdigits(b))

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return self.vcodes(-self.vdigits(a))

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))


class FieldElement:
    """An element of a FiniteField.  Integers coerce into the prime subfield."""

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        self.field = field
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field._digits(self.code))

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}", op="arith")
            return other.code
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field._add(self.code, o))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.code))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field._add(self.code, self.field._neg(o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field._mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field._mul(self.code, self.field._inv(o)))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field._pow(self.code, n))

    def inverse(self):
        return FieldElement(self.field, self.field._inv(self.code))

    def frobenius(self, times: int = 1):
        return frobenius(self, times)

    def is_zero(self) -> bool:
        return self.code == 0

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        return (isinstance(other, FieldElement) and self.code == other.code
                and self.field == other.field)

    def __hash__(self):
        return hash((self.field, self.code))

    def __lt__(self, other):
        return self.coeffs < other.coeffs

    def __repr__(self):
        if self.field.k == 1:
            return str(self.code)
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(f"{c}{mon}" if c != 1 or i == 0 else mon)
        return " + ".join(reversed(terms)) if terms else "0"


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FiniteField:
    """Deterministic F_{p^k} defined by the lex-smallest monic irreducible."""
    if not is_prime(p):
        raise InvalidPrime(f"{p} is not prime", op="make_field")
    if k < 1 or k > MAX_DEGREE or k * math.log2(p) > MAX_FIELD_LOG2:
        raise FieldTooLarge(f"F_{p}^{k} exceeds the supported size", op="make_field")
    return FiniteField(p, lex_smallest_irreducible(p, k))


class Embedding:
    """Ring embedding src -> dst fixed by the image of src's generator."""

    def __init__(self, source: FiniteField, target: FiniteField, image: FieldElement):
        self.source = source
        self.target = target
        self.image = image
        self._powers = [target.one]
        for _ in range(source.k - 1):
            self._powers.append(self._powers[-1] * image)
        self._cache = {}

    def __call__(self, x) -> FieldElement:
        x = self.source(x)
        r = self._cache.get(x.code)
        if r is None:
            acc = self.target.zero
            for c, g in zip(x.coeffs, self._powers):
                if c:
                    acc = acc + g * c
            r = self._cache[x.code] = acc
        return r

    def matrix(self) -> np.ndarray:
        """source.k x target.k digit matrix of the embedding."""
        return np.array([self.target._digits(g.code) for g in self._powers], dtype=np.int64)

    def __repr__(self):
        return f"Embedding({self.source!r} -> {self.target!r}, x -> {self.image!r})"


def _eval_poly(coeffs, x: FieldElement) -> FieldElement:
    acc = x.field.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@lru_cache(maxsize=None)
def embed(src: FiniteField, dst: FiniteField) -> Embedding:
    if src.p != dst.p or dst.k % src.k:
        raise NoEmbedding(f"{src!r} does not embed in {dst!r}", op="embed")
    if src == dst:
        return Embedding(src, dst, dst.gen)
    if src.k == 1:
        # the root of x - a is the prime-field element a
        return Embedding(src, dst, dst(-src.modulus[0]))
    roots = [x for x in dst.subfield_elements(src.k) if not _eval_poly(src.modulus, x)]
    # first root in code order
    image = min(roots, key=lambda x: x.code)
    return Embedding(src, dst, image)


def frobenius(x: FieldElement, times: int = 1) -> FieldElement:
    """x -> x^(p^times)."""
    if times < 0:
        raise ValueError("times must be non-negative")
    f = x.field
    return x ** (f.p ** (times % f.k))


def nth_power_fiber_count(fld: FiniteField, n: int, v) -> int:
    """#{c in fld : c^n = v}."""
    if n < 1:
        raise ValueError("n must be positive")
    v = fld(v)
    if v.is_zero():
        return 1
    d = math.gcd(n, fld.order - 1)
    return d if v ** ((fld.order - 1) // d) == fld.one else 0
