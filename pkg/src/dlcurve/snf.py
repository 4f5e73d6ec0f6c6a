"""Smith normal form over the integers and finitely presented abelian groups."""

from __future__ import annotations

from dataclasses import dataclass

MAX_DIM = 512
ENTRY_BOUND = 1 << 31


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det(M) -> int:
    """Exact determinant (fraction-free Bareiss elimination)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(map(int, row)) for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def smith_normal_form(M):
    """Return (U, D, V) with U M V = D, U and V unimodular, D diagonal with d_i | d_{i+1}.

    Raises OverflowError for entries beyond 2^31 in absolute value.
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    if m > MAX_DIM or n > MAX_DIM:
        raise ValueError(f"matrix {m}x{n} exceeds {MAX_DIM}x{MAX_DIM}")
    if any(abs(x) > ENTRY_BOUND for row in A for x in row):
        raise OverflowError("matrix entry exceeds 2^31")
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row_dst += c * row_src
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the remaining block becomes the pivot
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // piv))
                    dirty |= A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // piv))
                    dirty |= A[t][j] != 0
            if dirty:
                continue
            # pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % piv), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    _check(M, U, A, V)
    return U, A, V


def _check(M, U, D, V):
    if M and M[0]:
        assert matmul(matmul(U, M), V) == D, "U M V != D"
    assert abs(det(U)) == 1 and abs(det(V)) == 1, "transform not unimodular"
    diag = [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    for a, b in zip(diag, diag[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0), "divisibility chain broken"


def invariant_factors(M) -> list[int]:
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def lattice_basis(rows, ncols: int) -> list[list[int]]:
    """Row-echelon basis of the Z-span of ``rows`` (at most ncols rows)."""
    basis: dict[int, list[int]] = {}
    for r in rows:
        v = list(map(int, r))
        while True:
            lead = next((j for j, x in enumerate(v) if x), None)
            if lead is None:
                break
            if lead not in basis:
                if v[lead] < 0:
                    v = [-x for x in v]
                basis[lead] = v
                break
            b = basis[lead]
            if v[lead] % b[lead] == 0:
                c = v[lead] // b[lead]
                v = [x - c * y for x, y in zip(v, b)]
                continue
            # extended gcd step keeps both vectors in the lattice
            a0, b0 = b[lead], v[lead]
            g, s, t = _xgcd(a0, b0)
            new_b = [s * x + t * y for x, y in zip(b, v)]
            v = [(a0 // g) * y - (b0 // g) * x for x, y in zip(b, v)]
            basis[lead] = new_b
    return [basis[k] for k in sorted(basis)]


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class AbelianGroupStructure:
    free_rank: int
    invariants: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.invariants, self.invariants[1:]):
            if b % a:
                raise ValueError("invariant factors must form a divisibility chain")
        if any(d < 2 for d in self.invariants):
            raise ValueError("invariant factors must be >= 2")

    @property
    def order(self) -> int | None:
        """Order of the group, or None if it is infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.invariants:
            out *= d
        return out

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def p_torsion_trivial(self, p: int) -> bool:
        return all(d % p for d in self.invariants)

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.invariants]
        return " x ".join(parts) or "0"


@dataclass
class AbelianPresentation:
    """Z^ngens modulo the row span of ``relations``."""

    ngens: int
    relations: list

    def structure(self) -> AbelianGroupStructure:
        basis = lattice_basis(self.relations, self.ngens)
        if not basis:
            return AbelianGroupStructure(self.ngens, ())
        diag = invariant_factors(basis)
        nonzero = [d for d in diag if d]
        return AbelianGroupStructure(self.ngens - len(nonzero),
                                     tuple(d for d in nonzero if d > 1))
