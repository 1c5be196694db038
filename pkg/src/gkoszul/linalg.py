"""Dense matrices of polynomials with explicit dimensions.

Everything at desk scale; no attempt at asymptotic cleverness.  Dimensions
are tracked separately from the row data so that 0xN and Nx0 matrices stay
well-defined (they occur at the ends of complexes before trimming).
"""

from __future__ import annotations

from .errors import RingMismatchError
from .ring import Poly, PolyRing


class Matrix:
    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: PolyRing, nrows: int, ncols: int, rows=None):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            z = ring.zero()
            rows = [[z] * ncols for _ in range(nrows)]
        else:
            rows = [list(r) for r in rows]
            if len(rows) != nrows or any(len(r) != ncols for r in rows):
                raise ValueError("row data does not match dimensions")
        self.rows = rows

    @classmethod
    def from_rows(cls, ring: PolyRing, rows) -> "Matrix":
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(ring, nrows, ncols, rows)

    @classmethod
    def identity(cls, ring: PolyRing, n: int) -> "Matrix":
        m = cls(ring, n, n)
        one = ring.one()
        for i in range(n):
            m.rows[i][i] = one
        return m

    @classmethod
    def zeros(cls, ring: PolyRing, nrows: int, ncols: int) -> "Matrix":
        return cls(ring, nrows, ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __setitem__(self, ij, value: Poly):
        i, j = ij
        self.rows[i][j] = value

    def copy(self) -> "Matrix":
        return Matrix(self.ring, self.nrows, self.ncols, [r[:] for r in self.rows])

    def column(self, j: int) -> list[Poly]:
        return [self.rows[i][j] for i in range(self.nrows)]

    def columns(self) -> list[list[Poly]]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.ring,
            self.ncols,
            self.nrows,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            self.ring,
            self.nrows,
            self.ncols,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def scale(self, c) -> "Matrix":
        return Matrix(
            self.ring, self.nrows, self.ncols, [[e * c for e in r] for r in self.rows]
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise RingMismatchError("matrix rings differ")
        if self.ncols != other.nrows:
            raise ValueError(
                f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}"
            )
        zero = self.ring.zero()
        out = Matrix(self.ring, self.nrows, other.ncols)
        for i in range(self.nrows):
            srow = self.rows[i]
            orow = out.rows[i]
            for k in range(self.ncols):
                a = srow[k]
                if a.is_zero():
                    continue
                brow = other.rows[k]
                for j in range(other.ncols):
                    b = brow[j]
                    if not b.is_zero():
                        orow[j] = orow[j] + a * b
        return out

    def apply(self, vec: list[Poly]) -> list[Poly]:
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        out = [self.ring.zero()] * self.nrows
        for j, v in enumerate(vec):
            if v.is_zero():
                continue
            for i in range(self.nrows):
                e = self.rows[i][j]
                if not e.is_zero():
                    out[i] = out[i] + e * v
        return out

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix(
            self.ring,
            self.nrows,
            self.ncols + other.ncols,
            [r1 + r2 for r1, r2 in zip(self.rows, other.rows)],
        )

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        return Matrix(
            self.ring,
            len(row_idx),
            len(col_idx),
            [[self.rows[i][j] for j in col_idx] for i in row_idx],
        )

    def kron_identity_left(self, k: int) -> "Matrix":
        """I_k (x) self, for maps that leave an outer tensor factor alone."""
        out = Matrix(self.ring, k * self.nrows, k * self.ncols)
        for b in range(k):
            ro, co = b * self.nrows, b * self.ncols
            for i in range(self.nrows):
                for j in range(self.ncols):
                    e = self.rows[i][j]
                    if not e.is_zero():
                        out.rows[ro + i][co + j] = e
        return out

    def kron_identity_right(self, k: int) -> "Matrix":
        """self (x) I_k, for maps that leave an inner tensor factor alone."""
        out = Matrix(self.ring, self.nrows * k, self.ncols * k)
        for i in range(self.nrows):
            for j in range(self.ncols):
                e = self.rows[i][j]
                if not e.is_zero():
                    for b in range(k):
                        out.rows[i * k + b][j * k + b] = e
        return out

    def det(self) -> Poly:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return self.ring.one()
        return _det_expand(self.ring, self.rows, list(range(n)), list(range(n)))

    def entry_degrees(self) -> set[int]:
        """Homogeneous degrees of all nonzero entries (None if some entry mixed)."""
        degs = set()
        for row in self.rows:
            for e in row:
                if e.is_zero():
                    continue
                d = e.homogeneous_degree()
                if d is None:
                    return {None}
                degs.add(d)
        return degs

    def uniform_degree(self) -> int | None:
        """Common homogeneous degree of all nonzero entries.

        Zero matrices report 0; mixed or inhomogeneous matrices report None.
        """
        degs = self.entry_degrees()
        if not degs:
            return 0
        if len(degs) == 1 and None not in degs:
            return degs.pop()
        return None

    def _check_same_shape(self, other: "Matrix"):
        if self.ring != other.ring:
            raise RingMismatchError("matrix rings differ")
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")

    def to_json(self) -> dict:
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "entries": [[str(e) for e in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, ring: PolyRing, data) -> "Matrix":
        if isinstance(data, list):
            rows = [[ring.parse(s) for s in row] for row in data]
            return cls.from_rows(ring, rows)
        rows = [[ring.parse(s) for s in row] for row in data["entries"]]
        return cls(ring, data["rows"], data["cols"], rows)

    def __repr__(self):
        if self.nrows * self.ncols == 0:
            return f"<Matrix {self.nrows}x{self.ncols}>"
        body = "; ".join(", ".join(str(e) for e in row) for row in self.rows)
        return f"<Matrix {self.nrows}x{self.ncols} [{body}]>"


def _det_expand(ring, rows, ridx, cidx) -> Poly:
    n = len(ridx)
    if n == 1:
        return rows[ridx[0]][cidx[0]]
    if n == 2:
        a, b = rows[ridx[0]][cidx[0]], rows[ridx[0]][cidx[1]]
        c, d = rows[ridx[1]][cidx[0]], rows[ridx[1]][cidx[1]]
        return a * d - b * c
    total = ring.zero()
    for k, c in enumerate(cidx):
        pivot = rows[ridx[0]][c]
        if pivot.is_zero():
            continue
        minor = _det_expand(ring, rows, ridx[1:], cidx[:k] + cidx[k + 1 :])
        term = pivot * minor
        total = total + (term if k % 2 == 0 else -term)
    return total
