"""Buchberger engine for ideals and for submodules of free modules.

One algorithm serves both: an ideal is the rank-1 case.  Module terms are
(position, exponent) pairs ordered position-over-term (lower position wins,
ties broken by the ring's monomial order).  Pair selection uses the sugar
strategy; the coprimality criterion is applied in the ideal case and the
chain criterion always.

Syzygies, membership witnesses and lifts all come from a single augmented
computation: each generator g_j is extended to g_j + eps_j with a bookkeeping
position eps_j ranked below every true position.  In a Groebner basis of the
augmented module the elements supported only on bookkeeping positions are a
generating set of the syzygy module, and the bookkeeping tail of any reduction
records a representation in terms of the generators.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import PreconditionError
from .linalg import Matrix
from .ring import Poly, PolyRing

# A module vector: {(position, exponent): coefficient}.
ModVec = dict


def vec_from_polys(column: list[Poly]) -> ModVec:
    vec: ModVec = {}
    for pos, p in enumerate(column):
        for exp, c in p.terms.items():
            vec[(pos, exp)] = c
    return vec


def vec_to_polys(vec: ModVec, ring: PolyRing, ambient: int) -> list[Poly]:
    cols = [dict() for _ in range(ambient)]
    for (pos, exp), c in vec.items():
        cols[pos][exp] = c
    return [Poly(ring, t) for t in cols]


def vec_scale(vec: ModVec, c: Fraction) -> ModVec:
    if c == 0:
        return {}
    return {k: v * c for k, v in vec.items()}


def vec_add_scaled(target: ModVec, src: ModVec, c: Fraction):
    """target += c * src, in place."""
    if c == 0:
        return
    for k, v in src.items():
        s = target.get(k, 0) + c * v
        if s:
            target[k] = s
        else:
            target.pop(k, None)


def vec_mul_term(vec: ModVec, exp: tuple, c: Fraction) -> ModVec:
    out = {}
    for (pos, e), v in vec.items():
        out[(pos, tuple(a + b for a, b in zip(e, exp)))] = v * c
    return out


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


class _Order:
    """Position-over-term key for module terms; larger key = larger term."""

    __slots__ = ("ring_key",)

    def __init__(self, ring: PolyRing):
        self.ring_key = ring.order.key

    def key(self, term):
        pos, exp = term
        return (-pos, self.ring_key(exp))


def _lead(vec: ModVec, order: _Order):
    return max(vec, key=order.key)


def _normal_form(vec: ModVec, basis, order: _Order, sugar=None, basis_sugar=None):
    """Full normal form of vec against monic basis vectors.

    Reduces every reducible term, largest first.  If sugar tracking is
    requested, returns (remainder, sugar); otherwise just the remainder.
    """
    work = dict(vec)
    rem: ModVec = {}
    by_pos: dict[int, list] = {}
    for idx, b in enumerate(basis):
        lt = b["lt"]
        by_pos.setdefault(lt[0], []).append((idx, b))
    while work:
        term = max(work, key=order.key)
        coeff = work[term]
        pos, exp = term
        hit = None
        for idx, b in by_pos.get(pos, ()):
            if _divides(b["lt"][1], exp):
                hit = (idx, b)
                break
        if hit is None:
            del work[term]
            rem[term] = coeff
            continue
        idx, b = hit
        quot = tuple(a - c for a, c in zip(exp, b["lt"][1]))
        vec_add_scaled(work, vec_mul_term(b["vec"], quot, Fraction(1)), -coeff)
        if sugar is not None:
            sugar = max(sugar, basis_sugar[idx] + sum(quot))
    if sugar is not None:
        return rem, sugar
    return rem


def _vec_sugar(vec: ModVec) -> int:
    return max((sum(exp) for (_, exp) in vec), default=0)


def _buchberger(generators: list[ModVec], ring: PolyRing, use_coprime: bool):
    """Reduced Groebner basis of the submodule generated by the vectors."""
    order = _Order(ring)
    basis = []
    sugars = []

    def add_element(vec: ModVec, sug: int):
        lt = _lead(vec, order)
        lc = vec[lt]
        if lc != 1:
            vec = vec_scale(vec, Fraction(1) / lc)
        basis.append({"vec": vec, "lt": lt})
        sugars.append(sug)
        return len(basis) - 1

    pairs = set()
    for g in generators:
        if not g:
            continue
        i = add_element(dict(g), _vec_sugar(g))
        for j in range(i):
            if basis[j]["lt"][0] == basis[i]["lt"][0]:
                pairs.add((j, i))

    def pair_data(i, j):
        lti, ltj = basis[i]["lt"], basis[j]["lt"]
        lcm = tuple(max(a, b) for a, b in zip(lti[1], ltj[1]))
        sug = max(
            sugars[i] + sum(lcm) - sum(lti[1]),
            sugars[j] + sum(lcm) - sum(ltj[1]),
        )
        return lcm, sug

    while pairs:
        best = None
        best_key = None
        for (i, j) in pairs:
            lcm, sug = pair_data(i, j)
            key = (sug, sum(lcm), order.ring_key(lcm), i, j)
            if best_key is None or key < best_key:
                best_key = key
                best = (i, j, lcm, sug)
        i, j, lcm, sug = best
        pairs.discard((i, j))
        lti, ltj = basis[i]["lt"], basis[j]["lt"]
        pos = lti[0]

        # Coprimality criterion (valid for ideals, not for higher-rank
        # modules): disjoint leading monomials reduce to zero.
        if use_coprime and all(
            min(a, b) == 0 for a, b in zip(lti[1], ltj[1])
        ):
            continue
        # Chain criterion: a third element whose leading term divides the
        # lcm, with both companion pairs already handled.
        skip = False
        for k, bk in enumerate(basis):
            if k == i or k == j:
                continue
            if bk["lt"][0] != pos:
                continue
            if _divides(bk["lt"][1], lcm):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik not in pairs and pjk not in pairs:
                    skip = True
                    break
        if skip:
            continue

        s: ModVec = {}
        vec_add_scaled(
            s,
            vec_mul_term(
                basis[i]["vec"],
                tuple(a - b for a, b in zip(lcm, lti[1])),
                Fraction(1),
            ),
            Fraction(1),
        )
        vec_add_scaled(
            s,
            vec_mul_term(
                basis[j]["vec"],
                tuple(a - b for a, b in zip(lcm, ltj[1])),
                Fraction(1),
            ),
            Fraction(-1),
        )
        rem, rsug = _normal_form(s, basis, order, sugar=sug, basis_sugar=sugars)
        if not rem:
            continue
        new = add_element(rem, rsug)
        for k in range(new):
            if basis[k]["lt"][0] == basis[new]["lt"][0]:
                pairs.add((k, new))

    # Minimalize: drop elements whose leading term another kept one divides.
    # Sorting ascending puts divisors before their multiples.
    minimal = []
    for b in sorted(basis, key=lambda b: order.key(b["lt"])):
        lt = b["lt"]
        if any(
            m["lt"][0] == lt[0] and _divides(m["lt"][1], lt[1]) for m in minimal
        ):
            continue
        minimal.append(b)

    # Interreduce tails.
    changed = True
    while changed:
        changed = False
        for i in range(len(minimal)):
            others = minimal[:i] + minimal[i + 1 :]
            rem = _normal_form(dict(minimal[i]["vec"]), others, order)
            if rem != minimal[i]["vec"]:
                changed = True
            if not rem:
                minimal[i] = None
                minimal = [b for b in minimal if b is not None]
                break
            lt = _lead(rem, order)
            lc = rem[lt]
            if lc != 1:
                rem = vec_scale(rem, Fraction(1) / lc)
            minimal[i] = {"vec": rem, "lt": lt}

    minimal.sort(key=lambda b: order.key(b["lt"]), reverse=True)
    return minimal


class SubmoduleGB:
    """Submodule of a free module R^ambient with cached Groebner data."""

    def __init__(self, ring: PolyRing, ambient: int, columns: list[list[Poly]]):
        self.ring = ring
        self.ambient = ambient
        self.columns = [list(c) for c in columns]
        for c in self.columns:
            if len(c) != ambient:
                raise ValueError("column length does not match ambient rank")
        self._order = _Order(ring)
        self._plain = None
        self._aug = None

    @classmethod
    def from_matrix(cls, mat: Matrix) -> "SubmoduleGB":
        return cls(mat.ring, mat.nrows, mat.columns())

    # -- plain basis ----------------------------------------------------

    @property
    def basis(self):
        if self._plain is None:
            vecs = [vec_from_polys(c) for c in self.columns]
            self._plain = _buchberger(vecs, self.ring, use_coprime=self.ambient == 1)
        return self._plain

    def basis_vectors(self) -> list[list[Poly]]:
        return [vec_to_polys(b["vec"], self.ring, self.ambient) for b in self.basis]

    def normal_form_vec(self, column: list[Poly]) -> list[Poly]:
        rem = _normal_form(vec_from_polys(column), self.basis, self._order)
        return vec_to_polys(rem, self.ring, self.ambient)

    def contains(self, column: list[Poly]) -> bool:
        return not _normal_form(vec_from_polys(column), self.basis, self._order)

    def is_full(self) -> bool:
        """Does the submodule contain every standard generator?"""
        one = self.ring.one()
        zero = self.ring.zero()
        for i in range(self.ambient):
            col = [zero] * self.ambient
            col[i] = one
            if not self.contains(col):
                return False
        return True

    # -- augmented basis (syzygies / lifts) ------------------------------

    def _augmented(self):
        if self._aug is None:
            q = len(self.columns)
            vecs = []
            for j, col in enumerate(self.columns):
                v = vec_from_polys(col)
                v[(self.ambient + j, (0,) * self.ring.nvars)] = Fraction(1)
                vecs.append(v)
            self._aug = _buchberger(vecs, self.ring, use_coprime=False)
        return self._aug

    def syzygy_generators(self) -> list[list[Poly]]:
        """Columns (length = number of generators) spanning Ker(generators)."""
        q = len(self.columns)
        out = []
        for b in self._augmented():
            if b["lt"][0] >= self.ambient:
                shifted = {
                    (pos - self.ambient, exp): c for (pos, exp), c in b["vec"].items()
                }
                out.append(vec_to_polys(shifted, self.ring, q))
        return out

    def lift(self, column: list[Poly]) -> list[Poly] | None:
        """Coefficients c with sum c_j * generator_j == column, or None."""
        v = vec_from_polys(column)
        rem = _normal_form(v, self._augmented(), self._order)
        if any(pos < self.ambient for (pos, _) in rem):
            return None
        coeffs = {
            (pos - self.ambient, exp): -c for (pos, exp), c in rem.items()
        }
        return vec_to_polys(coeffs, self.ring, len(self.columns))

    def leading_terms(self) -> list[tuple[int, tuple]]:
        return [b["lt"] for b in self.basis]


# ---------------------------------------------------------------------------
# Ideals
# ---------------------------------------------------------------------------


class _GradeInfinity:
    """Grade of the unit ideal: larger than every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("GRADE_INFINITE")

    def __repr__(self):
        return "INFINITE"

    def __add__(self, other):
        return self

    __radd__ = __add__


GRADE_INFINITE = _GradeInfinity()


def is_finite_grade(g) -> bool:
    return g is not GRADE_INFINITE


class IdealHandle:
    """An ideal with a lazily computed reduced Groebner basis.

    Predicates depend only on the ideal, not on the generator list; the
    reduced basis under the ring's order is the canonical form.
    """

    def __init__(self, ring: PolyRing, generators: list[Poly]):
        self.ring = ring
        gens = []
        for g in generators:
            if g.ring != ring:
                raise PreconditionError("generator from the wrong ring")
            if not g.is_zero():
                gens.append(g)
        self.generators = gens
        self._gb = None

    @classmethod
    def from_strings(cls, ring: PolyRing, texts) -> "IdealHandle":
        return cls(ring, [ring.parse(t) for t in texts])

    def _engine(self) -> SubmoduleGB:
        if self._gb is None:
            self._gb = SubmoduleGB(self.ring, 1, [[g] for g in self.generators])
        return self._gb

    def reduced_basis(self) -> list[Poly]:
        return [col[0] for col in self._engine().basis_vectors()]

    def normal_form(self, f: Poly) -> Poly:
        if f.ring != self.ring:
            raise PreconditionError("polynomial from the wrong ring")
        return self._engine().normal_form_vec([f])[0]

    def contains(self, f: Poly) -> bool:
        return self.normal_form(f).is_zero()

    def is_zero_ideal(self) -> bool:
        return not self.reduced_basis()

    def is_unit_ideal(self) -> bool:
        basis = self.reduced_basis()
        return len(basis) == 1 and basis[0].is_constant()

    def equals(self, other: "IdealHandle") -> bool:
        return self.reduced_basis() == other.reduced_basis()

    def radical_contains(self, f: Poly) -> bool:
        """Rabinowitsch: f in Rad(I) iff 1 in (I, 1 - y*f) with y fresh."""
        if f.ring != self.ring:
            raise PreconditionError("polynomial from the wrong ring")
        if f.is_zero():
            return True
        name = "y_rad"
        while name in self.ring.variables:
            name += "_"
        big = self.ring.extend(name)
        y = big.gen(big.nvars - 1)
        gens = [self.ring.lift(g, big) for g in self.generators]
        gens.append(big.one() - y * self.ring.lift(f, big))
        return IdealHandle(big, gens).is_unit_ideal()

    def krull_dimension(self) -> int:
        """Dimension of R/I via independent variable sets of the initial ideal."""
        if self.is_unit_ideal():
            raise PreconditionError("dimension of the zero ring is undefined")
        supports = [
            frozenset(i for i, e in enumerate(g.lead_exp()) if e)
            for g in self.reduced_basis()
        ]
        k = self.ring.nvars
        for size in range(k, -1, -1):
            for subset in combinations(range(k), size):
                s = frozenset(subset)
                if all(not supp <= s for supp in supports):
                    return size
        return 0

    def grade(self):
        """Grade = height = nvars - dim, valid over Cohen-Macaulay base rings."""
        if self.is_unit_ideal():
            return GRADE_INFINITE
        return self.ring.nvars - self.krull_dimension()

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators) or "0"
        return f"<Ideal ({gens})>"


def minors_ideal(mat: Matrix, t: int) -> IdealHandle:
    """Ideal of all t x t minors, by exact cofactor expansion."""
    if not (1 <= t <= min(mat.nrows, mat.ncols)):
        raise PreconditionError(
            f"minor size {t} out of range for {mat.nrows}x{mat.ncols}"
        )
    gens = []
    for rows in combinations(range(mat.nrows), t):
        for cols in combinations(range(mat.ncols), t):
            gens.append(mat.submatrix(rows, cols).det())
    return IdealHandle(mat.ring, gens)


def maximal_minors_ideal(mat: Matrix) -> IdealHandle:
    """Ideal of maximal minors; the zero ideal for a degenerate shape."""
    t = min(mat.nrows, mat.ncols)
    if t == 0:
        # A map to or from the zero module has no minors; by convention the
        # empty product makes it the unit ideal (the zero map R^0 -> F is
        # split), but every use in this package has t >= 1 or a zero matrix.
        return IdealHandle(mat.ring, [mat.ring.one()])
    return minors_ideal(mat, t)


@lru_cache(maxsize=None)
def _monomials_of_degree(nvars: int, d: int) -> tuple:
    if d < 0:
        return ()
    if nvars == 0:
        return ((),) if d == 0 else ()
    out = []
    for first in range(d, -1, -1):
        for rest in _monomials_of_degree(nvars - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def monomials_of_degree(nvars: int, d: int) -> tuple:
    return _monomials_of_degree(nvars, d)
