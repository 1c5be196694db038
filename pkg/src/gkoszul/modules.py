"""Finitely presented modules over QQ[x1..xk].

A module is an ambient free rank together with a relation matrix whose
columns span the relation submodule, plus optional per-generator internal
degrees (twists).  Kernels, cokernels, homology and Hilbert functions are
computed through the Groebner engine; any map between presented modules
carries a well-definedness certificate (its matrix sends relations into
relations), checked at construction.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import CertificateError, PreconditionError, UngradedError
from .groebner import SubmoduleGB, monomials_of_degree
from .linalg import Matrix
from .multilinear import (
    multiset_index,
    multiset_insert,
    multisets,
    shuffle_sign,
    sorted_merge,
    subset_index,
    subsets,
)
from .ring import Poly, PolyRing


class PresentedModule:
    def __init__(self, ring: PolyRing, ambient: int, relations: Matrix | None,
                 twists: list[int] | None = None):
        self.ring = ring
        self.ambient = ambient
        if relations is None:
            relations = Matrix(ring, ambient, 0)
        if relations.nrows != ambient:
            raise ValueError("relation matrix has wrong ambient rank")
        self.relations = relations
        if twists is not None:
            twists = list(twists)
            if len(twists) != ambient:
                raise ValueError("one twist per ambient generator")
        self.twists = twists
        self._gb = None

    @classmethod
    def free(cls, ring: PolyRing, rank: int, twist: int = 0) -> "PresentedModule":
        return cls(ring, rank, None, [twist] * rank)

    @classmethod
    def zero(cls, ring: PolyRing) -> "PresentedModule":
        return cls(ring, 0, None, [])

    def gb(self) -> SubmoduleGB:
        if self._gb is None:
            self._gb = SubmoduleGB.from_matrix(self.relations)
        return self._gb

    def is_zero(self) -> bool:
        if self.ambient == 0:
            return True
        return self.gb().is_full()

    def normal_form(self, column: list[Poly]) -> list[Poly]:
        return self.gb().normal_form_vec(column)

    def contains_relation(self, column: list[Poly]) -> bool:
        return self.gb().contains(column)

    # -- grading ---------------------------------------------------------

    def effective_twists(self) -> list[int]:
        return self.twists if self.twists is not None else [0] * self.ambient

    def is_graded(self) -> bool:
        """True when every relation column is homogeneous w.r.t. the twists."""
        tw = self.effective_twists()
        for j in range(self.relations.ncols):
            degs = set()
            for i in range(self.ambient):
                e = self.relations[i, j]
                if e.is_zero():
                    continue
                d = e.homogeneous_degree()
                if d is None:
                    return False
                degs.add(d + tw[i])
            if len(degs) > 1:
                return False
        return True

    def hilbert_function(self, bound: int) -> "HilbertTable":
        """Dimensions of the graded pieces up to the given degree.

        Counts standard module monomials (those outside the initial module of
        the relations) position by position.
        """
        if not self.is_graded():
            raise UngradedError("relations are not homogeneous for the twists")
        tw = self.effective_twists()
        lo = min([0] + tw)
        leads: dict[int, list] = {}
        for pos, exp in self.gb().leading_terms():
            leads.setdefault(pos, []).append(exp)
        dims = []
        nv = self.ring.nvars
        for d in range(lo, bound + 1):
            count = 0
            for i in range(self.ambient):
                dd = d - tw[i]
                if dd < 0:
                    continue
                for mono in monomials_of_degree(nv, dd):
                    if not any(
                        all(a <= b for a, b in zip(lead, mono))
                        for lead in leads.get(i, ())
                    ):
                        count += 1
            dims.append(count)
        return HilbertTable(lo, dims)

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient,
            "twists": self.twists,
            "relations": self.relations.to_json(),
        }

    def __repr__(self):
        return f"<PresentedModule rank {self.ambient}, {self.relations.ncols} relations>"


class HilbertTable:
    """Degree-indexed dimensions, starting at min_degree."""

    __slots__ = ("min_degree", "dims")

    def __init__(self, min_degree: int, dims: list[int]):
        self.min_degree = min_degree
        self.dims = list(dims)

    def get(self, d: int) -> int:
        i = d - self.min_degree
        if 0 <= i < len(self.dims):
            return self.dims[i]
        return 0

    def max_degree(self) -> int:
        return self.min_degree + len(self.dims) - 1

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.dims)

    def first_nonzero(self) -> int | None:
        for i, v in enumerate(self.dims):
            if v:
                return self.min_degree + i
        return None

    def shifted(self, s: int) -> "HilbertTable":
        return HilbertTable(self.min_degree + s, self.dims)

    def scaled(self, c: int) -> "HilbertTable":
        return HilbertTable(self.min_degree, [c * v for v in self.dims])

    def convolve(self, other: "HilbertTable") -> "HilbertTable":
        """Hilbert function of a tensor product, degreewise convolution."""
        lo = self.min_degree + other.min_degree
        n = len(self.dims) + len(other.dims) - 1
        if n <= 0:
            return HilbertTable(lo, [])
        out = [0] * n
        for i, a in enumerate(self.dims):
            if a == 0:
                continue
            for j, b in enumerate(other.dims):
                out[i + j] += a * b
        return HilbertTable(lo, out)

    def to_json(self) -> list[list[int]]:
        return [[self.min_degree + i, v] for i, v in enumerate(self.dims)]

    def __repr__(self):
        return f"<HF@{self.min_degree}: {self.dims}>"


def hf_free(ring: PolyRing, rank: int, twist: int = 0) -> HilbertTable:
    """Hilbert function with a single free contribution at the twist degree
    (convolve with another table to tensor with a free module)."""
    return HilbertTable(twist, [rank])


def hf_equal_aligned(a: HilbertTable, b: HilbertTable, bound: int) -> bool:
    """Equality after shifting both tables so the first nonzero degrees agree.

    This is the documented module-equality surrogate: either both zero, or the
    dimensions match degree by degree over the comparison window.
    """
    fa, fb = a.first_nonzero(), b.first_nonzero()
    if fa is None or fb is None:
        return fa is None and fb is None
    width = min(a.max_degree() - fa, b.max_degree() - fb, bound)
    if width < 0:
        return True
    return all(a.get(fa + i) == b.get(fb + i) for i in range(width + 1))


def hf_dominated_aligned(small: HilbertTable, big: HilbertTable, bound: int) -> bool:
    """Pointwise <= after first-nonzero alignment; the computable surrogate
    for the existence of an injection."""
    fs, fb = small.first_nonzero(), big.first_nonzero()
    if fs is None:
        return True
    if fb is None:
        return False
    width = min(small.max_degree() - fs, big.max_degree() - fb, bound)
    if width < 0:
        return True
    return all(small.get(fs + i) <= big.get(fb + i) for i in range(width + 1))


# ---------------------------------------------------------------------------
# Maps
# ---------------------------------------------------------------------------


class ModuleMap:
    """A map of presented modules, given on ambient generators and certified
    to send relations into relations."""

    def __init__(self, source: PresentedModule, target: PresentedModule,
                 matrix: Matrix, check: bool = True):
        if matrix.nrows != target.ambient or matrix.ncols != source.ambient:
            raise ValueError("matrix shape does not match source/target")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            for j in range(source.relations.ncols):
                image = matrix.apply(source.relations.column(j))
                if not target.contains_relation(image):
                    raise CertificateError(
                        f"relation {j} does not map into the target relations"
                    )

    def compose(self, earlier: "ModuleMap") -> "ModuleMap":
        return ModuleMap(earlier.source, self.target, self.matrix @ earlier.matrix,
                         check=False)

    def is_zero_map(self) -> bool:
        for j in range(self.matrix.ncols):
            if not self.target.contains_relation(self.matrix.column(j)):
                return False
        return True


def syzygies(mat: Matrix) -> Matrix:
    """Columns generating the kernel of the matrix as a map of free modules."""
    gens = SubmoduleGB.from_matrix(mat).syzygy_generators()
    out = Matrix(mat.ring, mat.ncols, len(gens))
    for j, col in enumerate(gens):
        for i in range(mat.ncols):
            out[i, j] = col[i]
    return out


def _solve_block(big: Matrix, first: int) -> Matrix:
    """Syzygies of a block matrix, restricted to the first block of rows."""
    syz = syzygies(big)
    return syz.submatrix(range(first), range(syz.ncols))


def kernel_generators(f: ModuleMap) -> Matrix:
    """Vectors in the source ambient generating the preimage of the target
    relations (columns include the source relations)."""
    joint = f.matrix.hstack(f.target.relations)
    gens = _solve_block(joint, f.source.ambient)
    return gens


def kernel(f: ModuleMap) -> tuple[PresentedModule, Matrix]:
    """Presentation of Ker(f) plus the embedding of its generators into the
    source ambient."""
    gens = kernel_generators(f)
    rel = _solve_block(gens.hstack(f.source.relations), gens.ncols)
    twists = _column_twists(gens, f.source.effective_twists()) \
        if f.source.twists is not None else None
    return PresentedModule(f.source.ring, gens.ncols, rel, twists), gens


def cokernel(f: ModuleMap) -> PresentedModule:
    rels = f.target.relations.hstack(f.matrix)
    return PresentedModule(f.target.ring, f.target.ambient, rels, f.target.twists)


def map_predicates(f: ModuleMap) -> dict:
    ker, _ = kernel(f)
    injective = ker.is_zero()
    surjective = cokernel(f).is_zero()
    return {"injective": injective, "surjective": surjective,
            "iso": injective and surjective}


def _column_twists(mat: Matrix, ambient_twists: list[int]) -> list[int] | None:
    """Internal degrees of homogeneous columns, or None if some column mixed."""
    out = []
    for j in range(mat.ncols):
        degs = set()
        for i in range(mat.nrows):
            e = mat[i, j]
            if e.is_zero():
                continue
            d = e.homogeneous_degree()
            if d is None:
                return None
            degs.add(d + ambient_twists[i])
        if len(degs) > 1:
            return None
        out.append(degs.pop() if degs else 0)
    return out


# ---------------------------------------------------------------------------
# Complexes of presented modules
# ---------------------------------------------------------------------------


class ModuleComplex:
    """A finite complex of presented modules.

    ``start_position`` is the homological position of modules[0]; positions
    follow the convention that 0 sits at the leftmost nonzero module of the
    untruncated object, so a window may begin at a negative position.
    """

    def __init__(self, ring: PolyRing, mods: list[PresentedModule],
                 maps: list[ModuleMap], start_position: int = 0, check: bool = True):
        if maps and len(maps) != len(mods) - 1:
            raise ValueError("need one map per consecutive pair")
        self.ring = ring
        self.mods = mods
        self.maps = maps
        self.start_position = start_position
        if check:
            for i in range(len(maps) - 1):
                comp = maps[i + 1].compose(maps[i])
                if not comp.is_zero_map():
                    raise CertificateError(f"composition at index {i} is nonzero")

    def positions(self) -> range:
        return range(self.start_position, self.start_position + len(self.mods))

    def module_at(self, position: int) -> PresentedModule | None:
        i = position - self.start_position
        if 0 <= i < len(self.mods):
            return self.mods[i]
        return None

    def homology_at(self, position: int) -> PresentedModule:
        """Ker/Im at the given position; maps outside the stored window are
        treated as zero."""
        i = position - self.start_position
        if not (0 <= i < len(self.mods)):
            return PresentedModule.zero(self.ring)
        mod = self.mods[i]
        outgoing = self.maps[i] if i < len(self.maps) else None
        incoming = self.maps[i - 1] if i > 0 else None

        if outgoing is not None:
            gens = kernel_generators(outgoing)
        else:
            gens = Matrix.identity(self.ring, mod.ambient)
        blocks = [gens]
        if incoming is not None:
            blocks.append(incoming.matrix)
        blocks.append(mod.relations)
        big = blocks[0]
        for b in blocks[1:]:
            big = big.hstack(b)
        rel = _solve_block(big, gens.ncols)
        twists = _column_twists(gens, mod.effective_twists()) \
            if mod.twists is not None else None
        return PresentedModule(self.ring, gens.ncols, rel, twists)


def free_complex_homology(ring: PolyRing, ranks: list[int], mats: list[Matrix],
                          twists: list[int] | None, position: int) -> PresentedModule:
    """Homology of a complex of free modules at one index."""
    mods = [
        PresentedModule.free(ring, r, twists[i] if twists else 0)
        for i, r in enumerate(ranks)
    ]
    maps = [
        ModuleMap(mods[i], mods[i + 1], m, check=False) for i, m in enumerate(mats)
    ]
    cx = ModuleComplex(ring, mods, maps, 0, check=False)
    return cx.homology_at(position)


# ---------------------------------------------------------------------------
# Symmetric and exterior powers of cokernels
# ---------------------------------------------------------------------------


def sym_power_cokernel(mat: Matrix, p: int) -> PresentedModule:
    """S_p of the cokernel of a matrix (ambient = row space).

    p = 0 gives R modulo the maximal minors of the matrix and p = -1 the top
    exterior power of the cokernel of the transpose, matching the degenerate
    conventions used by the grade-sensitivity statements.
    """
    from .groebner import maximal_minors_ideal

    ring = mat.ring
    m, n = mat.nrows, mat.ncols
    if p < -1:
        raise PreconditionError("symmetric power defined for p >= -1")
    if p == 0:
        if m == 0:
            return PresentedModule.free(ring, 1)
        ideal = maximal_minors_ideal(mat)
        rel = Matrix(ring, 1, len(ideal.generators),
                     [[g for g in ideal.generators]])
        return PresentedModule(ring, 1, rel, [0])
    if p == -1:
        r = n - m
        return ext_power_cokernel(mat.transpose(), r + 1)
    dcol = _matrix_column_degrees(mat)
    src = multisets(m, p - 1)
    tgt = multisets(m, p)
    tgt_idx = multiset_index(m, p)
    rel = Matrix(ring, len(tgt), len(src) * n)
    col = 0
    for beta in src:
        for j in range(n):
            for i in range(m):
                e = mat[i, j]
                if not e.is_zero():
                    row = tgt_idx[multiset_insert(beta, i + 1)]
                    rel[row, col] = rel[row, col] + e
            col += 1
    tw = None
    if dcol is not None:
        row_tw = _matrix_row_twists(mat)
        if row_tw is not None:
            tw = [sum(row_tw[i - 1] for i in ms) for ms in tgt]
    return PresentedModule(ring, len(tgt), rel, tw)


def ext_power_cokernel(mat: Matrix, p: int) -> PresentedModule:
    """Wedge^p of the cokernel, presented on Wedge^p of the ambient free
    module with relations (column of the matrix) ^ (p-1 basis subset)."""
    ring = mat.ring
    n, m = mat.nrows, mat.ncols
    if not (0 <= p <= n):
        raise PreconditionError(f"exterior power degree {p} out of [0, {n}]")
    tgt = subsets(n, p)
    tgt_idx = subset_index(n, p)
    src = subsets(n, p - 1)
    rel = Matrix(ring, len(tgt), len(src) * m)
    col = 0
    for s in src:
        sset = set(s)
        for a in range(m):
            for i in range(n):
                e = mat[i, a]
                if e.is_zero() or (i + 1) in sset:
                    continue
                sign = shuffle_sign((i + 1,), s)
                row = tgt_idx[sorted_merge((i + 1,), s)]
                rel[row, col] = rel[row, col] + e * sign
            col += 1
    tw = [0] * len(tgt) if mat.uniform_degree() is not None else None
    return PresentedModule(ring, len(tgt), rel, tw)


def _matrix_column_degrees(mat: Matrix) -> list[int] | None:
    degs = []
    for j in range(mat.ncols):
        col_degs = {
            mat[i, j].homogeneous_degree()
            for i in range(mat.nrows)
            if not mat[i, j].is_zero()
        }
        if None in col_degs or len(col_degs) > 1:
            return None
        degs.append(col_degs.pop() if col_degs else 0)
    return degs


def _matrix_row_twists(mat: Matrix) -> list[int] | None:
    """Generator degrees making the matrix a degree-zero map from a free
    module on degree-zero generators: minus the uniform row degree."""
    out = []
    for i in range(mat.nrows):
        degs = {
            mat[i, j].homogeneous_degree()
            for j in range(mat.ncols)
            if not mat[i, j].is_zero()
        }
        if None in degs or len(degs) > 1:
            return None
        out.append(-(degs.pop() if degs else 0))
    return out


def tensor_with_free(mod: PresentedModule, rank: int, twist: int = 0) -> PresentedModule:
    """mod tensor a free module of the given rank, relations block-diagonal."""
    amb = mod.ambient * rank
    rel = Matrix(mod.ring, amb, mod.relations.ncols * rank)
    for b in range(rank):
        for j in range(mod.relations.ncols):
            for i in range(mod.ambient):
                rel[b * mod.ambient + i, b * mod.relations.ncols + j] = mod.relations[i, j]
    tw = None
    if mod.twists is not None:
        tw = [t + twist for _ in range(rank) for t in mod.twists]
    return PresentedModule(mod.ring, amb, rel, tw)
