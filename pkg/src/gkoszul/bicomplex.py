"""The Koszul bicomplex of a composition-zero pair and its derived rows.

For phi: H -> G and psi: G -> F with psi . phi = 0 the grid couples the
divided-power family of phi (rows) with the symmetric-power family of psi
(columns).  Columns are indexed so that the divided factor D_(t-c)(H) lives
at column c <= t and S_(c-t-1)(H*) at column c > t; row q >= 0 carries
S_q(F) and row q <= -1 carries S_(-q-1)(F)*.  Negative columns occur: the
upper rows extend m steps further west than the lower ones.

Horizontal maps are kept raw.  Vertical maps carry signs chosen so that
every square anticommutes; the build validates every square inside the
window and refuses to return an object otherwise, so the convention is
self-certifying.  (The raw commutation factors are (-1)^m between the
contraction splice and a horizontal wedge step, (-1)^l between the wedge
splice and a vertical contraction step, and (-1)^(l*m) at the corner, which
forces the column-dependent signs below.)

Position 0 of the derived row complexes sits at the leftmost column whose
lower-row component is nonzero, matching the graduation convention used by
the homology statements; the cokernel row keeps its negative positions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CertificateError, InstanceError, PreconditionError
from .groebner import SubmoduleGB
from .linalg import Matrix
from .complexes import (
    Component,
    Shape,
    boundary_matrix,
    contraction_matrix,
    divided_matrix,
    koszul_complex,
    top_dual_form,
    top_form,
    wedge_matrix,
)
from .modules import (
    ModuleComplex,
    ModuleMap,
    PresentedModule,
    _column_twists,
    ext_power_cokernel,
    syzygies,
)
from .multilinear import multisets, subsets
from .ring import PolyRing


class KoszulBicomplex:
    def __init__(self, phi: Matrix, psi: Matrix, t: int,
                 col_range: tuple[int, int] | None = None,
                 row_range: tuple[int, int] | None = None):
        if phi.ring != psi.ring:
            raise PreconditionError("phi and psi must share a ring")
        if psi.ncols != phi.nrows:
            raise PreconditionError("psi columns must match phi rows (rank of G)")
        comp = psi @ phi
        if not comp.is_zero():
            bad = next(
                (i, j)
                for i in range(comp.nrows)
                for j in range(comp.ncols)
                if not comp[i, j].is_zero()
            )
            raise InstanceError(f"psi . phi is nonzero at entry {bad}")
        self.ring = phi.ring
        self.phi = phi
        self.psi = psi
        self.t = t
        self.n = phi.nrows
        self.l = phi.ncols
        self.m = psi.nrows
        s = self.n - self.l
        if col_range is None:
            col_range = (-self.m - 2, s + 3)
        if row_range is None:
            row_range = (-2, self.n + 1)
        self.c_lo, self.c_hi = col_range
        self.q_lo, self.q_hi = row_range
        self.d_phi = phi.uniform_degree()
        self.d_psi = psi.uniform_degree()
        self._x_form = top_form(phi)
        self._x_dual = top_dual_form(psi)
        self._comps: dict = {}
        self._hmaps: dict = {}
        self._vmaps: dict = {}
        self._build()
        self.validate()

    # -- structure -------------------------------------------------------

    def _factors(self, c: int, q: int):
        """(h factor, wedge degree, f factor) at the grid point."""
        if c <= self.t:
            h = ("D", self.t - c)
        else:
            h = ("S*", c - self.t - 1)
        base = c if c <= self.t else self.l + c - 1
        if q >= 0:
            f = ("S", q)
            b = base - q
        else:
            f = ("S*", -q - 1)
            b = base + self.m - q - 1
        return h, b, f

    def component(self, c: int, q: int) -> Component:
        key = (c, q)
        if key not in self._comps:
            h, b, f = self._factors(c, q)
            hrank = len(multisets(self.l, h[1]))
            frank = len(multisets(self.m, f[1]))
            rank = hrank * len(subsets(self.n, b)) * frank
            self._comps[key] = Component(rank, Shape(h, b, f), self.twist(c, q))
        return self._comps[key]

    def twist(self, c: int, q: int) -> int | None:
        if self.d_phi is None or self.d_psi is None:
            return None
        dphi, dpsi = self.d_phi, self.d_psi
        hpart = (self.t - c) * dphi if c <= self.t else -(c - self.t - 1) * dphi
        fpart = -q * dpsi if q >= 0 else (-q - 1) * dpsi
        w = hpart + fpart
        if q >= 0:
            w -= self.m * dpsi
        if c > self.t:
            w -= self.l * dphi
        return w

    def vertical_sign(self, c: int, q: int) -> int:
        if q != -1:
            return 1 if c <= self.t else (-1) ** (self.l + 1)
        if c <= self.t:
            return (-1) ** ((self.m + 1) * (self.t - c))
        return (-1) ** (self.l * self.m + 1) * (-1) ** ((self.m + 1) * (c - self.t - 1))

    def _build(self):
        for c in range(self.c_lo, self.c_hi + 1):
            for q in range(self.q_lo, self.q_hi + 1):
                if c < self.c_hi:
                    self._hmaps[(c, q)] = self._horizontal(c, q)
                if q < self.q_hi:
                    self._vmaps[(c, q)] = self._vertical(c, q)

    def _horizontal(self, c: int, q: int) -> Matrix:
        src = self.component(c, q)
        tgt = self.component(c + 1, q)
        h, b, f = self._factors(c, q)
        frank = len(multisets(self.m, f[1]))
        if c == self.t:
            core = wedge_matrix(self._x_form, self.n, b, self.l, self.ring)
        elif c < self.t:
            core = divided_matrix(self.phi, h[1], b, dual_h=False)
        else:
            core = divided_matrix(self.phi, h[1], b, dual_h=True)
        mat = core.kron_identity_right(frank)
        assert mat.nrows == tgt.rank and mat.ncols == src.rank
        return mat

    def _vertical(self, c: int, q: int) -> Matrix:
        src = self.component(c, q)
        tgt = self.component(c, q + 1)
        h, b, f = self._factors(c, q)
        hrank = len(multisets(self.l, h[1]))
        if q == -1:
            core = contraction_matrix(self._x_dual, self.n, b, self.m, self.ring)
        elif q >= 0:
            core = boundary_matrix(self.psi, b, q, dual=False)
        else:
            core = boundary_matrix(self.psi, b, -q - 1, dual=True)
        mat = core.kron_identity_left(hrank)
        sign = self.vertical_sign(c, q)
        if sign != 1:
            mat = mat.scale(sign)
        assert mat.nrows == tgt.rank and mat.ncols == src.rank
        return mat

    def validate(self):
        """Check d(d(.)) = 0 along every row and column and anticommutativity
        of every square in the window.  Raises on the first failure."""
        for q in range(self.q_lo, self.q_hi + 1):
            for c in range(self.c_lo, self.c_hi - 1):
                prod = self._hmaps[(c + 1, q)] @ self._hmaps[(c, q)]
                if not prod.is_zero():
                    raise CertificateError(f"row {q} fails d.d = 0 at column {c}")
        for c in range(self.c_lo, self.c_hi + 1):
            for q in range(self.q_lo, self.q_hi - 1):
                prod = self._vmaps[(c, q + 1)] @ self._vmaps[(c, q)]
                if not prod.is_zero():
                    raise CertificateError(f"column {c} fails d.d = 0 at row {q}")
        for c in range(self.c_lo, self.c_hi):
            for q in range(self.q_lo, self.q_hi):
                east = self._vmaps[(c + 1, q)] @ self._hmaps[(c, q)]
                south = self._hmaps[(c, q + 1)] @ self._vmaps[(c, q)]
                if not (east + south).is_zero():
                    raise CertificateError(f"square at ({c}, {q}) does not anticommute")

    # -- extraction --------------------------------------------------------

    def anchor_column(self) -> int:
        """Leftmost column whose lower-row component is nonzero; this column
        holds position 0 of the derived row complexes."""
        for c in range(self.c_lo, self.c_hi + 1):
            if self.component(c, 0).rank:
                return c
        return 0

    def column_complex_data(self, c: int):
        ranks = [self.component(c, q).rank for q in range(self.q_lo, self.q_hi + 1)]
        mats = [self._vmaps[(c, q)] for q in range(self.q_lo, self.q_hi)]
        tws = [self.component(c, q).twist for q in range(self.q_lo, self.q_hi + 1)]
        if any(w is None for w in tws):
            tws = None
        return ranks, mats, tws

    def column_homology(self, c: int, q: int) -> PresentedModule:
        """Homology of column c at row q (rows inside the window)."""
        from .modules import free_complex_homology

        ranks, mats, tws = self.column_complex_data(c)
        return free_complex_homology(self.ring, ranks, mats, tws, q - self.q_lo)

    def kernel_row_complex(self) -> ModuleComplex:
        """Kernels of the first lower vertical map, with maps induced by the
        horizontal differentials; position 0 at the anchor column."""
        anchor = self.anchor_column()
        cols = list(range(anchor, self.c_hi + 1))
        mods = []
        embeds = []
        engines = []
        for c in cols:
            comp = self.component(c, 0)
            gens = syzygies(self._vmaps[(c, 0)])
            rel = syzygies(gens)
            tws = None
            if comp.twist is not None:
                amb = [comp.twist] * comp.rank
                tws = _column_twists(gens, amb)
            mods.append(PresentedModule(self.ring, gens.ncols, rel, tws))
            embeds.append(gens)
            engines.append(SubmoduleGB.from_matrix(gens))
        maps = []
        for i in range(len(cols) - 1):
            c = cols[i]
            lifted = _lift_through(
                engines[i + 1], self._hmaps[(c, 0)] @ embeds[i],
                f"kernel-row map at column {c}",
            )
            maps.append(ModuleMap(mods[i], mods[i + 1], lifted))
        cx = ModuleComplex(self.ring, mods, maps, start_position=0)
        cx.embeddings = embeds
        return cx

    def cokernel_row_complex(self) -> ModuleComplex:
        """Cokernels of the vertical map into the last upper row; positions
        west of the anchor are negative."""
        anchor = self.anchor_column()
        cols = [c for c in range(self.c_lo, self.c_hi + 1)]
        while cols and self.component(cols[0], -1).rank == 0 and cols[0] < anchor:
            cols.pop(0)
        mods = []
        for c in cols:
            comp = self.component(c, -1)
            tws = [comp.twist] * comp.rank if comp.twist is not None else None
            mods.append(
                PresentedModule(self.ring, comp.rank, self._vmaps[(c, -2)], tws)
            )
        maps = [
            ModuleMap(mods[i], mods[i + 1], self._hmaps[(cols[i], -1)])
            for i in range(len(cols) - 1)
        ]
        cx = ModuleComplex(self.ring, mods, maps, start_position=cols[0] - anchor)
        return cx

    def comparison_morphism(self):
        """The splice-induced morphism from the cokernel row to the kernel
        row, sign-adjusted per column so every square commutes."""
        coker = self.cokernel_row_complex()
        ker = self.kernel_row_complex()
        anchor = self.anchor_column()
        maps = {}
        for pos in coker.positions():
            if ker.module_at(pos) is None:
                continue
            c = pos + anchor
            src = coker.module_at(pos)
            tgt = ker.module_at(pos)
            sign = (-1) ** (abs(pos) % 2)
            ambient = self._vmaps[(c, -1)].scale(sign)
            engine = SubmoduleGB.from_matrix(ker.embeddings[pos])
            lifted = _lift_through(engine, ambient, f"comparison map at column {c}")
            maps[pos] = ModuleMap(src, tgt, lifted)
        morphism = ModuleComplexMorphism(coker, ker, maps)
        morphism.certify()
        return morphism


def _lift_through(engine: SubmoduleGB, ambient_image: Matrix, what: str) -> Matrix:
    """Express each column of ambient_image in the engine's generators."""
    ring = ambient_image.ring
    ncols = ambient_image.ncols
    ngens = len(engine.columns)
    out = Matrix(ring, ngens, ncols)
    for j in range(ncols):
        coeffs = engine.lift(ambient_image.column(j))
        if coeffs is None:
            raise CertificateError(f"{what}: image does not lie in the target module")
        for i in range(ngens):
            out[i, j] = coeffs[i]
    return out


@dataclass
class ModuleComplexMorphism:
    source: ModuleComplex
    target: ModuleComplex
    maps: dict

    def certify(self):
        """Verify all available naturality squares commute in the target."""
        for pos, f in self.maps.items():
            nxt = self.maps.get(pos + 1)
            if nxt is None:
                continue
            i_src = pos - self.source.start_position
            i_tgt = pos - self.target.start_position
            if i_src >= len(self.source.maps) or i_tgt >= len(self.target.maps):
                continue
            left = nxt.matrix @ self.source.maps[i_src].matrix
            right = self.target.maps[i_tgt].matrix @ f.matrix
            diff = left - right
            tgt_mod = nxt.target
            for j in range(diff.ncols):
                if not tgt_mod.contains_relation(diff.column(j)):
                    raise CertificateError(
                        f"comparison square at position {pos} does not commute"
                    )


# ---------------------------------------------------------------------------
# The induced complex on the presented cokernel
# ---------------------------------------------------------------------------


def induced_koszul_complex(chi: Matrix, lam: Matrix, t: int) -> ModuleComplex:
    """Symmetric-power Koszul complex of the map induced by lam on the
    cokernel of chi, as a complex of presented modules.

    Ambient matrices are those of the free construction applied to lam; each
    component is the corresponding exterior power of the cokernel tensored
    with the free symmetric factor.  Well-definedness of the induced maps is
    certified at construction and holds exactly because lam . chi = 0.
    """
    ring = chi.ring
    if lam.ring != ring:
        raise PreconditionError("chi and lam must share a ring")
    if lam.ncols != chi.nrows:
        raise PreconditionError("lam columns must match chi rows")
    if not (lam @ chi).is_zero():
        raise InstanceError("lam . chi is nonzero")
    free_cx = koszul_complex(lam, t)
    l = lam.nrows
    mods = []
    for comp in free_cx.components:
        b = comp.shape.wedge
        frank = len(multisets(l, comp.shape.f[1]))
        wedge_mod = ext_power_cokernel(chi, b)
        mods.append(_tensor_free_inner(wedge_mod, frank, comp.twist))
    maps = [
        ModuleMap(mods[i], mods[i + 1], free_cx.maps[i])
        for i in range(len(free_cx.maps))
    ]
    cx = ModuleComplex(ring, mods, maps, start_position=0)
    cx.free_shape = [c.shape.label() for c in free_cx.components]
    return cx


def _tensor_free_inner(mod: PresentedModule, rank: int,
                       twist: int | None) -> PresentedModule:
    """mod (x) free module with the free index innermost in the enumeration."""
    amb = mod.ambient * rank
    rel = Matrix(mod.ring, amb, mod.relations.ncols * rank)
    for j in range(mod.relations.ncols):
        for b in range(rank):
            col = j * rank + b
            for i in range(mod.ambient):
                e = mod.relations[i, j]
                if not e.is_zero():
                    rel[i * rank + b, col] = e
    tws = None
    if mod.twists is not None and twist is not None:
        tws = [twist for _ in range(amb)]
    return PresentedModule(mod.ring, amb, rel, tws)
