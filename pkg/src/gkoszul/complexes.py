"""Generalized Koszul complexes as explicit matrices over the base ring.

Two families are associated with a short complex of free modules: for a map
psi from G (rank n) to F (rank m), the symmetric-power family with components
Wedge^(t+m+p) G (x) S_p(F)* on the left of a splice and Wedge^(t-q) G (x)
S_q(F) on the right; for a map phi from H (rank l) to G, the divided-power
family D_(t-p)(H) (x) Wedge^p G spliced into S_p(H*) (x) Wedge^(t+l+p) G.
The splices are contraction by the top dual form of psi and wedging by the
top form of phi.  Since G is free of finite rank, all components outside
exterior degree [0, n] vanish and every complex here is finite.

Every build verifies d(d(.)) = 0 and the vanishing of the spliced products;
a failed check raises, so a complex object is its own certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import CertificateError, PreconditionError
from .linalg import Matrix
from .multilinear import (
    contract,
    multiset_index,
    multiset_insert,
    multiset_remove,
    multisets,
    shuffle_sign,
    sorted_merge,
    subset_index,
    subsets,
    wedge,
)
from .ring import Poly, PolyRing


@dataclass(frozen=True)
class Shape:
    """Tensor-factor bookkeeping for one free component.

    h is None or (kind, degree) with kind "D" (divided power of H) or "S*"
    (symmetric power of H*); f is None or (kind, degree) with kind "S" or
    "S*" over F; wedge is the exterior degree over G.  ``dual`` marks a
    component that is the dual of the displayed tensor product.
    """

    h: tuple | None
    wedge: int | None
    f: tuple | None
    dual: bool = False

    def label(self) -> str:
        parts = []
        if self.h is not None:
            kind, a = self.h
            parts.append(f"D{a}(H)" if kind == "D" else f"S{a}(H*)")
        if self.wedge is not None:
            parts.append(f"W{self.wedge}(G)")
        if self.f is not None:
            kind, c = self.f
            parts.append(f"S{c}(F)" + ("*" if kind == "S*" else ""))
        body = ".".join(parts) if parts else "R"
        return f"({body})*" if self.dual else body

    def dualized(self) -> "Shape":
        return replace(self, dual=not self.dual)


@dataclass
class Component:
    rank: int
    shape: Shape
    twist: int | None = None


class FreeComplex:
    """Finite sequence of free components with differential matrices.

    Index 0 is the leftmost nonzero component (builders trim zero-rank ends).
    """

    def __init__(self, ring: PolyRing, components: list[Component],
                 maps: list[Matrix], check: bool = True):
        if len(maps) != max(len(components) - 1, 0):
            raise ValueError("need exactly one map per consecutive pair")
        for i, m in enumerate(maps):
            if m.ncols != components[i].rank or m.nrows != components[i + 1].rank:
                raise ValueError(f"map {i} shape mismatch")
        self.ring = ring
        self.components = components
        self.maps = maps
        if check and not self.verify():
            raise CertificateError("consecutive differentials do not compose to zero")

    def __len__(self):
        return len(self.components)

    def ranks(self) -> list[int]:
        return [c.rank for c in self.components]

    def twists(self) -> list[int] | None:
        tws = [c.twist for c in self.components]
        if any(t is None for t in tws):
            return None
        return tws

    def verify(self) -> bool:
        """Re-check that all consecutive products vanish."""
        for i in range(len(self.maps) - 1):
            if not (self.maps[i + 1] @ self.maps[i]).is_zero():
                return False
        return True

    def homology_at(self, position: int):
        from .modules import free_complex_homology

        return free_complex_homology(
            self.ring, self.ranks(), self.maps, self.twists(), position
        )

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * c.rank for i, c in enumerate(self.components))

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "components": [
                {"rank": c.rank, "shape": c.shape.label(), "twist": c.twist}
                for c in self.components
            ],
            "maps": [m.to_json() for m in self.maps],
        }


def _trim(ring: PolyRing, comps: list[Component], maps: list[Matrix],
          check: bool = True) -> FreeComplex:
    lo = 0
    hi = len(comps)
    while lo < hi and comps[lo].rank == 0:
        lo += 1
    while hi > lo and comps[hi - 1].rank == 0:
        hi -= 1
    inner = comps[lo:hi]
    if any(c.rank == 0 for c in inner):
        raise CertificateError("zero-rank component in the interior of a complex")
    return FreeComplex(ring, inner, maps[lo:hi - 1] if hi - lo > 1 else [],
                       check=check)


# ---------------------------------------------------------------------------
# Elementary map matrices on tensor bases
# ---------------------------------------------------------------------------


def top_dual_form(psi: Matrix) -> dict:
    """Wedge of the rows of psi viewed as dual vectors of G."""
    ring = psi.ring
    x: dict = {(): ring.one()}
    for j in range(psi.nrows):
        row = {(i + 1,): psi[j, i] for i in range(psi.ncols) if not psi[j, i].is_zero()}
        x = wedge(x, row, ring)
    return x


def top_form(phi: Matrix) -> dict:
    """Wedge of the columns of phi as elements of G."""
    ring = phi.ring
    x: dict = {(): ring.one()}
    for v in range(phi.ncols):
        col = {(i + 1,): phi[i, v] for i in range(phi.nrows) if not phi[i, v].is_zero()}
        x = wedge(x, col, ring)
    return x


def boundary_matrix(psi: Matrix, b: int, c: int, dual: bool) -> Matrix:
    """Alternating contraction of one exterior factor against psi.

    dual=False: Wedge^b G (x) S_c(F)  ->  Wedge^(b-1) G (x) S_(c+1)(F).
    dual=True:  Wedge^b G (x) S_c(F)* ->  Wedge^(b-1) G (x) S_(c-1)(F)*,
    where F acts on the dual symmetric algebra by dropping one exponent.
    """
    ring = psi.ring
    m, n = psi.nrows, psi.ncols
    src_w, tgt_w = subsets(n, b), subsets(n, b - 1)
    tgt_w_idx = subset_index(n, b - 1)
    src_f = multisets(m, c)
    tgt_f = multisets(m, c - 1) if dual else multisets(m, c + 1)
    tgt_f_idx = multiset_index(m, c - 1) if dual else multiset_index(m, c + 1)
    out = Matrix(ring, len(tgt_w) * len(tgt_f), len(src_w) * len(src_f))
    nf = len(tgt_f)
    for wi, s in enumerate(src_w):
        for fj, beta in enumerate(src_f):
            col = wi * len(src_f) + fj
            for j, sj in enumerate(s):
                sign = (-1) ** j
                rest = s[:j] + s[j + 1 :]
                wrow = tgt_w_idx[rest]
                for i in range(m):
                    e = psi[i, sj - 1]
                    if e.is_zero():
                        continue
                    if dual:
                        if (i + 1) not in beta:
                            continue
                        new_f = multiset_remove(beta, i + 1)
                    else:
                        new_f = multiset_insert(beta, i + 1)
                    row = wrow * nf + tgt_f_idx[new_f]
                    out[row, col] = out[row, col] + e * sign
    return out


def divided_matrix(phi: Matrix, a: int, b: int, dual_h: bool) -> Matrix:
    """Wedge one image of phi onto the exterior factor while lowering a
    divided power (dual_h=False) or raising a dual symmetric power
    (dual_h=True).

    dual_h=False: D_a(H) (x) Wedge^b G  ->  D_(a-1)(H) (x) Wedge^(b+1) G.
    dual_h=True:  S_a(H*) (x) Wedge^b G -> S_(a+1)(H*) (x) Wedge^(b+1) G.
    """
    ring = phi.ring
    n, l = phi.nrows, phi.ncols
    src_h = multisets(l, a)
    tgt_h = multisets(l, a + 1) if dual_h else multisets(l, a - 1)
    tgt_h_idx = multiset_index(l, a + 1) if dual_h else multiset_index(l, a - 1)
    src_w, tgt_w = subsets(n, b), subsets(n, b + 1)
    tgt_w_idx = subset_index(n, b + 1)
    out = Matrix(ring, len(tgt_h) * len(tgt_w), len(src_h) * len(src_w))
    nw = len(tgt_w)
    for hi, mu in enumerate(src_h):
        values = range(1, l + 1) if dual_h else sorted(set(mu))
        for wi, s in enumerate(src_w):
            col = hi * len(src_w) + wi
            sset = set(s)
            for v in values:
                new_h = multiset_insert(mu, v) if dual_h else multiset_remove(mu, v)
                hrow = tgt_h_idx[new_h]
                for i in range(n):
                    e = phi[i, v - 1]
                    if e.is_zero() or (i + 1) in sset:
                        continue
                    sign = shuffle_sign((i + 1,), s)
                    row = hrow * nw + tgt_w_idx[sorted_merge((i + 1,), s)]
                    out[row, col] = out[row, col] + e * sign
    return out


def contraction_matrix(element: dict, n: int, b: int, drop: int, ring: PolyRing) -> Matrix:
    """Matrix of contraction by a fixed degree-``drop`` dual element."""
    src = subsets(n, b)
    tgt = subsets(n, b - drop)
    tgt_idx = subset_index(n, b - drop)
    out = Matrix(ring, len(tgt), len(src))
    for j, s in enumerate(src):
        image = contract({s: ring.one()}, element, ring)
        for key, coeff in image.items():
            out[tgt_idx[key], j] = coeff
    return out


def wedge_matrix(element: dict, n: int, b: int, raise_by: int, ring: PolyRing) -> Matrix:
    """Matrix of left wedge by a fixed degree-``raise_by`` element."""
    src = subsets(n, b)
    tgt = subsets(n, b + raise_by)
    tgt_idx = subset_index(n, b + raise_by)
    out = Matrix(ring, len(tgt), len(src))
    for j, s in enumerate(src):
        image = wedge(element, {s: ring.one()}, ring)
        for key, coeff in image.items():
            out[tgt_idx[key], j] = coeff
    return out


# ---------------------------------------------------------------------------
# The two generalized Koszul families and the Eagon-Northcott family
# ---------------------------------------------------------------------------


def koszul_complex(psi: Matrix, t: int) -> FreeComplex:
    """Symmetric-power generalized Koszul complex of psi: G -> F at index t.

    With m = 1 this is the classical Koszul complex of the entries of psi,
    for every t.  Positions run left to right from the leftmost nonzero
    component.
    """
    ring = psi.ring
    m, n = psi.nrows, psi.ncols
    d = psi.uniform_degree()
    comps: list[Component] = []
    maps: list[Matrix] = []
    specs = []
    for p in range(n - m - t, -1, -1):
        specs.append(("dualS", t + m + p, p))
    for q in range(0, t + 1):
        specs.append(("symS", t - q, q))
    for kind, b, c in specs:
        rank = len(subsets(n, b)) * len(multisets(m, c))
        shape = Shape(None, b, ("S*" if kind == "dualS" else "S", c))
        comps.append(Component(rank, shape))
    for i in range(len(specs) - 1):
        kind, b, c = specs[i]
        nkind = specs[i + 1][0]
        if kind == "dualS" and nkind == "symS":
            mat = contraction_matrix(top_dual_form(psi), n, b, m, ring)
            deg = m * d if d is not None else None
        else:
            mat = boundary_matrix(psi, b, c, dual=(kind == "dualS"))
            deg = d
        assert mat.nrows == comps[i + 1].rank and mat.ncols == comps[i].rank
        maps.append(mat)
        comps[i + 1].twist = deg
    _assign_twists(comps)
    return _trim(ring, comps, maps)


def divided_koszul_complex(phi: Matrix, t: int) -> FreeComplex:
    """Divided-power generalized Koszul complex of phi: H -> G at index t."""
    ring = phi.ring
    n, l = phi.nrows, phi.ncols
    d = phi.uniform_degree()
    comps: list[Component] = []
    maps: list[Matrix] = []
    specs = []
    for p in range(0, max(t, -1) + 1):
        specs.append(("D", t - p, p))
    for p in range(0, n - l - t + 1):
        specs.append(("S*", p, t + l + p))
    for kind, a, b in specs:
        rank = len(multisets(l, a)) * len(subsets(n, b))
        comps.append(Component(rank, Shape((kind, a), b, None)))
    for i in range(len(specs) - 1):
        kind, a, b = specs[i]
        nkind = specs[i + 1][0]
        if kind == "D" and nkind == "S*":
            mat = wedge_matrix(top_form(phi), n, b, l, ring)
            deg = l * d if d is not None else None
        else:
            mat = divided_matrix(phi, a, b, dual_h=(kind == "S*"))
            deg = d
        assert mat.nrows == comps[i + 1].rank and mat.ncols == comps[i].rank
        maps.append(mat)
        comps[i + 1].twist = deg
    _assign_twists(comps)
    return _trim(ring, comps, maps)


def _assign_twists(comps: list[Component]):
    """Anchor the first component at 0 and walk the stashed map degrees.

    Builders stash the degree of the incoming map in ``twist``; after this
    pass ``twist`` holds the internal degree of the component's generators,
    or None throughout if any map had entries of mixed degree.
    """
    if any(c.twist is None for c in comps[1:]):
        for c in comps:
            c.twist = None
        return
    acc = 0
    degs = [c.twist for c in comps]
    comps[0].twist = 0
    for i in range(1, len(comps)):
        acc -= degs[i]
        comps[i].twist = acc


def eagon_northcott_complex(psi: Matrix, t: int) -> FreeComplex:
    """The finite classical complex for psi: G -> F, 0 <= t <= n - m.

    The left half consists of duals of symmetric-side components, spliced by
    the orientation pairing into the right half.  (Display conventions vary
    on whether the leftmost dual symmetric degree is written r - t or
    n - m - t; these agree since r = n - m, and n - m - t is used here.)
    """
    ring = psi.ring
    m, n = psi.nrows, psi.ncols
    if n < m:
        raise PreconditionError("requires rank G >= rank F")
    if not (0 <= t <= n - m):
        raise PreconditionError(f"t = {t} outside [0, {n - m}]")
    d = psi.uniform_degree()
    comps: list[Component] = []
    maps: list[Matrix] = []
    dual_specs = [(p, n - m - t - p) for p in range(0, n - m - t + 1)]
    for p, q in dual_specs:
        rank = len(subsets(n, p)) * len(multisets(m, q))
        comps.append(Component(rank, Shape(None, p, ("S", q), dual=True)))
    for q in range(0, t + 1):
        rank = len(subsets(n, t - q)) * len(multisets(m, q))
        comps.append(Component(rank, Shape(None, t - q, ("S", q))))
    for i in range(len(dual_specs) - 1):
        p, q = dual_specs[i]
        mat = boundary_matrix(psi, p + 1, q - 1, dual=False).transpose()
        maps.append(mat)
        comps[i + 1].twist = d
    maps.append(_orientation_splice(psi, t))
    comps[len(dual_specs)].twist = m * d if d is not None else None
    for q in range(0, t):
        mat = boundary_matrix(psi, t - q, q, dual=False)
        maps.append(mat)
        comps[len(dual_specs) + 1 + q].twist = d
    _assign_twists(comps)
    return _trim(ring, comps, maps)


def _orientation_splice(psi: Matrix, t: int) -> Matrix:
    """Matrix of z* |-> (y* |-> orientation(z* ^ y* ^ x*)), from the dual of
    Wedge^(n-m-t) G to Wedge^t G in standard bases."""
    ring = psi.ring
    m, n = psi.nrows, psi.ncols
    xstar = top_dual_form(psi)
    src = subsets(n, n - m - t)
    tgt = subsets(n, t)
    tgt_idx = subset_index(n, t)
    out = Matrix(ring, len(tgt), len(src))
    for j, u in enumerate(src):
        uset = set(u)
        for w in tgt:
            if uset & set(w):
                continue
            tcomp = tuple(i for i in range(1, n + 1) if i not in uset and i not in set(w))
            coeff = xstar.get(tcomp)
            if coeff is None or coeff.is_zero():
                continue
            sign = shuffle_sign(u, w, tcomp)
            out[tgt_idx[w], j] = coeff * sign
    return out


def dualize(cx: FreeComplex) -> FreeComplex:
    """Reverse the components, transpose the maps, dualize labels and twists."""
    comps = [
        Component(c.rank, c.shape.dualized(),
                  -c.twist if c.twist is not None else None)
        for c in reversed(cx.components)
    ]
    maps = [m.transpose() for m in reversed(cx.maps)]
    return FreeComplex(cx.ring, comps, maps, check=False)


# ---------------------------------------------------------------------------
# Identification with the classical family, duality, and the theta morphism
# ---------------------------------------------------------------------------


@dataclass
class MorphismReport:
    ok: bool
    signs: list[int]
    matrices: list[Matrix]
    failure: str | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "signs": self.signs, "failure": self.failure}


def _square_sign(upper_map: Matrix, lower_map: Matrix, v_src: Matrix,
                 v_tgt: Matrix) -> int | None:
    """epsilon with v_tgt . upper = epsilon * lower . v_src, or None."""
    a = v_tgt @ upper_map
    b = lower_map @ v_src
    if a.is_zero() and b.is_zero():
        return 1
    if a == b:
        return 1
    if a == b.scale(-1):
        return -1
    return None


def _propagate_signs(upper: FreeComplex, lower: FreeComplex,
                     verticals: list[Matrix]) -> MorphismReport:
    """Fix per-position signs so the ladder commutes; report the sign vector."""
    signs = [1] * len(verticals)
    eps = []
    for i in range(len(upper.maps)):
        e = _square_sign(upper.maps[i], lower.maps[i], verticals[i], verticals[i + 1])
        if e is None:
            return MorphismReport(False, [], [], f"square {i} fails up to sign")
        eps.append(e)
    for i in range(len(eps)):
        signs[i + 1] = signs[i] * eps[i]
    fixed = [v.scale(signs[i]) for i, v in enumerate(verticals)]
    for i in range(len(upper.maps)):
        if (fixed[i + 1] @ upper.maps[i]) != (lower.maps[i] @ fixed[i]):
            return MorphismReport(False, eps, [], f"square {i} fails after fixing")
    return MorphismReport(True, eps, fixed)


def identification_report(psi: Matrix, t: int) -> MorphismReport:
    """Column-by-column comparison of the symmetric-power family with the
    classical finite complex via the orientation isomorphisms.

    Vertical maps are orientation pairings (tensor identity) on the dual half
    and identities on the shared right half; each square must commute up to
    one sign, and the realized sign vector is returned.
    """
    from .multilinear import omega_matrix

    ring = psi.ring
    m, n = psi.nrows, psi.ncols
    if not (0 <= m + t and m + t <= n):
        raise PreconditionError("requires n >= m + t >= 0")
    upper = koszul_complex(psi, t)
    lower = eagon_northcott_complex(psi, t)
    if upper.ranks() != lower.ranks():
        return MorphismReport(False, [], [], "rank patterns differ")
    verticals = []
    for cu in upper.components:
        sh = cu.shape
        if sh.f is not None and sh.f[0] == "S*":
            nfac = len(multisets(m, sh.f[1]))
            verticals.append(omega_matrix(ring, n, sh.wedge).kron_identity_right(nfac))
        else:
            verticals.append(Matrix.identity(ring, cu.rank))
    return _propagate_signs(upper, lower, verticals)


def en_self_duality_bridge(psi: Matrix, t: int) -> MorphismReport:
    """Per-position signed identity from the classical complex at t to the
    dual of the classical complex at n - m - t."""
    ring = psi.ring
    m, n = psi.nrows, psi.ncols
    a = eagon_northcott_complex(psi, t)
    b = dualize(eagon_northcott_complex(psi, n - m - t))
    if a.ranks() != b.ranks():
        return MorphismReport(False, [], [], "rank patterns differ")
    verticals = [Matrix.identity(ring, c.rank) for c in a.components]
    return _propagate_signs(a, b, verticals)


def duality_report(psi: Matrix, t: int) -> MorphismReport:
    """Explicit isomorphism between the symmetric-power family at t and the
    dual of the family at n - m - t, assembled through the classical family.

    Verifies that every square of the composite ladder commutes exactly and
    that every vertical matrix is invertible.
    """
    m, n = psi.nrows, psi.ncols
    first = identification_report(psi, t)
    if not first.ok:
        return first
    second = identification_report(psi, n - m - t)
    if not second.ok:
        return second
    bridge = en_self_duality_bridge(psi, t)
    if not bridge.ok:
        return bridge
    a = koszul_complex(psi, t)
    b = dualize(koszul_complex(psi, n - m - t))
    dual_second = [mm.transpose() for mm in reversed(second.matrices)]
    verticals = []
    for i in range(len(a.components)):
        verticals.append(dual_second[i] @ bridge.matrices[i] @ first.matrices[i])
    report = _propagate_signs(a, b, verticals)
    if not report.ok:
        return report
    for v in report.matrices:
        det = v.det()
        if not det.is_constant() or det.constant_value() == 0:
            return MorphismReport(False, report.signs, [], "vertical not invertible")
    return report


def duality_morphism(psi: Matrix, t: int) -> MorphismReport:
    """The natural pairing morphism from the divided-power family of the
    transpose of psi to the dual of the symmetric-power family of psi.

    Both connection maps are formed from the same basis of F, so in standard
    bases every vertical matrix is a (possibly signed) identity and all
    squares commute exactly; invertibility certifies the isomorphism.
    """
    ring = psi.ring
    src = divided_koszul_complex(psi.transpose(), t)
    tgt = dualize(koszul_complex(psi, t))
    if src.ranks() != tgt.ranks():
        return MorphismReport(False, [], [], "rank patterns differ")
    verticals = [Matrix.identity(ring, c.rank) for c in src.components]
    for i in range(len(src.maps)):
        if (verticals[i + 1] @ src.maps[i]) != (tgt.maps[i] @ verticals[i]):
            return MorphismReport(False, [], [], f"square {i} does not commute")
    return MorphismReport(True, [1] * len(verticals), verticals)
