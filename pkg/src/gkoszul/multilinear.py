"""Basis combinatorics and structure maps for powers of free modules.

Exterior power bases are strictly increasing tuples in [1..n], symmetric and
divided power bases are non-decreasing tuples; both are enumerated in
lexicographic order and that enumeration is frozen (every matrix in the
package is written in these bases).

All signs come from one source: the number of inversions of a concatenated
index tuple.  Elements of a power of a free module are sparse dicts mapping
basis tuples to polynomials.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, combinations_with_replacement

from .errors import PreconditionError
from .linalg import Matrix
from .ring import Poly, PolyRing


@lru_cache(maxsize=None)
def subsets(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    """All strictly increasing p-tuples in [1..n], lexicographic."""
    if p < 0 or p > n:
        return ()
    return tuple(combinations(range(1, n + 1), p))


@lru_cache(maxsize=None)
def multisets(m: int, p: int) -> tuple[tuple[int, ...], ...]:
    """All non-decreasing p-tuples in [1..m], lexicographic."""
    if p < 0:
        return ()
    if p == 0:
        return ((),)
    if m == 0:
        return ()
    return tuple(combinations_with_replacement(range(1, m + 1), p))


@lru_cache(maxsize=None)
def subset_index(n: int, p: int) -> dict:
    return {s: i for i, s in enumerate(subsets(n, p))}


@lru_cache(maxsize=None)
def multiset_index(m: int, p: int) -> dict:
    return {s: i for i, s in enumerate(multisets(m, p))}


def shuffle_sign(*parts: tuple[int, ...]) -> int:
    """Sign of merging the concatenation of the parts into sorted order.

    Returns 0 if any index repeats.  This is the single source of truth for
    every +/- in the package.
    """
    concat = [i for part in parts for i in part]
    if len(set(concat)) != len(concat):
        return 0
    inversions = 0
    for a in range(len(concat)):
        for b in range(a + 1, len(concat)):
            if concat[a] > concat[b]:
                inversions += 1
    return -1 if inversions % 2 else 1


def sorted_merge(*parts: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sorted(i for part in parts for i in part))


def multiset_insert(ms: tuple[int, ...], value: int) -> tuple[int, ...]:
    return tuple(sorted(ms + (value,)))


def multiset_remove(ms: tuple[int, ...], value: int) -> tuple[int, ...]:
    out = list(ms)
    out.remove(value)
    return tuple(out)


# ---------------------------------------------------------------------------
# Elements: dict[basis tuple -> Poly]
# ---------------------------------------------------------------------------


def elem_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k)
        s = v if s is None else s + v
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def elem_scale(a: dict, c: Poly) -> dict:
    if c.is_zero():
        return {}
    out = {}
    for k, v in a.items():
        p = v * c
        if not p.is_zero():
            out[k] = p
    return out


def elem_is_zero(a: dict) -> bool:
    return all(v.is_zero() for v in a.values())


def elem_eq(a: dict, b: dict) -> bool:
    for k in set(a) | set(b):
        va, vb = a.get(k), b.get(k)
        if va is None:
            if not vb.is_zero():
                return False
        elif vb is None:
            if not va.is_zero():
                return False
        elif va != vb:
            return False
    return True


def elem_degrees(a: dict) -> set[int]:
    return {len(k) for k, v in a.items() if not v.is_zero()}


def wedge(a: dict, b: dict, ring: PolyRing) -> dict:
    """Exterior product of two (possibly mixed-degree) elements."""
    out: dict = {}
    for s, cs in a.items():
        if cs.is_zero():
            continue
        for t, ct in b.items():
            if ct.is_zero():
                continue
            sign = shuffle_sign(s, t)
            if sign == 0:
                continue
            key = sorted_merge(s, t)
            add = cs * ct * sign
            prev = out.get(key)
            tot = add if prev is None else prev + add
            if tot.is_zero():
                out.pop(key, None)
            else:
                out[key] = tot
    return out


def contract_basis(s: tuple[int, ...], t: tuple[int, ...]):
    """e_s contracted against the dual form e*_t: (sign, remaining) or None.

    Nonzero exactly when t is a subset of s; the sign shuffles t to the front
    of s.
    """
    st = set(t)
    if not st <= set(s):
        return None
    rest = tuple(i for i in s if i not in st)
    return shuffle_sign(t, rest), rest


def contract(y: dict, z_star: dict, ring: PolyRing) -> dict:
    """Right action of a dual exterior element on an exterior element.

    Degrees that do not match contract to zero, mirroring the algebra.
    """
    out: dict = {}
    for s, cs in y.items():
        if cs.is_zero():
            continue
        for t, ct in z_star.items():
            if ct.is_zero():
                continue
            hit = contract_basis(s, t)
            if hit is None:
                continue
            sign, rest = hit
            add = cs * ct * sign
            prev = out.get(rest)
            tot = add if prev is None else prev + add
            if tot.is_zero():
                out.pop(rest, None)
            else:
                out[rest] = tot
    return out


def antiderivation_check(x: dict, y: dict, z_star: dict, ring: PolyRing) -> bool:
    """(x ^ y) <- z* == (x <- z*) ^ y + (-1)^deg(x) * x ^ (y <- z*), for
    homogeneous x and a degree-1 dual element z*."""
    degs = elem_degrees(x)
    if len(degs) > 1:
        raise PreconditionError("x must be homogeneous")
    if elem_degrees(z_star) - {1}:
        raise PreconditionError("z* must have degree 1")
    deg_x = degs.pop() if degs else 0
    lhs = contract(wedge(x, y, ring), z_star, ring)
    rhs = elem_add(
        wedge(contract(x, z_star, ring), y, ring),
        elem_scale(wedge(x, contract(y, z_star, ring), ring), ring.const((-1) ** deg_x)),
    )
    return elem_is_zero(elem_add(lhs, elem_scale(rhs, ring.const(-1))))


def assoc_check(xs: list[dict], y: dict, z_stars: list[dict], ring: PolyRing) -> bool:
    """x1..xl ^ (y <- z*1..z*p) == (-1)^(l*p) (x1..xl ^ y) <- z*1..z*p,
    requiring z*_j(x_i) = 0 for all pairs."""
    for zs in z_stars:
        for x in xs:
            pairing = ring.zero()
            for (i,), c in ((k, v) for k, v in zs.items() if len(k) == 1):
                for (j,), d in ((k, v) for k, v in x.items() if len(k) == 1):
                    if i == j:
                        pairing = pairing + c * d
            if not pairing.is_zero():
                raise PreconditionError("z*_j(x_i) must vanish for all pairs")
    xw: dict = {(): ring.one()}
    for x in xs:
        xw = wedge(xw, x, ring)
    zw: dict = {(): ring.one()}
    for zs in z_stars:
        zw = wedge(zw, zs, ring)
    lhs = wedge(xw, contract(y, zw, ring), ring)
    sign = (-1) ** (len(xs) * len(z_stars))
    rhs = elem_scale(contract(wedge(xw, y, ring), zw, ring), ring.const(sign))
    return elem_is_zero(elem_add(lhs, elem_scale(rhs, ring.const(-1))))


def theta_matrix(ring: PolyRing, n: int, p: int) -> Matrix:
    """Matrix of the pairing Wedge^p(G*) -> (Wedge^p G)* on standard bases.

    On dual standard bases the determinant pairing is the identity.
    """
    if not (0 <= p <= n):
        raise PreconditionError(f"degree {p} out of range [0, {n}]")
    return Matrix.identity(ring, len(subsets(n, p)))


def omega_matrix(ring: PolyRing, n: int, p: int) -> Matrix:
    """Matrix of Wedge^p G -> (Wedge^(n-p) G)* induced by the orientation
    sending e_1^...^e_n to 1.  Columns are indexed by p-subsets, rows by the
    dual basis of (n-p)-subsets; the (T, S) entry is the sign of e_S ^ e_T."""
    if not (0 <= p <= n):
        raise PreconditionError(f"degree {p} out of range [0, {n}]")
    cols = subsets(n, p)
    rows = subsets(n, n - p)
    row_idx = subset_index(n, n - p)
    out = Matrix(ring, len(rows), len(cols))
    for j, s in enumerate(cols):
        t = tuple(i for i in range(1, n + 1) if i not in set(s))
        out[row_idx[t], j] = ring.const(shuffle_sign(s, t))
    return out


def divided_action(h_star: dict, c: dict, ring: PolyRing) -> dict:
    """Derivation action of a degree-1 dual element on a divided power
    element written in the multiset basis.

    On a basis monomial the rule removes one copy of each distinct index,
    weighting by the pairing of h* with that index; removing a repeated index
    carries coefficient one, which is the divided power structure.
    """
    pairing = {}
    for k, v in h_star.items():
        if len(k) != 1:
            raise PreconditionError("h* must have degree 1")
        pairing[k[0]] = v
    out: dict = {}
    for ms, coeff in c.items():
        if coeff.is_zero():
            continue
        for value in sorted(set(ms)):
            w = pairing.get(value)
            if w is None or w.is_zero():
                continue
            key = multiset_remove(ms, value)
            add = coeff * w
            prev = out.get(key)
            tot = add if prev is None else prev + add
            if tot.is_zero():
                out.pop(key, None)
            else:
                out[key] = tot
    return out


def format_basis_tuple(kind: str, idx: tuple[int, ...]) -> str:
    """Debug string forms: e[1,3,4] for subsets, s[1,1,2] for multisets,
    d[2;1] for divided monomials written as value;multiplicity pairs."""
    if kind == "e":
        return "e[" + ",".join(str(i) for i in idx) + "]"
    if kind == "s":
        return "s[" + ",".join(str(i) for i in idx) + "]"
    if kind == "d":
        runs = []
        for v in sorted(set(idx)):
            runs.append(f"{v};{idx.count(v)}")
        return "d[" + ",".join(runs) + "]"
    raise ValueError(f"unknown basis kind {kind!r}")
