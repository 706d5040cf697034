# Restriction geometry along lines and planes of P(V): sections of E on a
# plane or line as intersections inside H* (x) V*, splitting orders on lines
# via minimal generators of the restricted section module, determinants of
# the associated net of quadrics, and the quadric-ideal computations attached
# to maps from a null-correlation bundle to O(1).

from __future__ import annotations

from .bases import WEDGE_PAIRS, mono_mul, monomial_index_map, monomials, sym_pairs
from .fields import Field
from .linalg import Mat, MatBuilder, Subspace
from .monads import Monad, MonadError, build_monad
from .polys import interpolate as poly_interpolate
from .polys import trim as poly_trim
from .tensors import OmegaTensor

# -- Pluecker algebra ------------------------------------------------------


def plucker_of_span(field: Field, u0: list, u1: list) -> list:
    """Pluecker coordinates of span(u0, u1) in the ordered wedge basis."""
    f = field
    return [
        f.sub(f.mul(u0[k], u1[l]), f.mul(u0[l], u1[k])) for (k, l) in WEDGE_PAIRS
    ]


def plucker_quadric(field: Field, lam: list):
    """The quadric whose vanishing marks decomposable 2-vectors."""
    f = field
    return f.add(
        f.sub(f.mul(lam[0], lam[5]), f.mul(lam[1], lam[4])),
        f.mul(lam[2], lam[3]),
    )


def plucker_bilinear(field: Field, a: list, b: list):
    """Polarization q(a+b) - q(a) - q(b); zero iff the two lines meet."""
    f = field
    acc = f.zero()
    for i, j, sign in ((0, 5, 1), (1, 4, -1), (2, 3, 1)):
        t = f.add(f.mul(a[i], b[j]), f.mul(a[j], b[i]))
        acc = f.add(acc, t if sign == 1 else f.neg(t))
    return acc


def _skew_matrix_of_wedge(field: Field, lam: list) -> Mat:
    f = field
    m = [[f.zero()] * 4 for _ in range(4)]
    for w, (k, l) in enumerate(WEDGE_PAIRS):
        m[k][l] = lam[w]
        m[l][k] = f.neg(lam[w])
    return Mat.from_rows(f, m, 4)


class Line:
    """A line in P(V): 2-dimensional space U of points, its 2-dimensional
    space W of equations in V*, and the decomposable Pluecker vector of U."""

    __slots__ = ("field", "U", "W", "plucker")

    def __init__(self, field: Field, U: Subspace, W: Subspace, plucker: list):
        self.field = field
        self.U = U
        self.W = W
        self.plucker = plucker
        if U.dim != 2 or W.dim != 2:
            raise ValueError("a line needs 2-dimensional point and equation spaces")
        if not field.is_zero(plucker_quadric(field, plucker)):
            raise ValueError("Pluecker vector is not decomposable")
        # W must annihilate the Pluecker vector under contraction
        lmat = _skew_matrix_of_wedge(field, plucker)
        for r in range(2):
            contracted = lmat @ Mat.from_rows(field, [[x] for x in W.basis.row(r)], 1)
            if not contracted.is_zero():
                raise ValueError("equations do not annihilate the Pluecker vector")

    @staticmethod
    def from_points(field: Field, u0: list, u1: list) -> "Line":
        U = Subspace.from_spanning(Mat.from_rows(field, [u0, u1], 4))
        if U.dim != 2:
            raise ValueError("points are proportional")
        W = Mat.from_rows(field, U.basis.rows(), 4).kernel()
        b0, b1 = U.basis.row(0), U.basis.row(1)
        return Line(field, U, W, plucker_of_span(field, b0, b1))

    @staticmethod
    def from_equations(field: Field, z0: list, z1: list) -> "Line":
        W = Subspace.from_spanning(Mat.from_rows(field, [z0, z1], 4))
        if W.dim != 2:
            raise ValueError("equations are proportional")
        U = Mat.from_rows(field, W.basis.rows(), 4).kernel()
        b0, b1 = U.basis.row(0), U.basis.row(1)
        return Line(field, U, W, plucker_of_span(field, b0, b1))

    @staticmethod
    def from_plucker(field: Field, lam: list) -> "Line":
        if all(field.is_zero(x) for x in lam):
            raise ValueError("zero Pluecker vector")
        if not field.is_zero(plucker_quadric(field, lam)):
            raise ValueError("Pluecker vector is not decomposable")
        lmat = _skew_matrix_of_wedge(field, lam)
        U = lmat.column_space()
        W = Mat.from_rows(field, U.basis.rows(), 4).kernel()
        return Line(field, U, W, lam)


class Plane:
    """A plane in P(V), given by one nonzero equation z in V*."""

    __slots__ = ("field", "z", "W")

    def __init__(self, field: Field, z: list):
        if all(field.is_zero(x) for x in z):
            raise ValueError("plane equation must be nonzero")
        self.field = field
        self.z = z
        self.W = Mat.from_rows(field, [z], 4).kernel()  # the 3-space of points


# -- section counts by intersection ----------------------------------------


def _tensor_line_space(field: Field, n: int, vectors: list[list]) -> Subspace:
    """span{e_a* (x) v : a < n, v in vectors} inside H* (x) V*."""
    rows = []
    for a in range(n):
        for v in vectors:
            vec = [field.zero()] * (4 * n)
            for k in range(4):
                vec[4 * a + k] = v[k]
            rows.append(vec)
    return Subspace.from_spanning(Mat.from_rows(field, rows, 4 * n))


def h0_plane(omega: OmegaTensor, plane: Plane, *, monad: Monad | None = None) -> int:
    """h0 of E restricted to the plane: dim N meet (H* (x) <z>)."""
    m = monad if monad is not None else build_monad(omega)
    sub = _tensor_line_space(omega.field, omega.n, [plane.z])
    return m.N.intersect(sub).dim


def h0_line(omega: OmegaTensor, line: Line, *, monad: Monad | None = None) -> int:
    """h0 of E restricted to the line: dim N meet (H* (x) W)."""
    m = monad if monad is not None else build_monad(omega)
    sub = _tensor_line_space(omega.field, omega.n, line.W.basis.rows())
    return m.N.intersect(sub).dim


# -- splitting order on a line ----------------------------------------------


def _line_section_spaces(m: Monad, line: Line, d: int) -> tuple[Subspace, Mat]:
    """(ker of the restricted right map, image matrix of the restricted left
    map) in degree d on the line."""
    subs = line.U.basis  # 2 x 4 substitution V* -> U*
    a = m.alpha(d, subs=subs)
    b = m.beta(d, subs=subs)
    return a.kernel(), b


def splitting_order(omega: OmegaTensor, line: Line, *, monad: Monad | None = None) -> int:
    """Splitting order a of E_L = O(a) (+) O(-a) for a rank-2 bundle.

    Section spaces M_d of E_L(d) are computed for d = 0..n from the display
    restricted to the line; a is the largest d at which multiplication by the
    line's coordinates fails to generate M_d from M_{d-1} (a fresh minimal
    generator of the section module), and 0 when no failure occurs.
    """
    m = monad if monad is not None else build_monad(omega)
    if m.r != 2:
        raise MonadError("splitting order is defined for rank-2 displays only")
    f = omega.field
    n = m.nH
    kers: dict[int, Subspace] = {}
    betas: dict[int, Mat] = {}
    for d in range(0, n + 1):
        kers[d], betas[d] = _line_section_spaces(m, line, d)
    order = 0
    for d in range(1, n + 1):
        prev, cur = kers[d - 1], kers[d]
        count_prev = d  # monomials of degree d-1 in 2 variables
        count_cur = d + 1
        rows = betas[d].transpose().rows()
        for t in range(prev.dim):
            vec = prev.basis.row(t)
            for var in (0, 1):
                out = [f.zero()] * (m.m * count_cur)
                src_mon = monomials(2, d - 1)
                tgt_idx = monomial_index_map(2, d)
                for s in range(m.m):
                    for mi, mono in enumerate(src_mon):
                        c = vec[s * count_prev + mi]
                        if not f.is_zero(c):
                            out[s * count_cur + tgt_idx[mono_mul(mono, var)]] = f.add(
                                out[s * count_cur + tgt_idx[mono_mul(mono, var)]], c
                            )
                rows.append(out)
        generated = Subspace.from_spanning(Mat.from_rows(f, rows, m.m * count_cur))
        # the generated space sits inside ker alpha_d; strictness means a new
        # generator of the section module in degree d
        if generated.dim < cur.dim:
            order = d
    return order


# -- nets of quadrics --------------------------------------------------------


def pencil_jump_poly(omega: OmegaTensor, lam0: list, lam1: list) -> list:
    """det of the contracted quadric along the pencil lam0 + t lam1.

    The pencil must stay inside the decomposable locus (checked through the
    Pluecker quadric); the result is the coefficient list of a polynomial of
    degree at most n whose roots mark jumping lines of the pencil.
    """
    f = omega.field
    if not f.is_zero(plucker_quadric(f, lam0)):
        raise ValueError("lam0 is not decomposable")
    if not f.is_zero(plucker_quadric(f, lam1)):
        raise ValueError("lam1 is not decomposable")
    if not f.is_zero(plucker_bilinear(f, lam0, lam1)):
        raise ValueError("pencil leaves the decomposable locus")
    n = omega.n
    points = [f.of_int(i) for i in range(n + 1)]
    values = []
    for t in points:
        lam = [f.add(a, f.mul(t, b)) for a, b in zip(lam0, lam1)]
        values.append(omega.contract_line(lam).det())
    return poly_trim(poly_interpolate(points, values, f), f)


def point_plane_pencil(field: Field, p: list, q0: list, q1: list) -> tuple[list, list]:
    """Pencil of lines through the point p inside the plane spanned with q0, q1.

    Returns (lam0, lam1) with lam0 + t lam1 decomposable for every t.
    """
    lam0 = plucker_of_span(field, p, q0)
    lam1 = plucker_of_span(field, p, q1)
    return lam0, lam1


# -- intersections with K (x) V* and the decomposability flag ----------------


def k_intersection(
    omega: OmegaTensor, K: Subspace, *, monad: Monad | None = None, scan_cap: int = 2048
) -> tuple[Subspace, bool]:
    """(N meet (K (x) V*), flag: does it contain a nonzero decomposable vector).

    The flag is decided exactly (over the algebraic closure) when the
    intersection has dimension <= 2, via minors and a gcd of binary
    quadratics; for higher-dimensional intersections over finite fields it
    falls back to a capped scan of the projectivized intersection over the
    base field, which can only under-report.
    """
    f, n = omega.field, omega.n
    m = monad if monad is not None else build_monad(omega)
    rows = []
    for r in range(K.dim):
        kr = K.basis.row(r)
        for l in range(4):
            vec = [f.zero()] * (4 * n)
            for a in range(n):
                vec[4 * a + l] = kr[a]
            rows.append(vec)
    if not rows:
        return Subspace.zero(f, 4 * n), False
    sub = Subspace.from_spanning(Mat.from_rows(f, rows, 4 * n))
    inter = m.N.intersect(sub)
    return inter, _has_decomposable(f, K, inter, scan_cap)


def _coeff_matrix_in_K(field: Field, K: Subspace, vec: list) -> Mat:
    """Write a vector of K (x) V* as a (dim K) x 4 coefficient matrix."""
    f = field
    n = K.ambient
    rows = []
    for l in range(4):
        col = [vec[4 * a + l] for a in range(n)]
        coords = [col[pc] for pc in K.pivots]
        rows.append(coords)
    # rows currently indexed by l; transpose to (r, l)
    m = Mat.from_rows(f, rows, K.dim)
    return m.transpose()


def _has_decomposable(field: Field, K: Subspace, inter: Subspace, scan_cap: int) -> bool:
    f = field
    if inter.dim == 0:
        return False
    mats = [_coeff_matrix_in_K(f, K, inter.basis.row(t)) for t in range(inter.dim)]
    if inter.dim == 1:
        return mats[0].rank() <= 1
    if inter.dim == 2:
        return _pencil_has_rank_one(f, mats[0], mats[1])
    # conservative capped scan over the base field for higher dimensions
    if f.kind == "rational":
        return any(m0.rank() <= 1 for m0 in mats)
    count = 0
    for vec in _projective_points(f, inter.dim):
        acc = None
        for c, m0 in zip(vec, mats):
            term = m0.scale(c)
            acc = term if acc is None else acc + term
        if acc.rank() <= 1:
            return True
        count += 1
        if count >= scan_cap:
            break
    return False


def _pencil_has_rank_one(field: Field, A: Mat, B: Mat) -> bool:
    """Does x A + y B drop to rank <= 1 for some (x : y) over the closure?

    All 2x2 minors of x A + y B are binary quadratics; a common projective
    root exists iff B alone has rank <= 1 or the dehomogenized minors share a
    nonconstant gcd.
    """
    from .polys import gcd as poly_gcd

    f = field
    if A.rank() <= 1 or B.rank() <= 1:
        return True
    minors = []
    rows, cols = A.nrows, A.ncols
    for r0 in range(rows):
        for r1 in range(r0 + 1, rows):
            for c0 in range(cols):
                for c1 in range(c0 + 1, cols):
                    a0, a1 = A.get(r0, c0), A.get(r0, c1)
                    a2, a3 = A.get(r1, c0), A.get(r1, c1)
                    b0, b1 = B.get(r0, c0), B.get(r0, c1)
                    b2, b3 = B.get(r1, c0), B.get(r1, c1)
                    # det of (tA + B) restricted to the 2x2 block, in t
                    c_t2 = f.sub(f.mul(a0, a3), f.mul(a1, a2))
                    c_t0 = f.sub(f.mul(b0, b3), f.mul(b1, b2))
                    c_t1 = f.sub(
                        f.add(f.mul(a0, b3), f.mul(b0, a3)),
                        f.add(f.mul(a1, b2), f.mul(b1, a2)),
                    )
                    minors.append([c_t0, c_t1, c_t2])
    g = minors[0]
    for mpoly in minors[1:]:
        g = poly_gcd(g, mpoly, f)
        if not g or len(g) == 1:
            return False
    return len(g) > 1


def _projective_points(field: Field, dim: int):
    """Deterministic enumeration of P^(dim-1) over a finite field."""
    f = field
    elems = list(f.elements())
    for lead in range(dim):
        tail = dim - lead - 1

        def rec(pos: int, acc: list):
            if pos == tail:
                yield [f.zero()] * lead + [f.one()] + acc
                return
            for e in elems:
                yield from rec(pos + 1, acc + [e])

        yield from rec(0, [])


# -- quadric ideals from null-correlation maps -------------------------------


def nc_quadric_ideal(field: Field, eta: list, alpha: list) -> Subspace:
    """Image in S^2 V* of the degree-1 section map attached to (eta, alpha).

    eta must be an indecomposable 2-form (rank-4 flattening) and alpha not
    proportional to it; the image is the 4-dimensional degree-2 part of the
    ideal of a pair of skew lines or a twisted double line.
    """
    f = field
    emat = _skew_matrix_of_wedge(f, eta)
    if emat.rank() != 4:
        raise ValueError("eta must be indecomposable (rank 4)")
    pair = Mat.from_rows(f, [eta, alpha], 6)
    if pair.rank() < 2:
        raise ValueError("alpha is proportional to eta; the section map is zero")
    amat = _skew_matrix_of_wedge(f, alpha)
    c = amat @ emat.inverse()  # the composed map on V*
    s2_idx = {pq: i for i, pq in enumerate(sym_pairs(4))}
    rows = []
    for (i, j) in WEDGE_PAIRS:
        vec = [f.zero()] * 10
        for k in range(4):
            ci = c.get(k, i)
            if not f.is_zero(ci):
                mono = (min(k, j), max(k, j))
                vec[s2_idx[mono]] = f.add(vec[s2_idx[mono]], ci)
            cj = c.get(k, j)
            if not f.is_zero(cj):
                mono = (min(k, i), max(k, i))
                vec[s2_idx[mono]] = f.sub(vec[s2_idx[mono]], cj)
        rows.append(vec)
    return Subspace.from_spanning(Mat.from_rows(f, rows, 10))


def triple_span(field: Field, pairs: list[tuple[list, list]]) -> bool:
    """Do three quadric ideals from nc section maps span all of S^2 V*?"""
    if len(pairs) != 3:
        raise ValueError("exactly three (eta, alpha) pairs expected")
    total = None
    for eta, alpha in pairs:
        ideal = nc_quadric_ideal(field, eta, alpha)
        total = ideal if total is None else total.sum(ideal)
    return total.dim == 10


def quadrics_through_line(field: Field, line: Line) -> Subspace:
    """Degree-2 part of the ideal of a line: a 7-dimensional space."""
    f = field
    u0, u1 = line.U.basis.row(0), line.U.basis.row(1)
    s2 = sym_pairs(4)
    b = MatBuilder(f, 3, 10)
    for row, (va, vb) in enumerate(((u0, u0), (u0, u1), (u1, u1))):
        for col, (p, q) in enumerate(s2):
            val = f.mul(va[p], vb[q])
            if p != q:
                val = f.add(val, f.mul(va[q], vb[p]))
            b.set(row, col, val)
    return b.build().kernel()
