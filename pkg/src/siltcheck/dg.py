"""Finite-dimensional dg-algebras and dg-modules.

Elements are homogeneous: a degree plus a coordinate row in that degree's
basis.  Multiplication and action tables are dense per degree pair, and every
constructor validates the graded axioms outright: associativity, unit, d^2 = 0
and the graded Leibniz rule d(xy) = d(x)y + (-1)^{|x|} x d(y).

The central construction is dg_end of a complex of projectives U: its
degree-n part is the degree-n piece of the hom complex of U with itself, and
the product a*b is "apply b, then a", with no auxiliary sign.  That choice
makes the Leibniz rule hold exactly for the hom-complex differential, which
the constructor re-checks on every basis pair.
"""

from __future__ import annotations

from .algebra import Algebra, Module
from .complexes import Complex, GradedHom, hom_complex
from .linalg import Matrix, RowSpace, Subquotient, subquotient_from_maps


def _zero(field, n):
    return (field.zero,) * n


def _add(field, u, v):
    return tuple(field.add(a, b) for a, b in zip(u, v))


def _scale(field, c, u):
    return tuple(field.mul(c, a) for a in u)


class DgAlgebra:
    """Graded algebra with square-zero degree +1 differential.

    dims: degree -> basis size; mult[(m, n)][i][j]: coordinates of the product
    of the i-th degree-m and j-th degree-n basis elements; diff[n]: matrix of
    d: B^n -> B^{n+1} in row convention; unit: coordinates in degree 0.
    """

    def __init__(self, field, dims: dict, mult: dict, diff: dict, unit,
                 labels: dict | None = None, validate: bool = True):
        self.field = field
        self.dims = {n: d for n, d in dims.items() if d > 0}
        degrees = sorted(self.dims)
        self.lo = degrees[0] if degrees else 0
        self.hi = degrees[-1] if degrees else -1
        self.mult = mult
        self.diffs = {n: m for n, m in diff.items() if not m.is_zero()}
        self.unit = tuple(unit)
        self.labels = labels or {}
        self._sq = {}
        if validate:
            self.validate()

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def diff(self, n: int) -> Matrix:
        d = self.diffs.get(n)
        if d is not None:
            return d
        return Matrix.zero(self.field, self.dim(n), self.dim(n + 1))

    def product(self, m: int, u, n: int, v):
        """Coordinates of (deg-m element u) * (deg-n element v) in degree m+n."""
        f = self.field
        out = _zero(f, self.dim(m + n))
        table = self.mult.get((m, n))
        if table is None:
            return out
        for i, a in enumerate(u):
            if a == f.zero:
                continue
            for j, b in enumerate(v):
                if b == f.zero:
                    continue
                out = _add(f, out, _scale(f, f.mul(a, b), table[i][j]))
        return out

    def basis_vector(self, n: int, i: int):
        f = self.field
        return tuple(f.one if k == i else f.zero for k in range(self.dim(n)))

    def apply_diff(self, n: int, u):
        return self.diff(n).apply_row(u)

    def subquotient(self, n: int) -> Subquotient:
        if n not in self._sq:
            self._sq[n] = subquotient_from_maps(self.diff(n - 1), self.diff(n),
                                                self.field, self.dim(n))
        return self._sq[n]

    def h_dim(self, n: int) -> int:
        return len(self.subquotient(n).reps)

    def h_table(self) -> dict:
        return {n: self.h_dim(n) for n in self.degrees() if self.h_dim(n)}

    def dim_table(self) -> dict:
        return dict(self.dims)

    def is_nonpositive(self) -> bool:
        return self.hi <= 0

    def validate(self):
        f = self.field
        # d^2 = 0
        for n in self.degrees():
            if not (self.diff(n) @ self.diff(n + 1)).is_zero():
                raise AssertionError(f"dg differential does not square to zero at degree {n}")
        # unit: two-sided identity and a cocycle
        if len(self.unit) != self.dim(0):
            raise AssertionError("unit has wrong length")
        if any(c != f.zero for c in self.apply_diff(0, self.unit)):
            raise AssertionError("unit is not a cocycle")
        for n in self.degrees():
            for i in range(self.dim(n)):
                v = self.basis_vector(n, i)
                if self.product(0, self.unit, n, v) != v:
                    raise AssertionError(f"left unit fails in degree {n}")
                if self.product(n, v, 0, self.unit) != v:
                    raise AssertionError(f"right unit fails in degree {n}")
        # graded Leibniz on all basis pairs
        items = [(n, i) for n in self.degrees() for i in range(self.dim(n))]
        for m, i in items:
            a = self.basis_vector(m, i)
            da = self.apply_diff(m, a)
            sign = f.one if m % 2 == 0 else f.neg(f.one)
            for n, j in items:
                b = self.basis_vector(n, j)
                lhs = self.apply_diff(m + n, self.product(m, a, n, b))
                rhs = _add(f, self.product(m + 1, da, n, b),
                           _scale(f, sign, self.product(m, a, n + 1, self.apply_diff(n, b))))
                if tuple(lhs) != tuple(rhs):
                    raise AssertionError(f"graded Leibniz fails on degrees ({m}, {n})")
        # associativity on basis triples (strided sample above desk scale)
        step = 1 if len(items) <= 24 else max(1, len(items) // 16)
        picked = items[::step]
        for m, i in picked:
            a = self.basis_vector(m, i)
            for n, j in picked:
                b = self.basis_vector(n, j)
                ab = self.product(m, a, n, b)
                for p, k in picked:
                    c = self.basis_vector(p, k)
                    if self.product(m + n, ab, p, c) != \
                            self.product(m, a, n + p, self.product(n, b, p, c)):
                        raise AssertionError(
                            f"associativity fails on degrees ({m}, {n}, {p})")


class DgModule:
    """Graded module over a DgAlgebra, right or left.

    For side "right", action[(m, n)][i][j] holds the coordinates of
    (i-th degree-m module basis) * (j-th degree-n algebra basis); for side
    "left" the roles are swapped: action[(m, n)][i][j] is (i-th degree-m
    algebra basis) * (j-th degree-n module basis).
    """

    def __init__(self, algebra: DgAlgebra, side: str, dims: dict, action: dict,
                 diff: dict, validate: bool = True):
        if side not in ("right", "left"):
            raise ValueError("side must be 'right' or 'left'")
        self.algebra = algebra
        self.side = side
        self.dims = {n: d for n, d in dims.items() if d > 0}
        degrees = sorted(self.dims)
        self.lo = degrees[0] if degrees else 0
        self.hi = degrees[-1] if degrees else -1
        self.action = action
        self.diffs = {n: m for n, m in diff.items() if not m.is_zero()}
        self._sq = {}
        if validate:
            self.validate()

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def diff(self, n: int) -> Matrix:
        d = self.diffs.get(n)
        if d is not None:
            return d
        return Matrix.zero(self.algebra.field, self.dim(n), self.dim(n + 1))

    def apply_diff(self, n: int, u):
        return self.diff(n).apply_row(u)

    def basis_vector(self, n: int, i: int):
        f = self.algebra.field
        return tuple(f.one if k == i else f.zero for k in range(self.dim(n)))

    def act(self, m: int, x, n: int, a):
        """Right: x*a for x in M^m, a in B^n.  Left: a*x for a in B^m, x in M^n."""
        f = self.algebra.field
        out = _zero(f, self.dim(m + n))
        table = self.action.get((m, n))
        if table is None:
            return out
        for i, c in enumerate(x):
            if c == f.zero:
                continue
            for j, e in enumerate(a):
                if e == f.zero:
                    continue
                out = _add(f, out, _scale(f, f.mul(c, e), table[i][j]))
        return out

    def subquotient(self, n: int) -> Subquotient:
        if n not in self._sq:
            self._sq[n] = subquotient_from_maps(self.diff(n - 1), self.diff(n),
                                                self.algebra.field, self.dim(n))
        return self._sq[n]

    def h_dim(self, n: int) -> int:
        return len(self.subquotient(n).reps)

    def h_table(self) -> dict:
        return {n: self.h_dim(n) for n in self.degrees() if self.h_dim(n)}

    def dim_table(self) -> dict:
        return dict(self.dims)

    def validate(self):
        B = self.algebra
        f = B.field
        for n in self.degrees():
            if not (self.diff(n) @ self.diff(n + 1)).is_zero():
                raise AssertionError(f"module differential does not square to zero at {n}")
        for n in self.degrees():
            for i in range(self.dim(n)):
                x = self.basis_vector(n, i)
                if self.side == "right":
                    if self.act(n, x, 0, B.unit) != x:
                        raise AssertionError(f"unit action fails in degree {n}")
                else:
                    if self.act(0, B.unit, n, x) != x:
                        raise AssertionError(f"unit action fails in degree {n}")
        if self.side == "right":
            self._validate_right()
        else:
            self._validate_left()

    def _strides(self):
        B = self.algebra
        mitems = [(n, i) for n in self.degrees() for i in range(self.dim(n))]
        aitems = [(n, j) for n in B.degrees() for j in range(B.dim(n))]
        mstep = 1 if len(mitems) <= 24 else max(1, len(mitems) // 16)
        astep = 1 if len(aitems) <= 24 else max(1, len(aitems) // 16)
        return mitems, aitems, mitems[::mstep], aitems[::astep]

    def _validate_right(self):
        B = self.algebra
        f = B.field
        mitems, aitems, mpick, apick = self._strides()
        for m, i in mitems:
            x = self.basis_vector(m, i)
            dx = self.apply_diff(m, x)
            sign = f.one if m % 2 == 0 else f.neg(f.one)
            for n, j in aitems:
                a = B.basis_vector(n, j)
                lhs = self.apply_diff(m + n, self.act(m, x, n, a))
                rhs = _add(f, self.act(m + 1, dx, n, a),
                           _scale(f, sign, self.act(m, x, n + 1, B.apply_diff(n, a))))
                if tuple(lhs) != tuple(rhs):
                    raise AssertionError(f"module Leibniz fails on degrees ({m}, {n})")
        for m, i in mpick:
            x = self.basis_vector(m, i)
            for n, j in apick:
                a = B.basis_vector(n, j)
                xa = self.act(m, x, n, a)
                for p, k in apick:
                    b = B.basis_vector(p, k)
                    if self.act(m + n, xa, p, b) != \
                            self.act(m, x, n + p, B.product(n, a, p, b)):
                        raise AssertionError(
                            f"action associativity fails on ({m}, {n}, {p})")

    def _validate_left(self):
        B = self.algebra
        f = B.field
        mitems, aitems, mpick, apick = self._strides()
        for m, i in aitems:
            a = B.basis_vector(m, i)
            da = B.apply_diff(m, a)
            sign = f.one if m % 2 == 0 else f.neg(f.one)
            for n, j in mitems:
                x = self.basis_vector(n, j)
                lhs = self.apply_diff(m + n, self.act(m, a, n, x))
                rhs = _add(f, self.act(m + 1, da, n, x),
                           _scale(f, sign, self.act(m, a, n + 1, self.apply_diff(n, x))))
                if tuple(lhs) != tuple(rhs):
                    raise AssertionError(f"module Leibniz fails on degrees ({m}, {n})")
        for m, i in apick:
            a = B.basis_vector(m, i)
            for p, k in apick:
                b = B.basis_vector(p, k)
                ab = B.product(m, a, p, b)
                for n, j in mpick:
                    x = self.basis_vector(n, j)
                    if self.act(m + p, ab, n, x) != \
                            self.act(m, a, p + n, self.act(p, b, n, x)):
                        raise AssertionError(
                            f"action associativity fails on ({m}, {p}, {n})")


# -- dg-end and hom modules ------------------------------------------------


def dg_end(U: Complex) -> DgAlgebra:
    """The endomorphism dg-algebra of a complex of projectives.

    Carries .gh (the underlying hom complex of U with itself) and .complex.
    """
    if not U.is_projective_complex():
        raise ValueError("dg_end needs a complex of projectives")
    gh = hom_complex(U, U)
    f = U.algebra.field
    dims = {n: gh.dim(n) for n in range(gh.lo, gh.hi + 1)}
    mult = {}
    for m in range(gh.lo, gh.hi + 1):
        for n in range(gh.lo, gh.hi + 1):
            if not dims.get(m) or not dims.get(n) or not dims.get(m + n):
                continue
            table = []
            for (sa, ha) in gh.basis[m]:
                row = []
                for (sb, hb) in gh.basis[n]:
                    if sa != n + sb:
                        row.append(_zero(f, dims[m + n]))
                        continue
                    comp = hb.mat @ ha.mat  # apply b first, then a
                    coords = gh.coords_of(m + n, {sb: comp})
                    if coords is None:
                        raise AssertionError("composite escaped the hom basis")
                    row.append(coords)
                table.append(row)
            mult[(m, n)] = table
    diffs = {n: gh.diff(n) for n in range(gh.lo, gh.hi + 1)}
    ident = {i: Matrix.identity(f, U.term(i).dim) for i in U.degrees() if U.term(i).dim}
    unit = gh.coords_of(0, ident)
    if unit is None:
        raise AssertionError("identity escaped the hom basis")
    B = DgAlgebra(f, dims, mult, diffs, unit)
    B.gh = gh
    B.complex = U
    return B


def dg_hom_module(U: Complex, X: Complex, B: DgAlgebra | None = None) -> DgModule:
    """Hom complex of U into X as a right dg-module over dg_end(U).

    The action is composition, f*b = "apply b, then f".  Carries .gh.
    """
    if B is None:
        B = dg_end(U)
    ghB = B.gh
    gh = hom_complex(U, X)
    f = U.algebra.field
    dims = {n: gh.dim(n) for n in range(gh.lo, gh.hi + 1)}
    action = {}
    for m in range(gh.lo, gh.hi + 1):
        for n in ghB.basis:
            if not dims.get(m) or not ghB.dim(n) or not dims.get(m + n):
                continue
            table = []
            for (sx, hx) in gh.basis[m]:
                row = []
                for (sb, hb) in ghB.basis[n]:
                    if sx != n + sb:
                        row.append(_zero(f, dims[m + n]))
                        continue
                    comp = hb.mat @ hx.mat
                    coords = gh.coords_of(m + n, {sb: comp})
                    if coords is None:
                        raise AssertionError("composite escaped the hom basis")
                    row.append(coords)
                table.append(row)
            action[(m, n)] = table
    diffs = {n: gh.diff(n) for n in range(gh.lo, gh.hi + 1)}
    M = DgModule(B, "right", dims, action, diffs)
    M.gh = gh
    return M


def evaluation_left_module(B: DgAlgebra, U: Complex) -> DgModule:
    """U as a left dg-module over B = dg_end(U), b acting by evaluation b(u)."""
    gh = B.gh
    if gh.X is not U:
        raise ValueError("B must be the dg-end of U")
    f = U.algebra.field
    dims = {n: U.term(n).dim for n in U.degrees()}
    action = {}
    for m in gh.basis:
        for n in U.degrees():
            if not gh.dim(m) or not dims.get(n) or not dims.get(m + n):
                continue
            table = []
            for (sb, hb) in gh.basis[m]:
                row = []
                for j in range(dims[n]):
                    if sb != n:
                        row.append(_zero(f, dims[m + n]))
                        continue
                    u = tuple(f.one if t == j else f.zero for t in range(dims[n]))
                    row.append(hb.mat.apply_row(u))
                table.append(row)
            action[(m, n)] = table
    diffs = {n: U.diff(n) for n in U.degrees()}
    M = DgModule(B, "left", dims, action, diffs)
    M.complex = U
    return M


# -- cohomology-level algebra ----------------------------------------------


def h0_algebra(B: DgAlgebra, idempotent_cocycles=None) -> Algebra:
    """H^0 of a dg-algebra as an ordinary algebra.

    idempotent_cocycles: optional degree-0 cocycle vectors whose classes form
    a complete orthogonal idempotent set (for dg_end, take the coordinates of
    summand projections of the complex); classes that vanish in H^0 are
    dropped.  Without them the unit class is the only idempotent.  The basis
    is adapted so each idempotent class is itself a basis element.  The result
    carries .class_reps (a degree-0 cocycle per basis element) and .sq.
    """
    f = B.field
    sq = B.subquotient(0)
    h = len(sq.reps)
    unit_cls = tuple(sq.reduce(B.unit))
    if all(c == f.zero for c in unit_cls):
        raise ValueError("H^0 is degenerate: the unit class vanishes")

    def mult_classes(u_cls, v_cls):
        u = sq.lift(u_cls)
        v = sq.lift(v_cls)
        return tuple(sq.reduce(B.product(0, u, 0, v)))

    if idempotent_cocycles is None:
        idem_cls = [unit_cls]
        kept = [0]
    else:
        idem_cls = []
        kept = []
        for pos, v in enumerate(idempotent_cocycles):
            cls = tuple(sq.reduce(tuple(v)))
            if any(c != f.zero for c in cls):
                idem_cls.append(cls)
                kept.append(pos)
    total = idem_cls[0]
    for e in idem_cls[1:]:
        total = _add(f, total, e)
    if tuple(total) != unit_cls:
        raise AssertionError("idempotent classes do not sum to the unit class")

    # Peirce pieces e_j H e_k, with e_j leading its own diagonal block
    basis_cls = []
    blocks = []
    idem_positions = []
    for j, ej in enumerate(idem_cls):
        for k, ek in enumerate(idem_cls):
            piece = RowSpace(f, h)
            ordered = []
            if j == k:
                piece.add(ej)
                ordered.append(ej)
                idem_positions.append(len(basis_cls))
            for rep_i in range(h):
                u = tuple(f.one if t == rep_i else f.zero for t in range(h))
                w = mult_classes(mult_classes(ej, u), ek)
                if piece.add(w):
                    ordered.append(w)
            for t, w in enumerate(ordered):
                basis_cls.append(tuple(w))
                blocks.append((j, k))
    span = Matrix(f, len(basis_cls), h, basis_cls)
    if span.rank() != h or len(basis_cls) != h:
        raise AssertionError("Peirce decomposition of H^0 is not direct")

    labels = []
    for t, (j, k) in enumerate(blocks):
        if t in idem_positions:
            labels.append(f"p{j}")
        else:
            labels.append(f"h{j}{k}_{t}")
    mult = {}
    for x in range(h):
        for y in range(h):
            w = mult_classes(basis_cls[x], basis_cls[y])
            coords = span.solve_left_rows(w)
            if coords is None:
                raise AssertionError("H^0 product escaped the adapted basis")
            sparse = tuple((t, c) for t, c in enumerate(coords) if c != f.zero)
            if sparse:
                mult[(x, y)] = sparse
    unit_coords = span.solve_left_rows(unit_cls)
    alg = Algebra(f, labels, mult, unit_coords, idem_positions)
    alg.class_reps = [tuple(sq.lift(cls)) for cls in basis_cls]
    alg.sq = sq
    alg.kept_idempotents = kept
    return alg


def h0_module(M: DgModule, E: Algebra) -> Module:
    """H^0 of a right dg-module as an ordinary module over h0_algebra output E."""
    f = M.algebra.field
    sq = M.subquotient(0)
    h = len(sq.reps)
    action = []
    for rep in E.class_reps:
        rows = []
        for cls_i in range(h):
            x = sq.lift(tuple(f.one if t == cls_i else f.zero for t in range(h)))
            rows.append(sq.reduce(M.act(0, x, 0, rep)))
        action.append(Matrix(f, h, h, rows))
    out = Module(E, h, action)
    out.sq = sq
    return out


# -- truncation, opposite, side swap, restriction --------------------------


def smart_truncate(B: DgAlgebra) -> DgAlgebra:
    """Non-positive truncation: degree 0 becomes ker d^0, positive degrees die.

    The result carries .embed (per-degree inclusion matrices into B) and
    .ambient = B; the inclusion is a map of dg-algebras and induces H^n
    isomorphisms for n <= 0.
    """
    f = B.field
    ker_rows = [tuple(r) for r in B.diff(0).row_kernel_rows()]
    kmat = Matrix(f, len(ker_rows), B.dim(0), ker_rows)
    dims = {n: B.dim(n) for n in B.degrees() if n < 0}
    if ker_rows:
        dims[0] = len(ker_rows)
    embed = {}
    for n in B.degrees():
        if n < 0:
            embed[n] = Matrix.identity(f, B.dim(n))
    embed[0] = kmat

    def restrict(vec, n):
        """Coordinates of a degree-n element of B lying in the truncation."""
        if n < 0:
            return tuple(vec)
        if n == 0:
            sol = kmat.solve_left_rows(vec)
            if sol is None:
                raise AssertionError("element is not a degree-0 cocycle")
            return sol
        if any(c != f.zero for c in vec):
            raise AssertionError("positive-degree element in truncation")
        return ()

    mult = {}
    for m in sorted(dims):
        for n in sorted(dims):
            if m + n not in dims and m + n != 0:
                continue
            if m + n > 0:
                continue
            table = []
            for i in range(dims[m]):
                a = embed[m].rows[i]
                row = []
                for j in range(dims[n]):
                    b = embed[n].rows[j]
                    prod = B.product(m, a, n, b)
                    row.append(restrict(prod, m + n))
                table.append(row)
            if dims.get(m + n):
                mult[(m, n)] = table
    diffs = {}
    for n in sorted(dims):
        if n + 1 > 0 or not dims.get(n + 1):
            continue
        rows = [restrict(B.apply_diff(n, embed[n].rows[i]), n + 1) for i in range(dims[n])]
        diffs[n] = Matrix(f, dims[n], dims[n + 1], rows)
    unit = restrict(B.unit, 0)
    C = DgAlgebra(f, dims, mult, diffs, unit)
    C.embed = embed
    C.ambient = B
    return C


def opposite_dg(B: DgAlgebra) -> DgAlgebra:
    """Multiplication reversed with the Koszul sign (-1)^{mn}."""
    f = B.field
    mult = {}
    for (m, n), table in B.mult.items():
        sign = f.one if (m * n) % 2 == 0 else f.neg(f.one)
        out = [[_scale(f, sign, table[i][j]) for i in range(B.dim(m))]
               for j in range(B.dim(n))]
        mult[(n, m)] = out
    op = DgAlgebra(f, dict(B.dims), mult, dict(B.diffs), B.unit)
    if hasattr(B, "embed"):
        op.embed = B.embed
    if hasattr(B, "ambient"):
        op.ambient = B.ambient
    return op


def side_swap(M: DgModule, Bop: DgAlgebra) -> DgModule:
    """Left B-module to right B^op-module via x*a = (-1)^{|a||x|} a*x."""
    if M.side != "left":
        raise ValueError("side_swap expects a left module")
    f = M.algebra.field
    action = {}
    for (m, n), table in M.action.items():
        # table: (deg-m algebra basis) x (deg-n module basis)
        sign = f.one if (m * n) % 2 == 0 else f.neg(f.one)
        out = [[_scale(f, sign, table[i][j]) for i in range(M.algebra.dim(m))]
               for j in range(M.dim(n))]
        action[(n, m)] = out
    return DgModule(Bop, "right", dict(M.dims), action, dict(M.diffs))


def restrict_scalars(M: DgModule, C: DgAlgebra) -> DgModule:
    """Restrict a dg-module, right or left, along the truncation inclusion C -> B."""
    f = M.algebra.field
    action = {}
    if M.side == "right":
        for m in M.degrees():
            for n in C.degrees():
                if not M.dim(m) or not C.dim(n) or not M.dim(m + n):
                    continue
                table = []
                for i in range(M.dim(m)):
                    x = M.basis_vector(m, i)
                    row = []
                    for j in range(C.dim(n)):
                        a = C.embed[n].rows[j]
                        row.append(M.act(m, x, n, a))
                    table.append(row)
                action[(m, n)] = table
    else:
        for m in C.degrees():
            for n in M.degrees():
                if not C.dim(m) or not M.dim(n) or not M.dim(m + n):
                    continue
                table = []
                for i in range(C.dim(m)):
                    a = C.embed[m].rows[i]
                    row = []
                    for j in range(M.dim(n)):
                        row.append(M.act(m, a, n, M.basis_vector(n, j)))
                    table.append(row)
                action[(m, n)] = table
    out = DgModule(C, M.side, dict(M.dims), action, dict(M.diffs))
    out.ambient_module = M
    if hasattr(M, "complex"):
        out.complex = M.complex
    if hasattr(M, "gh"):
        out.gh = M.gh
    return out


def smart_truncate_module(M: DgModule) -> DgModule:
    """Non-positive truncation of a right dg-module over a non-positive dg-algebra.

    Degree 0 becomes ker d^0, positive degrees die; carries .embed matrices.
    """
    if M.side != "right":
        raise ValueError("smart_truncate_module expects a right module")
    if not M.algebra.is_nonpositive():
        raise ValueError("base dg-algebra must be non-positive")
    f = M.algebra.field
    ker_rows = [tuple(r) for r in M.diff(0).row_kernel_rows()]
    kmat = Matrix(f, len(ker_rows), M.dim(0), ker_rows)
    dims = {n: M.dim(n) for n in M.degrees() if n < 0}
    if ker_rows:
        dims[0] = len(ker_rows)
    embed = {n: Matrix.identity(f, M.dim(n)) for n in M.degrees() if n < 0}
    embed[0] = kmat

    def restrict(vec, n):
        if n < 0:
            return tuple(vec)
        if n == 0:
            sol = kmat.solve_left_rows(vec)
            if sol is None:
                raise AssertionError("element is not a degree-0 cocycle")
            return sol
        if any(c != f.zero for c in vec):
            raise AssertionError("positive-degree element in truncation")
        return ()

    action = {}
    for m in sorted(dims):
        for n in M.algebra.degrees():
            if m + n > 0 or not dims.get(m) or not M.algebra.dim(n) or not dims.get(m + n):
                continue
            table = []
            for i in range(dims[m]):
                x = embed[m].rows[i]
                row = []
                for j in range(M.algebra.dim(n)):
                    a = M.algebra.basis_vector(n, j)
                    row.append(restrict(M.act(m, x, n, a), m + n))
                table.append(row)
            action[(m, n)] = table
    diffs = {}
    for n in sorted(dims):
        if n + 1 > 0 or not dims.get(n + 1):
            continue
        rows = [restrict(M.apply_diff(n, embed[n].rows[i]), n + 1) for i in range(dims[n])]
        diffs[n] = Matrix(f, dims[n], dims[n + 1], rows)
    out = DgModule(M.algebra, "right", dims, action, diffs)
    out.embed = embed
    out.ambient_module = M
    return out
