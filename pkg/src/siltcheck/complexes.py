"""Bounded cochain complexes of right modules.

Shifts, mapping cones, cohomology with its induced action, chain maps and
their induced maps on cohomology, the graded hom complex, projective
replacement, quasi-isomorphism testing, and the total tensor of a complex of
modules with a complex of bimodules.

Sign conventions, fixed once and asserted by constructor validation:
* shift: X[k]^n = X^{n+k}, differential scaled by (-1)^k;
* cone of f: X -> Y: C^n = X^{n+1} (+) Y^n with d(x, y) = (-x d_X, x f + y d_Y);
* graded hom differential: (df)_i = f_i d_Y - (-1)^n d_X f_{i+1} in degree n.
With these choices the canonical triangle maps Y -> C -> X[1] commute on the
nose and the long exact sequence identities hold without auxiliary signs.
"""

from __future__ import annotations

from typing import Sequence

from .algebra import (
    Algebra,
    Bimodule,
    Module,
    ModuleMap,
    direct_sum_modules,
    hom_coordinates,
    hom_space,
    projective_module,
    tensor_over,
    zero_module,
)
from .linalg import Matrix, RowSpace, subquotient_from_maps


class ResolutionCapError(RuntimeError):
    """Projective replacement did not terminate within the length cap."""


def block_matrix(field, blocks, row_dims: Sequence[int], col_dims: Sequence[int]) -> Matrix:
    """Assemble a matrix from a grid of blocks; None means a zero block."""
    nrows, ncols = sum(row_dims), sum(col_dims)
    z = field.zero
    rows = [[z] * ncols for _ in range(nrows)]
    r0 = 0
    for bi, rd in enumerate(row_dims):
        c0 = 0
        for bj, cd in enumerate(col_dims):
            blk = blocks[bi][bj]
            if blk is not None:
                if blk.nrows != rd or blk.ncols != cd:
                    raise ValueError("block shape mismatch")
                for r in range(rd):
                    br = blk.rows[r]
                    row = rows[r0 + r]
                    for c in range(cd):
                        row[c0 + c] = br[c]
            c0 += cd
        r0 += rd
    return Matrix(field, nrows, ncols, rows)


class Complex:
    """Bounded complex of right modules; degree-indexed terms and differentials.

    proj_types, when given, witnesses each nonzero term as a direct sum of the
    listed indecomposable projectives (by idempotent position); complexes sent
    into derived-hom computations must carry this witness.
    """

    def __init__(self, algebra: Algebra, terms: dict, diffs: dict,
                 proj_types: dict | None = None, validate: bool = True):
        self.algebra = algebra
        self.terms = {n: m for n, m in terms.items() if m.dim > 0}
        degrees = sorted(self.terms)
        self.lo = degrees[0] if degrees else 0
        self.hi = degrees[-1] if degrees else -1
        self.diffs = {}
        for n, d in diffs.items():
            if d.nrows != self.term(n).dim or d.ncols != self.term(n + 1).dim:
                raise ValueError(f"differential at degree {n} has wrong shape")
            if not d.is_zero():
                self.diffs[n] = d
        self.proj_types = None
        if proj_types is not None:
            self.proj_types = {n: tuple(v) for n, v in proj_types.items() if self.term(n).dim > 0}
            for n in self.terms:
                types = self.proj_types.get(n)
                if types is None:
                    raise ValueError(f"missing projective witness in degree {n}")
                want = sum(projective_cache(algebra, v).dim for v in types)
                if want != self.terms[n].dim:
                    raise ValueError(f"projective witness in degree {n} does not match the term")
        self._cohom = {}
        if validate:
            self.validate()

    def is_empty(self) -> bool:
        return not self.terms

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def term(self, n: int) -> Module:
        m = self.terms.get(n)
        return m if m is not None else zero_module(self.algebra)

    def diff(self, n: int) -> Matrix:
        d = self.diffs.get(n)
        if d is not None:
            return d
        return Matrix.zero(self.algebra.field, self.term(n).dim, self.term(n + 1).dim)

    def is_projective_complex(self) -> bool:
        return self.proj_types is not None

    def validate(self):
        for n in self.degrees():
            d = self.diff(n)
            if d.is_zero():
                continue
            ModuleMap(self.term(n), self.term(n + 1), d)  # module-map check
            if not (d @ self.diff(n + 1)).is_zero():
                raise AssertionError(f"differential does not square to zero at degree {n}")

    def shift(self, k: int) -> "Complex":
        if k == 0:
            return self
        f = self.algebra.field
        terms = {n - k: m for n, m in self.terms.items()}
        sign = f.one if k % 2 == 0 else f.neg(f.one)
        diffs = {n - k: d.scale(sign) for n, d in self.diffs.items()}
        types = None
        if self.proj_types is not None:
            types = {n - k: v for n, v in self.proj_types.items()}
        return Complex(self.algebra, terms, diffs, types, validate=False)

    def cohomology(self, n: int) -> Module:
        """H^n with its induced action; carries .sq for reduce/lift."""
        if n in self._cohom:
            return self._cohom[n]
        A = self.algebra
        f = A.field
        M = self.term(n)
        sq = subquotient_from_maps(self.diff(n - 1), self.diff(n), f, M.dim)
        h = len(sq.reps)
        action = []
        for j in range(A.dim):
            rows = [sq.reduce(M.action[j].apply_row(rep)) for rep in sq.reps]
            action.append(Matrix(f, h, h, rows))
        H = Module(A, h, action, validate=False)
        H.sq = sq
        self._cohom[n] = H
        return H

    def h_dim(self, n: int) -> int:
        return self.cohomology(n).dim

    def h_table(self) -> dict:
        return {n: self.h_dim(n) for n in self.degrees() if self.h_dim(n) > 0}

    def total_dim(self) -> int:
        return sum(m.dim for m in self.terms.values())

    def euler_char(self) -> int:
        return sum((-1) ** (n % 2) * m.dim for n, m in self.terms.items())

    def __repr__(self):
        dims = {n: self.term(n).dim for n in self.degrees()}
        return f"Complex({dims})"


_proj_cache: dict = {}


def projective_cache(A: Algebra, v: int) -> Module:
    key = (id(A), v)
    if key not in _proj_cache:
        _proj_cache[key] = projective_module(A, v)
    return _proj_cache[key]


def zero_complex(A: Algebra) -> Complex:
    return Complex(A, {}, {}, proj_types={}, validate=False)


def module_complex(M: Module, degree: int = 0) -> Complex:
    return Complex(M.algebra, {degree: M}, {}, validate=False)


def projective_complex(A: Algebra, types: dict, diffs: dict | None = None) -> Complex:
    """Complex whose degree-n term is the direct sum of the listed projectives."""
    terms = {}
    for n, vs in types.items():
        if vs:
            terms[n] = direct_sum_modules(A, [projective_cache(A, v) for v in vs])
    return Complex(A, terms, diffs or {}, proj_types={n: tuple(vs) for n, vs in types.items()})


def direct_sum_complexes(xs: Sequence[Complex]) -> Complex:
    """Degreewise direct sum; remembers per-degree summand offsets."""
    if not xs:
        raise ValueError("empty direct sum")
    A = xs[0].algebra
    f = A.field
    lo = min(x.lo for x in xs if not x.is_empty()) if any(not x.is_empty() for x in xs) else 0
    hi = max(x.hi for x in xs if not x.is_empty()) if any(not x.is_empty() for x in xs) else -1
    terms, diffs = {}, {}
    offsets = {}
    for n in range(lo, hi + 1):
        mods = [x.term(n) for x in xs]
        offs, off = [], 0
        for m in mods:
            offs.append(off)
            off += m.dim
        offsets[n] = offs
        if off:
            terms[n] = direct_sum_modules(A, mods)
        diffs[n] = Matrix.block_diag(f, [x.diff(n) for x in xs])
    types = None
    if all(x.is_projective_complex() for x in xs):
        types = {}
        for n in range(lo, hi + 1):
            types[n] = tuple(v for x in xs for v in (x.proj_types.get(n, ()) if x.proj_types else ()))
    out = Complex(A, terms, diffs, types, validate=False)
    out.summands = list(xs)
    out.summand_offsets = offsets
    return out


def summand_projection_maps(X: Complex) -> list["ChainMap"]:
    """Idempotent chain maps projecting a direct_sum_complexes result onto each summand slice."""
    if not hasattr(X, "summands"):
        raise ValueError("complex does not carry direct-sum data")
    f = X.algebra.field
    maps = []
    for k, s in enumerate(X.summands):
        mats = {}
        for n in X.degrees():
            dim = X.term(n).dim
            if dim == 0:
                continue
            off = X.summand_offsets[n][k]
            sdim = s.term(n).dim
            rows = [[f.zero] * dim for _ in range(dim)]
            for i in range(sdim):
                rows[off + i][off + i] = f.one
            mats[n] = Matrix(f, dim, dim, rows)
        maps.append(ChainMap(X, X, mats, validate=False))
    return maps


class ChainMap:
    """Degreewise module maps commuting with the differentials."""

    def __init__(self, source: Complex, target: Complex, mats: dict, validate: bool = True):
        self.source = source
        self.target = target
        self.mats = {}
        for n, m in mats.items():
            if m.nrows != source.term(n).dim or m.ncols != target.term(n).dim:
                raise ValueError(f"chain map component at degree {n} has wrong shape")
            if not m.is_zero():
                self.mats[n] = m
        if validate:
            self.validate()

    def mat(self, n: int) -> Matrix:
        m = self.mats.get(n)
        if m is not None:
            return m
        return Matrix.zero(self.source.algebra.field,
                           self.source.term(n).dim, self.target.term(n).dim)

    def validate(self):
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for n in range(lo, hi + 1):
            m = self.mat(n)
            if not m.is_zero():
                ModuleMap(self.source.term(n), self.target.term(n), m)
            if self.source.diff(n) @ self.mat(n + 1) != m @ self.target.diff(n):
                raise AssertionError(f"chain map square fails at degree {n}")

    def compose(self, other: "ChainMap") -> "ChainMap":
        """Diagrammatic: self then other."""
        mats = {n: self.mat(n) @ other.mat(n)
                for n in self.source.degrees()}
        return ChainMap(self.source, other.target, mats, validate=False)

    def shift(self, k: int) -> "ChainMap":
        return ChainMap(self.source.shift(k), self.target.shift(k),
                        {n - k: m for n, m in self.mats.items()}, validate=False)

    def induced(self, n: int) -> Matrix:
        """Matrix of H^n(source) -> H^n(target) on cohomology class coordinates."""
        HS = self.source.cohomology(n)
        HT = self.target.cohomology(n)
        m = self.mat(n)
        rows = [HT.sq.reduce(m.apply_row(rep)) for rep in HS.sq.reps]
        return Matrix(self.source.algebra.field, HS.dim, HT.dim, rows)


def identity_chain_map(X: Complex) -> ChainMap:
    f = X.algebra.field
    return ChainMap(X, X, {n: Matrix.identity(f, X.term(n).dim) for n in X.degrees()},
                    validate=False)


class Triangle:
    """X -> Y -> cone -> X[1] with the canonical inclusion and projection."""

    def __init__(self, f: ChainMap, cone: Complex, incl: ChainMap, proj: ChainMap):
        self.f = f
        self.cone = cone
        self.incl = incl
        self.proj = proj


def cone(f: ChainMap) -> tuple[Complex, Triangle]:
    X, Y = f.source, f.target
    A = X.algebra
    fld = A.field
    terms, diffs = {}, {}
    lo = min(X.lo - 1, Y.lo)
    hi = max(X.hi - 1, Y.hi)
    for n in range(lo, hi + 1):
        xs, ys = X.term(n + 1), Y.term(n)
        if xs.dim + ys.dim:
            terms[n] = direct_sum_modules(A, [xs, ys])
        diffs[n] = block_matrix(
            fld,
            [[-X.diff(n + 1), f.mat(n + 1)], [None, Y.diff(n)]],
            [xs.dim, ys.dim],
            [X.term(n + 2).dim, Y.term(n + 1).dim],
        )
    types = None
    if X.is_projective_complex() and Y.is_projective_complex():
        types = {n: X.proj_types.get(n + 1, ()) + Y.proj_types.get(n, ())
                 for n in range(lo, hi + 1)}
    C = Complex(A, terms, diffs, types)
    incl = ChainMap(Y, C, {
        n: block_matrix(fld, [[None, Matrix.identity(fld, Y.term(n).dim)]],
                        [Y.term(n).dim], [X.term(n + 1).dim, Y.term(n).dim])
        for n in Y.degrees()
    })
    Xs = X.shift(1)
    proj = ChainMap(C, Xs, {
        n: block_matrix(fld, [[Matrix.identity(fld, X.term(n + 1).dim)], [None]],
                        [X.term(n + 1).dim, Y.term(n).dim], [X.term(n + 1).dim])
        for n in range(lo, hi + 1)
    })
    return C, Triangle(f, C, incl, proj)


def is_quasi_iso(f: ChainMap) -> bool:
    C, _ = cone(f)
    return all(C.h_dim(n) == 0 for n in C.degrees())


def is_acyclic(X: Complex) -> bool:
    return all(X.h_dim(n) == 0 for n in X.degrees())


# -- graded hom complex ----------------------------------------------------


class GradedHom:
    """The hom complex of two bounded complexes.

    Degree-n elements are families of module maps X^i -> Y^{n+i}; the basis in
    each degree is ordered lexicographically by (source degree, hom-space
    index), so coordinates are reproducible.  The differential matrix in
    degree n implements (df)_i = f_i d_Y - (-1)^n d_X f_{i+1}.
    """

    def __init__(self, X: Complex, Y: Complex):
        self.X = X
        self.Y = Y
        self.field = X.algebra.field
        if X.is_empty() or Y.is_empty():
            self.lo, self.hi = 0, -1
        else:
            self.lo = Y.lo - X.hi
            self.hi = Y.hi - X.lo
        self.basis = {}      # n -> list of (source degree, ModuleMap)
        self.offsets = {}    # n -> {source degree: start index}
        for n in range(self.lo, self.hi + 1):
            entries, offs = [], {}
            for i in X.degrees():
                if X.term(i).dim == 0 or Y.term(n + i).dim == 0:
                    continue
                offs[i] = len(entries)
                for h in hom_space(X.term(i), Y.term(n + i)):
                    entries.append((i, h))
            self.basis[n] = entries
            self.offsets[n] = offs
        self._diffs = {}
        self._cohom = {}

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, ()))

    def diff(self, n: int) -> Matrix:
        if n in self._diffs:
            return self._diffs[n]
        f = self.field
        src = self.basis.get(n, ())
        tgt = self.basis.get(n + 1, ())
        mat_rows = []
        sign = f.one if n % 2 == 0 else f.neg(f.one)
        for i, h in src:
            row = [f.zero] * len(tgt)
            # component at source degree i: h then d_Y
            comp = h.mat @ self.Y.diff(n + i)
            self._write(row, n + 1, i, comp)
            # component at source degree i-1: d_X then h, sign -(-1)^n
            comp2 = (self.X.diff(i - 1) @ h.mat).scale(f.neg(sign))
            self._write(row, n + 1, i - 1, comp2)
            mat_rows.append(row)
        d = Matrix(f, len(src), len(tgt), mat_rows)
        self._diffs[n] = d
        return d

    def _write(self, row, n: int, i: int, comp: Matrix):
        """Add the coordinates of a degree-n component map at source degree i."""
        if comp.nrows == 0 or comp.ncols == 0 or comp.is_zero():
            return
        offs = self.offsets.get(n, {})
        if i not in offs:
            raise AssertionError("component outside the hom basis support")
        group = [h for j, h in self.basis[n] if j == i]
        coords = hom_coordinates(group, comp)
        if coords is None:
            raise AssertionError("component map escaped its hom-space span")
        f = self.field
        start = offs[i]
        for k, c in enumerate(coords):
            row[start + k] = f.add(row[start + k], c)

    def subquotient(self, n: int):
        if n not in self._cohom:
            self._cohom[n] = subquotient_from_maps(self.diff(n - 1), self.diff(n),
                                                   self.field, self.dim(n))
        return self._cohom[n]

    def h_dim(self, n: int) -> int:
        return len(self.subquotient(n).reps)

    def component_maps(self, n: int, coords: Sequence) -> dict:
        """Expand coordinates in degree n into per-source-degree matrices."""
        f = self.field
        out = {}
        for c, (i, h) in zip(coords, self.basis.get(n, ())):
            if c == f.zero:
                continue
            if i not in out:
                out[i] = Matrix.zero(f, self.X.term(i).dim, self.Y.term(n + i).dim)
            out[i] = out[i] + h.mat.scale(c)
        return out

    def coords_of(self, n: int, comps: dict):
        """Coordinates of a family of component maps; None if outside the span."""
        f = self.field
        vec = [f.zero] * self.dim(n)
        for i, mat in comps.items():
            if mat.is_zero():
                continue
            offs = self.offsets.get(n, {})
            if i not in offs:
                return None
            group = [h for j, h in self.basis[n] if j == i]
            coords = hom_coordinates(group, mat)
            if coords is None:
                return None
            for k, c in enumerate(coords):
                vec[offs[i] + k] = c
        return tuple(vec)

    def chain_map_from_cocycle(self, coords: Sequence) -> ChainMap:
        """Degree-0 cocycle coordinates -> an honest chain map X -> Y."""
        comps = self.component_maps(0, coords)
        return ChainMap(self.X, self.Y, {i: m for i, m in comps.items()})


def hom_complex(X: Complex, Y: Complex) -> GradedHom:
    if X.algebra is not Y.algebra and X.algebra.dim != Y.algebra.dim:
        raise ValueError("complexes over different algebras")
    return GradedHom(X, Y)


def derived_hom_dim(X: Complex, Y: Complex, n: int, _cache: dict | None = None) -> int:
    """dim Hom_{D(A)}(X, Y[n]) for X a complex with projective witness."""
    if not X.is_projective_complex():
        raise ValueError("derived hom needs a complex of projectives; run proj_replacement")
    if _cache is not None:
        key = (id(X), id(Y))
        if key not in _cache:
            _cache[key] = hom_complex(X, Y)
        return _cache[key].h_dim(n)
    return hom_complex(X, Y).h_dim(n)


# -- projective replacement ------------------------------------------------


def proj_replacement(X: Complex, cap: int = 16) -> tuple[Complex, ChainMap]:
    """A quasi-isomorphism P -> X with P a complex of projectives.

    Builds P degreewise from the top: at each degree the classes of the
    augmentation cone are killed by adjoining projective pre-covers, chosen
    greedily one idempotent weight at a time.  Terminates when the cone is
    exhausted below the support of X; raises ResolutionCapError naming the
    degree reached if the resolution runs longer than cap extra degrees.
    """
    A = X.algebra
    f = A.field
    if X.is_projective_complex():
        return X, identity_chain_map(X)
    if X.is_empty():
        P = zero_complex(A)
        return P, ChainMap(P, X, {}, validate=False)
    p_terms: dict = {}
    p_diffs: dict = {}
    p_types: dict = {}
    eps: dict = {}
    floor = X.lo - cap
    n = X.hi
    while True:
        if n < floor:
            raise ResolutionCapError(
                f"projective replacement reached degree {n} (cap {cap} below the support)")
        Pn1 = p_terms.get(n + 1)
        pdim = Pn1.dim if Pn1 is not None else 0
        Xn = X.term(n)
        width = pdim + Xn.dim
        Pn2 = p_terms.get(n + 2)
        din = block_matrix(f, [[None, X.diff(n - 1)]],
                           [X.term(n - 1).dim], [pdim, Xn.dim])
        dout = block_matrix(
            f,
            [[-p_diffs.get(n + 1, Matrix.zero(f, pdim, Pn2.dim if Pn2 else 0)),
              eps.get(n + 1, Matrix.zero(f, pdim, X.term(n + 1).dim))],
             [None, X.diff(n)]],
            [pdim, Xn.dim],
            [Pn2.dim if Pn2 else 0, X.term(n + 1).dim],
        )
        sq = subquotient_from_maps(din, dout, f, width)
        if not sq.reps and n < X.lo:
            break
        if sq.reps:
            def act(j):
                za = Pn1.action[j] if Pn1 is not None else Matrix.zero(f, 0, 0)
                return Matrix.block_diag(f, [za, Xn.action[j]])

            killed = RowSpace(f, len(sq.reps))
            gens = []
            for rep in sq.reps:
                for pos, e in enumerate(A.idempotents):
                    w = act(e).apply_row(rep)
                    cls = sq.reduce(w)
                    if any(c != f.zero for c in cls) and killed.add(cls):
                        gens.append((pos, tuple(w)))
                        for j in range(A.dim):
                            killed.add(sq.reduce(act(j).apply_row(w)))
            summands = [projective_cache(A, pos) for pos, _ in gens]
            Pn = direct_sum_modules(A, summands)
            d_rows, e_rows = [], []
            for (pos, w), proj in zip(gens, summands):
                q, x = w[:pdim], w[pdim:]
                for r in proj.ambient_rows:
                    if Pn1 is not None:
                        img = Pn1.action_of(r).apply_row(q)
                        d_rows.append([f.neg(c) for c in img])
                    else:
                        d_rows.append([])
                    e_rows.append(Xn.action_of(r).apply_row(x))
            p_terms[n] = Pn
            p_types[n] = tuple(pos for pos, _ in gens)
            p_diffs[n] = Matrix(f, Pn.dim, pdim, d_rows)
            eps[n] = Matrix(f, Pn.dim, Xn.dim, e_rows)
        else:
            p_types[n] = ()
        n -= 1
    P = Complex(A, p_terms, p_diffs, p_types)
    return P, ChainMap(P, X, eps)


# -- total tensor with a complex of bimodules ------------------------------


class BimoduleComplex:
    """Bounded complex of left-E right-A bimodules with two-sided-linear differentials."""

    def __init__(self, left_algebra: Algebra, right_algebra: Algebra,
                 terms: dict, diffs: dict, validate: bool = True):
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        self.terms = {n: t for n, t in terms.items() if t.dim > 0}
        degrees = sorted(self.terms)
        self.lo = degrees[0] if degrees else 0
        self.hi = degrees[-1] if degrees else -1
        self.diffs = {n: d for n, d in diffs.items() if not d.is_zero()}
        if validate:
            self.validate()

    def term(self, n: int) -> Bimodule:
        t = self.terms.get(n)
        if t is not None:
            return t
        f = self.left_algebra.field
        z = [Matrix.zero(f, 0, 0)]
        return Bimodule(self.left_algebra, self.right_algebra, 0,
                        z * self.left_algebra.dim, z * self.right_algebra.dim, validate=False)

    def dim(self, n: int) -> int:
        return self.term(n).dim

    def diff(self, n: int) -> Matrix:
        d = self.diffs.get(n)
        if d is not None:
            return d
        return Matrix.zero(self.left_algebra.field, self.dim(n), self.dim(n + 1))

    def validate(self):
        E = self.left_algebra
        A = self.right_algebra
        for n in sorted(self.terms):
            d = self.diff(n)
            if d.is_zero():
                continue
            src, tgt = self.term(n), self.term(n + 1)
            for e in range(E.dim):
                if src.left_action[e] @ d != d @ tgt.left_action[e]:
                    raise AssertionError(f"bimodule differential not left-linear at degree {n}")
            for a in range(A.dim):
                if src.right_action[a] @ d != d @ tgt.right_action[a]:
                    raise AssertionError(f"bimodule differential not right-linear at degree {n}")
            if not (d @ self.diff(n + 1)).is_zero():
                raise AssertionError(f"bimodule differential does not square to zero at {n}")


def bimodule_complex_from_bimodule(T: Bimodule, degree: int = 0) -> BimoduleComplex:
    return BimoduleComplex(T.left_algebra, T.right_algebra, {degree: T}, {}, validate=False)


def tensor_complex(M: Complex, U: BimoduleComplex) -> Complex:
    """Total tensor over E of a complex of right E-modules with a bimodule complex.

    Degree n is the direct sum over i of M^i tensor_E U^{n-i}; the differential
    is d(m (x) u) = dm (x) u + (-1)^i m (x) du, pushed through the balanced-
    tensor quotients.  The result is a complex of right modules over U's right
    algebra.
    """
    E = U.left_algebra
    A = U.right_algebra
    if M.algebra.dim != E.dim:
        raise ValueError("tensor_complex: M must be over the bimodule complex's left algebra")
    f = E.field
    if M.is_empty() or not U.terms:
        return Complex(A, {}, {}, validate=False)
    lo, hi = M.lo + U.lo, M.hi + U.hi

    pieces = {}   # (n, i) -> (module, quotient)
    layout = {}   # n -> list of i
    for n in range(lo, hi + 1):
        layout[n] = []
        for i in M.degrees():
            if M.term(i).dim == 0 or U.dim(n - i) == 0:
                continue
            pieces[(n, i)] = tensor_over(M.term(i), U.term(n - i))
            layout[n].append(i)

    terms = {}
    for n, idxs in layout.items():
        mods = [pieces[(n, i)][0] for i in idxs]
        if mods and sum(m.dim for m in mods):
            terms[n] = direct_sum_modules(A, mods) if len(mods) > 1 else mods[0]

    diffs = {}
    for n in range(lo, hi + 1):
        src_idxs = layout.get(n, [])
        tgt_idxs = layout.get(n + 1, [])
        if not src_idxs or not tgt_idxs:
            continue
        row_dims = [pieces[(n, i)][0].dim for i in src_idxs]
        col_dims = [pieces[(n + 1, i)][0].dim for i in tgt_idxs]
        blocks = [[None] * len(tgt_idxs) for _ in src_idxs]
        for bi, i in enumerate(src_idxs):
            src_mod, src_q = pieces[(n, i)]
            tdim = U.dim(n - i)
            sign = f.one if i % 2 == 0 else f.neg(f.one)
            dm = M.diff(i)
            du = U.diff(n - i)
            for bj, j in enumerate(tgt_idxs):
                if j == i + 1 and not dm.is_zero():
                    tgt_mod, tgt_q = pieces[(n + 1, i + 1)]
                    t2 = U.dim(n - i)
                    rows = []
                    for pos in src_q.free_positions:
                        a, b = divmod(pos, tdim)
                        vec = [f.zero] * (M.term(i + 1).dim * t2)
                        for a2 in range(M.term(i + 1).dim):
                            c = dm.rows[a][a2]
                            if c != f.zero:
                                vec[a2 * t2 + b] = c
                        rows.append(tgt_q.project(vec))
                    blocks[bi][bj] = Matrix(f, src_mod.dim, tgt_mod.dim, rows)
                elif j == i and not du.is_zero():
                    tgt_mod, tgt_q = pieces[(n + 1, i)]
                    t2 = U.dim(n + 1 - i)
                    rows = []
                    for pos in src_q.free_positions:
                        a, b = divmod(pos, tdim)
                        vec = [f.zero] * (M.term(i).dim * t2)
                        for b2 in range(t2):
                            c = du.rows[b][b2]
                            if c != f.zero:
                                vec[a * t2 + b2] = f.mul(sign, c)
                        rows.append(tgt_q.project(vec))
                    blocks[bi][bj] = Matrix(f, src_mod.dim, tgt_mod.dim, rows)
        diffs[n] = block_matrix(f, blocks, row_dims, col_dims)
    return Complex(A, terms, diffs)
