"""Finite-dimensional path algebras with relations, and their right modules.

Conventions (used consistently by every downstream module):

* Path composition is diagrammatic: for arrows a: i -> j and b: j -> k the
  product a*b is the path i -> k.  Trivial paths e_i are the complete
  orthogonal idempotent set, and e_i * p = p exactly when p starts at i.
* Module elements are row vectors; the right action of an algebra element is a
  matrix acting on the right, so action(a*b) = action(a) @ action(b).
* A right module map f is a matrix F with f(x) = x @ F, and A-linearity reads
  action_M(a) @ F = F @ action_N(a).

Construction of the algebra from a presentation enumerates paths and quotients
by the relation ideal.  For acyclic quivers this is exact for arbitrary
relations; for quivers with directed cycles only length-homogeneous relations
are accepted (the ideal is then length-graded and saturation is sound);
the mixed case is rejected rather than silently truncated.
"""

from __future__ import annotations

from typing import Sequence

from .linalg import Matrix, QuotientSpace, RowSpace


class AdmissibilityError(ValueError):
    """Malformed presentation: bad relation paths or unsupported relation shape."""


class DimensionCapError(RuntimeError):
    """Path enumeration or algebra dimension exceeded the configured cap."""


class Quiver:
    """A finite quiver: vertex labels plus named arrows."""

    def __init__(self, vertices: Sequence[str], arrows: Sequence[tuple[str, str, str]]):
        self.vertices = [str(v) for v in vertices]
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.arrows = []
        names = set()
        for name, src, tgt in arrows:
            if name in names or name in self.vindex:
                raise ValueError(f"duplicate or clashing arrow name {name!r}")
            if src not in self.vindex or tgt not in self.vindex:
                raise ValueError(f"arrow {name!r} references unknown vertex")
            names.add(name)
            self.arrows.append((str(name), self.vindex[src], self.vindex[tgt]))
        self.aindex = {a[0]: i for i, a in enumerate(self.arrows)}

    def has_cycle(self) -> bool:
        out = {i: [] for i in range(len(self.vertices))}
        for _, s, t in self.arrows:
            out[s].append(t)
        state = {}  # 0 visiting, 1 done

        def visit(v):
            state[v] = 0
            for w in out[v]:
                if state.get(w) == 0:
                    return True
                if w not in state and visit(w):
                    return True
            state[v] = 1
            return False

        return any(visit(v) for v in range(len(self.vertices)) if v not in state)


# paths are pairs (source_vertex_index, tuple_of_arrow_indices)


def _path_target(quiver: Quiver, path) -> int:
    src, arrows = path
    return quiver.arrows[arrows[-1]][2] if arrows else src


def _path_label(quiver: Quiver, path) -> str:
    src, arrows = path
    if not arrows:
        return f"e_{quiver.vertices[src]}"
    return "*".join(quiver.arrows[i][0] for i in arrows)


def _parse_relations(quiver: Quiver, relations):
    """Relations: each a list of (coeff, [arrow names]) terms.

    Every term must be a composable path of length >= 2 and all terms of one
    relation must be parallel (same source and target).
    """
    parsed = []
    for rel in relations:
        terms = []
        ends = None
        for coeff, names in rel:
            if len(names) < 2:
                raise AdmissibilityError(
                    f"relation term {names} has length {len(names)}; relations must lie "
                    "in the square of the arrow ideal"
                )
            try:
                arrws = tuple(quiver.aindex[n] for n in names)
            except KeyError as e:
                raise AdmissibilityError(f"unknown arrow {e.args[0]!r} in relation") from None
            for x, y in zip(arrws, arrws[1:]):
                if quiver.arrows[x][2] != quiver.arrows[y][1]:
                    raise AdmissibilityError(f"relation path {names} is not composable")
            src = quiver.arrows[arrws[0]][1]
            tgt = quiver.arrows[arrws[-1]][2]
            if ends is None:
                ends = (src, tgt)
            elif ends != (src, tgt):
                raise AdmissibilityError("relation mixes non-parallel paths")
            terms.append((coeff, arrws))
        if terms:
            parsed.append(terms)
    return parsed


class Algebra:
    """Finite-dimensional algebra with a distinguished basis.

    mult maps a basis index pair (i, j) to a sparse product, a tuple of
    (index, coefficient) pairs.  idempotents are indices of basis elements
    forming a complete orthogonal idempotent set (for a path algebra, the
    trivial paths).  generators must multiplicatively generate the algebra and
    contain the idempotents; module-map linearity is checked against them.
    """

    def __init__(self, field, labels: Sequence[str], mult: dict, unit: Sequence,
                 idempotents: Sequence[int], generators: Sequence[int] | None = None,
                 path_info=None, validate: bool = True):
        self.field = field
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.mult = mult
        self.unit = tuple(unit)
        self.idempotents = tuple(idempotents)
        self.generators = tuple(generators) if generators is not None else tuple(range(self.dim))
        self.path_info = path_info  # list of (source, target, arrows) for path algebras
        self._rmul = {}
        self._lmul = {}
        if validate:
            self.validate()

    # sparse product of two basis elements
    def basis_product(self, i: int, j: int):
        return self.mult.get((i, j), ())

    def multiply(self, u: Sequence, v: Sequence) -> tuple:
        f = self.field
        out = [f.zero] * self.dim
        for i, a in enumerate(u):
            if a == f.zero:
                continue
            for j, b in enumerate(v):
                if b == f.zero:
                    continue
                c = f.mul(a, b)
                for k, s in self.basis_product(i, j):
                    out[k] = f.add(out[k], f.mul(c, s))
        return tuple(out)

    def right_mult_matrix(self, j: int) -> Matrix:
        """Matrix of x |-> x * b_j in row convention."""
        if j not in self._rmul:
            f = self.field
            rows = []
            for i in range(self.dim):
                row = [f.zero] * self.dim
                for k, s in self.basis_product(i, j):
                    row[k] = f.add(row[k], s)
                rows.append(row)
            self._rmul[j] = Matrix(f, self.dim, self.dim, rows)
        return self._rmul[j]

    def left_mult_matrix(self, j: int) -> Matrix:
        """Matrix of x |-> b_j * x in row convention."""
        if j not in self._lmul:
            f = self.field
            rows = []
            for i in range(self.dim):
                row = [f.zero] * self.dim
                for k, s in self.basis_product(j, i):
                    row[k] = f.add(row[k], s)
                rows.append(row)
            self._lmul[j] = Matrix(f, self.dim, self.dim, rows)
        return self._lmul[j]

    def validate(self):
        f = self.field
        # unit is a two-sided identity
        for i in range(self.dim):
            ei = tuple(f.one if k == i else f.zero for k in range(self.dim))
            if self.multiply(self.unit, ei) != ei or self.multiply(ei, self.unit) != ei:
                raise AssertionError(f"unit fails on basis element {self.labels[i]}")
        # idempotents: complete orthogonal set of basis elements
        acc = [f.zero] * self.dim
        for e in self.idempotents:
            ee = self.basis_product(e, e)
            if dict(ee) != {e: f.one}:
                raise AssertionError(f"basis element {self.labels[e]} is not idempotent")
            acc[e] = f.add(acc[e], f.one)
        for e in self.idempotents:
            for e2 in self.idempotents:
                if e != e2 and self.basis_product(e, e2):
                    raise AssertionError("idempotents not orthogonal")
        if tuple(acc) != self.unit:
            raise AssertionError("idempotents do not sum to the unit")
        # associativity on basis triples (strided sample above desk scale)
        step = 1 if self.dim <= 24 else max(1, self.dim // 16)
        idx = range(0, self.dim, step)
        for i in idx:
            for j in idx:
                for k in idx:
                    left = self._sparse_mult(self.basis_product(i, j), k, right=True)
                    right = self._sparse_mult(self.basis_product(j, k), i, right=False)
                    if left != right:
                        raise AssertionError(
                            f"associativity fails on ({self.labels[i]}, {self.labels[j]}, {self.labels[k]})"
                        )

    def _sparse_mult(self, sparse, other: int, right: bool):
        f = self.field
        out = {}
        for idx, c in sparse:
            prod = self.basis_product(idx, other) if right else self.basis_product(other, idx)
            for k, s in prod:
                out[k] = f.add(out.get(k, f.zero), f.mul(c, s))
        return {k: v for k, v in sorted(out.items()) if v != f.zero}

    def basis_vector(self, i: int) -> tuple:
        f = self.field
        return tuple(f.one if k == i else f.zero for k in range(self.dim))

    def __repr__(self):
        return f"Algebra(dim={self.dim}, basis={list(self.labels)!r})"


def path_algebra(quiver: Quiver, field, relations=(), dimension_cap: int = 512) -> Algebra:
    """Quotient of the path algebra of `quiver` by the given relations.

    Basis: the surviving paths, ordered by (length, generation order).
    Raises DimensionCapError if enumeration or the quotient dimension exceeds
    the cap, AdmissibilityError for malformed or unsupported relations.
    """
    rels = _parse_relations(quiver, relations)
    cyclic = quiver.has_cycle()
    if cyclic:
        for terms in rels:
            lengths = {len(arrws) for _, arrws in terms}
            if len(lengths) > 1:
                raise AdmissibilityError(
                    "length-inhomogeneous relations on a quiver with directed cycles "
                    "are not supported (length-truncated saturation would be unsound)"
                )
    enumeration_cap = max(dimension_cap * 64, 32768)

    paths_by_len: list[list] = [[(v, ()) for v in range(len(quiver.vertices))]]
    survivors: list[tuple] = []          # (path, label)
    reductions: dict = {}                # path -> tuple of (basis index, coeff)
    total_paths = len(paths_by_len[0])

    def extend(paths):
        out = []
        for path in paths:
            t = _path_target(quiver, path)
            for ai, (_, s, _) in enumerate(quiver.arrows):
                if s == t:
                    out.append((path[0], path[1] + (ai,)))
        return out

    if not cyclic:
        # enumerate everything, then one global quotient
        while paths_by_len[-1]:
            nxt = extend(paths_by_len[-1])
            total_paths += len(nxt)
            if total_paths > enumeration_cap:
                raise DimensionCapError(f"path enumeration exceeded {enumeration_cap}")
            paths_by_len.append(nxt)
        paths_by_len.pop()
        all_paths = [p for group in paths_by_len for p in group]
        index = {p: i for i, p in enumerate(all_paths)}
        width = len(all_paths)
        rows = []
        for terms in rels:
            src = quiver.arrows[terms[0][1][0]][1]
            tgt = quiver.arrows[terms[0][1][-1]][2]
            for p in all_paths:
                if _path_target(quiver, p) != src:
                    continue
                for q in all_paths:
                    if q[0] != tgt:
                        continue
                    row = [field.zero] * width
                    for coeff, arrws in terms:
                        comb = (p[0], p[1] + arrws + q[1])
                        row[index[comb]] = field.add(row[index[comb]], field.coerce(coeff))
                    rows.append(row)
        quot = QuotientSpace(field, width, rows)
        basis_paths = [all_paths[j] for j in quot.free_positions]
        bindex = {p: i for i, p in enumerate(basis_paths)}
        zero = field.zero

        def reduce_path(p):
            if p in reductions:
                return reductions[p]
            coords = quot.project(tuple(field.one if i == index[p] else zero for i in range(width)))
            sparse = tuple((k, c) for k, c in enumerate(coords) if c != zero)
            reductions[p] = sparse
            return sparse

    else:
        # length-graded quotient, one block per length, until saturation
        blocks: list[QuotientSpace] = []
        survivors_by_len: list[list] = []
        n = 0
        while True:
            paths_n = paths_by_len[n]
            width = len(paths_n)
            index_n = {p: i for i, p in enumerate(paths_n)}
            rows = []
            for terms in rels:
                m = len(terms[0][1])
                if m > n:
                    continue
                src = quiver.arrows[terms[0][1][0]][1]
                tgt = quiver.arrows[terms[0][1][-1]][2]
                for i in range(n - m + 1):
                    for p in paths_by_len[i]:
                        if _path_target(quiver, p) != src:
                            continue
                        for q in paths_by_len[n - m - i]:
                            if q[0] != tgt:
                                continue
                            row = [field.zero] * width
                            ok = True
                            for coeff, arrws in terms:
                                comb = (p[0], p[1] + arrws + q[1])
                                if comb not in index_n:
                                    ok = False
                                    break
                                row[index_n[comb]] = field.add(row[index_n[comb]], field.coerce(coeff))
                            if ok:
                                rows.append(row)
            quot_n = QuotientSpace(field, width, rows)
            blocks.append(quot_n)
            surv_n = [paths_n[j] for j in quot_n.free_positions]
            survivors_by_len.append(surv_n)
            if n >= 1 and not surv_n:
                break
            nxt = extend(paths_n)
            total_paths += len(nxt)
            if total_paths > enumeration_cap:
                raise DimensionCapError(
                    f"path enumeration exceeded {enumeration_cap}; presentation "
                    "is likely not admissible"
                )
            if sum(len(s) for s in survivors_by_len) > dimension_cap:
                raise DimensionCapError(f"algebra dimension exceeded cap {dimension_cap}")
            paths_by_len.append(nxt)
            n += 1
        L_stop = n
        basis_paths = [p for group in survivors_by_len for p in group]
        offsets = []
        off = 0
        for group in survivors_by_len:
            offsets.append(off)
            off += len(group)
        bindex = {p: i for i, p in enumerate(basis_paths)}
        zero = field.zero

        def reduce_path(p):
            if p in reductions:
                return reductions[p]
            ln = len(p[1])
            if ln >= L_stop:
                reductions[p] = ()
                return ()
            block = blocks[ln]
            idx = {q: i for i, q in enumerate(paths_by_len[ln])}[p]
            coords = block.project(tuple(field.one if i == idx else zero for i in range(len(paths_by_len[ln]))))
            sparse = tuple((offsets[ln] + k, c) for k, c in enumerate(coords) if c != zero)
            reductions[p] = sparse
            return sparse

    if len(basis_paths) > dimension_cap:
        raise DimensionCapError(f"algebra dimension {len(basis_paths)} exceeds cap {dimension_cap}")

    # sparse multiplication table on the surviving-path basis
    mult = {}
    for i, p in enumerate(basis_paths):
        pt = _path_target(quiver, p)
        for j, q in enumerate(basis_paths):
            if pt != q[0]:
                continue
            prod = reduce_path((p[0], p[1] + q[1]))
            if prod:
                mult[(i, j)] = prod

    labels = [_path_label(quiver, p) for p in basis_paths]
    trivial = [bindex[(v, ())] for v in range(len(quiver.vertices))]
    arrows = [bindex[p] for p in basis_paths if len(p[1]) == 1]
    unit = [field.zero] * len(basis_paths)
    for t in trivial:
        unit[t] = field.one
    path_info = [(p[0], _path_target(quiver, p), p[1]) for p in basis_paths]
    alg = Algebra(field, labels, mult, unit, trivial, generators=trivial + arrows,
                  path_info=path_info)
    alg.quiver = quiver
    return alg


# -- right modules ---------------------------------------------------------


class Module:
    """A right module: row vectors with one action matrix per algebra basis element."""

    def __init__(self, algebra: Algebra, dim: int, action: Sequence[Matrix], validate: bool = True):
        self.algebra = algebra
        self.dim = dim
        self.action = tuple(action)
        if len(self.action) != algebra.dim:
            raise ValueError("need one action matrix per algebra basis element")
        for m in self.action:
            if m.nrows != dim or m.ncols != dim:
                raise ValueError("action matrix has wrong shape")
        if validate:
            self.validate()

    def action_of(self, vec: Sequence) -> Matrix:
        f = self.algebra.field
        out = Matrix.zero(f, self.dim, self.dim)
        for i, c in enumerate(vec):
            if c != f.zero:
                out = out + self.action[i].scale(c)
        return out

    def validate(self):
        A = self.algebra
        ident = Matrix.identity(A.field, self.dim)
        if self.action_of(A.unit) != ident:
            raise AssertionError("unit does not act as identity")
        step = 1 if A.dim <= 32 else max(1, A.dim // 16)
        idx = range(0, A.dim, step)
        f = A.field
        for i in idx:
            for j in idx:
                lhs = self.action[i] @ self.action[j]
                rhs = Matrix.zero(f, self.dim, self.dim)
                for k, c in A.basis_product(i, j):
                    rhs = rhs + self.action[k].scale(c)
                if lhs != rhs:
                    raise AssertionError(
                        f"action incompatible with multiplication on ({A.labels[i]}, {A.labels[j]})"
                    )

    def weight_rows(self, idem_index: int) -> list[tuple]:
        """Echelon basis rows of M * e for the given idempotent basis index."""
        space = RowSpace(self.algebra.field, self.dim)
        for row in self.action[idem_index].rows:
            space.add(row)
        return [tuple(r) for r in space.rows]

    def dimension_vector(self) -> tuple[int, ...]:
        return tuple(len(self.weight_rows(e)) for e in self.algebra.idempotents)

    def __repr__(self):
        return f"Module(dim={self.dim} over {self.algebra!r})"


class ModuleMap:
    """Right-module map, f(x) = x @ F."""

    def __init__(self, source: Module, target: Module, mat: Matrix, validate: bool = True):
        if mat.nrows != source.dim or mat.ncols != target.dim:
            raise ValueError("module map matrix has wrong shape")
        self.source = source
        self.target = target
        self.mat = mat
        if validate:
            for g in source.algebra.generators:
                if source.action[g] @ mat != mat @ target.action[g]:
                    raise AssertionError(
                        f"matrix does not commute with the action of {source.algebra.labels[g]}"
                    )

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """Diagrammatic: self then other."""
        if other.source is not self.target and other.source.dim != self.target.dim:
            raise ValueError("composition mismatch")
        return ModuleMap(self.source, other.target, self.mat @ other.mat, validate=False)

    def __repr__(self):
        return f"ModuleMap({self.source.dim} -> {self.target.dim})"


def zero_module(algebra: Algebra) -> Module:
    return Module(algebra, 0, [Matrix.zero(algebra.field, 0, 0)] * algebra.dim, validate=False)


def hom_space(M: Module, N: Module) -> list[ModuleMap]:
    """k-basis of Hom_A(M, N), deterministic order.

    Solves the commutation system action_M(g) @ F = F @ action_N(g) over the
    algebra generators; a map commuting with a multiplicative generating set
    commutes with everything.
    """
    A = M.algebra
    if N.algebra is not A and N.algebra.dim != A.dim:
        raise ValueError("modules over different algebras")
    f = A.field
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    rows = []
    for g in A.generators:
        RM, RN = M.action[g], N.action[g]
        # constraint entry (i,j): sum_k RM[i][k] F[k][j] - sum_l F[i][l] RN[l][j] = 0
        for i in range(m):
            for j in range(n):
                row = [f.zero] * (m * n)
                for k in range(m):
                    c = RM.rows[i][k]
                    if c != f.zero:
                        row[k * n + j] = f.add(row[k * n + j], c)
                for l in range(n):
                    c = RN.rows[l][j]
                    if c != f.zero:
                        row[i * n + l] = f.sub(row[i * n + l], c)
                rows.append(row)
    C = Matrix(f, len(rows), m * n, rows)
    ker = C.kernel_basis()
    maps = []
    for ci in range(ker.ncols):
        flat = [ker.rows[r][ci] for r in range(m * n)]
        mat = Matrix(f, m, n, [flat[i * n:(i + 1) * n] for i in range(m)])
        maps.append(ModuleMap(M, N, mat, validate=False))
    return maps


def hom_coordinates(basis: list[ModuleMap], mat: Matrix) -> tuple | None:
    """Coordinates of a map in a hom_space basis (None if outside the span)."""
    if not basis:
        return () if mat.is_zero() else None
    f = mat.field
    flat_rows = [tuple(x for r in b.mat.rows for x in r) for b in basis]
    span = Matrix(f, len(flat_rows), mat.nrows * mat.ncols, flat_rows)
    return span.solve_left_rows(tuple(x for r in mat.rows for x in r))


def projective_module(A: Algebra, idem_pos: int) -> Module:
    """e_i A for the idem_pos-th idempotent, with its generator recorded.

    Works for any algebra with a complete orthogonal idempotent basis set, not
    just path algebras.  Attributes: ambient_rows (basis inside A), gen_coords
    (coordinates of e_i itself), vertex (= idem_pos).
    """
    e = A.idempotents[idem_pos]
    f = A.field
    space = RowSpace(f, A.dim)
    for row in A.left_mult_matrix(e).rows:
        space.add(row)
    rows = [tuple(r) for r in space.rows]
    span = Matrix(f, len(rows), A.dim, rows) if rows else None
    action = []
    for j in range(A.dim):
        Rj = A.right_mult_matrix(j)
        img = [Rj.apply_row(r) for r in rows]
        mats = []
        for v in img:
            sol = span.solve_left_rows(v) if span is not None else ()
            if sol is None:
                raise AssertionError("projective weight space not closed under the action")
            mats.append(sol)
        action.append(Matrix(f, len(rows), len(rows), mats))
    P = Module(A, len(rows), action, validate=False)
    P.ambient_rows = rows
    gen = span.solve_left_rows(A.basis_vector(e)) if span is not None else ()
    if gen is None:
        raise AssertionError("idempotent not inside its own projective")
    P.gen_coords = tuple(gen)
    P.vertex = idem_pos
    P.validate()
    return P


def simple_module(A: Algebra, idem_pos: int) -> Module:
    """Vertex simple of a path algebra: one-dimensional, only e_v acts as 1."""
    if A.path_info is None:
        raise ValueError("simple_module needs a path algebra presentation")
    e = A.idempotents[idem_pos]
    f = A.field
    action = []
    for j in range(A.dim):
        val = f.one if j == e else f.zero
        action.append(Matrix(f, 1, 1, [(val,)]))
    return Module(A, 1, action)


def direct_sum_modules(A: Algebra, mods: Sequence[Module]) -> Module:
    f = A.field
    action = []
    for j in range(A.dim):
        action.append(Matrix.block_diag(f, [m.action[j] for m in mods]))
    total = sum(m.dim for m in mods)
    M = Module(A, total, action, validate=False)
    offs = []
    off = 0
    for m in mods:
        offs.append((off, m.dim))
        off += m.dim
    M.summand_offsets = offs
    return M


def regular_module(A: Algebra) -> Module:
    return Module(A, A.dim, [A.right_mult_matrix(j) for j in range(A.dim)], validate=False)


def opposite_algebra(A: Algebra) -> Algebra:
    mult = {}
    for (i, j), v in A.mult.items():
        mult[(j, i)] = v
    pinfo = None
    if A.path_info is not None:
        pinfo = [(t, s, tuple(reversed(arr))) for (s, t, arr) in A.path_info]
    return Algebra(A.field, A.labels, mult, A.unit, A.idempotents,
                   generators=A.generators, path_info=pinfo)


# -- endomorphism algebras and bimodules -----------------------------------


class Bimodule:
    """Left-E right-A bimodule on row vectors.

    Left action matrices follow the row convention: (e . t) = t @ L_e, so the
    left-module law reads L_{e e'} = L_{e'} @ L_e when E multiplies in function
    order (e e' means "apply e' first").
    """

    def __init__(self, left_algebra: Algebra, right_algebra: Algebra, dim: int,
                 left_action: Sequence[Matrix], right_action: Sequence[Matrix],
                 validate: bool = True):
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        self.dim = dim
        self.left_action = tuple(left_action)
        self.right_action = tuple(right_action)
        if validate:
            self.validate()

    def validate(self):
        E, A = self.left_algebra, self.right_algebra
        f = E.field
        ident = Matrix.identity(f, self.dim)
        lu = Matrix.zero(f, self.dim, self.dim)
        for i, c in enumerate(E.unit):
            if c != f.zero:
                lu = lu + self.left_action[i].scale(c)
        if lu != ident:
            raise AssertionError("left unit fails")
        Module(A, self.dim, self.right_action)  # validates the right structure
        for i in range(E.dim):
            for j in range(E.dim):
                lhs = self.left_action[j] @ self.left_action[i]
                rhs = Matrix.zero(f, self.dim, self.dim)
                for k, c in E.basis_product(i, j):
                    rhs = rhs + self.left_action[k].scale(c)
                if lhs != rhs:
                    raise AssertionError("left action incompatible with multiplication")
        for e in range(E.dim):
            for a in range(A.dim):
                if self.left_action[e] @ self.right_action[a] != self.right_action[a] @ self.left_action[e]:
                    raise AssertionError("left and right actions do not commute")


class EndData:
    """End_A(T) for T presented as a direct sum of summands.

    algebra: End(T) with multiplication in function order (x*y = "apply y,
    then x"), basis adapted so each diagonal block starts with the identity of
    that summand; those identities are the idempotent set.
    big_mats[i]: the i-th basis endomorphism of T as a matrix on T's rows.
    bimodule: T as a left-End(T) right-A bimodule.
    """

    def __init__(self, A: Algebra, summands: Sequence[Module]):
        f = A.field
        self.summands = list(summands)
        self.T = direct_sum_modules(A, self.summands)
        offs = self.T.summand_offsets
        n = self.T.dim

        def embed(small: Matrix, i: int, j: int) -> Matrix:
            big = [[f.zero] * n for _ in range(n)]
            oi, di = offs[i]
            oj, dj = offs[j]
            for r in range(di):
                for c in range(dj):
                    big[oi + r][oj + c] = small.rows[r][c]
            return Matrix(f, n, n, big)

        labels, big_mats, blocks = [], [], []
        idem_positions = []
        for i in range(len(self.summands)):
            for j in range(len(self.summands)):
                homs = hom_space(self.summands[i], self.summands[j])
                if i == j:
                    ident = Matrix.identity(f, self.summands[i].dim)
                    adapted = [ident]
                    space = RowSpace(f, self.summands[i].dim ** 2 or 1)
                    space.add([x for r in ident.rows for x in r] or [f.one])
                    for h in homs:
                        flat = [x for r in h.mat.rows for x in r] or [f.one]
                        if space.add(flat):
                            adapted.append(h.mat)
                    idem_positions.append(len(labels))
                    for k, mat in enumerate(adapted):
                        labels.append(f"p{i}" if k == 0 else f"f{i}{j}_{k}")
                        big_mats.append(embed(mat, i, j))
                        blocks.append((i, j))
                else:
                    for k, h in enumerate(homs):
                        labels.append(f"f{i}{j}_{k}")
                        big_mats.append(embed(h.mat, i, j))
                        blocks.append((i, j))
        dim = len(labels)
        # coordinates: block-restricted flattening, solved against block bases
        by_block: dict = {}
        for idx, b in enumerate(blocks):
            by_block.setdefault(b, []).append(idx)
        span_of_block = {}
        for b, idxs in by_block.items():
            rows = [tuple(x for r in big_mats[i].rows for x in r) for i in idxs]
            span_of_block[b] = (idxs, Matrix(f, len(rows), n * n, rows))

        mult = {}
        for x in range(dim):
            bx = blocks[x]
            for y in range(dim):
                by = blocks[y]
                # function order: x*y applies y first; nonzero iff y's target == x's source
                if by[1] != bx[0]:
                    continue
                comp = big_mats[y] @ big_mats[x]
                key = (by[0], bx[1])
                idxs, span = span_of_block[key]
                sol = span.solve_left_rows(tuple(v for r in comp.rows for v in r))
                if sol is None:
                    raise AssertionError("End(T) not closed under composition")
                sparse = tuple((idxs[k], c) for k, c in enumerate(sol) if c != f.zero)
                if sparse:
                    mult[(x, y)] = sparse
        unit = [f.zero] * dim
        for p in idem_positions:
            unit[p] = f.one
        self.algebra = Algebra(f, labels, mult, unit, idem_positions)
        self.big_mats = big_mats
        self.blocks = blocks
        self.bimodule = Bimodule(self.algebra, A, n, big_mats, self.T.action)


def endomorphism_algebra(A: Algebra, summands: Sequence[Module]) -> EndData:
    return EndData(A, summands)


def tensor_over(M: Module, T: Bimodule):
    """M tensor_E T for M a right E-module: a right A-module plus projection data.

    Returns (module over A, quotient) where quotient maps pre-quotient
    coordinates (i of M, j of T, flattened i*dimT + j) to quotient coordinates.
    """
    E = T.left_algebra
    A = T.right_algebra
    if M.algebra.dim != E.dim:
        raise ValueError("tensor_over: M must be a module over the bimodule's left algebra")
    f = E.field
    m, t = M.dim, T.dim
    width = m * t
    rows = []
    for e in range(E.dim):
        RM = M.action[e]
        LT = T.left_action[e]
        for i in range(m):
            for j in range(t):
                row = [f.zero] * width
                # (m_i . e) (x) t_j  -  m_i (x) (e . t_j)
                for i2 in range(m):
                    c = RM.rows[i][i2]
                    if c != f.zero:
                        row[i2 * t + j] = f.add(row[i2 * t + j], c)
                for j2 in range(t):
                    c = LT.rows[j][j2]
                    if c != f.zero:
                        row[i * t + j2] = f.sub(row[i * t + j2], c)
                rows.append(row)
    quot = QuotientSpace(f, width, rows)
    action = []
    for a in range(A.dim):
        RT = T.right_action[a]
        mats = []
        for pos in quot.free_positions:
            i, j = divmod(pos, t)
            vec = [f.zero] * width
            for j2 in range(t):
                c = RT.rows[j][j2]
                if c != f.zero:
                    vec[i * t + j2] = c
            mats.append(quot.project(vec))
        action.append(Matrix(f, quot.dim, quot.dim, mats))
    module = Module(A, quot.dim, action, validate=False)
    return module, quot
