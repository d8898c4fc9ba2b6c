"""Presilting tests, add-U coresolutions of the regular complex, goodification.

A two-sided bounded complex U of projectives is presilting when it admits no
self-extensions in positive shifts.  The coresolution routine approximates the
regular complex A step by step from the left using summands of U and records
the cone triangles; the number of steps minus one is the coresolution degree n.
Goodification replaces U by the direct sum of the approximation targets, which
by construction carries enough copies of each summand to coresolve A.

Approximation targets are kept minimal.  Write H for the space of homotopy
classes of chain maps into U and E for the degree-zero cohomology algebra of
the dg-endomorphism algebra of U.  Generators of H over E are chosen greedily
inside the idempotent pieces e_s H, skipping any candidate already covered by
the E-closure of the previous choices modulo rad(E) H; each chosen generator
contributes one copy of the summand X_s it lands in.  Minimality is what
makes the step count finite: approximating with one copy of U per k-basis
element of H instead adds split summands to every cone and the process never
terminates.  The granularity is the direct-sum decomposition carried by U, so
inputs should be built with direct_sum_complexes from their indecomposable
pieces; a coarser decomposition can overshoot the multiplicities, and the
routine then reports an inconclusive result through its step cap rather than
a wrong one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Matrix, QuotientSpace, RowSpace
from .complexes import (ChainMap, Complex, cone, derived_hom_dim,
                        direct_sum_complexes, hom_complex, is_acyclic,
                        projective_complex, summand_projection_maps,
                        zero_complex)
from .dg import DgAlgebra, dg_end, h0_algebra


def radical_rows(E) -> list[tuple]:
    """Basis rows of the Jacobson radical of a finite-dimensional algebra.

    Uses the trace form of the left regular representation, which computes the
    radical exactly in characteristic 0 or in characteristic p > dim E.
    """
    f = E.field
    p = getattr(f, "p", None)
    if p is not None and p <= E.dim:
        raise ValueError(
            "radical computation needs characteristic 0 or larger than the algebra dimension")
    lm = [E.left_mult_matrix(i) for i in range(E.dim)]
    rows = []
    for i in range(E.dim):
        row = []
        for j in range(E.dim):
            prod = lm[i] @ lm[j]
            t = f.zero
            for r in range(E.dim):
                t = f.add(t, prod.rows[r][r])
            row.append(t)
        rows.append(row)
    return Matrix(f, E.dim, E.dim, rows).row_kernel_rows()


def _summand_data(U: Complex):
    summands = getattr(U, "summands", None)
    if summands is None:
        return [U], None
    return list(summands), summand_projection_maps(U)


def _slice_bounds(U: Complex, part: Complex, s: int, n: int):
    offsets = getattr(U, "summand_offsets", None)
    if offsets is None:
        return 0, U.term(n).dim
    return offsets[n][s], part.term(n).dim


def _hom_class_action(X: Complex, U: Complex, B: DgAlgebra, E):
    """Homotopy classes of chain maps X -> U with the postcomposition action of E.

    Returns (gh, sq, mats) where mats[i] sends class coordinates c to the
    coordinates of [class_reps[i] composed after c], acting on row vectors.
    """
    gh = hom_complex(X, U)
    sq = gh.subquotient(0)
    m = len(sq.reps)
    f = E.field
    rep_comps = [gh.component_maps(0, rep) for rep in sq.reps]
    mats = []
    for ecls in E.class_reps:
        ec = B.gh.component_maps(0, ecls)
        rows = []
        for mc in rep_comps:
            comp = {}
            for i, mm in mc.items():
                em = ec.get(i)
                if em is None:
                    continue
                comp[i] = mm @ em
            coords = gh.coords_of(0, comp)
            if coords is None:
                raise AssertionError("postcomposition escaped the hom basis")
            rows.append(sq.reduce(coords))
        mats.append(Matrix(f, m, m, rows))
    return gh, sq, mats


def _minimal_approximation(X: Complex, U: Complex, B: DgAlgebra, E, rad,
                           summands):
    """Minimal left approximation X -> (sum of copies of summands of U).

    Returns (target, chain map, multiplicities, summand index per generator).
    """
    f = E.field
    A = X.algebra
    gh, sq, emats = _hom_class_action(X, U, B, E)
    m = len(sq.reps)
    if m == 0:
        Z = zero_complex(A)
        return Z, ChainMap(X, Z, {}, validate=False), {}, []

    rel = []
    for rv in rad:
        L = None
        for i, c in enumerate(rv):
            if c == f.zero:
                continue
            scaled = emats[i].scale(c)
            L = scaled if L is None else L + scaled
        if L is not None:
            rel.extend(L.rows)
    quo = QuotientSpace(f, m, rel)

    # greedy generators in summand-major order, each closed under the E-action
    # so that repeated summands are never approximated twice
    covered = RowSpace(f, quo.dim)
    gens = []
    for epos, s in zip(E.idempotents, E.kept_idempotents):
        for t in range(m):
            w = emats[epos].rows[t]
            if covered.contains(quo.project(w)):
                continue
            gens.append((s, w))
            for i in range(len(emats)):
                covered.add(quo.project(emats[i].apply_row(w)))

    parts, mult, use, gen_mats = [], {}, [], []
    for s, w in gens:
        comps = gh.component_maps(0, sq.lift(w))
        part = summands[s]
        mats = {}
        for n, cm in comps.items():
            off, wdt = _slice_bounds(U, part, s, n)
            if wdt == 0:
                continue
            mats[n] = Matrix(f, cm.nrows, wdt,
                             [r[off:off + wdt] for r in cm.rows])
        parts.append(part)
        gen_mats.append(mats)
        mult[s] = mult.get(s, 0) + 1
        use.append(s)

    target = direct_sum_complexes(parts)
    fmats = {}
    for n in X.degrees():
        xdim = X.term(n).dim
        if xdim == 0 or target.term(n).dim == 0:
            continue
        blocks = []
        for part, mats in zip(parts, gen_mats):
            pd = part.term(n).dim
            blocks.append(mats.get(n, Matrix.zero(f, xdim, pd)))
        acc = blocks[0]
        for b in blocks[1:]:
            acc = acc.hstack(b)
        fmats[n] = acc
    return target, ChainMap(X, target, fmats), mult, use


@dataclass
class Coresolution:
    """Cone triangles A_0 -> U_0 -> A_1 -> ... ending in an acyclic complex."""
    triangles: list
    targets: list
    multiplicities: list
    summand_uses: list
    n: int


def coresolve_A(U: Complex, max_steps: int = 8) -> Coresolution | None:
    """Coresolve the regular complex by summands of U; None if the step cap hits.

    A None return is inconclusive, not a refutation: the cap may simply be too
    small, or the decomposition of U too coarse for minimal multiplicities.
    """
    if not U.is_projective_complex():
        raise ValueError("coresolution needs a complex of projectives")
    if U.is_empty():
        return None
    A = U.algebra
    B = dg_end(U)
    summands, projections = _summand_data(U)
    idem = None
    if projections is not None:
        idem = []
        for pm in projections:
            comps = {n: pm.mat(n) for n in U.degrees()
                     if U.term(n).dim and not pm.mat(n).is_zero()}
            v = B.gh.coords_of(0, comps)
            if v is None:
                raise AssertionError("summand projection escaped the hom basis")
            idem.append(v)
    E = h0_algebra(B, idem)
    rad = radical_rows(E)

    X = projective_complex(A, {0: list(range(len(A.idempotents)))})
    triangles, targets, mults, uses = [], [], [], []
    while not is_acyclic(X):
        if len(triangles) >= max_steps:
            return None
        target, fmap, mult, use = _minimal_approximation(X, U, B, E, rad, summands)
        C, tri = cone(fmap)
        triangles.append(tri)
        targets.append(target)
        mults.append(mult)
        uses.append(use)
        X = C
    return Coresolution(triangles, targets, mults, uses, len(triangles) - 1)


# -- presilting and tilting tests -------------------------------------------


def presilting_witness(U: Complex):
    """None when U has no positive self-extensions, else the offending (shift, dim)."""
    if not U.is_projective_complex():
        raise ValueError("presilting test needs a complex of projectives")
    if U.is_empty():
        return None
    cache = {}
    for i in range(1, U.hi - U.lo + 1):
        d = derived_hom_dim(U, U, i, cache)
        if d:
            return (i, d)
    return None


def is_presilting(U: Complex) -> bool:
    return presilting_witness(U) is None


@dataclass
class TiltingCheck:
    tilting: bool
    module_form: bool
    inconclusive: bool
    witness: tuple | None

    def __bool__(self) -> bool:
        return self.tilting


def is_tilting(U: Complex, max_steps: int = 8) -> TiltingCheck:
    """Two-sided self-extension vanishing plus a terminating coresolution.

    module_form records whether the cohomology of U sits in degree 0 alone.
    An undecided coresolution makes the check inconclusive, never a pass.
    """
    if not U.is_projective_complex():
        raise ValueError("tilting test needs a complex of projectives")
    if U.is_empty():
        return TiltingCheck(False, True, True, None)
    mf = all(U.h_dim(n) == 0 for n in range(U.lo, U.hi + 1) if n != 0)
    width = U.hi - U.lo
    cache = {}
    for i in range(-width, width + 1):
        if i == 0:
            continue
        d = derived_hom_dim(U, U, i, cache)
        if d:
            return TiltingCheck(False, mf, False, (i, d))
    if coresolve_A(U, max_steps) is None:
        return TiltingCheck(False, mf, True, None)
    return TiltingCheck(True, mf, False, None)


def silting_equivalent(U: Complex, V: Complex, max_steps: int = 8) -> bool:
    """Mutual vanishing of positive-shift homs between two presilting complexes.

    Both inputs must be presilting with terminating coresolutions; anything
    else raises.  The verdict rests on the mutual-vanishing order comparison,
    which is the criterion this package commits to for equivalence classes.
    """
    for W in (U, V):
        w = presilting_witness(W)
        if w is not None:
            raise ValueError(
                f"precondition failed: input is not presilting (shift {w[0]}, dim {w[1]})")
        if coresolve_A(W, max_steps) is None:
            raise ValueError("precondition failed: coresolution did not terminate")
    hi = max(U.hi - V.lo, V.hi - U.lo)
    cache = {}
    for i in range(1, hi + 1):
        if derived_hom_dim(U, V, i, cache) or derived_hom_dim(V, U, i, cache):
            return False
    return True


def goodify(U: Complex, max_steps: int = 8) -> Complex | None:
    """Direct sum of the coresolution targets, flattened to summands of U.

    None when the coresolution is undecided at the step cap.
    """
    cor = coresolve_A(U, max_steps)
    if cor is None:
        return None
    summands, _ = _summand_data(U)
    parts = [summands[s] for use in cor.summand_uses for s in use]
    return direct_sum_complexes(parts)


# -- report -----------------------------------------------------------------


@dataclass
class SiltingReport:
    presilting: bool
    presilting_witness: tuple | None
    n: int | None
    multiplicities: list | None
    good: bool
    tilting: bool
    module_form: bool
    inconclusive: bool
    equivalence_criterion: str


def silting_report(U: Complex, max_steps: int = 8) -> SiltingReport:
    """One-stop summary; n and the multiplicities appear iff the coresolution does."""
    pw = presilting_witness(U)
    if U.is_empty():
        width, mf = 0, True
    else:
        width = U.hi - U.lo
        mf = all(U.h_dim(n) == 0 for n in range(U.lo, U.hi + 1) if n != 0)
    two_sided = None
    cache = {}
    if not U.is_empty():
        for i in range(-width, width + 1):
            if i == 0:
                continue
            d = derived_hom_dim(U, U, i, cache)
            if d:
                two_sided = (i, d)
                break
    cor = coresolve_A(U, max_steps)
    return SiltingReport(
        presilting=pw is None,
        presilting_witness=pw,
        n=cor.n if cor is not None else None,
        multiplicities=[dict(m) for m in cor.multiplicities] if cor is not None else None,
        good=pw is None and cor is not None,
        tilting=two_sided is None and cor is not None,
        module_form=mf,
        inconclusive=cor is None,
        equivalence_criterion="mutual-presilting",
    )


# -- long-exact dimension checks --------------------------------------------


def cone_les_dims_ok(tri) -> bool:
    """dim H^n(cone) = coker + ker of the induced maps, for every degree."""
    X, Y, Z = tri.f.source, tri.f.target, tri.cone
    lo = min((w.lo for w in (X, Y, Z) if not w.is_empty()), default=0)
    hi = max((w.hi for w in (X, Y, Z) if not w.is_empty()), default=-1)
    rk = {n: tri.f.induced(n).rank() for n in range(lo, hi + 2)}
    for n in range(lo - 1, hi + 2):
        coker = Y.h_dim(n) - rk.get(n, 0)
        ker = X.h_dim(n + 1) - rk.get(n + 1, 0)
        if Z.h_dim(n) != coker + ker:
            return False
    return True


def hom_les_dims_ok(tri, U: Complex) -> bool:
    """Dimension-level exactness of the hom-into-U sequence of a cone triangle.

    Writing rho_n for the map induced on degree-n hom classes by the triangle's
    base map, checks dim H^n(hom(cone, U)) = dim coker rho_{n-1} + dim ker rho_n.
    """
    X, Y, Z = tri.f.source, tri.f.target, tri.cone
    ghX, ghY, ghZ = (hom_complex(W, U) for W in (X, Y, Z))
    f = U.algebra.field
    spans = [g for g in (ghX, ghY, ghZ) if g.hi >= g.lo]
    if not spans:
        return True
    lo = min(g.lo for g in spans)
    hi = max(g.hi for g in spans)

    def rho_rank_and_ker(n):
        sqY = ghY.subquotient(n)
        sqX = ghX.subquotient(n)
        rows = []
        for rep in sqY.reps:
            comps = ghY.component_maps(n, rep)
            pre = {}
            for i, mm in comps.items():
                cm = tri.f.mat(i) @ mm
                if not cm.is_zero():
                    pre[i] = cm
            coords = ghX.coords_of(n, pre)
            if coords is None:
                raise AssertionError("precomposition escaped the hom basis")
            rows.append(sqX.reduce(coords))
        mat = Matrix(f, len(sqY.reps), len(sqX.reps), rows)
        r = mat.rank()
        return r, mat.nrows - r

    data = {n: rho_rank_and_ker(n) for n in range(lo, hi + 1)}
    for n in range(lo - 1, hi + 2):
        rk_prev = data.get(n - 1, (0, 0))[0]
        coker = ghX.h_dim(n - 1) - rk_prev
        ker = data.get(n, (0, ghY.h_dim(n)))[1]
        if ghZ.h_dim(n) != coker + ker:
            return False
    return True


def coresolution_les_ok(cor: Coresolution, U: Complex) -> bool:
    """Every triangle passes both dimension checks and the endpoint is hom-acyclic."""
    for tri in cor.triangles:
        if not cone_les_dims_ok(tri) or not hom_les_dims_ok(tri, U):
            return False
    final = cor.triangles[-1].cone
    ghf = hom_complex(final, U)
    return all(ghf.h_dim(n) == 0 for n in range(ghf.lo, ghf.hi + 1))
