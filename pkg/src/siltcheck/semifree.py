"""Windowed semifree resolutions and derived tensor/Hom over a dg-algebra.

A semifree module is free over its non-positive base on a filtered list of
generators; the differential of each generator only involves strictly earlier
generators of strictly higher degree.  Resolutions are built top-down: at each
degree the surviving cocycle classes of the augmentation cone are killed by
adjoining fresh free generators, which over a non-positive base cannot disturb
any higher degree.  A cutoff bounds how far down the construction digs; the
derived functors pick their cutoff from the requested window with one spare
degree so that cohomology at the window edge is already exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import direct_sum_modules
from .complexes import Complex, zero_complex
from .dg import DgAlgebra, DgModule
from .linalg import Matrix, RowSpace, subquotient_from_maps


class SemifreeCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class DegreeWindow:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("window must satisfy lo <= hi")

    def __contains__(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def widen(self, k: int) -> "DegreeWindow":
        return DegreeWindow(self.lo - k, self.hi + k)


class SemifreeModule:
    """Free right dg-module over a non-positive base, with augmentation.

    gens[k] is the degree of the k-th generator (non-increasing along the
    list); gen_diffs[k] maps free-basis positions (k2, b2) to coefficients,
    with k2 < k and gens[k2] = gens[k] + 1 - (degree of basis b2) > gens[k];
    gen_augs[k] is the augmentation value in target^{gens[k]}.
    """

    def __init__(self, algebra: DgAlgebra, target: DgModule, cutoff: int):
        self.algebra = algebra
        self.target = target
        self.cutoff = cutoff
        self.gens: list[int] = []
        self.gen_diffs: list[dict] = []
        self.gen_augs: list[tuple] = []

    def layout(self, n: int) -> list:
        return [(k, b) for k, g in enumerate(self.gens)
                for b in range(self.algebra.dim(n - g))]

    def dim(self, n: int) -> int:
        return sum(self.algebra.dim(n - g) for g in self.gens)

    def support(self):
        if not self.gens:
            return range(0)
        return range(min(self.gens) + self.algebra.lo, max(self.gens) + 1)

    def act(self, n: int, vec, cdeg: int, cvec):
        """Right action of a degree-cdeg base element on a degree-n element."""
        C = self.algebra
        f = C.field
        src = self.layout(n)
        tgt = self.layout(n + cdeg)
        pos = {kb: t for t, kb in enumerate(tgt)}
        out = [f.zero] * len(tgt)
        for (k, b), coeff in zip(src, vec):
            if coeff == f.zero:
                continue
            prod = C.product(n - self.gens[k], C.basis_vector(n - self.gens[k], b),
                             cdeg, cvec)
            for b2, c2 in enumerate(prod):
                if c2 != f.zero:
                    t = pos[(k, b2)]
                    out[t] = f.add(out[t], f.mul(coeff, c2))
        return tuple(out)

    def diff_matrix(self, n: int) -> Matrix:
        C = self.algebra
        f = C.field
        src = self.layout(n)
        tgt = self.layout(n + 1)
        pos = {kb: t for t, kb in enumerate(tgt)}
        rows = []
        for (k, b) in src:
            g = self.gens[k]
            row = [f.zero] * len(tgt)
            bdeg = n - g
            bvec = C.basis_vector(bdeg, b)
            # d(gen) acted by the base coefficient
            for (k2, b2), coeff in self.gen_diffs[k].items():
                g2 = self.gens[k2]
                prod = C.product(g + 1 - g2, C.basis_vector(g + 1 - g2, b2), bdeg, bvec)
                for b3, c3 in enumerate(prod):
                    if c3 != f.zero:
                        t = pos[(k2, b3)]
                        row[t] = f.add(row[t], f.mul(coeff, c3))
            # sign from moving d past the generator
            dcb = C.diff(bdeg).row(b) if C.dim(bdeg) else ()
            sign = f.one if g % 2 == 0 else f.neg(f.one)
            for b3, c3 in enumerate(dcb):
                if c3 != f.zero:
                    t = pos[(k, b3)]
                    row[t] = f.add(row[t], f.mul(sign, c3))
            rows.append(row)
        return Matrix(f, len(src), len(tgt), rows)

    def aug_matrix(self, n: int) -> Matrix:
        M = self.target
        f = self.algebra.field
        src = self.layout(n)
        rows = []
        for (k, b) in src:
            g = self.gens[k]
            rows.append(M.act(g, self.gen_augs[k], n - g,
                              self.algebra.basis_vector(n - g, b)))
        return Matrix(f, len(src), M.dim(n), rows)

    def cone_dim(self, n: int) -> int:
        return self.dim(n + 1) + self.target.dim(n)

    def cone_diff(self, n: int) -> Matrix:
        f = self.algebra.field
        dP = self.diff_matrix(n + 1)
        aug = self.aug_matrix(n + 1)
        dM = self.target.diff(n)
        top = dP.scale(f.neg(f.one)).hstack(aug)
        bottom = Matrix.zero(f, self.target.dim(n), self.dim(n + 2)).hstack(dM)
        rows = list(top.rows) + list(bottom.rows)
        return Matrix(f, self.cone_dim(n), self.cone_dim(n + 1), rows)

    def cone_subquotient(self, n: int):
        return subquotient_from_maps(self.cone_diff(n - 1), self.cone_diff(n),
                                     self.algebra.field, self.cone_dim(n))

    def cone_h_dim(self, n: int) -> int:
        return len(self.cone_subquotient(n).reps)

    def cone_support(self):
        lows = [self.target.lo]
        highs = [self.target.hi]
        if self.gens:
            lows.append(min(self.gens) + self.algebra.lo - 1)
            highs.append(max(self.gens) - 1)
        return range(min(lows), max(highs) + 1)

    def gen_counts(self) -> dict:
        out = {}
        for g in self.gens:
            out[g] = out.get(g, 0) + 1
        return out

    def as_dg_module(self, validate: bool = True) -> DgModule:
        C = self.algebra
        f = C.field
        dims = {n: self.dim(n) for n in self.support()}
        action = {}
        for m in self.support():
            for n in C.degrees():
                if not dims.get(m) or not C.dim(n) or not dims.get(m + n):
                    continue
                table = []
                for t in range(dims[m]):
                    x = tuple(f.one if s == t else f.zero for s in range(dims[m]))
                    table.append([self.act(m, x, n, C.basis_vector(n, j))
                                  for j in range(C.dim(n))])
                action[(m, n)] = table
        diffs = {n: self.diff_matrix(n) for n in self.support()}
        return DgModule(C, "right", dims, action, diffs, validate=validate)


def regular_dg_module(B: DgAlgebra) -> DgModule:
    """B as a right dg-module over itself."""
    action = {key: [list(row) for row in table] for key, table in B.mult.items()}
    return DgModule(B, "right", dict(B.dims), action, dict(B.diffs), validate=False)


def _is_regular(M: DgModule) -> bool:
    B = M.algebra
    if M.side != "right" or M.dims != B.dims:
        return False
    for n in B.degrees():
        if M.diff(n).rows != B.diff(n).rows:
            return False
    for m in B.degrees():
        for n in B.degrees():
            if not B.dim(m) or not B.dim(n) or not B.dim(m + n):
                continue
            for i in range(B.dim(m)):
                x = B.basis_vector(m, i)
                for j in range(B.dim(n)):
                    a = B.basis_vector(n, j)
                    if tuple(M.act(m, x, n, a)) != tuple(B.product(m, x, n, a)):
                        return False
    return True


def semifree_resolve(M: DgModule, cutoff: int, cap: int = 4096) -> SemifreeModule:
    """Kill the augmentation cone's cohomology from the top of M down to the cutoff.

    The result has generators only in degrees >= cutoff and its augmentation
    cone is acyclic in every degree >= cutoff (hence >= cutoff + 1).
    """
    C = M.algebra
    if not C.is_nonpositive():
        raise ValueError("base dg-algebra has a positive-degree component")
    f = C.field
    P = SemifreeModule(C, M, cutoff)
    if _is_regular(M):
        P.gens = [0]
        P.gen_diffs = [{}]
        P.gen_augs = [tuple(C.unit)]
        return P
    for n in range(M.hi, cutoff - 1, -1):
        sq = P.cone_subquotient(n)
        if not sq.reps:
            continue
        width = len(sq.reps)
        split = P.dim(n + 1)
        orbits = []
        for rep in sq.reps:
            q = tuple(rep[:split])
            x = tuple(rep[split:])
            rows = []
            for b0 in range(C.dim(0)):
                cvec = C.basis_vector(0, b0)
                qc = P.act(n + 1, q, 0, cvec)
                xc = M.act(n, x, 0, cvec)
                rows.append(sq.reduce(tuple(qc) + tuple(xc)))
            orbits.append(rows)
        # classes with a large action orbit first: one free generator then
        # kills everything in its span, keeping the cover near minimal
        ranks = [Matrix(f, len(rows), width, rows).rank() for rows in orbits]
        order = sorted(range(width), key=lambda r: (-ranks[r], r))
        killed = RowSpace(f, width)
        for r in order:
            cls = tuple(f.one if t == r else f.zero for t in range(width))
            if killed.contains(cls):
                continue
            if len(P.gens) >= cap:
                raise SemifreeCapError(
                    f"semifree resolution exceeded {cap} generators at degree {n}")
            rep = sq.reps[r]
            q = tuple(rep[:split])
            x = tuple(rep[split:])
            layout_up = P.layout(n + 1)
            P.gens.append(n)
            P.gen_diffs.append({layout_up[t]: c for t, c in enumerate(q) if c != f.zero})
            P.gen_augs.append(tuple(f.neg(c) for c in x))
            for row in orbits[r]:
                killed.add(row)
    return P


# -- derived functors -------------------------------------------------------


def derived_tensor(M: DgModule, U: DgModule, window: DegreeWindow,
                   extra_margin: int = 0, cap: int = 4096) -> Complex:
    """P (x)_B U for a semifree resolution P of M, exact inside the window.

    U must be a left dg-module carrying .complex (terms over the base ring A);
    the cutoff is (window.lo - 1) - u_hi - extra_margin, one degree deeper than
    the window needs so edge cohomology is exact.  The result carries
    .resolution and per-degree .block_layout mapping generators to offsets.
    """
    if M.side != "right" or U.side != "left":
        raise ValueError("derived_tensor needs a right module and a left module")
    A = U.complex.algebra
    f = A.field
    u_degs = [n for n in U.degrees() if U.dim(n)]
    if not u_degs:
        return zero_complex(A)
    u_hi = max(u_degs)
    cutoff = (window.lo - 1) - u_hi - extra_margin
    P = semifree_resolve(M, cutoff, cap=cap)
    if not P.gens:
        return zero_complex(A)

    def blocks(n):
        out = []
        for k, g in enumerate(P.gens):
            d = U.dim(n - g)
            if d:
                out.append((k, n - g, d))
        return out

    lo = min(P.gens) + min(u_degs)
    hi = max(P.gens) + u_hi
    terms, layouts = {}, {}
    for n in range(lo, hi + 1):
        bl = blocks(n)
        if not bl:
            continue
        terms[n] = direct_sum_modules(A, [U.complex.term(j) for _, j, _ in bl])
        layouts[n] = bl
    diffs = {}
    for n in sorted(terms):
        if n + 1 not in terms:
            continue
        src, tgt = layouts[n], layouts[n + 1]
        offs = {}
        acc = 0
        for k, j, d in tgt:
            offs[k] = acc
            acc += d
        rows = [[f.zero] * acc for _ in range(sum(d for _, _, d in src))]
        base = 0
        for k, j, d in src:
            g = P.gens[k]
            sign = f.one if g % 2 == 0 else f.neg(f.one)
            # generator kept, U differential applied
            if k in offs and U.dim(j + 1):
                dmat = U.diff(j)
                for r in range(d):
                    for ccol in range(dmat.ncols):
                        c = dmat.rows[r][ccol]
                        if c != f.zero:
                            rows[base + r][offs[k] + ccol] = f.add(
                                rows[base + r][offs[k] + ccol], f.mul(sign, c))
            # generator differential, base element pushed into U
            for (k2, b2), coeff in P.gen_diffs[k].items():
                if k2 not in offs:
                    continue
                cdeg = g + 1 - P.gens[k2]
                cvec = M.algebra.basis_vector(cdeg, b2)
                for r in range(d):
                    uvec = tuple(f.one if s == r else f.zero for s in range(d))
                    img = U.act(cdeg, cvec, j, uvec)
                    for ccol, c in enumerate(img):
                        if c != f.zero:
                            rows[base + r][offs[k2] + ccol] = f.add(
                                rows[base + r][offs[k2] + ccol], f.mul(coeff, c))
            base += d
        diffs[n] = Matrix(f, len(rows), acc, rows)
    out = Complex(A, terms, diffs)
    out.resolution = P
    out.block_layout = layouts
    return out


def derived_hom_over_B(M: DgModule, N: DgModule, n: int, window: DegreeWindow,
                       extra_margin: int = 0, cap: int = 4096) -> int:
    """dim H^n of Hom over the base from a semifree resolution of M into N."""
    if n not in window:
        raise ValueError("window/margin inconsistency: degree outside the window")
    if M.side != "right" or N.side != "right":
        raise ValueError("derived_hom_over_B needs right modules")
    if not N.dims:
        return 0
    cutoff = N.lo - (window.hi + 1) - extra_margin
    P = semifree_resolve(M, cutoff, cap=cap)
    if not P.gens:
        return 0
    C = M.algebra
    f = C.field

    def hlayout(m):
        return [(k, t) for k, g in enumerate(P.gens) for t in range(N.dim(m + g))]

    def hdiff(m):
        src = hlayout(m)
        tgt = hlayout(m + 1)
        pos = {}
        for t, kt in enumerate(tgt):
            pos[kt] = t
        sign = f.one if m % 2 == 0 else f.neg(f.one)
        nsign = f.neg(sign)
        rows = []
        for (k, t) in src:
            g = P.gens[k]
            row = [f.zero] * len(tgt)
            dN = N.diff(m + g)
            for c2, c in enumerate(dN.rows[t] if dN.nrows else ()):
                if c != f.zero:
                    row[pos[(k, c2)]] = f.add(row[pos[(k, c2)]], c)
            # f(d of a later generator) lands in this generator's slot
            for k3, gd in enumerate(P.gen_diffs):
                for (k2, b2), coeff in gd.items():
                    if k2 != k:
                        continue
                    cdeg = P.gens[k3] + 1 - g
                    cvec = C.basis_vector(cdeg, b2)
                    xvec = tuple(f.one if s == t else f.zero for s in range(N.dim(m + g)))
                    img = N.act(m + g, xvec, cdeg, cvec)
                    for c2, c in enumerate(img):
                        if c != f.zero:
                            row[pos[(k3, c2)]] = f.add(row[pos[(k3, c2)]],
                                                       f.mul(nsign, f.mul(coeff, c)))
            rows.append(row)
        return Matrix(f, len(src), len(tgt), rows)

    sq = subquotient_from_maps(hdiff(n - 1), hdiff(n), f, len(hlayout(n)))
    return len(sq.reps)
