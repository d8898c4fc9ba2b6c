"""Module-level oracles independent of the dg machinery.

Everything here is computed with hom_space and dimension vectors only, so the
numbers frozen into the verifier tests do not come from the code under test.
"""

from siltcheck.algebra import Module, hom_space


def hom_dim(M: Module, N: Module) -> int:
    return len(hom_space(M, N))


def euler_pairing(M: Module, N: Module) -> int:
    """hom - ext1 over the two-vertex arrow algebra, from dimension vectors.

    For the quiver with one arrow from the first vertex to the second the
    pairing is m1*n1 + m2*n2 - m1*n2; the algebra is hereditary, so this plus
    hom_dim determines ext1.
    """
    m1, m2 = M.dimension_vector()
    n1, n2 = N.dimension_vector()
    return m1 * n1 + m2 * n2 - m1 * n2


def ext1_dim(M: Module, N: Module) -> int:
    return hom_dim(M, N) - euler_pairing(M, N)


def weight_dims(M: Module) -> tuple:
    """Dimension of M at each vertex: dim Hom(P_v, M) for every projective."""
    return M.dimension_vector()
