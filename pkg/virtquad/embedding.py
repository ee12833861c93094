"""Hyperbolic complements, symplectic bases, ambient embedding and minimalization."""

import logging
from typing import Optional, Union

from . import config
from .errors import (
    CharacteristicMismatch,
    DegenerateAmbient,
    DegenerateGram,
    InputError,
    InvariantViolation,
    NotTotallyIsotropic,
    OddDimension,
    ShapeMismatch,
)
from .field import FieldElement
from .linalg import (
    MatrixF,
    SubspaceF,
    Vector,
    invertible_p,
    kernel,
    perp,
    restricted_gram,
    solve,
    subspace_intersect,
    subspace_sum,
)
from .models import MinimalDecomposition
from .quadratic import QuadraticSpace, VirtualQuadraticSpace, is_minimal, restrict

logger = logging.getLogger(__name__)


def _partner(gram: MatrixF, u: Vector, taken: list[Vector]) -> Optional[Vector]:
    """Lexicographically smallest v with B(u, v) = 1 and B(s, v) = 0 for s in taken."""
    spec = gram.spec
    rows = [MatrixF.from_rows(spec, [s], cols=gram.rows) @ gram for s in taken]
    rows.append(MatrixF.from_rows(spec, [u], cols=gram.rows) @ gram)
    system = MatrixF.from_rows(spec, [r.row(0) for r in rows], cols=gram.rows)
    rhs = [spec.zero] * len(taken) + [spec.one]
    return solve(system, rhs)


def _require(condition: bool, what: str):
    if not condition:
        raise InvariantViolation(what)


def hyperbolic_complement(gram: MatrixF, n_sub: SubspaceF) -> tuple[SubspaceF, SubspaceF]:
    """
    Extend a totally isotropic N to a hyperbolic Sigma = N + N~.

    One isotropic line at a time: u is the first canonical basis row of the
    part of N still to be paired, v the lexicographically smallest vector
    with B(u, v) = 1 orthogonal to every pair already chosen. The remaining
    part of N is then cut down to the orthogonal complement of the new pair.

    Returns:
        (sigma, n_tilde) with dim sigma = 2 dim N, perp(N) & sigma = N and the
        Gram matrix invertible on sigma.
    """
    if not gram.is_square or gram.rows != n_sub.ambient_dim:
        raise ShapeMismatch(f"{gram.rows}x{gram.cols} Gram matrix, ambient dimension {n_sub.ambient_dim}")
    if not invertible_p(gram):
        raise DegenerateAmbient("ambient Gram matrix is singular")
    if not restricted_gram(gram, n_sub).is_zero():
        raise NotTotallyIsotropic("B does not vanish on N")

    spec, n = gram.spec, gram.rows
    taken: list[Vector] = []
    partners: list[Vector] = []
    remaining = n_sub
    while not remaining.is_zero():
        u = remaining.vectors()[0]
        v = _partner(gram, u, taken)
        if v is None:
            raise InvariantViolation(f"no hyperbolic partner for {u}")
        taken += [u, v]
        partners.append(v)
        remaining = subspace_intersect(remaining, perp(SubspaceF.span(spec, n, [u, v]), gram))

    sigma = SubspaceF.span(spec, n, taken)
    n_tilde = SubspaceF.span(spec, n, partners)
    _require(sigma.dim == 2 * n_sub.dim, "dim Sigma != 2 dim N")
    _require(subspace_intersect(perp(n_sub, gram), sigma) == n_sub, "perp(N) & Sigma != N")
    _require(sigma.is_zero() or invertible_p(restricted_gram(gram, sigma)), "B singular on Sigma")
    logger.debug("hyperbolic complement of a %d-dim N has dim %d", n_sub.dim, sigma.dim)
    return sigma, n_tilde


def symplectic_basis(gram: MatrixF) -> MatrixF:
    """Rows e1, f1, ..., ek, fk with B(ei, fi) = 1 and every other pair orthogonal."""
    spec = gram.spec
    if not gram.is_square:
        raise ShapeMismatch(f"non-square {gram.rows}x{gram.cols} Gram matrix")
    if not spec.is_even:
        raise CharacteristicMismatch(f"symplectic bases are built in characteristic 2, not over {spec}")
    n = gram.rows
    if not gram.is_symmetric() or any(gram[i, i] for i in range(n)):
        raise InputError("Gram matrix is not alternating")
    if n % 2:
        ker = kernel(gram)
        raise OddDimension(
            f"alternating {n}x{n} matrix is singular", certificate=ker.vectors()[0]
        )
    if not invertible_p(gram):
        raise DegenerateGram("Gram matrix is singular")

    rows: list[Vector] = []
    remaining = SubspaceF.full(spec, n)
    while not remaining.is_zero():
        e = remaining.vectors()[0]
        f = _partner(gram, e, rows)
        if f is None:
            raise InvariantViolation(f"no symplectic partner for {e}")
        rows += [e, f]
        remaining = subspace_intersect(remaining, perp(SubspaceF.span(spec, n, [e, f]), gram))

    basis = MatrixF.from_rows(spec, rows, cols=n)
    transformed = basis @ gram @ basis.transpose()
    for i in range(n):
        for j in range(n):
            expected = int(i // 2 == j // 2 and i != j)
            _require(transformed[i, j].value == expected, "symplectic basis is not block hyperbolic")
    return basis


def embed_ambient(
    u_space: QuadraticSpace, twist: Optional[Union[FieldElement, int]] = None
) -> VirtualQuadraticSpace:
    """
    Embed (U, Q) into a minimal virtual quadratic space (V, Q~, U).

    V = U + N~ with one new coordinate t_i per basis row of N = ker B. With
    p_i the pivot column of the i-th row, Q~ = Q + sum t_i x_{p_i}; x_{p_i}
    is the dual basis of N extended by zero on the non-pivot coordinates.

    In characteristic 2 a twist adds twist * t_i^2, which changes Q~ off U
    but not its Gram matrix.
    """
    spec, n = u_space.spec, u_space.n
    n_basis = kernel(u_space.gram)
    k = n_basis.dim
    if twist is not None:
        if not spec.is_even:
            raise CharacteristicMismatch("an additive twist keeps the Gram matrix only in characteristic 2")
        twist = twist if isinstance(twist, FieldElement) else spec.from_int(twist)

    size = n + k
    rows = [[spec.zero] * size for _ in range(size)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = u_space.coeffs[i, j]
    for i, p in enumerate(n_basis.pivots):
        rows[p][n + i] = spec.one
        if twist is not None:
            rows[n + i][n + i] = twist
    ambient = QuadraticSpace(spec, size, MatrixF.from_rows(spec, rows, cols=size))

    if not invertible_p(ambient.gram):
        raise InvariantViolation("embedded ambient is degenerate")
    u_sub = SubspaceF.span(
        spec, size, [[int(i == j) for j in range(size)] for i in range(n)]
    )
    vqs = VirtualQuadraticSpace(ambient, u_sub)
    _require(is_minimal(vqs), "embedded space is not minimal")
    _require(vqs.form.coeffs == u_space.coeffs, "embedding does not restrict to the input form")
    logger.debug("embedded %d-dim form into a %d-dim ambient (dim N = %d)", n, size, k)
    return vqs


def _check_decomposition(vqs: VirtualQuadraticSpace, dec: MinimalDecomposition):
    u, n = vqs.u_sub, vqs.ambient.n
    _require(subspace_sum(dec.n_sub, dec.m_sub) == u, "U != N + M")
    _require(dec.n_sub.dim + dec.m_sub.dim == u.dim, "N and M overlap")
    full = subspace_sum(subspace_sum(dec.m_sub, dec.m_hat), dec.sigma)
    _require(full.dim == n, "M + M^ + Sigma is not the ambient")
    _require(dec.m_sub.dim + dec.m_hat.dim + dec.sigma.dim == n, "M, M^ and Sigma overlap")
    _require(subspace_sum(dec.m_hat, dec.n_sub) == vqs.u_perp, "perp(U) != M^ + N")
    _require(dec.sigma.dim == 2 * dec.n_sub.dim, "dim Sigma != 2 dim N")
    _require(subspace_intersect(vqs.u_perp, dec.sigma) == dec.n_sub, "perp(U) & Sigma != N")
    _require(subspace_intersect(u, dec.sigma) == dec.n_sub, "U & Sigma != N")
    _require(dec.vm.dim == u.dim + dec.n_sub.dim, "dim V_m != dim U + dim N")


def minimalize(vqs: VirtualQuadraticSpace) -> tuple[VirtualQuadraticSpace, MinimalDecomposition]:
    """
    Cut the ambient down to V_m = U + Sigma.

    The returned space lives in the coordinates of V_m's canonical basis; a
    minimal input comes back unchanged.
    """
    gram = vqs.ambient.gram
    u, u_perp, n_sub = vqs.u_sub, vqs.u_perp, vqs.n_sub
    sigma, n_tilde = hyperbolic_complement(gram, n_sub)
    sigma_perp = perp(sigma, gram)
    m_sub = subspace_intersect(u, sigma_perp)
    m_hat = subspace_intersect(perp(m_sub, gram), sigma_perp)
    vm = subspace_sum(u, sigma)
    dec = MinimalDecomposition(
        n_sub=n_sub, m_sub=m_sub, sigma=sigma, n_tilde=n_tilde, m_hat=m_hat, vm=vm
    )
    _check_decomposition(vqs, dec)

    if not u.is_zero() and u <= u_perp:
        logger.info("U is contained in its orthogonal complement (dim M^ = %d)", m_hat.dim)

    ambient_m = restrict(vqs.ambient, vm)
    u_coords = [vm.coordinates(b) for b in u.vectors()]
    result = VirtualQuadraticSpace(ambient_m, SubspaceF.span(vqs.spec, vm.dim, u_coords))
    _require(is_minimal(result), "minimalized space is not minimal")
    logger.debug("minimalized ambient from dim %d to dim %d", vqs.ambient.n, vm.dim)
    return result, dec


def iso_preserving_restriction_check(
    vqs: VirtualQuadraticSpace,
    vqs_m: VirtualQuadraticSpace,
    budget: config.Budget = config.DEFAULT_BUDGET,
) -> bool:
    """Iso(V, U) and Iso(V_m, U) have the same order and the same restrictions to U."""
    from .isometry import enumerate_virtual_isometries, restrict_to_u

    big = enumerate_virtual_isometries(vqs, budget)
    small = enumerate_virtual_isometries(vqs_m, budget)
    if big.order != small.order:
        logger.warning("Iso(V, U) has order %d but Iso(V_m, U) has order %d", big.order, small.order)
        return False
    big_images = {restrict_to_u(vqs, m).key() for m in big.elements}
    small_images = {restrict_to_u(vqs_m, m).key() for m in small.elements}
    return big_images == small_images
