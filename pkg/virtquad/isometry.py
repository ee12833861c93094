"""Isometry groups: enumeration, order formulas and the restriction map."""

import logging
import random
from math import prod
from typing import Iterable, Optional

from . import config
from .classify import canonical_representative
from .embedding import embed_ambient
from .errors import (
    BudgetExceeded,
    Degenerate,
    FieldTooLarge,
    InputError,
    InvariantViolation,
    NotMinimal,
    ParityMismatch,
)
from .field import field_for_order
from .linalg import MatrixF, SubspaceF, apply, inverse
from .models import (
    CheckStatus,
    FormKind,
    GroupOrderReport,
    IsometrySet,
    Method,
    RestrictionResult,
    Semantics,
)
from .quadratic import (
    QuadraticSpace,
    VirtualQuadraticSpace,
    is_isometry,
    is_minimal,
    is_nondegenerate_virtual,
)
from .search import carrying_maps

logger = logging.getLogger(__name__)


def enumerate_isometries(qs: QuadraticSpace, budget: config.Budget = config.DEFAULT_BUDGET) -> IsometrySet:
    """Iso(U), every element as an explicit matrix in canonical order."""
    outcome = carrying_maps(qs, qs, budget)
    return IsometrySet(
        space=qs, order=len(outcome.maps), method=Method.ENUMERATED,
        elements=outcome.maps, nodes=outcome.nodes,
    )


def enumerate_virtual_isometries(
    vqs: VirtualQuadraticSpace, budget: config.Budget = config.DEFAULT_BUDGET
) -> IsometrySet:
    """Iso(V, U): isometries of the ambient fixing U^perp pointwise."""
    outcome = carrying_maps(vqs.ambient, vqs.ambient, budget, fixed=vqs.u_perp.vectors())
    return IsometrySet(
        space=vqs, order=len(outcome.maps), method=Method.ENUMERATED,
        elements=outcome.maps, nodes=outcome.nodes,
    )


def order_formula(q: int, dim: int, epsilon: Optional[int], semantics: Semantics = Semantics.VIRTUAL) -> int:
    """
    Exact order of the orthogonal group of a trivial-radical form.

    Even dim 2k:  2 q^(k^2-k) (q^k - epsilon) prod_{i=1}^{k-1} (q^(2i) - 1).
    Odd dim 2k+1: 2 q^(k^2) prod_{i=1}^{k} (q^(2i) - 1) for Iso(V, U); the
    classical Iso(U) is half of that when q is even.
    """
    if dim < 1:
        raise InputError(f"dimension must be at least 1, got {dim}")
    semantics = Semantics(semantics)
    k = dim // 2
    if dim % 2 == 0:
        if epsilon not in (1, -1):
            raise ParityMismatch(f"even dimension {dim} needs epsilon +1 or -1, got {epsilon}")
        return 2 * q ** (k * k - k) * (q ** k - epsilon) * prod(q ** (2 * i) - 1 for i in range(1, k))
    if epsilon is not None:
        raise ParityMismatch(f"odd dimension {dim} takes no epsilon, got {epsilon}")
    value = 2 * q ** (k * k) * prod(q ** (2 * i) - 1 for i in range(1, k + 1))
    if semantics == Semantics.CLASSICAL and q % 2 == 0:
        value //= 2
    return value


def restrict_to_u(vqs: VirtualQuadraticSpace, m: MatrixF) -> MatrixF:
    """The map m induces on U, in the coordinates of U's canonical basis."""
    u = vqs.u_sub
    columns = [u.coordinates(apply(m, b)) for b in u.vectors()]
    if not columns:
        return MatrixF.identity(vqs.spec, 0)
    return MatrixF.from_rows(vqs.spec, columns, cols=u.dim).transpose()


def restriction_map(
    vqs: VirtualQuadraticSpace,
    iso_set: IsometrySet,
    budget: Optional[config.Budget] = None,
) -> RestrictionResult:
    """
    Image and kernel of Iso(V, U) -> Iso(U).

    The image is checked for closure and inverses. With a budget it is
    also compared with an independent enumeration of Iso(U); the result
    then records whether the map is surjective. Without one, surjective
    stays None.
    """
    if not is_minimal(vqs):
        raise NotMinimal("restriction needs perp(U) inside U")
    if not is_nondegenerate_virtual(vqs):
        raise Degenerate("Q restricted to U has a nontrivial radical")
    form = vqs.form
    identity = MatrixF.identity(vqs.spec, form.n).key()

    images: dict[tuple, MatrixF] = {}
    kernel_elements = []
    for m in iso_set.elements or []:
        r = restrict_to_u(vqs, m)
        if not is_isometry(form, r):
            raise InvariantViolation("restriction of an isometry is not an isometry of U")
        images.setdefault(r.key(), r)
        if r.key() == identity:
            kernel_elements.append(m)

    image = IsometrySet(
        space=form, order=len(images), method=Method.RESTRICTED,
        elements=[images[k] for k in sorted(images)],
    )
    kernel = IsometrySet(space=vqs, order=len(kernel_elements), method=Method.RESTRICTED, elements=kernel_elements)
    if image.order * kernel.order != iso_set.order:
        raise InvariantViolation("image and kernel orders do not multiply to the group order")
    if images and not check_group_axioms(image):
        raise InvariantViolation("image of the restriction is not a group")

    surjective = None
    if budget is not None:
        surjective = image.keys() == enumerate_isometries(form, budget).keys()
    return RestrictionResult(image=image, kernel=kernel, surjective=surjective)


def kernel_of_restriction(vqs: VirtualQuadraticSpace, iso_set: IsometrySet) -> IsometrySet:
    return restriction_map(vqs, iso_set).kernel


def check_group_axioms(iso_set: IsometrySet, rng: Optional[random.Random] = None, samples: int = 100) -> bool:
    """
    Identity, closure and inverses.

    Exhaustive for orders up to 200, otherwise on `samples` random pairs.
    """
    elements = iso_set.elements or []
    if not elements:
        return False
    keys = iso_set.keys()
    n = elements[0].rows
    if MatrixF.identity(elements[0].spec, n).key() not in keys:
        logger.warning("identity missing from isometry set")
        return False
    if len(elements) <= 200:
        pairs = [(a, b) for a in elements for b in elements]
    else:
        rng = rng or random.Random(0)
        pairs = [(rng.choice(elements), rng.choice(elements)) for _ in range(samples)]
    for a, b in pairs:
        if (a @ b).key() not in keys:
            logger.warning("isometry set not closed under products")
            return False
    singles = elements if len(elements) <= 200 else [a for a, _ in pairs]
    for a in singles:
        if inverse(a).key() not in keys:
            logger.warning("isometry set not closed under inverses")
            return False
    return True


def fixes_pointwise(iso_set: IsometrySet, s: SubspaceF) -> bool:
    vectors = s.vectors()
    return all(apply(m, w) == w for m in iso_set.elements or [] for w in vectors)


def _representative(q: int, n: int, epsilon: Optional[int]) -> QuadraticSpace:
    spec = field_for_order(q)
    if epsilon is None:
        return canonical_representative(spec, n, FormKind.ODD_DIM)
    return canonical_representative(spec, n, FormKind.PLUS if epsilon > 0 else FormKind.MINUS)


def enumerate_cell(
    q: int, n: int, epsilon: Optional[int], semantics: Semantics, budget: config.Budget
) -> IsometrySet:
    """The group of the canonical representative; Iso(V, U) of its embedding for virtual semantics."""
    rep = _representative(q, n, epsilon)
    if semantics == Semantics.VIRTUAL:
        return enumerate_virtual_isometries(embed_ambient(rep), budget)
    return enumerate_isometries(rep, budget)


def verify_cell(
    q: int, n: int, epsilon: Optional[int], semantics: Semantics, budget: config.Budget
) -> GroupOrderReport:
    report = GroupOrderReport(
        q=q, k=n // 2, epsilon=epsilon, dim=n, semantics=semantics,
        formula_value=order_formula(q, n, epsilon, semantics),
    )
    try:
        iso = enumerate_cell(q, n, epsilon, semantics, budget)
    except (BudgetExceeded, FieldTooLarge) as e:
        report.reason = e.msg
        logger.info("skipped q=%d dim=%d %s: %s", q, n, semantics.value, e.msg)
        return report
    report.enumerated_value = iso.order
    report.status = CheckStatus.MATCH if report.match else CheckStatus.MISMATCH
    if not report.match:
        logger.warning(
            "q=%d dim=%d %s: formula %d, enumerated %d",
            q, n, semantics.value, report.formula_value, iso.order,
        )
    return report


def verify_orders(
    qs: Iterable[int], dims: Iterable[int], budget: config.Budget = config.DEFAULT_BUDGET
) -> list[GroupOrderReport]:
    """
    Compare order formulas with enumeration on canonical representatives.

    Even dims give a plus and a minus row. Odd dims give a classical row
    for Iso(U) and a virtual row for Iso(V, U) on the embedded ambient.
    Cells over budget are reported as skipped.
    """
    reports = []
    dims = list(dims)
    for q in qs:
        for n in dims:
            if n % 2 == 0:
                cells = [(1, Semantics.CLASSICAL), (-1, Semantics.CLASSICAL)]
            else:
                cells = [(None, Semantics.CLASSICAL), (None, Semantics.VIRTUAL)]
            for epsilon, semantics in cells:
                reports.append(verify_cell(q, n, epsilon, semantics, budget))
    return reports
