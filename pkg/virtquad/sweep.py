"""Verification sweep with a fluent dot-notation API."""

import logging
from typing import Optional

from . import config, isometry
from .models import CheckStatus, GroupOrderReport, Semantics, SweepResult
from .utils import prime_powers

logger = logging.getLogger(__name__)


class VerificationSweep:
    """A lazily executed comparison of order formulas against enumeration."""

    def __init__(self, qmax: int, dimmax: int, budget: Optional[config.Budget] = None, dimmin: int = 1):
        self.qmax = qmax
        self.dimmax = dimmax
        self.dimmin = dimmin
        self.budget = budget or config.Budget.from_env()
        self._reports: Optional[list[GroupOrderReport]] = None

    def _execute(self):
        if self._reports is not None:
            return
        qs = prime_powers(self.qmax)
        dims = range(self.dimmin, self.dimmax + 1)
        logger.info("verifying q in %s, dim %d..%d", qs, self.dimmin, self.dimmax)
        self._reports = isometry.verify_orders(qs, dims, self.budget)

    def get_reports(self, semantics: Optional[Semantics] = None) -> list[GroupOrderReport]:
        self._execute()
        if semantics is None:
            return list(self._reports)
        return [r for r in self._reports if r.semantics == semantics]

    def all(self) -> 'FilteredSweep':
        return FilteredSweep(self)

    def classical(self) -> 'FilteredSweep':
        """Rows about Iso(U): even dims and the classical odd-dim rows."""
        return FilteredSweep(self, semantics=Semantics.CLASSICAL)

    def virtual(self) -> 'FilteredSweep':
        """Odd-dim rows about Iso(V, U)."""
        return FilteredSweep(self, semantics=Semantics.VIRTUAL)

    def mismatches(self) -> 'FilteredSweep':
        return FilteredSweep(self, status=CheckStatus.MISMATCH)

    def skipped(self) -> 'FilteredSweep':
        return FilteredSweep(self, status=CheckStatus.SKIPPED)


class FilteredSweep:
    """A view of a sweep narrowed by semantics and/or status."""

    def __init__(
        self,
        parent: VerificationSweep,
        semantics: Optional[Semantics] = None,
        status: Optional[CheckStatus] = None,
    ):
        self.parent = parent
        self.semantics_filter = semantics
        self.status_filter = status

    @property
    def reports(self) -> list[GroupOrderReport]:
        reports = self.parent.get_reports(self.semantics_filter)
        if self.status_filter is not None:
            reports = [r for r in reports if r.status == self.status_filter]
        return reports

    @property
    def result(self) -> SweepResult:
        return SweepResult(reports=self.reports, metadata=self.metadata())

    def classical(self) -> 'FilteredSweep':
        self.semantics_filter = Semantics.CLASSICAL
        return self

    def virtual(self) -> 'FilteredSweep':
        self.semantics_filter = Semantics.VIRTUAL
        return self

    def mismatches(self) -> 'FilteredSweep':
        self.status_filter = CheckStatus.MISMATCH
        return self

    def skipped(self) -> 'FilteredSweep':
        self.status_filter = CheckStatus.SKIPPED
        return self

    def metadata(self) -> dict:
        """Sweep ranges, budget, and status/semantics breakdowns of the current view."""
        reports = self.reports
        status = {s.value: 0 for s in CheckStatus}
        semantics = {s.value: 0 for s in Semantics}
        for r in reports:
            status[r.status.value] += 1
            semantics[r.semantics.value] += 1
        budget = self.parent.budget
        return {
            "qmax": self.parent.qmax,
            "dimmin": self.parent.dimmin,
            "dimmax": self.parent.dimmax,
            "total_reports": len(reports),
            "status_breakdown": status,
            "semantics_breakdown": semantics,
            "budget": {
                "max_nodes": budget.max_nodes,
                "max_dim": budget.max_dim,
                "max_q": budget.max_q,
                "max_scan": budget.max_scan,
            },
        }

    def export(self, filename: str, format: str = "json"):
        self.result.export(filename, format)
        logger.info("exported %d reports to %s", len(self.reports), filename)

    def __repr__(self) -> str:
        lines = [f"VerificationSweep(qmax={self.parent.qmax}, dimmax={self.parent.dimmax})"]
        for r in self.reports:
            enumerated = "-" if r.enumerated_value is None else str(r.enumerated_value)
            lines.append(
                f"  q={r.q} dim={r.dim} {r.type_label:>3} {r.semantics.value:<9} "
                f"formula={r.formula_value} enumerated={enumerated} {r.status.value}"
            )
        return "\n".join(lines)


def sweep(qmax: int, dimmax: int, budget: Optional[config.Budget] = None) -> VerificationSweep:
    """
    Start a verification sweep.

    Examples:
        sweep(3, 4).all().reports
        sweep(4, 3).virtual().metadata()
        sweep(5, 4).mismatches().export("mismatches.csv", "csv")
    """
    return VerificationSweep(qmax, dimmax, budget)
