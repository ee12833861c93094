"""Runtime configuration read from the environment."""

import os
from dataclasses import dataclass, replace
from typing import Optional


VQS_BUDGET_NODES = int(os.getenv('VQS_BUDGET_NODES', str(10**8)))
VQS_MAX_DIM = int(os.getenv('VQS_MAX_DIM', '6'))
VQS_MAX_Q = int(os.getenv('VQS_MAX_Q', '5'))
VQS_MAX_SCAN = int(os.getenv('VQS_MAX_SCAN', str(10**6)))
VQS_MAX_FIELD_ORDER = int(os.getenv('VQS_MAX_FIELD_ORDER', str(2**16)))
VQS_TABLE_LIMIT = int(os.getenv('VQS_TABLE_LIMIT', '256'))
VQS_SQRT_SEARCH_LIMIT = int(os.getenv('VQS_SQRT_SEARCH_LIMIT', '1024'))
VQS_LOG_LEVEL = os.getenv('VQS_LOG_LEVEL', 'WARNING')


@dataclass(frozen=True)
class Budget:
    """Caps on exhaustive work. Exceeding any of them raises BudgetExceeded."""
    max_nodes: int = VQS_BUDGET_NODES
    max_dim: int = VQS_MAX_DIM
    max_q: int = VQS_MAX_Q
    max_scan: int = VQS_MAX_SCAN

    @classmethod
    def from_env(cls) -> 'Budget':
        """Budget built from the current environment, not the import-time one."""
        return cls(
            max_nodes=int(os.getenv('VQS_BUDGET_NODES', str(VQS_BUDGET_NODES))),
            max_dim=int(os.getenv('VQS_MAX_DIM', str(VQS_MAX_DIM))),
            max_q=int(os.getenv('VQS_MAX_Q', str(VQS_MAX_Q))),
            max_scan=int(os.getenv('VQS_MAX_SCAN', str(VQS_MAX_SCAN))),
        )

    def with_overrides(
        self,
        max_nodes: Optional[int] = None,
        max_dim: Optional[int] = None,
        max_q: Optional[int] = None,
        max_scan: Optional[int] = None,
    ) -> 'Budget':
        changes = {
            name: value
            for name, value in (
                ('max_nodes', max_nodes),
                ('max_dim', max_dim),
                ('max_q', max_q),
                ('max_scan', max_scan),
            )
            if value is not None
        }
        return replace(self, **changes)


DEFAULT_BUDGET = Budget()
