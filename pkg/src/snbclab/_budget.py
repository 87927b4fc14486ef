"""Step budgets shared by the enumerators."""

from __future__ import annotations

import os

DEFAULT_BUDGET = 10**8
BUDGET_ENV = "SNBCLAB_BUDGET"


class BudgetExceeded(RuntimeError):
    pass


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(float(raw)) if raw else DEFAULT_BUDGET


class Budget:
    def __init__(self, cap: int | None = None):
        self.cap = default_budget() if cap is None else cap
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.cap:
            raise BudgetExceeded(f"step budget {self.cap} exhausted")
