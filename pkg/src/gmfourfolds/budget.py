"""Computation budgets for the engine.

Every potentially long-running engine call (Groebner bases, resolutions,
saturations) accepts an optional Budget and raises BudgetExceededError
instead of hanging when the step allowance runs out.
"""

from __future__ import annotations


class BudgetExceededError(RuntimeError):
    """Raised when a computation exhausts its step budget."""

    def __init__(self, where: str, steps: int):
        super().__init__(f"computation budget exhausted in {where} after {steps} steps")
        self.where = where
        self.steps = steps


class Budget:
    """A mutable step counter shared across nested engine calls.

    steps counts polynomial reduction steps, the dominant cost unit.
    """

    __slots__ = ("limit", "steps")

    def __init__(self, limit: int | None = None):
        self.limit = limit
        self.steps = 0

    def charge(self, n: int = 1, where: str = "groebner") -> None:
        self.steps += n
        if self.limit is not None and self.steps > self.limit:
            raise BudgetExceededError(where, self.steps)

    def __repr__(self):
        return f"Budget(limit={self.limit}, steps={self.steps})"


#: shared unlimited budget used when callers do not pass one
FREE = Budget(None)
