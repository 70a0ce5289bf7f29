"""
Migration budget: the sum of step distances bounds the distance to the original
after any number of migrations.
"""

import math
from dataclasses import dataclass, field
from typing import List


@dataclass(frozen=True)
class MigrationBudget:
    threshold: float
    spent: float = 0.0
    steps: tuple = field(default=())

    def __post_init__(self):
        if self.threshold < 0 or self.spent < 0:
            raise ValueError("Threshold and spent distance must be >= 0")

    def update(self, step_distance: float) -> "MigrationBudget":
        """New budget with one more migration step accounted for."""
        if step_distance < 0:
            raise ValueError("Step distance must be >= 0")
        return MigrationBudget(self.threshold, self.spent + step_distance, self.steps + (step_distance,))

    def update_all(self, step_distances: List[float]) -> "MigrationBudget":
        budget = self
        for step in step_distances:
            budget = budget.update(step)
        return budget

    @property
    def bound(self) -> float:
        """Upper bound on the distance between the current image and the original."""
        return self.spent

    @property
    def exhausted(self) -> bool:
        return self.spent > self.threshold

    @property
    def remaining(self) -> float:
        return self.threshold - self.spent

    def max_uniform_steps(self, step_distance: float) -> int:
        """How many further migrations of a given cost keep the bound within the threshold."""
        if step_distance < 0:
            raise ValueError("Step distance must be >= 0")
        if self.exhausted:
            return 0
        if step_distance == 0:
            raise ValueError("A zero-cost step never exhausts the budget")
        return math.floor(self.remaining / step_distance)
