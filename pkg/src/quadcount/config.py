"""Experiment configuration (JSON files mirror these fields)."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

from .errors import InvalidInput

CONSTRAINTS = (None, "square", "nonsquare", "squarefree")


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    coeff_bound: int = 5
    n_forms: int = 5
    B_grid: tuple[int, ...] = (1, 2, 5, 10, 20)
    constraint: str | None = None
    classical: bool = True
    brute_budget: int = 401 ** 3
    sliced_max_B: int = 40
    residue_budget: int = 10 ** 9
    workers: int = 1
    out: str | None = None
    epsilon: float = 1e-3
    max_rejections: int = 1000
    forms: tuple = field(default=())  # explicit form objects, used before random ones

    def __post_init__(self):
        if self.coeff_bound < 1 or self.n_forms < 0 or self.workers < 1:
            raise InvalidInput("coeff_bound and workers must be >= 1, n_forms >= 0")
        if self.brute_budget < 1 or self.residue_budget < 1 or self.max_rejections < 1:
            raise InvalidInput("budgets must be positive")
        grid = tuple(int(b) for b in self.B_grid)
        if not grid or grid[0] < 1 or any(a >= b for a, b in zip(grid, grid[1:])):
            raise InvalidInput(f"B grid must be positive and strictly increasing: {grid}")
        object.__setattr__(self, "B_grid", grid)
        object.__setattr__(self, "forms", tuple(self.forms))
        if self.constraint not in CONSTRAINTS:
            raise InvalidInput(f"unknown constraint {self.constraint!r}; choose from {CONSTRAINTS}")
        if self.epsilon < 0:
            raise InvalidInput("epsilon must be nonnegative")

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(obj) - known
        if extra:
            raise InvalidInput(f"unknown config keys: {sorted(extra)}")
        return cls(**obj)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidInput(f"{path}: not valid JSON ({exc})") from None
        return cls.from_dict(obj)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["B_grid"] = list(self.B_grid)
        d["forms"] = list(self.forms)
        return d
