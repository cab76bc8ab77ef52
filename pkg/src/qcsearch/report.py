"""Search reports and the shared sample-budget accounting.

Every optimizer (graph search and all baselines) charges one budget unit
per candidate-circuit evaluation through the same SampleBudget, so reported
sample counts are directly comparable across methods.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .circuit import Circuit, to_text


class BudgetExhausted(RuntimeError):
    pass


class SampleBudget:
    """Counts circuit evaluations and records the best-loss trace."""

    def __init__(self, budget: int):
        if budget < 0:
            raise ValueError("budget must be nonnegative")
        self.budget = budget
        self.samples = 0
        self.best_loss = math.inf
        self.trace: list[tuple[int, float, int, int]] = []  # (sample, loss, nodes, edges)

    @property
    def exhausted(self) -> bool:
        return self.samples >= self.budget

    def charge(self) -> int:
        """Consume one evaluation unit; returns the 1-based sample index."""
        if self.exhausted:
            raise BudgetExhausted(f"budget of {self.budget} samples exhausted")
        self.samples += 1
        return self.samples

    def observe(self, loss: float, nodes: int = 0, edges: int = 0) -> None:
        if loss < self.best_loss:
            self.best_loss = loss
            self.trace.append((self.samples, loss, nodes, edges))


@dataclass
class SearchReport:
    method: str
    samples_used: int
    success: bool
    best_loss: float
    best_loss_trace: list[tuple[int, float, int, int]]
    result_circuit: Circuit | None
    result_length: int | None
    nodes: int
    edges: int
    gradient_steps: int = 0
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "method": self.method,
            "samples_used": self.samples_used,
            "success": self.success,
            "best_loss": self.best_loss,
            "best_loss_trace": [[s, l] for s, l, _, _ in self.best_loss_trace],
            "result_circuit": to_text(self.result_circuit) if self.result_circuit else None,
            "result_length": self.result_length,
            "nodes": self.nodes,
            "edges": self.edges,
            "gradient_steps": self.gradient_steps,
            "seed": self.seed,
        }
        d.update(self.extra)
        return d

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    def write_trace_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            f.write("# schema=trace.v1\n")
            w = csv.writer(f)
            w.writerow(["sample", "best_loss", "nodes", "edges"])
            for s, l, n, e in self.best_loss_trace:
                w.writerow([s, repr(l), n, e])


def from_budget(method: str, sb: SampleBudget, success: bool,
                result_circuit: Circuit | None, nodes: int = 0, edges: int = 0,
                gradient_steps: int = 0, seed: int | None = None,
                extra: dict | None = None) -> SearchReport:
    return SearchReport(
        method=method,
        samples_used=sb.samples,
        success=success,
        best_loss=sb.best_loss,
        best_loss_trace=list(sb.trace),
        result_circuit=result_circuit,
        result_length=len(result_circuit) if result_circuit is not None else None,
        nodes=nodes,
        edges=edges,
        gradient_steps=gradient_steps,
        seed=seed,
        extra=extra or {},
    )
