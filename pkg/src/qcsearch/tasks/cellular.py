"""Elementary cellular automata and the state-preparation task built on them.

A rule number 0..255 encodes the successor bit for each of the 8 possible
(left, self, right) neighborhoods. The state-preparation task asks for a
3-qubit circuit whose action on |000> has probability support exactly on
the basis states whose index carries a set rule bit: basis index i (with
qubit 0 as the high bit) stands for neighborhood pattern i.
"""

from __future__ import annotations

import numpy as np

from ..linalg import basis_state
from .base import Task


def wolfram_code(rule: int) -> tuple[int, ...]:
    """The rule's 8 output bits ordered by pattern 111, 110, ..., 000."""
    if not 0 <= rule <= 255:
        raise ValueError(f"rule must be in 0..255, got {rule}")
    return tuple((rule >> p) & 1 for p in range(7, -1, -1))


def rule_from_code(code_bits) -> int:
    """Inverse of wolfram_code."""
    bits = tuple(code_bits)
    if len(bits) != 8 or any(b not in (0, 1) for b in bits):
        raise ValueError("code must be 8 binary values")
    return sum(b << (7 - i) for i, b in enumerate(bits))


def ca_step(cells, rule: int) -> list[int]:
    """One synchronous update with periodic boundary."""
    cells = list(cells)
    n = len(cells)
    if n < 3:
        raise ValueError("need at least 3 cells")
    wolfram_code(rule)  # range check
    out = []
    for i in range(n):
        pattern = 4 * cells[(i - 1) % n] + 2 * cells[i] + cells[(i + 1) % n]
        out.append((rule >> pattern) & 1)
    return out


def ca_evolve(width: int, steps: int, rule: int, init="center",
              rng: np.random.Generator | None = None) -> list[list[int]]:
    """Rows of the spacetime raster, the initial row first."""
    if width < 3:
        raise ValueError("need at least 3 cells")
    if init == "center":
        row = [0] * width
        row[width // 2] = 1
    elif init == "random":
        if rng is None:
            raise ValueError("random init needs an rng")
        row = [int(b) for b in rng.integers(0, 2, size=width)]
    else:
        row = list(init)
    rows = [row]
    for _ in range(steps):
        row = ca_step(row, rule)
        rows.append(row)
    return rows


class CaStatePrepTask(Task):
    """Prepare a 3-qubit state whose support encodes a rule's 8-bit code.

    Rule 0 is rejected: a normalized state always has some probability above
    any threshold < 1/8, so the all-zero code admits no circuit.
    """

    n_qubits = 3
    loss_scale = 1.0
    default_success_tol = 0.0  # success means an exact support match

    def __init__(self, rule: int, threshold: float = 1e-4):
        code = wolfram_code(rule)
        if rule == 0:
            raise ValueError(
                "rule 0 is unrepresentable: state probabilities sum to 1, so at least "
                "one basis state always exceeds the support threshold")
        self.rule = rule
        self.code_bits = code
        self.threshold = float(threshold)
        # target support by basis index: index i <-> neighborhood pattern i
        self._target = np.array([(rule >> i) & 1 for i in range(8)], dtype=int)

    def support_of_unitary(self, u: np.ndarray) -> np.ndarray:
        probs = np.abs(u[:, 0]) ** 2  # action on |000>
        return (probs > self.threshold).astype(int)

    def loss_of_unitary(self, u: np.ndarray) -> float:
        """Fraction of the 8 support bits that disagree with the rule code."""
        return float(np.sum(self.support_of_unitary(u) != self._target)) / 8.0


def ca_loss(c, task: CaStatePrepTask) -> float:
    from ..circuit import evaluate

    if c.n_qubits != 3:
        raise ValueError("cellular-automaton state preparation is a 3-qubit task")
    state = evaluate(c) @ basis_state(0, 8)
    probs = np.abs(state) ** 2
    readout = (probs > task.threshold).astype(int)
    return float(np.sum(readout != task._target)) / 8.0
