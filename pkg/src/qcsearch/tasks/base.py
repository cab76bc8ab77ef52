"""Common task interface: a loss over register unitaries plus search metadata."""

from __future__ import annotations

import numpy as np

from ..circuit import Circuit
from ..descent import Objective, VectorObjective


class Task:
    """Anything the searchers can optimize.

    Subclasses set ``n_qubits``, ``loss_scale`` (the normalizer applied to
    losses before exponential scoring) and ``default_success_tol``, and
    implement ``loss_of_unitary``. Differentiable tasks also return an
    objective for gradient-based parameter optimization.
    """

    n_qubits: int
    loss_scale: float = 1.0
    default_success_tol: float = 1e-6

    def loss_of_unitary(self, u: np.ndarray) -> float:
        raise NotImplementedError

    def loss_of_circuit(self, c: Circuit) -> float:
        from ..circuit import evaluate

        return self.loss_of_unitary(evaluate(c))

    def objective(self) -> Objective | None:
        """(loss, gradient) objective for parametric optimization, if differentiable."""
        return None

    def objective_with_prefix(self, prefix: np.ndarray) -> Objective | None:
        """Objective over a circuit applied after a fixed prefix unitary.

        The optimized operator is evaluate(c) @ prefix; the search uses this
        to tune a newly appended gate without re-evaluating the whole
        witness circuit. None when the task is not differentiable.
        """
        return None

    def probe_objective(self, prefix: np.ndarray, gate) -> "VectorObjective | None":
        """Vector objective for one gate appended after `prefix`.

        Maps the gate's parameter vector to (loss, gradient) of the task
        loss at embed(gate(params)) @ prefix. The default routes through
        objective_with_prefix; tasks may override with a cheaper form.
        """
        from ..circuit import empty_circuit

        objective = self.objective_with_prefix(prefix)
        if objective is None:
            return None
        probe = empty_circuit(self.n_qubits).extended(gate)
        return lambda p: objective(probe.with_params(p))
