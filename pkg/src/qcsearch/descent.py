"""Continuous-parameter optimization of circuit parameters.

The reference loss is the Frobenius distance between a target operator and
the circuit's unitary; its gradient has the closed form
Re tr[(U-O)^dag dU/dphi] / loss, derived by the chain rule and validated
against finite differences in the test suite. Optimization is plain
fixed-step gradient descent with a monotonicity rollback as the only
safeguard. Other differentiable losses (classification) plug into the same
iteration through the objective-function interface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .circuit import Circuit, circuit_jacobian, evaluate

ZERO_LOSS = 1e-12  # below this the norm is treated as converged (non-differentiable at 0)

# Objectives map a circuit (public API) or a raw parameter vector (search
# internals) to (loss, gradient w.r.t. the parameter vector).
Objective = Callable[[Circuit], tuple[float, np.ndarray]]
VectorObjective = Callable[[np.ndarray], tuple[float, np.ndarray]]


@dataclass(frozen=True)
class DescentConfig:
    step: float = 0.2
    max_iters: int = 100
    grad_tol: float = 1e-8

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step size must be positive")


def frobenius_objective(target: np.ndarray) -> Objective:
    def objective(c: Circuit) -> tuple[float, np.ndarray]:
        u = evaluate(c)
        diff = u - target
        l = float(np.linalg.norm(diff))
        if l <= ZERO_LOSS:
            return l, np.zeros(len(c.params))
        grad = np.array([np.real(np.vdot(diff, dj)) / l for dj in circuit_jacobian(c)])
        return l, grad

    return objective


def loss(c: Circuit, target: np.ndarray) -> float:
    """Frobenius distance between the target and the circuit unitary."""
    from .linalg import frobenius_distance

    return frobenius_distance(target, evaluate(c))


def loss_gradient(c: Circuit, target: np.ndarray) -> np.ndarray:
    """d loss / d phi_j per slot; the zero vector at (numerically) zero loss."""
    return frobenius_objective(target)(c)[1]


def minimize_vector(p0: np.ndarray, fn: VectorObjective,
                    cfg: DescentConfig = DescentConfig(),
                    mask: np.ndarray | None = None
                    ) -> tuple[np.ndarray, float, int]:
    """Fixed-step descent p <- p - step * grad on a vector objective.

    ``mask`` (boolean) restricts updates to a subset of coordinates. Stops
    at max_iters, at grad_tol, or when a step would increase the loss, in
    which case the step is rolled back. Returns
    (params, final loss, accepted iterations).
    """
    params = np.array(p0, dtype=float)
    current, grad = fn(params)
    iters = 0
    for _ in range(cfg.max_iters):
        g = grad if mask is None else grad * mask
        if float(np.linalg.norm(g)) < cfg.grad_tol:
            break
        trial = params - cfg.step * g
        trial_loss, trial_grad = fn(trial)
        if trial_loss > current:
            break  # rollback: keep the last monotone iterate
        params, current, grad = trial, trial_loss, trial_grad
        iters += 1
    return params, current, iters


def minimize_objective(c: Circuit, objective: Objective,
                       cfg: DescentConfig = DescentConfig(),
                       free_slots: tuple[int, ...] | None = None
                       ) -> tuple[np.ndarray, float, int]:
    """Descent over a circuit's parameter vector on a circuit objective."""
    mask = None
    if free_slots is not None:
        mask = np.zeros(len(c.params), dtype=bool)
        mask[list(free_slots)] = True
    return minimize_vector(np.array(c.params, dtype=float),
                           lambda p: objective(c.with_params(p)), cfg, mask)


def gradient_descent(c: Circuit, target: np.ndarray,
                     cfg: DescentConfig = DescentConfig(),
                     free_slots: tuple[int, ...] | None = None
                     ) -> tuple[np.ndarray, float, int]:
    """Descent on the Frobenius loss against a fixed target operator."""
    return minimize_objective(c, frobenius_objective(target), cfg, free_slots)
