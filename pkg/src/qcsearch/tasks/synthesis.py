"""Unitary-synthesis task: match a fixed target operator in Frobenius distance."""

from __future__ import annotations

import numpy as np

from ..descent import Objective, frobenius_objective
from ..linalg import DimensionError, frobenius_distance, is_unitary, n_qubits_of
from .base import Task


def dft_matrix(dim: int) -> np.ndarray:
    """Unitary DFT: entries omega^(jk)/sqrt(dim) with omega = exp(-2*pi*i/dim)."""
    n_qubits_of(dim)  # power-of-two check
    j, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    omega = np.exp(-2j * np.pi / dim)
    return omega ** (j * k) / np.sqrt(dim)


class UnitarySynthesisTask(Task):
    def __init__(self, target: np.ndarray, tol: float = 1e-6):
        if not is_unitary(target, 1e-9):
            raise DimensionError("synthesis target must be unitary (tol 1e-9)")
        self.target = target
        self.n_qubits = n_qubits_of(target.shape[0])
        # losses are normalized by sqrt(2 * dim) so scores compare across register sizes
        self.loss_scale = float(np.sqrt(2.0 * target.shape[0]))
        self.default_success_tol = tol

    def loss_of_unitary(self, u: np.ndarray) -> float:
        return frobenius_distance(self.target, u)

    def objective(self) -> Objective:
        return frobenius_objective(self.target)

    def objective_with_prefix(self, prefix: np.ndarray) -> Objective:
        from ..circuit import circuit_jacobian, evaluate
        from ..descent import ZERO_LOSS

        def objective(c):
            u = evaluate(c) @ prefix
            diff = u - self.target
            l = float(np.linalg.norm(diff))
            if l <= ZERO_LOSS:
                return l, np.zeros(len(c.params))
            grad = np.array([np.real(np.vdot(diff, dj @ prefix)) / l
                             for dj in circuit_jacobian(c)])
            return l, grad

        return objective

    def probe_objective(self, prefix: np.ndarray, gate):
        """Scalar reduction of loss(embed(gate(p)) @ prefix).

        With E = embed(M), loss^2 = 2d - 2 Re tr(E^dag K) for K = O P^dag,
        and tr(E^dag K) = <M, W> with W the gather-sum of K over the
        embedding pattern; the descent then runs on gate-sized matrices.
        """
        from ..descent import ZERO_LOSS
        from ..linalg import _embed_pattern

        idx, mask = _embed_pattern(gate.wires, self.n_qubits)
        k = self.target @ prefix.conj().T
        w_arity = gate.spec.arity
        w = np.zeros(4**w_arity, dtype=complex)
        np.add.at(w, idx[mask], k[mask])
        w = w.reshape(2**w_arity, 2**w_arity)
        const = 2.0 * self.target.shape[0]

        def objective(p):
            params = tuple(p)
            m = gate.spec.matrix(params)
            l = float(np.sqrt(max(const - 2.0 * np.real(np.vdot(m, w)), 0.0)))
            if l <= ZERO_LOSS:
                return l, np.zeros(len(params))
            grad = np.array([-np.real(np.vdot(dm, w)) / l
                             for dm in gate.spec.jacobians(params)])
            return l, grad

        return objective
