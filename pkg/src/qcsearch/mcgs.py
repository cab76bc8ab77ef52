"""Monte Carlo graph search over the circuit graph.

Each iteration scores the nodes, draws one by its inclusion probability,
applies an elementary gate drawn uniformly among the operations not yet
explored at that node, and grows the graph (reusing an existing node when
the resulting unitary is epsilon-equivalent to one seen before). Nodes with
every operation explored drop out of the selection pool, so no sample is
ever spent re-deriving a known edge. Newly appended parametric gates are
tuned by gradient descent before deduplication, with the parent's
parameters frozen at the values bound into its edges. The search stops when
a node beats the success threshold, and the answer is extracted as a
shortest path in the graph.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

import numpy as np

from .descent import DescentConfig, minimize_vector
from .gates import GateInstance
from .graph import CircuitGraph
from .report import SampleBudget, SearchReport, from_budget
from .tasks.base import Task


def quality_score(loss: float, beta: float) -> float:
    """exp(-beta * loss): strictly positive, decreasing in the loss."""
    if loss < 0:
        raise ValueError("loss must be nonnegative")
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    return float(np.exp(-beta * loss))


def inclusion_probabilities(scores) -> np.ndarray:
    """pi_i = s_i / sum_j s_j."""
    s = np.asarray(scores, dtype=float)
    total = s.sum()
    if total <= 0:
        raise ValueError("inclusion probabilities need at least one positive score")
    return s / total


def select_node(g: CircuitGraph, rng: np.random.Generator) -> int:
    """One categorical draw over all graph nodes by inclusion probability."""
    cum = np.cumsum([n.score for n in g.nodes])
    r = rng.random() * float(cum[-1])
    return min(int(np.searchsorted(cum, r, side="right")), len(g.nodes) - 1)


class _ScoreTree:
    """Fenwick tree over per-node sampling weights: append, zero, draw."""

    def __init__(self):
        self._tree = [0.0]
        self._vals: list[float] = []

    def __len__(self) -> int:
        return len(self._vals)

    def append(self, w: float) -> None:
        self._vals.append(w)
        i = len(self._vals)
        lb = i & (-i)
        self._tree.append(w + self.prefix(i - 1) - self.prefix(i - lb))

    def prefix(self, i: int) -> float:
        s = 0.0
        while i > 0:
            s += self._tree[i]
            i -= i & (-i)
        return s

    @property
    def total(self) -> float:
        return self.prefix(len(self._vals))

    def zero(self, idx: int) -> None:
        delta = -self._vals[idx]
        self._vals[idx] = 0.0
        i = idx + 1
        n = len(self._vals)
        while i <= n:
            self._tree[i] += delta
            i += i & (-i)

    def draw(self, r: float) -> int:
        """0-based index i with prefix(i) <= r < prefix(i+1), skipping zero weights."""
        n = len(self._vals)
        idx = 0
        bit = 1 << max(n.bit_length() - 1, 0)
        while bit:
            nxt = idx + bit
            if nxt <= n and self._tree[nxt] <= r:
                idx = nxt
                r -= self._tree[nxt]
            bit >>= 1
        while idx < n and self._vals[idx] == 0.0:
            idx += 1  # float boundary landed on an exhausted node
        if idx >= n:
            idx = max(i for i in range(n) if self._vals[i] > 0.0)
        return idx


@dataclass(frozen=True)
class McgsConfig:
    gate_set: tuple[GateInstance, ...]
    max_samples: int
    eps: float = 1e-6
    beta: float = 2.0
    success_tol: float | None = None  # None: use the task's default
    optimize_params: bool = True
    rng_seed: int = 0
    batch_mode: bool = False  # Bernoulli inclusion of many nodes per round
    descent: DescentConfig = field(default_factory=DescentConfig)

    def __post_init__(self):
        if self.max_samples < 1:
            raise ValueError("max_samples must be at least 1")
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        if not self.gate_set:
            raise ValueError("gate set is empty")


class McgsSearch:
    """One search run; holds the graph, the rng, and the budget."""

    def __init__(self, task: Task, cfg: McgsConfig):
        for g in cfg.gate_set:
            if any(q >= task.n_qubits for q in g.wires):
                raise ValueError(f"gate {g.label} does not fit a {task.n_qubits}-qubit register")
        self.task = task
        self.cfg = cfg
        self.success_tol = (task.default_success_tol if cfg.success_tol is None
                            else cfg.success_tol)
        self.rng = np.random.default_rng(cfg.rng_seed)
        self.budget = SampleBudget(cfg.max_samples)
        self.gradient_steps = 0
        n = task.n_qubits
        root_loss = task.loss_of_unitary(np.eye(2**n, dtype=complex))
        root_score = quality_score(root_loss / task.loss_scale, cfg.beta)
        self.graph = CircuitGraph(n, cfg.eps, root_loss, root_score)
        # fixed gates keep one embedded matrix for the whole run
        self._fixed = [g.embedded((), n) if g.spec.n_params == 0 else None
                       for g in cfg.gate_set]
        self._tree = _ScoreTree()
        self._tree.append(root_score)
        self._unexplored: list[list[int]] = [list(range(len(cfg.gate_set)))]

    # -- one iteration ---

    def select(self) -> int:
        """Draw a node with unexplored operations by inclusion probability."""
        total = self._tree.total
        if total <= 0:
            raise ValueError("every node is fully explored")
        return self._tree.draw(self.rng.random() * total)

    def expand(self, node_id: int) -> tuple[int, bool]:
        """Charge one sample and apply an unexplored gate drawn uniformly."""
        pool = self._unexplored[node_id]
        if not pool:
            raise ValueError(f"node {node_id} has no unexplored operations")
        self.budget.charge()
        k = int(self.rng.integers(len(pool)))
        gidx = pool[k]
        pool[k] = pool[-1]
        pool.pop()
        if not pool:
            self._tree.zero(node_id)
        gate = self.cfg.gate_set[gidx]
        parent_u = self.graph.nodes[node_id].unitary
        if gate.spec.n_params == 0:
            bound: tuple[float, ...] = ()
            u = self._fixed[gidx] @ parent_u
        else:
            bound = (0.0,) * gate.spec.n_params  # identity-adjacent start
            fn = (self.task.probe_objective(parent_u, gate)
                  if self.cfg.optimize_params else None)
            if fn is not None:
                params, _, iters = minimize_vector(np.zeros(gate.spec.n_params),
                                                   fn, self.cfg.descent)
                self.gradient_steps += iters
                bound = tuple(float(p) for p in params)
            u = gate.embedded(bound, self.task.n_qubits) @ parent_u
        loss = self.task.loss_of_unitary(u)
        score = quality_score(loss / self.task.loss_scale, self.cfg.beta)
        child, was_new = self.graph.insert(node_id, gate, bound, u, loss, score)
        if was_new:
            self._tree.append(score)
            self._unexplored.append(list(range(len(self.cfg.gate_set))))
        self.budget.observe(loss, len(self.graph.nodes), len(self.graph.edges))
        return child, was_new

    # -- full run ---

    def run(self) -> SearchReport:
        g = self.graph
        self.budget.observe(g.nodes[0].loss, 1, 0)
        if g.nodes[0].loss <= self.success_tol:
            return self._report(True, 0)
        while not self.budget.exhausted and self._tree.total > 0:
            hit = self._round()
            if hit is not None:
                return self._report(True, hit)
        return self._report(False, None)

    def _round(self) -> int | None:
        """One selection round; returns a node id on success."""
        if not self.cfg.batch_mode:
            return self._try(self.select())
        probs = np.array(self._tree._vals) / self._tree.total
        included = np.nonzero(self.rng.random(len(probs)) < probs)[0]
        for nid in included:
            if self.budget.exhausted or not self._unexplored[int(nid)]:
                continue
            hit = self._try(int(nid))
            if hit is not None:
                return hit
        return None

    def _try(self, nid: int) -> int | None:
        child, was_new = self.expand(nid)
        if was_new and self.graph.nodes[child].loss <= self.success_tol:
            return child
        return None

    def _report(self, success: bool, target: int | None) -> SearchReport:
        circuit = self.graph.shortest_path_circuit(target) if target is not None else None
        return from_budget(
            "mcgs", self.budget, success, circuit,
            nodes=len(self.graph.nodes), edges=len(self.graph.edges),
            gradient_steps=self.gradient_steps, seed=self.cfg.rng_seed)


def run_search(task: Task, cfg: McgsConfig) -> SearchReport:
    """Run the full select-expand-score loop; deterministic given the seed."""
    return McgsSearch(task, cfg).run()
