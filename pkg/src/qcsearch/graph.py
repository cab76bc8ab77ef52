"""The growing circuit graph: deduplicated unitaries as nodes, gates as edges.

Nodes hold unitaries no two of which are within Frobenius distance eps of
each other; applying a gate to a node either lands on an existing node (a
new edge, possibly closing a cycle) or creates a new one. Equivalence
lookup is served by a quantized-first-row bucket index with the candidate
buckets verified by full Frobenius distance; an explicit linear scan is
kept as the oracle. Shortest-path extraction turns any node back into a
circuit of minimal gate count.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, empty_circuit
from .gates import GateInstance
from .linalg import identity

_PROBE_CAP = 64  # max bucket keys probed per lookup before falling back to a scan


@dataclass
class GraphEdge:
    src: int
    dst: int
    gate: GateInstance
    bound_params: tuple[float, ...]

    @property
    def label(self) -> str:
        if self.bound_params:
            vals = ",".join(repr(v) for v in self.bound_params)
            return f"{self.gate.label}{{{vals}}}"
        return self.gate.label


@dataclass
class GraphNode:
    id: int
    unitary: np.ndarray = field(repr=False)
    loss: float
    score: float
    depth: int
    parent_edge: int | None  # edge index realizing the current best depth


class CircuitGraph:
    def __init__(self, n_qubits: int, eps: float = 1e-6,
                 root_loss: float = 0.0, root_score: float = 1.0):
        self.n_qubits = n_qubits
        self.eps = float(eps)
        self.dim = 2**n_qubits
        decimals = math.ceil(-math.log10(self.eps)) - 1
        self._step = 10.0**-decimals
        self.nodes: list[GraphNode] = []
        self.edges: list[GraphEdge] = []
        self.out_edges: list[list[int]] = []
        self._buckets: dict[tuple[int, ...], list[int]] = {}
        self._edge_ids: set[tuple] = set()
        self._ustack = np.zeros((16, self.dim, self.dim), dtype=complex)
        # fixed random unit vector; |<r, U-V>| <= ||U-V||_F prefilters candidates
        r = np.random.default_rng(0x5EED).standard_normal(2 * self.dim**2)
        r = (r[::2] + 1j * r[1::2])
        self._proj_vec = r / np.linalg.norm(r)
        self._pstack = np.zeros(16, dtype=complex)
        self._add_node(identity(self.dim), root_loss, root_score, depth=0, parent_edge=None)

    # -- storage ---

    def _add_node(self, u: np.ndarray, loss: float, score: float,
                  depth: int, parent_edge: int | None) -> int:
        nid = len(self.nodes)
        self.nodes.append(GraphNode(nid, u, loss, score, depth, parent_edge))
        self.out_edges.append([])
        if nid >= self._ustack.shape[0]:
            grown = np.zeros((2 * self._ustack.shape[0], self.dim, self.dim), dtype=complex)
            grown[:nid] = self._ustack[:nid]
            self._ustack = grown
            pgrown = np.zeros(2 * self._pstack.shape[0], dtype=complex)
            pgrown[:nid] = self._pstack[:nid]
            self._pstack = pgrown
        self._ustack[nid] = u
        self._pstack[nid] = self._proj_vec @ u.reshape(-1)
        self._buckets.setdefault(self._key(u), []).append(nid)
        return nid

    def _row_ints(self, u: np.ndarray, shift: float = 0.0) -> np.ndarray:
        row = u[0]
        flat = np.empty(2 * row.shape[0])
        flat[0::2], flat[1::2] = row.real, row.imag
        return np.rint((flat + shift) / self._step).astype(np.int64)

    def _key(self, u: np.ndarray) -> bytes:
        return self._row_ints(u).tobytes()

    # -- equivalence lookup ---

    def find_equivalent(self, u: np.ndarray, eps: float | None = None) -> int | None:
        """The node within eps of u at minimal distance (ties: lowest id), or None.

        Probes the quantization bucket of every coordinate interval
        [x - eps, x + eps]; a match within eps always lies in one of the
        probed buckets because the interval spans at most two cells.
        """
        eps = self.eps if eps is None else eps
        lo = self._row_ints(u, -eps)
        hi = self._row_ints(u, +eps)
        split = np.nonzero(hi != lo)[0]
        if len(split) > _PROBE_CAP.bit_length() - 1:
            return self._scan(u, eps)
        candidates: list[int] = []
        for bits in range(1 << len(split)):
            key = lo.copy()
            for b, pos in enumerate(split):
                if bits >> b & 1:
                    key[pos] = hi[pos]
            candidates.extend(self._buckets.get(key.tobytes(), ()))
        return self._best_within(u, eps, candidates)

    def _scan(self, u: np.ndarray, eps: float) -> int | None:
        """Linear-scan fallback over all stored unitaries."""
        return self._best_within(u, eps, range(len(self.nodes)))

    def _best_within(self, u: np.ndarray, eps: float, ids) -> int | None:
        if not len(ids):
            return None
        pu = complex(self._proj_vec @ u.reshape(-1))
        slack = eps * (1 + 1e-9) + 1e-15
        if len(ids) <= 64:
            ids = sorted(i for i in ids if abs(self._pstack[i] - pu) <= slack)
        else:
            arr = np.fromiter(ids, dtype=np.intp, count=len(ids))
            arr = arr[np.abs(self._pstack[arr] - pu) <= slack]
            arr.sort()
            ids = arr.tolist()
        if not ids:
            return None
        arr = np.asarray(ids, dtype=np.intp)
        dists = np.sqrt((np.abs(self._ustack[arr] - u) ** 2).sum(axis=(1, 2)))
        k = int(np.argmin(dists))
        return int(arr[k]) if dists[k] <= eps else None

    # -- growth ---

    def insert(self, parent: int, gate: GateInstance, bound: tuple[float, ...],
               u: np.ndarray, loss: float, score: float) -> tuple[int, bool]:
        """Record the application of `gate` (at `bound`) to `parent`.

        Lands on an epsilon-equivalent existing node when one exists (adding
        at most a new edge) and creates a new node otherwise. Returns
        (node id, was_new).
        """
        expected = gate.embedded(bound, self.n_qubits) @ self.nodes[parent].unitary
        if float(np.linalg.norm(u - expected)) > 1e-9:
            raise ValueError("inserted unitary does not match gate applied to parent")
        existing = self.find_equivalent(u)
        if existing is not None:
            self._add_edge(parent, existing, gate, bound)
            return existing, False
        nid = self._add_node(u, loss, score, self.nodes[parent].depth + 1, parent_edge=None)
        eidx = self._add_edge(parent, nid, gate, bound)
        self.nodes[nid].parent_edge = eidx
        return nid, True

    def _add_edge(self, src: int, dst: int, gate: GateInstance,
                  bound: tuple[float, ...]) -> int | None:
        ident = (src, dst, gate.spec.name, gate.wires, bound)
        if ident in self._edge_ids:
            return None
        self._edge_ids.add(ident)
        eidx = len(self.edges)
        self.edges.append(GraphEdge(src, dst, gate, bound))
        self.out_edges[src].append(eidx)
        self._relax(eidx)
        return eidx

    def _relax(self, new_edge: int) -> None:
        """Propagate depth improvements introduced by a shortcut edge."""
        queue = [new_edge]
        while queue:
            eidx = queue.pop(0)
            e = self.edges[eidx]
            cand = self.nodes[e.src].depth + 1
            node = self.nodes[e.dst]
            if cand < node.depth:
                node.depth = cand
                node.parent_edge = eidx
                queue.extend(self.out_edges[e.dst])

    # -- extraction ---

    def witness(self, target: int) -> Circuit:
        """The parent-chain circuit for a node (kept at BFS depth by relaxation)."""
        rev: list[GraphEdge] = []
        nid = target
        while self.nodes[nid].parent_edge is not None:
            e = self.edges[self.nodes[nid].parent_edge]
            rev.append(e)
            nid = e.src
        return self._edges_to_circuit(reversed(rev))

    def shortest_path_circuit(self, target: int) -> Circuit:
        """Breadth-first shortest path from the root, converted to a circuit."""
        if not 0 <= target < len(self.nodes):
            raise KeyError(f"no node {target}")
        parent: dict[int, int] = {0: -1}  # node -> edge index used to reach it
        frontier = [0]
        while frontier and target not in parent:
            nxt: list[int] = []
            for nid in frontier:
                for eidx in self.out_edges[nid]:
                    dst = self.edges[eidx].dst
                    if dst not in parent:
                        parent[dst] = eidx
                        nxt.append(dst)
            frontier = nxt
        if target not in parent:
            raise KeyError(f"node {target} unreachable from the root")
        rev = []
        nid = target
        while parent[nid] != -1:
            e = self.edges[parent[nid]]
            rev.append(e)
            nid = e.src
        return self._edges_to_circuit(reversed(rev))

    def _edges_to_circuit(self, path_edges) -> Circuit:
        c = empty_circuit(self.n_qubits)
        for e in path_edges:
            c = c.extended(GateInstance(e.gate.spec, e.gate.wires), e.bound_params)
        return c

    # -- reporting ---

    def dump_csv(self, nodes_path, edges_path) -> None:
        """Node and edge tables for post-hoc structural analysis."""
        with open(nodes_path, "w", newline="") as f:
            f.write("# schema=graph-nodes.v1\n")
            w = csv.writer(f)
            w.writerow(["id", "depth", "loss", "score", "witness"])
            for n in self.nodes:
                wit = " ".join(self._edge_label_chain(n.id))
                w.writerow([n.id, n.depth, repr(n.loss), repr(n.score), wit])
        with open(edges_path, "w", newline="") as f:
            f.write("# schema=graph-edges.v1\n")
            w = csv.writer(f)
            w.writerow(["src", "dst", "gate"])
            for e in self.edges:
                w.writerow([e.src, e.dst, e.label])

    def _edge_label_chain(self, nid: int) -> list[str]:
        chain = []
        while self.nodes[nid].parent_edge is not None:
            e = self.edges[self.nodes[nid].parent_edge]
            chain.append(e.label)
            nid = e.src
        return list(reversed(chain))


def check_graph_soundness(g: CircuitGraph, pairwise_limit: int = 10_000) -> None:
    """Structural verification pass; raises AssertionError on any violation.

    Checks pairwise node distinctness (> eps), per-edge consistency, and
    witness-depth agreement with an independent BFS. Intended for tests and
    post-run audits on desk-scale graphs.
    """
    n = len(g.nodes)
    if n <= pairwise_limit:
        flat = g._ustack[:n].reshape(n, -1)
        for i in range(n):
            d = np.linalg.norm(flat[i + 1:] - flat[i], axis=1)
            if d.size and d.min() <= g.eps:
                j = i + 1 + int(np.argmin(d))
                raise AssertionError(f"nodes {i} and {j} are within eps ({d.min():.3g})")
    for e in g.edges:
        lhs = e.gate.embedded(e.bound_params, g.n_qubits) @ g.nodes[e.src].unitary
        err = float(np.linalg.norm(lhs - g.nodes[e.dst].unitary))
        if err > g.eps:
            raise AssertionError(f"edge {e.src}->{e.dst} ({e.label}) inconsistent by {err:.3g}")
    dist = _bfs_distances(g)
    for node in g.nodes:
        if dist[node.id] != node.depth:
            raise AssertionError(
                f"node {node.id} depth {node.depth} != BFS distance {dist[node.id]}")


def _bfs_distances(g: CircuitGraph) -> list[int]:
    dist = [-1] * len(g.nodes)
    dist[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for nid in frontier:
            for eidx in g.out_edges[nid]:
                dst = g.edges[eidx].dst
                if dist[dst] == -1:
                    dist[dst] = dist[nid] + 1
                    nxt.append(dst)
        frontier = nxt
    return dist
