"""Elementary gate set: fixed and parametric gates with analytic Jacobians.

A GateSpec defines one gate family (matrix as a function of its parameters);
a GateInstance binds a spec to concrete wires, so the same matrix on
different wires counts as a different set member. Gate sets are ordered
lists of instances, either enumerated programmatically or loaded from a
plain-text definition file (see ``parse_gate_set_text``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .linalg import embed, is_unitary

_SQ2 = 1.0 / np.sqrt(2.0)

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2
_S = np.array([[1, 0], [0, 1j]], dtype=complex)
_T = np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex)
_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
_TOFFOLI = np.eye(8, dtype=complex)
_TOFFOLI[[6, 7], :] = _TOFFOLI[[7, 6], :]


def phase_gate_matrix(phi: float) -> np.ndarray:
    """diag(1, e^{i phi})."""
    return np.array([[1, 0], [0, np.exp(1j * phi)]], dtype=complex)


def phase_gate_jacobian(phi: float) -> np.ndarray:
    """Derivative of the phase gate: single entry i*e^{i phi} at (1, 1)."""
    return np.array([[0, 0], [0, 1j * np.exp(1j * phi)]], dtype=complex)


def _rx_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _rx_jacobian(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return 0.5 * np.array([[-s, -1j * c], [-1j * c, -s]], dtype=complex)


def _cp_matrix(phi: float) -> np.ndarray:
    m = np.eye(4, dtype=complex)
    m[3, 3] = np.exp(1j * phi)
    return m


def _cp_jacobian(phi: float) -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    m[3, 3] = 1j * np.exp(1j * phi)
    return m


@dataclass(frozen=True)
class GateSpec:
    """One gate family: name, wire count, and matrix/Jacobian functions."""

    name: str
    arity: int
    n_params: int
    matrix_fn: object = field(repr=False)
    jacobian_fn: object = field(default=None, repr=False)
    symmetric: bool = False  # wildcard enumeration uses unordered wire tuples

    def matrix(self, params: tuple[float, ...] = ()) -> np.ndarray:
        if len(params) != self.n_params:
            raise ValueError(f"{self.name} takes {self.n_params} parameters, got {len(params)}")
        return self.matrix_fn(*params)

    def jacobians(self, params: tuple[float, ...]) -> list[np.ndarray]:
        """One matrix derivative per parameter."""
        if self.n_params == 0:
            return []
        return [self.jacobian_fn(*params)]


def _validate_spec(spec: GateSpec, unitary_tol: float = 1e-10, jac_tol: float = 1e-6) -> GateSpec:
    """Check unitarity and (for parametric specs) the Jacobian at sampled angles."""
    samples = [()] if spec.n_params == 0 else [(t,) for t in (0.0, 0.37, 1.234, np.pi, 4.5)]
    h = 1e-6
    for p in samples:
        m = spec.matrix(p)
        if not is_unitary(m, unitary_tol):
            raise ValueError(f"gate {spec.name} is not unitary at params {p}")
        if spec.n_params:
            analytic = spec.jacobians(p)[0]
            fd = (spec.matrix((p[0] + h,)) - spec.matrix((p[0] - h,))) / (2 * h)
            scale = max(np.max(np.abs(fd)), 1.0)
            if np.max(np.abs(analytic - fd)) / scale > jac_tol:
                raise ValueError(f"gate {spec.name} Jacobian mismatch at params {p}")
    return spec


GATE_LIBRARY: dict[str, GateSpec] = {
    s.name: _validate_spec(s)
    for s in (
        GateSpec("X", 1, 0, lambda: _X),
        GateSpec("Y", 1, 0, lambda: _Y),
        GateSpec("Z", 1, 0, lambda: _Z),
        GateSpec("H", 1, 0, lambda: _H),
        GateSpec("S", 1, 0, lambda: _S),
        GateSpec("T", 1, 0, lambda: _T),
        GateSpec("CNOT", 2, 0, lambda: _CNOT),
        GateSpec("SWAP", 2, 0, lambda: _SWAP, symmetric=True),
        GateSpec("CZ", 2, 0, lambda: _cp_matrix(np.pi), symmetric=True),
        GateSpec("CS", 2, 0, lambda: _cp_matrix(np.pi / 2), symmetric=True),
        GateSpec("CSdg", 2, 0, lambda: _cp_matrix(-np.pi / 2), symmetric=True),
        GateSpec("CT", 2, 0, lambda: _cp_matrix(np.pi / 4), symmetric=True),
        GateSpec("CTdg", 2, 0, lambda: _cp_matrix(-np.pi / 4), symmetric=True),
        GateSpec("TOFFOLI", 3, 0, lambda: _TOFFOLI),
        GateSpec("P", 1, 1, phase_gate_matrix, phase_gate_jacobian),
        GateSpec("RX", 1, 1, _rx_matrix, _rx_jacobian),
        GateSpec("CP", 2, 1, _cp_matrix, _cp_jacobian),
    )
}


@dataclass(frozen=True)
class GateInstance:
    """A spec bound to concrete wires.

    ``param_slots`` indexes the owning circuit's parameter vector; instances
    living in a gate set (not yet in a circuit) leave it None and get slots
    assigned when appended to a circuit.
    """

    spec: GateSpec
    wires: tuple[int, ...]
    param_slots: tuple[int, ...] | None = None

    def __post_init__(self):
        if len(self.wires) != self.spec.arity:
            raise ValueError(f"{self.spec.name} needs {self.spec.arity} wires, got {self.wires}")
        if len(set(self.wires)) != len(self.wires):
            raise ValueError(f"duplicate wires in {self.spec.name}{self.wires}")
        if self.param_slots is not None and len(self.param_slots) != self.spec.n_params:
            raise ValueError(f"{self.spec.name} needs {self.spec.n_params} slots")

    @property
    def label(self) -> str:
        return f"{self.spec.name}({','.join(map(str, self.wires))})"

    def with_slots(self, slots: tuple[int, ...]) -> "GateInstance":
        return GateInstance(self.spec, self.wires, slots)

    def embedded(self, params: tuple[float, ...], n_qubits: int) -> np.ndarray:
        return embed(self.spec.matrix(params), self.wires, n_qubits)

    def embedded_jacobians(self, params: tuple[float, ...], n_qubits: int) -> list[np.ndarray]:
        return [embed(j, self.wires, n_qubits) for j in self.spec.jacobians(params)]


def _wire_tuples(arity: int, n_qubits: int, symmetric: bool):
    if symmetric:
        # unordered: ascending tuples only
        def rec(prefix, start):
            if len(prefix) == arity:
                yield tuple(prefix)
                return
            for q in range(start, n_qubits):
                yield from rec(prefix + [q], q + 1)
        yield from rec([], 0)
    else:
        def rec(prefix):
            if len(prefix) == arity:
                yield tuple(prefix)
                return
            for q in range(n_qubits):
                if q not in prefix:
                    yield from rec(prefix + [q])
        yield from rec([])


def enumerate_family(spec: GateSpec, n_qubits: int) -> list[GateInstance]:
    """All wire placements of one gate family, in deterministic order."""
    if spec.arity > n_qubits:
        return []
    return [GateInstance(spec, w) for w in _wire_tuples(spec.arity, n_qubits, spec.symmetric)]


def standard_gate_set(n_qubits: int, include_parametric: bool = False) -> list[GateInstance]:
    """The default elementary set: X/Y/Z/H singles, CNOT ordered pairs,
    SWAP unordered pairs, Toffoli ordered triples, plus P/RX singles and
    CP ordered pairs when parametric gates are requested."""
    if n_qubits < 1:
        raise ValueError("register needs at least one qubit")
    names = ["X", "Y", "Z", "H", "CNOT", "SWAP", "TOFFOLI"]
    if include_parametric:
        names += ["P", "RX", "CP"]
    out: list[GateInstance] = []
    for name in names:
        out.extend(enumerate_family(GATE_LIBRARY[name], n_qubits))
    return out


def parse_gate_set_text(text: str) -> tuple[int, list[GateInstance]]:
    """Parse a gate-set definition.

    Grammar, one entry per line::

        qubits: N          # register size, required before any gate line
        NAME(w1,w2,...)    # explicit instance, wires are qubit indices
        NAME(*,...)        # all-wildcard: the family's full enumeration
        NAME(0,*)          # partial wildcard: ordered completion over free wires
        # comment          # '#' starts a comment anywhere on a line

    Returns (n_qubits, instances) in file order.
    """
    n_qubits = None
    out: list[GateInstance] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("qubits:"):
            n_qubits = int(line.split(":", 1)[1])
            continue
        if "(" not in line or not line.endswith(")"):
            raise ValueError(f"line {lineno}: expected NAME(wires), got {line!r}")
        name, args = line[:-1].split("(", 1)
        name = name.strip()
        if name not in GATE_LIBRARY:
            raise ValueError(f"line {lineno}: unknown gate {name!r}")
        if n_qubits is None:
            raise ValueError(f"line {lineno}: 'qubits: N' must come before gate lines")
        spec = GATE_LIBRARY[name]
        parts = [a.strip() for a in args.split(",")] if args.strip() else []
        if len(parts) != spec.arity:
            raise ValueError(f"line {lineno}: {name} takes {spec.arity} wires")
        if all(p == "*" for p in parts):
            out.extend(enumerate_family(spec, n_qubits))
            continue
        fixed = [None if p == "*" else int(p) for p in parts]
        for w in _wire_tuples(spec.arity, n_qubits, symmetric=False):
            if all(f is None or f == q for f, q in zip(fixed, w)):
                out.append(GateInstance(spec, w))
    if n_qubits is None:
        raise ValueError("gate-set file is missing a 'qubits: N' line")
    if not out:
        raise ValueError("gate-set file defines no instances")
    return n_qubits, out


def load_gate_set(path: str | Path) -> tuple[int, list[GateInstance]]:
    return parse_gate_set_text(Path(path).read_text())


def named_gate_set(name: str) -> tuple[int, list[GateInstance]]:
    """Load one of the bundled named sets (see ``qcsearch/gatesets/``)."""
    try:
        text = resources.files("qcsearch").joinpath(f"gatesets/{name}.gates").read_text()
    except FileNotFoundError:
        raise KeyError(f"unknown gate set {name!r}; bundled sets: {', '.join(builtin_gate_sets())}")
    return parse_gate_set_text(text)


def builtin_gate_sets() -> list[str]:
    root = resources.files("qcsearch").joinpath("gatesets")
    return sorted(p.name[: -len(".gates")] for p in root.iterdir() if p.name.endswith(".gates"))
