"""Ordered gate tuples with a shared parameter vector.

A circuit of length L applies its gates left-multiplicatively: the realized
operator is embed(g_L) @ ... @ embed(g_1). Parameters live on the circuit;
each gate occurrence references slots of the circuit vector, so a slot may
in principle be shared by several gates (the default construction gives
every parametric gate its own slot).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gates import GATE_LIBRARY, GateInstance
from .linalg import identity


@dataclass(frozen=True)
class Circuit:
    gates: tuple[GateInstance, ...]
    n_qubits: int
    params: tuple[float, ...] = ()

    def __post_init__(self):
        for g in self.gates:
            if g.param_slots is None:
                raise ValueError(f"gate {g.label} has unbound parameter slots")
            if any(s < 0 or s >= len(self.params) for s in g.param_slots):
                raise ValueError(f"gate {g.label} references a slot outside the parameter vector")
            if any(q >= self.n_qubits for q in g.wires):
                raise ValueError(f"gate {g.label} exceeds the {self.n_qubits}-qubit register")

    def __len__(self) -> int:
        return len(self.gates)

    def gate_params(self, g: GateInstance) -> tuple[float, ...]:
        return tuple(self.params[s] for s in g.param_slots)

    def with_params(self, params) -> "Circuit":
        return Circuit(self.gates, self.n_qubits, tuple(float(p) for p in params))

    def extended(self, gate: GateInstance, init_params: tuple[float, ...] | None = None) -> "Circuit":
        """Append one gate, assigning fresh slots for its parameters."""
        n = gate.spec.n_params
        if init_params is None:
            init_params = (0.0,) * n
        slots = tuple(range(len(self.params), len(self.params) + n))
        return Circuit(self.gates + (gate.with_slots(slots),), self.n_qubits,
                       self.params + tuple(init_params))


def empty_circuit(n_qubits: int) -> Circuit:
    return Circuit((), n_qubits)


def from_instances(instances, n_qubits: int, params=None) -> Circuit:
    """Build a circuit from set-style instances, slotting parameters in gate order."""
    c = empty_circuit(n_qubits)
    for g in instances:
        c = c.extended(GateInstance(g.spec, g.wires))
    if params is not None:
        c = c.with_params(params)
    return c


def prefix_products(c: Circuit) -> list[np.ndarray]:
    """prefix[m] = embed(g_m) @ ... @ embed(g_1); prefix[0] = I."""
    dim = 2**c.n_qubits
    out = [identity(dim)]
    for g in c.gates:
        out.append(g.embedded(c.gate_params(g), c.n_qubits) @ out[-1])
    return out


def evaluate(c: Circuit) -> np.ndarray:
    """The circuit's unitary; the empty circuit evaluates to the identity."""
    return prefix_products(c)[-1]


def circuit_jacobian(c: Circuit) -> list[np.ndarray]:
    """dU/d(phi_j) for every parameter slot j, via cached prefix/suffix products.

    Each gate occurrence referencing slot j contributes
    suffix(m) @ dG_m/dphi @ prefix(m-1); unused slots give zero matrices.
    """
    dim = 2**c.n_qubits
    prefixes = prefix_products(c)
    suffixes = [identity(dim)]
    for g in reversed(c.gates):
        suffixes.append(suffixes[-1] @ g.embedded(c.gate_params(g), c.n_qubits))
    suffixes.reverse()  # suffixes[m] = embed(g_L) @ ... @ embed(g_{m+1})

    jac = [np.zeros((dim, dim), dtype=complex) for _ in c.params]
    for m, g in enumerate(c.gates, start=1):
        if not g.param_slots:
            continue
        dgs = g.embedded_jacobians(c.gate_params(g), c.n_qubits)
        for slot, dg in zip(g.param_slots, dgs):
            jac[slot] += suffixes[m] @ dg @ prefixes[m - 1]
    return jac


def to_text(c: Circuit) -> str:
    """Line-oriented serialization: one gate per line, then the parameter vector.

    Floats use repr, so the round trip is exact.
    """
    lines = ["# circuit v1", f"qubits: {c.n_qubits}"]
    for g in c.gates:
        slot = "@" + ",".join(map(str, g.param_slots)) if g.param_slots else ""
        lines.append(g.label + slot)
    lines.append("params: " + " ".join(repr(p) for p in c.params))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Circuit:
    n_qubits = None
    gates: list[GateInstance] = []
    params: tuple[float, ...] = ()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("qubits:"):
            n_qubits = int(line.split(":", 1)[1])
        elif line.startswith("params:"):
            rest = line.split(":", 1)[1].split()
            params = tuple(float(t) for t in rest)
        else:
            slots: tuple[int, ...] = ()
            if "@" in line:
                line, slot_part = line.split("@", 1)
                slots = tuple(int(t) for t in slot_part.split(","))
            name, args = line[:-1].split("(", 1)
            spec = GATE_LIBRARY[name.strip()]
            wires = tuple(int(t) for t in args.split(","))
            gates.append(GateInstance(spec, wires, slots))
    if n_qubits is None:
        raise ValueError("circuit text is missing a 'qubits: N' line")
    return Circuit(tuple(gates), n_qubits, params)
