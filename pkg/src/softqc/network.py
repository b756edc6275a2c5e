"""Networks of mixed-state qubit neurons coupled by controlled Kraus operations.

Each edge ``i -> j`` acts on the joint state as

    rho  ->  P0_i rho P0_i  +  W_j( P1_i rho P1_i )

where ``Ps_i`` projects neuron i onto ``|s>`` and ``W_j`` is the edge channel
applied to neuron j. Edges and local noise run strictly in order of their
``order`` index; the target is read out (dephased) only at the end.
"""

import graphlib
import zlib
from dataclasses import dataclass, field

import numpy as np

from .channels import apply
from .errors import ValidationError
from .linalg import (
    basis_state,
    check_density_matrix,
    diagonal_qubit,
    num_qubits,
    partial_trace,
    tensor,
    trace_distance,
)

QUANTUM_STATE = "quantum-state"
SAMPLED_BIT = "sampled-bit"
MODES = (QUANTUM_STATE, SAMPLED_BIT)


@dataclass(frozen=True, eq=False)
class Neuron:
    id: str
    state: np.ndarray

    def __post_init__(self):
        state = np.array(self.state, dtype=complex)
        if state.shape != (2, 2):
            raise ValidationError(f"neuron {self.id!r}: initial state must be a single-qubit 2x2 matrix")
        check_density_matrix(state)
        state.flags.writeable = False
        object.__setattr__(self, "state", state)

    @property
    def p0(self):
        """Probability of ``|0>`` in the initial state."""
        return float(self.state[0, 0].real)


@dataclass(frozen=True, eq=False)
class ControlledKrausEdge:
    control: str
    target: str
    channel: object
    order: int


@dataclass(frozen=True, eq=False)
class LocalNoise:
    neuron: str
    channel: object
    order: int


@dataclass(eq=False)
class SoftQuantumNetwork:
    neurons: list
    edges: list = field(default_factory=list)
    local_noise: list = field(default_factory=list)
    mode: str = QUANTUM_STATE

    def __post_init__(self):
        self.neurons = list(self.neurons)
        self.edges = sorted(self.edges, key=lambda e: e.order)
        self.local_noise = sorted(self.local_noise, key=lambda e: e.order)
        self.validate()

    def validate(self):
        ids = [nrn.id for nrn in self.neurons]
        if not ids:
            raise ValidationError("network has no neurons")
        if len(set(ids)) != len(ids):
            raise ValidationError("neuron ids must be unique")
        if self.mode not in MODES:
            raise ValidationError(f"unknown propagation mode {self.mode!r}")
        known = set(ids)
        for e in self.edges:
            if e.control not in known or e.target not in known:
                raise ValidationError(f"edge {e.control}->{e.target} references an unknown neuron")
            if e.control == e.target:
                raise ValidationError(f"edge on neuron {e.control!r} must connect two distinct neurons")
            if e.channel.dim != 2:
                raise ValidationError("edge channels must act on a single qubit")
        for ln in self.local_noise:
            if ln.neuron not in known:
                raise ValidationError(f"local noise references unknown neuron {ln.neuron!r}")
            if ln.channel.dim != 2:
                raise ValidationError("local noise channels must act on a single qubit")
        orders = [op.order for op in self.schedule()]
        if len(set(orders)) != len(orders):
            raise ValidationError("order indices of edges and local noise must be distinct")

    @property
    def ids(self):
        return [nrn.id for nrn in self.neurons]

    def index(self, neuron_id):
        try:
            return self.ids.index(neuron_id)
        except ValueError:
            raise ValueError(f"unknown neuron {neuron_id!r}") from None

    def neuron(self, neuron_id):
        return self.neurons[self.index(neuron_id)]

    def schedule(self):
        """Edges and local-noise steps merged in time order."""
        return sorted([*self.edges, *self.local_noise], key=lambda op: op.order)

    def targets(self):
        """Neuron ids that receive at least one edge, in register order."""
        hit = {e.target for e in self.edges}
        return [i for i in self.ids if i in hit]

    def role(self, neuron_id):
        incoming = any(e.target == neuron_id for e in self.edges)
        outgoing = any(e.control == neuron_id for e in self.edges)
        if incoming and outgoing:
            return "hidden"
        return "output" if incoming else "input"

    def initial_state(self):
        return tensor(*(nrn.state for nrn in self.neurons))


@dataclass
class NeuronOutput:
    neuron: str
    state: np.ndarray
    p0: float
    sampled_bit: int | None = None


def _apply_local(rho, op, q, n):
    """``op_q rho op_q^dag`` for a single-qubit operator on qubit ``q``."""
    t = rho.reshape((2,) * (2 * n))
    t = np.moveaxis(np.tensordot(op, t, axes=([1], [q])), 0, q)
    t = np.moveaxis(np.tensordot(t, op.conj(), axes=([n + q], [1])), -1, n + q)
    return t.reshape(rho.shape)


def apply_local_channel(rho, ch, q):
    n = num_qubits(rho)
    if not 0 <= q < n:
        raise ValueError(f"qubit index {q} out of range for {n} qubits")
    out = np.zeros_like(rho, dtype=complex)
    for op in ch.kraus_ops:
        out += _apply_local(rho, op, q, n)
    return out


def superproject(rho, qubit, s):
    """``|s><s| rho |s><s|`` on one qubit; the trace is the Born probability of ``s``."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho)
    if not 0 <= qubit < n:
        raise ValueError(f"qubit index {qubit} out of range for {n} qubits")
    if s not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    t = np.zeros((2,) * (2 * n), dtype=complex)
    src = rho.reshape((2,) * (2 * n))
    idx = [slice(None)] * (2 * n)
    idx[qubit] = s
    idx[n + qubit] = s
    t[tuple(idx)] = src[tuple(idx)]
    return t.reshape(rho.shape)


def controlled_kraus_apply(rho_joint, control, target, ch):
    n = num_qubits(rho_joint)
    if control == target:
        raise ValueError("control and target must differ")
    if not (0 <= control < n and 0 <= target < n):
        raise ValueError(f"qubit indices ({control}, {target}) out of range for {n} qubits")
    if ch.dim != 2:
        raise ValueError("controlled Kraus operations take a single-qubit channel")
    idle = superproject(rho_joint, control, 0)
    fired = superproject(rho_joint, control, 1)
    return idle + apply_local_channel(fired, ch, target)


def evolve(net):
    """Joint state of every neuron after the full time-ordered schedule."""
    rho = net.initial_state()
    for op in net.schedule():
        if isinstance(op, ControlledKrausEdge):
            rho = controlled_kraus_apply(rho, net.index(op.control), net.index(op.target), op.channel)
        else:
            rho = apply_local_channel(rho, op.channel, net.index(op.neuron))
    return rho


def reduced_output(rho_joint, target):
    n = num_qubits(rho_joint)
    if not 0 <= target < n:
        raise ValueError(f"qubit index {target} out of range for {n} qubits")
    if n == 1:
        return np.array(rho_joint, dtype=complex)
    return partial_trace(rho_joint, [q for q in range(n) if q != target])


def product_formula_output(p_list, channels, rho_in):
    """Apply ``rho -> p rho + (1 - p) W(rho)`` for each (p, W) in time order."""
    if len(p_list) != len(channels):
        raise ValueError("need one firing probability per channel")
    rho = np.array(rho_in, dtype=complex)
    for p, ch in zip(p_list, channels):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability {p} outside [0, 1]")
        rho = p * rho + (1 - p) * apply(ch, rho)
    return rho


def dephase(rho):
    rho = np.asarray(rho)
    if rho.shape != (2, 2):
        raise ValueError("dephase acts on a single qubit")
    return np.diag(np.diag(rho)).astype(complex)


def neuron_output(neuron_id, rho_out):
    state = dephase(rho_out)
    p0 = float(np.clip(state[0, 0].real, 0.0, 1.0))
    return NeuronOutput(neuron_id, state, p0)


def neuron_seed(seed, neuron_id):
    """Per-neuron RNG seed: the run seed XOR a CRC-32 of the neuron id."""
    return (int(seed) ^ zlib.crc32(str(neuron_id).encode("utf-8"))) & 0xFFFFFFFFFFFFFFFF


def sample_output(out, rng_seed, shots):
    """Firing bits: 0 with probability p0, 1 otherwise."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    p0 = out.p0 if isinstance(out, NeuronOutput) else float(out)
    rng = np.random.default_rng(rng_seed)
    return (rng.random(shots) >= p0).astype(np.int8)


def topological_layers(net):
    """Longest-path layering of the edge graph; raises on cycles."""
    sorter = graphlib.TopologicalSorter({i: set() for i in net.ids})
    for e in net.edges:
        sorter.add(e.target, e.control)
    try:
        order = list(sorter.static_order())
    except graphlib.CycleError as exc:
        raise ValidationError(f"edge graph is cyclic: {exc.args[1]}") from None
    depth = {}
    for nid in order:
        parents = [depth[e.control] for e in net.edges if e.target == nid]
        depth[nid] = 1 + max(parents) if parents else 0
    layers = [[] for _ in range(max(depth.values()) + 1)]
    for nid in net.ids:
        layers[depth[nid]].append(nid)
    return layers


def feedforward(net, layers=None, rng_seed=0, mode=None):
    """Propagate layer by layer, feeding each dephased (or sampled) output onward.

    A neuron in layer k is evolved together with its controls only; controls
    enter with the state they produced in an earlier layer. In sampled-bit
    mode that state is ``|s><s|`` for one firing bit drawn from the neuron's
    own RNG stream; in quantum-state mode it is the dephased output.
    """
    mode = mode or net.mode
    if mode not in MODES:
        raise ValidationError(f"unknown propagation mode {mode!r}")
    layers = topological_layers(net) if layers is None else [list(l) for l in layers]
    flat = [nid for layer in layers for nid in layer]
    if sorted(flat) != sorted(net.ids):
        raise ValidationError("layers must partition the neurons exactly once")
    layer_of = {nid: k for k, layer in enumerate(layers) for nid in layer}
    for e in net.edges:
        if layer_of[e.control] >= layer_of[e.target]:
            raise ValidationError(f"edge {e.control}->{e.target} does not point to a later layer")

    fed = {}
    outputs = {}
    for layer in layers:
        for nid in layer:
            edges = [e for e in net.edges if e.target == nid]
            controls = list(dict.fromkeys(e.control for e in edges))
            local = [ln for ln in net.local_noise if ln.neuron == nid]
            sub = SoftQuantumNetwork(
                [Neuron(c, fed[c]) for c in controls] + [net.neuron(nid)],
                edges,
                local,
                mode,
            )
            out = neuron_output(nid, reduced_output(evolve(sub), len(controls)))
            if mode == SAMPLED_BIT:
                bit = int(sample_output(out, neuron_seed(rng_seed, nid), 1)[0])
                out.sampled_bit = bit
                fed[nid] = basis_state(str(bit))
            else:
                fed[nid] = out.state
            outputs[nid] = out
    return outputs


def two_neuron_experiment(p1, rho2, ch):
    """Joint state of a diagonal control neuron and a target after one edge."""
    if not 0.0 <= p1 <= 1.0:
        raise ValueError(f"p1={p1} outside [0, 1]")
    net = SoftQuantumNetwork(
        [Neuron("1", diagonal_qubit(p1)), Neuron("2", rho2)],
        [ControlledKrausEdge("1", "2", ch, 0)],
    )
    return evolve(net)


def three_neuron_experiment(p1, p2, rho3, w13, w23, order="13-first"):
    """Two diagonal controls acting on neuron 3.

    ``order="13-first"`` runs the 1->3 edge first in time, so the doubly fired
    branch carries ``W23(W13(rho3))``; ``"23-first"`` gives ``W13(W23(rho3))``.
    """
    for p in (p1, p2):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability {p} outside [0, 1]")
    if order not in ("13-first", "23-first"):
        raise ValueError("order must be '13-first' or '23-first'")
    first13 = order == "13-first"
    net = SoftQuantumNetwork(
        [Neuron("1", diagonal_qubit(p1)), Neuron("2", diagonal_qubit(p2)), Neuron("3", rho3)],
        [
            ControlledKrausEdge("1", "3", w13, 0 if first13 else 1),
            ControlledKrausEdge("2", "3", w23, 1 if first13 else 0),
        ],
    )
    return evolve(net)


def order_gap(p1, p2, rho3, w13, w23):
    """Trace distance between the two edge orders of the three-neuron experiment."""
    a = three_neuron_experiment(p1, p2, rho3, w13, w23, "13-first")
    b = three_neuron_experiment(p1, p2, rho3, w13, w23, "23-first")
    return trace_distance(a, b)

