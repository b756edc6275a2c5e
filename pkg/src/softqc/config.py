"""JSON network configs, channel descriptors and matrix files.

Every problem is reported as a ``ConfigError`` carrying a stable code and the
field path (``edges[1].order``) or line/column of the offending input.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .channels import NAMED_CHANNELS, KrausChannel, classify, custom_channel
from .errors import ConfigError, ValidationError
from .linalg import Tolerances, check_density_matrix, diagonal_qubit
from .network import MODES, QUANTUM_STATE, ControlledKrausEdge, LocalNoise, Neuron, SoftQuantumNetwork

E_MALFORMED = "E_MALFORMED"
E_FIELD = "E_FIELD"
E_PROBABILITY = "E_PROBABILITY"
E_CHANNEL_TYPE = "E_CHANNEL_TYPE"
E_CHANNEL_INVALID = "E_CHANNEL_INVALID"
E_STATE = "E_STATE"
E_DUPLICATE_ID = "E_DUPLICATE_ID"
E_UNKNOWN_NEURON = "E_UNKNOWN_NEURON"
E_SELF_LOOP = "E_SELF_LOOP"
E_DUPLICATE_ORDER = "E_DUPLICATE_ORDER"
E_MODE = "E_MODE"


def _reject_constant(name):
    raise ConfigError(E_MALFORMED, f"non-standard JSON constant {name}")


def _no_duplicate_keys(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ConfigError(E_MALFORMED, f"duplicate key {key!r}")
        out[key] = value
    return out


def _loads(text):
    try:
        return json.loads(text, parse_constant=_reject_constant, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise ConfigError(E_MALFORMED, exc.msg, f"line {exc.lineno}, column {exc.colno}") from None


def _require_keys(obj, where, required, optional=()):
    if not isinstance(obj, dict):
        raise ConfigError(E_FIELD, "expected an object", where)
    for key in required:
        if key not in obj:
            raise ConfigError(E_FIELD, f"missing field {key!r}", where)
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise ConfigError(E_FIELD, f"unknown field(s) {sorted(unknown)}", where)


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(E_FIELD, "expected a number", where)
    return float(value)


def _integer(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(E_FIELD, "expected an integer", where)
    return value


def _probability(value, where):
    p = _number(value, where)
    if not 0.0 <= p <= 1.0:
        raise ConfigError(E_PROBABILITY, f"probability {p} outside [0, 1]", where)
    return p


def _complex_matrix(value, where):
    """Nested ``[re, im]`` pairs -> normalized nested lists of floats."""
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ConfigError(E_FIELD, "expected a matrix of [re, im] pairs", where)
    width = len(value[0])
    rows = []
    for i, row in enumerate(value):
        if len(row) != width:
            raise ConfigError(E_FIELD, "ragged matrix rows", f"{where}[{i}]")
        out = []
        for j, z in enumerate(row):
            if not isinstance(z, list) or len(z) != 2:
                raise ConfigError(E_FIELD, "entry must be a [re, im] pair", f"{where}[{i}][{j}]")
            out.append([_number(z[0], f"{where}[{i}][{j}]"), _number(z[1], f"{where}[{i}][{j}]")])
        rows.append(out)
    return rows


def to_array(rows):
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def from_array(m):
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def parse_channel(desc, where="channel"):
    """Normalized channel descriptor from its JSON form."""
    if not isinstance(desc, dict) or "type" not in desc:
        raise ConfigError(E_FIELD, "channel descriptor needs a 'type'", where)
    kind = desc["type"]
    if kind in NAMED_CHANNELS:
        _require_keys(desc, where, ("type", "p"))
        return {"type": kind, "p": _probability(desc["p"], f"{where}.p")}
    if kind == "custom":
        _require_keys(desc, where, ("type", "kraus"))
        ops = desc["kraus"]
        if not isinstance(ops, list) or not ops:
            raise ConfigError(E_FIELD, "'kraus' must be a nonempty list of matrices", f"{where}.kraus")
        mats = [_complex_matrix(op, f"{where}.kraus[{k}]") for k, op in enumerate(ops)]
        shape = (len(mats[0]), len(mats[0][0]))
        if any((len(m), len(m[0])) != shape for m in mats) or shape[0] != shape[1]:
            raise ConfigError(E_CHANNEL_INVALID, "Kraus operators must be square and equal-sized", f"{where}.kraus")
        return {"type": "custom", "kraus": mats}
    raise ConfigError(E_CHANNEL_TYPE, f"unknown channel type {kind!r}", f"{where}.type")


def _single_qubit(desc, where):
    if desc["type"] == "custom" and len(desc["kraus"][0]) != 2:
        raise ConfigError(E_CHANNEL_INVALID, "network channels must act on a single qubit (2x2 Kraus operators)", where)


def build_channel(desc, where="channel", validate=True):
    """``KrausChannel`` from a normalized descriptor."""
    if desc["type"] in NAMED_CHANNELS:
        return NAMED_CHANNELS[desc["type"]](desc["p"])
    ops = [to_array(m) for m in desc["kraus"]]
    if not validate:
        return KrausChannel(tuple(ops), name="custom")
    try:
        return custom_channel(ops)
    except ValidationError as exc:
        raise ConfigError(E_CHANNEL_INVALID, str(exc), where) from None


def channel_classification(desc):
    return classify([to_array(m) for m in desc["kraus"]]) if desc["type"] == "custom" else "trace-preserving"


@dataclass
class NetworkConfig:
    neurons: list
    edges: list
    local_noise: list = field(default_factory=list)
    mode: str = QUANTUM_STATE
    seed: int = 0

    def to_dict(self):
        return {
            "neurons": self.neurons,
            "edges": self.edges,
            "local_noise": self.local_noise,
            "mode": self.mode,
            "seed": self.seed,
        }

    def neuron_state(self, spec):
        return diagonal_qubit(spec["p0"]) if "p0" in spec else to_array(spec["rho"])

    def to_network(self):
        neurons = [Neuron(spec["id"], self.neuron_state(spec)) for spec in self.neurons]
        edges = [
            ControlledKrausEdge(e["control"], e["target"], build_channel(e["channel"]), e["order"])
            for e in self.edges
        ]
        noise = [LocalNoise(ln["neuron"], build_channel(ln["channel"]), ln["order"]) for ln in self.local_noise]
        return SoftQuantumNetwork(neurons, edges, noise, self.mode)

    def with_p0(self, neuron_ids, p0):
        """Copy with the named neurons replaced by diagonal states of weight ``p0``."""
        neurons = [{"id": s["id"], "p0": float(p0)} if s["id"] in neuron_ids else s for s in self.neurons]
        return NetworkConfig(neurons, self.edges, self.local_noise, self.mode, self.seed)


def _parse_neuron(spec, where, tols):
    if not isinstance(spec, dict):
        raise ConfigError(E_FIELD, "expected an object", where)
    if "p0" in spec and "rho" in spec:
        raise ConfigError(E_FIELD, "give either 'p0' or 'rho', not both", where)
    if "p0" in spec:
        _require_keys(spec, where, ("id", "p0"))
        out = {"id": spec["id"], "p0": _probability(spec["p0"], f"{where}.p0")}
    else:
        _require_keys(spec, where, ("id", "rho"))
        rows = _complex_matrix(spec["rho"], f"{where}.rho")
        if (len(rows), len(rows[0])) != (2, 2):
            raise ConfigError(E_STATE, "neuron state must be 2x2", f"{where}.rho")
        try:
            check_density_matrix(to_array(rows), tols)
        except ValidationError as exc:
            raise ConfigError(E_STATE, str(exc), f"{where}.rho") from None
        out = {"id": spec["id"], "rho": rows}
    if not isinstance(out["id"], str) or not out["id"]:
        raise ConfigError(E_FIELD, "neuron id must be a nonempty string", f"{where}.id")
    return out


def parse_config(text, tols=Tolerances()):
    doc = _loads(text)
    _require_keys(doc, "$", ("neurons", "edges"), ("local_noise", "mode", "seed"))
    if not isinstance(doc["neurons"], list) or not doc["neurons"]:
        raise ConfigError(E_FIELD, "expected a nonempty list", "neurons")
    neurons = [_parse_neuron(s, f"neurons[{k}]", tols) for k, s in enumerate(doc["neurons"])]
    ids = set()
    for k, n in enumerate(neurons):
        if n["id"] in ids:
            raise ConfigError(E_DUPLICATE_ID, f"duplicate neuron id {n['id']!r}", f"neurons[{k}].id")
        ids.add(n["id"])

    orders = {}

    def take_order(value, where):
        order = _integer(value, where)
        if order in orders:
            raise ConfigError(E_DUPLICATE_ORDER, f"order {order} already used by {orders[order]}", where)
        orders[order] = where.rsplit(".", 1)[0]
        return order

    def known(nid, where):
        if nid not in ids:
            raise ConfigError(E_UNKNOWN_NEURON, f"unknown neuron {nid!r}", where)
        return nid

    if not isinstance(doc["edges"], list):
        raise ConfigError(E_FIELD, "expected a list", "edges")
    edges = []
    for k, e in enumerate(doc["edges"]):
        where = f"edges[{k}]"
        _require_keys(e, where, ("control", "target", "channel", "order"))
        control = known(e["control"], f"{where}.control")
        target = known(e["target"], f"{where}.target")
        if control == target:
            raise ConfigError(E_SELF_LOOP, "control and target must differ", where)
        channel = parse_channel(e["channel"], f"{where}.channel")
        _single_qubit(channel, f"{where}.channel")
        build_channel(channel, f"{where}.channel")
        edges.append({"control": control, "target": target, "channel": channel, "order": take_order(e["order"], f"{where}.order")})

    raw_noise = doc.get("local_noise", [])
    if not isinstance(raw_noise, list):
        raise ConfigError(E_FIELD, "expected a list", "local_noise")
    noise = []
    for k, ln in enumerate(raw_noise):
        where = f"local_noise[{k}]"
        _require_keys(ln, where, ("neuron", "channel", "order"))
        neuron = known(ln["neuron"], f"{where}.neuron")
        channel = parse_channel(ln["channel"], f"{where}.channel")
        _single_qubit(channel, f"{where}.channel")
        build_channel(channel, f"{where}.channel")
        noise.append({"neuron": neuron, "channel": channel, "order": take_order(ln["order"], f"{where}.order")})

    mode = doc.get("mode", QUANTUM_STATE)
    if mode not in MODES:
        raise ConfigError(E_MODE, f"mode must be one of {list(MODES)}", "mode")
    seed = _integer(doc.get("seed", 0), "seed")
    return NetworkConfig(neurons, edges, noise, mode, seed)


def load_matrix(text, where="matrix"):
    """Matrix file ``{"dims": [r, c], "data": [[[re, im], ...], ...]}``."""
    doc = _loads(text)
    _require_keys(doc, where, ("dims", "data"))
    dims = doc["dims"]
    if not (isinstance(dims, list) and len(dims) == 2 and all(isinstance(d, int) and d > 0 for d in dims)):
        raise ConfigError(E_FIELD, "'dims' must be two positive integers", f"{where}.dims")
    rows = _complex_matrix(doc["data"], f"{where}.data")
    if [len(rows), len(rows[0])] != dims:
        raise ConfigError(E_FIELD, f"data shape {len(rows)}x{len(rows[0])} does not match dims {dims}", f"{where}.data")
    return to_array(rows)


def matrix_document(m):
    m = np.asarray(m)
    return {"dims": list(m.shape), "data": from_array(m)}

