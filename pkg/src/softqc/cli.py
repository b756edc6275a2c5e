"""Command-line entry point.

Subcommands: ``simulate``, ``discord``, ``order-test``, ``dqc1`` and
``verify-channel``. Exit status is 0 on success, 2 for configuration or
validation errors and 3 when a computed state breaks a numerical invariant.
"""

import argparse
import json
import sys

import numpy as np

from . import discord as dsc
from .channels import TRACE_PRESERVING, choi, classify, commutativity_gap
from .config import NetworkConfig, build_channel, load_matrix, matrix_document, parse_channel, parse_config
from .dqc1 import MAX_QUBITS as DQC1_MAX_QUBITS
from .dqc1 import dqc1_estimate, named_unitary
from .errors import ConfigError, NumericalInvariantError, ValidationError
from .linalg import TOLERANCE_PROFILES, check_density_matrix, trace_distance
from .network import (
    evolve,
    feedforward,
    neuron_output,
    neuron_seed,
    reduced_output,
    sample_output,
)
from .report import ExperimentResult, emit

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

MAX_DUMP_QUBITS = 8
MAX_JOINT_QUBITS = 12


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _checked(rho, tols, what):
    try:
        return check_density_matrix(rho, tols)
    except ValidationError as exc:
        raise NumericalInvariantError(f"{what}: {exc}") from None


def _sweep_values(spec):
    try:
        start, stop, num = spec.split(":")
        values = np.linspace(float(start), float(stop), int(num))
    except ValueError:
        raise ConfigError("E_FIELD", "sweep must look like START:STOP:NUM", "--sweep") from None
    if len(values) < 1 or values.min() < 0 or values.max() > 1:
        raise ConfigError("E_PROBABILITY", "sweep values must lie in [0, 1]", "--sweep")
    return [float(v) for v in values]


def _seed(args, cfg=None):
    if args.seed is not None:
        return args.seed
    return cfg.seed if cfg is not None else 0


def _neuron_record(out):
    return {
        "neuron": out.neuron,
        "p0": out.p0,
        "dephased_state": out.state,
        "sampled_bit": out.sampled_bit,
    }


def cmd_simulate(args, tols):
    cfg = parse_config(_read(args.config), tols)
    seed = _seed(args, cfg)
    net = cfg.to_network()
    n = len(net.neurons)
    if args.dump_state and n > MAX_DUMP_QUBITS:
        raise ConfigError("E_FIELD", f"--dump-state is limited to {MAX_DUMP_QUBITS} neurons", "--dump-state")
    if n > MAX_JOINT_QUBITS:
        raise ConfigError("E_FIELD", f"joint evolution is limited to {MAX_JOINT_QUBITS} neurons", "neurons")

    joint = _checked(evolve(net), tols, "evolved joint state")
    try:
        ff = feedforward(net, rng_seed=seed)
    except ValidationError:
        ff = None

    neurons = {}
    rows = []
    for q, nid in enumerate(net.ids):
        out = neuron_output(nid, reduced_output(joint, q))
        bits = sample_output(out, neuron_seed(seed, nid), args.shots)
        record = {
            "role": net.role(nid),
            "joint": _neuron_record(out),
            "samples": "".join(str(b) for b in bits),
            "freq0": float(np.mean(bits == 0)),
            "feedforward": _neuron_record(ff[nid]) if ff else None,
        }
        neurons[nid] = record
        rows.append(
            {
                "neuron": nid,
                "role": record["role"],
                "p0_joint": out.p0,
                "freq0": record["freq0"],
                "p0_feedforward": ff[nid].p0 if ff else None,
                "sampled_bit": ff[nid].sampled_bit if ff else None,
            }
        )
    outputs = {"mode": net.mode, "shots": args.shots, "neurons": neurons, "targets": net.targets()}
    if args.dump_state:
        outputs["joint_state"] = joint
    flags = {"shots": args.shots, "dump_state": args.dump_state}
    return ExperimentResult("simulate", {"config": cfg.to_dict(), "flags": flags}, outputs, tols.as_dict(), seed, rows=rows)


def _two_qubit_state_from_config(cfg, tols):
    net = cfg.to_network()
    if len(net.neurons) != 2:
        raise ConfigError("E_FIELD", "discord needs a two-neuron network (or --state)", "neurons")
    return _checked(evolve(net), tols, "evolved two-neuron state")


def _discord_block(rho, sides, tols):
    reports = {}
    for side in sides:
        rep = dsc.discord(rho, side)
        if rep.raw_discord < dsc.CLAMP_FLOOR:
            raise NumericalInvariantError(f"negative discord {rep.raw_discord:.3g} on side {side}")
        reports[str(side)] = rep.as_dict()
    block = {"reports": reports}
    if len(sides) == 2:
        block["classification"] = dsc.classify_pair(reports["0"]["discord"], reports["1"]["discord"], tols.discord)
    return block


def cmd_discord(args, tols):
    sides = [0, 1] if args.side == "both" else [int(args.side)]
    if (args.config is None) == (args.state is None):
        raise ConfigError("E_FIELD", "give exactly one of CONFIG or --state", "arguments")
    if args.state is not None:
        if args.sweep:
            raise ConfigError("E_FIELD", "--sweep needs a network config", "--sweep")
        rho = load_matrix(_read(args.state), "state")
        if rho.shape != (4, 4):
            raise ConfigError("E_STATE", "state file must hold a 4x4 matrix", "state.dims")
        try:
            check_density_matrix(rho, tols)
        except ValidationError as exc:
            raise ConfigError("E_STATE", str(exc), "state.data") from None
        inputs = {"state": matrix_document(rho), "flags": {"side": args.side}}
        seed = _seed(args)
        cases = [(None, rho)]
    else:
        cfg = parse_config(_read(args.config), tols)
        seed = _seed(args, cfg)
        inputs = {"config": cfg.to_dict(), "flags": {"side": args.side, "sweep": args.sweep}}
        if args.sweep:
            control = cfg.edges[0]["control"] if cfg.edges else cfg.neurons[0]["id"]
            cases = [(p, _two_qubit_state_from_config(cfg.with_p0({control}, p), tols)) for p in _sweep_values(args.sweep)]
        else:
            cases = [(None, _two_qubit_state_from_config(cfg, tols))]

    rows = []
    blocks = []
    for p1, rho in cases:
        block = _discord_block(rho, sides, tols)
        block["state"] = rho
        if p1 is not None:
            block["p1"] = p1
        blocks.append(block)
        for side in sides:
            rep = block["reports"][str(side)]
            row = {} if p1 is None else {"p1": p1}
            row.update(
                {
                    "measured_side": side,
                    "mutual_information": rep["mutual_information"],
                    "classical_correlation": rep["classical_correlation"],
                    "discord": rep["discord"],
                }
            )
            rows.append(row)
    outputs = {"sweep": blocks} if args.sweep else blocks[0]
    return ExperimentResult("discord", inputs, outputs, tols.as_dict(), seed, rows=rows)


def _order_case(cfg, tols):
    net = cfg.to_network()
    if len(net.edges) != 2 or net.edges[0].target != net.edges[1].target:
        raise ConfigError("E_FIELD", "order-test needs exactly two edges into one target", "edges")
    if len(net.neurons) > MAX_JOINT_QUBITS:
        raise ConfigError("E_FIELD", f"joint evolution is limited to {MAX_JOINT_QUBITS} neurons", "neurons")
    first, second = net.edges
    e0, e1 = cfg.edges
    swapped_edges = [dict(e0, order=e1["order"]), dict(e1, order=e0["order"])]
    swapped = NetworkConfig(cfg.neurons, swapped_edges, cfg.local_noise, cfg.mode, cfg.seed).to_network()
    forward = _checked(evolve(net), tols, "forward-order state")
    reverse = _checked(evolve(swapped), tols, "reversed-order state")
    t = net.index(first.target)
    return {
        "edge_order": [f"{first.control}->{first.target}", f"{second.control}->{second.target}"],
        "forward_state": forward,
        "reversed_state": reverse,
        "trace_distance": trace_distance(forward, reverse),
        "target_trace_distance": trace_distance(reduced_output(forward, t), reduced_output(reverse, t)),
        "commutativity_gap": commutativity_gap(first.channel, second.channel),
    }


def cmd_order_test(args, tols):
    cfg = parse_config(_read(args.config), tols)
    seed = _seed(args, cfg)
    inputs = {"config": cfg.to_dict(), "flags": {"sweep": args.sweep}}
    if args.sweep:
        controls = {e["control"] for e in cfg.edges}
        cases = [(p, _order_case(cfg.with_p0(controls, p), tols)) for p in _sweep_values(args.sweep)]
    else:
        cases = [(None, _order_case(cfg, tols))]
    rows = []
    for p, case in cases:
        row = {} if p is None else {"p_controls": p}
        row.update({k: case[k] for k in ("trace_distance", "target_trace_distance", "commutativity_gap")})
        rows.append(row)
        if p is not None:
            case["p_controls"] = p
        if len(cfg.neurons) > MAX_DUMP_QUBITS:
            del case["forward_state"], case["reversed_state"]
    outputs = {"sweep": [c for _, c in cases]} if args.sweep else cases[0][1]
    return ExperimentResult("order-test", inputs, outputs, tols.as_dict(), seed, rows=rows)


def cmd_dqc1(args, tols):
    seed = _seed(args)
    if (args.unitary is None) == (args.named is None):
        raise ConfigError("E_FIELD", "give exactly one of --unitary FILE or --named NAME", "arguments")
    if args.unitary is not None:
        u = load_matrix(_read(args.unitary), "unitary")
        spec = {"matrix": matrix_document(u)}
    else:
        if args.n is None:
            raise ConfigError("E_FIELD", "--named needs -n", "-n")
        if not 1 <= args.n <= DQC1_MAX_QUBITS:
            raise ConfigError("E_FIELD", f"n must be in 1..{DQC1_MAX_QUBITS}", "-n")
        u = named_unitary(args.named, args.n, seed)
        spec = {"named": args.named, "n": args.n}
    if args.n is not None and u.shape[0] != 2**args.n:
        raise ConfigError("E_FIELD", f"unitary has dimension {u.shape[0]}, expected 2**{args.n}", "-n")
    shots = args.shots if args.mode == "sampled" else None
    est = dqc1_estimate(u, args.alpha, shots=shots, seed=seed, tol=tols.unitary)
    direct = args.alpha * np.trace(u) / u.shape[0]
    outputs = {
        "estimate": est.estimate,
        "expect_x": est.expect_x,
        "expect_y": est.expect_y,
        "direct": direct,
        "abs_error": abs(est.estimate - direct),
        "num_qubits": est.num_qubits,
    }
    row = {
        "alpha": args.alpha,
        "estimate_re": est.estimate.real,
        "estimate_im": est.estimate.imag,
        "direct_re": direct.real,
        "direct_im": direct.imag,
    }
    if shots is not None:
        outputs.update({"shots": shots, "stderr_x": est.stderr_x, "stderr_y": est.stderr_y})
        row.update({"shots": shots, "stderr_x": est.stderr_x, "stderr_y": est.stderr_y})
    inputs = {"unitary": spec, "flags": {"alpha": args.alpha, "mode": args.mode, "shots": shots}}
    return ExperimentResult("dqc1", inputs, outputs, tols.as_dict(), seed, rows=[row])


def cmd_verify_channel(args, tols):
    text = args.channel if args.channel.lstrip().startswith("{") else _read(args.channel)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("E_MALFORMED", exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    desc = parse_channel(raw)
    ch = build_channel(desc, validate=False)
    cls = classify(ch.kraus_ops)
    c = choi(ch)
    completeness = ch.completeness()
    outputs = {
        "classification": cls,
        "dim": ch.dim,
        "num_kraus": len(ch.kraus_ops),
        "completeness_deviation": float(np.max(np.abs(completeness - np.eye(ch.dim)))),
        "completeness_max_eigenvalue": float(np.linalg.eigvalsh(completeness)[-1]),
        "choi_min_eigenvalue": c.min_eigenvalue(),
        "completely_positive": c.is_completely_positive,
        "choi_trace_preserving": c.is_trace_preserving,
    }
    outputs["valid"] = (
        cls != "invalid" and c.is_completely_positive and c.is_trace_preserving == (cls == TRACE_PRESERVING)
    )
    row = {"channel": desc["type"], "p": desc.get("p")}
    row.update({k: outputs[k] for k in ("classification", "completeness_deviation", "choi_min_eigenvalue")})
    return ExperimentResult("verify-channel", {"channel": desc}, outputs, tols.as_dict(), _seed(args), rows=[row])


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (overrides the config's seed)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--tolerance-profile", choices=sorted(TOLERANCE_PROFILES), default="default")

    parser = argparse.ArgumentParser(prog="softqc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="evolve a network and read out every neuron")
    p.add_argument("config")
    p.add_argument("--shots", type=int, default=100)
    p.add_argument("--dump-state", action="store_true", help=f"include the joint state (<= {MAX_DUMP_QUBITS} neurons)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("discord", parents=[common], help="discord of a two-neuron state")
    p.add_argument("config", nargs="?")
    p.add_argument("--state", help="4x4 matrix file instead of a config")
    p.add_argument("--side", choices=("0", "1", "both"), default="both")
    p.add_argument("--sweep", help="sweep the control neuron's p0 as START:STOP:NUM")
    p.set_defaults(func=cmd_discord)

    p = sub.add_parser("order-test", parents=[common], help="compare both orders of two edges into one target")
    p.add_argument("config")
    p.add_argument("--sweep", help="sweep both controls' p0 as START:STOP:NUM")
    p.set_defaults(func=cmd_order_test)

    p = sub.add_parser("dqc1", parents=[common], help="one-clean-qubit normalized trace estimate")
    p.add_argument("--unitary", help="matrix file")
    p.add_argument("--named", help="identity | random | qft | pauli:WORD")
    p.add_argument("-n", type=int, default=None, help="register qubits")
    p.add_argument("--alpha", type=float, default=1.0, help="control qubit polarization in [0, 1]")
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--shots", type=int, default=100000)
    p.set_defaults(func=cmd_dqc1)

    p = sub.add_parser("verify-channel", parents=[common], help="completeness and Choi checks for a channel")
    p.add_argument("channel", help="channel descriptor as JSON text or a path to a JSON file")
    p.set_defaults(func=cmd_verify_channel)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    tols = TOLERANCE_PROFILES[args.tolerance_profile]
    try:
        result = args.func(args, tols)
        emit(result, args.format, args.out)
    except (ValidationError, ValueError, OSError) as exc:
        print(f"softqc {args.command}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalInvariantError as exc:
        print(f"softqc {args.command}: numerical invariant violated: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if result.command == "verify-channel" and not result.outputs["valid"]:
        print(f"softqc {args.command}: channel failed verification", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
