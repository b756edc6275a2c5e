"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -s``; the lines are also
repeated in the terminal summary of any pytest run that includes this file.
"""

import time
from contextlib import contextmanager

import numpy as np

from softqc import discord as dsc
from softqc.channels import amplitude_damping, apply, depolarizing
from softqc.dqc1 import dqc1_estimate
from softqc.linalg import PLUS, diagonal_qubit, random_density_matrix, random_unitary
from softqc.network import (
    ControlledKrausEdge,
    Neuron,
    SoftQuantumNetwork,
    evolve,
    order_gap,
    product_formula_output,
    reduced_output,
    sample_output,
    two_neuron_experiment,
)

from .conftest import NAMED, random_named_channel, random_qubit_state
from .golden_cases import CASES, GOLDEN, run_case
from .oracles import bloch_discord_grid
from .test_discord import random_classical_state

RESULTS = []


@contextmanager
def criterion(number, title, budget):
    """Time the block; a failed check or a blown runtime budget is a FAIL."""
    start = time.perf_counter()
    detail = {}
    try:
        yield detail
    except AssertionError as exc:
        elapsed = time.perf_counter() - start
        _report(number, title, False, f"{elapsed:.2f}s / {budget:g}s; {exc}")
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < budget
    extra = "; ".join(f"{k}={v}" for k, v in detail.items())
    _report(number, title, ok, f"{elapsed:.2f}s / {budget:g}s" + (f"; {extra}" if extra else ""))
    assert ok, f"runtime {elapsed:.2f}s exceeds {budget}s"


def _report(number, title, ok, info):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({info})"
    RESULTS.append(line)
    print(line)


def test_criterion_1_channel_correctness():
    rng = np.random.default_rng(101)
    with criterion(1, "named channels preserve trace and positivity", 1.0) as d:
        worst_trace = worst_closed = 0.0
        min_eig = np.inf
        for make in NAMED:
            for k in range(100):
                p = rng.uniform()
                # alternate pure and full-rank inputs so PSD is probed at the boundary
                rho = random_density_matrix(rng, 1, rank=1 + k % 2)
                out = apply(make(p), rho)
                worst_trace = max(worst_trace, abs(np.trace(out) - 1))
                min_eig = min(min_eig, np.linalg.eigvalsh(out)[0])
                if make is depolarizing:
                    expected = (1 - 4 * p / 3) * rho + (2 * p / 3) * np.eye(2)
                    worst_closed = max(worst_closed, np.max(np.abs(out - expected)))
        d.update(trace_err=f"{worst_trace:.1e}", min_eig=f"{min_eig:.1e}", closed_form_err=f"{worst_closed:.1e}")
        assert worst_trace <= 1e-10
        assert min_eig >= -1e-9
        assert worst_closed <= 1e-12


def random_fan_in_network(rng, n_controls):
    """Target plus ``n_controls`` diagonal controls at shuffled qubit positions."""
    ids = [f"q{k}" for k in range(n_controls + 1)]
    rng.shuffle(ids)
    target, controls = ids[0], ids[1:]
    p_list = [float(rng.uniform()) for _ in controls]
    chans = [random_named_channel(rng) for _ in controls]
    rho_t = random_qubit_state(rng)
    orders = rng.permutation(10 * n_controls)[:n_controls]
    states = {target: rho_t, **{c: diagonal_qubit(p) for c, p in zip(controls, p_list)}}
    neurons = [Neuron(i, states[i]) for i in sorted(ids)]
    edges = [ControlledKrausEdge(c, target, ch, int(o)) for c, ch, o in zip(controls, chans, orders)]
    net = SoftQuantumNetwork(neurons, edges)
    timeline = sorted(zip(orders, p_list, chans), key=lambda t: t[0])
    expected = product_formula_output([t[1] for t in timeline], [t[2] for t in timeline], rho_t)
    return net, net.index(target), expected


def test_criterion_2_product_formula_equivalence():
    rng = np.random.default_rng(202)
    with criterion(2, "joint evolution matches the product formula", 5.0) as d:
        worst = 0.0
        for k in range(100):
            net, t, expected = random_fan_in_network(rng, k % 3 + 1)
            worst = max(worst, np.max(np.abs(reduced_output(evolve(net), t) - expected)))
        d["max_err"] = f"{worst:.1e}"
        assert worst <= 1e-10


def test_criterion_3_discord_creation():
    with criterion(3, "controlled damping creates one-sided discord", 10.0) as d:
        rho = two_neuron_experiment(0.5, PLUS, amplitude_damping(0.5))
        on_target = dsc.discord(rho, 1).discord
        on_control = dsc.discord(rho, 0).discord
        grid = bloch_discord_grid(rho, 1, res=512)
        d.update(target=f"{on_target:.6g}", grid=f"{grid:.6g}", control=f"{on_control:.1e}")
        assert on_target > 1e-4
        assert abs(on_target - grid) <= 1e-5
        assert on_control <= 1e-6


def test_criterion_4_classical_states():
    rng = np.random.default_rng(404)
    with criterion(4, "classical states have zero discord", 30.0) as d:
        worst = max(dsc.discord(random_classical_state(rng), side).discord for _ in range(200) for side in (0, 1))
        d["max_discord"] = f"{worst:.1e}"
        assert worst <= 1e-6


def test_criterion_5_order_sensitivity():
    with criterion(5, "edge order changes the three-neuron output", 1.0) as d:
        ad, dp = amplitude_damping(0.5), depolarizing(0.6)
        gap = order_gap(0.5, 0.5, PLUS, ad, dp)
        silent = max(order_gap(1.0, 0.5, PLUS, ad, dp), order_gap(0.5, 1.0, PLUS, ad, dp))
        same = order_gap(0.5, 0.5, PLUS, ad, amplitude_damping(0.5))
        d.update(gap=f"{gap:.6g}", p_one=f"{silent:.1e}", equal_channels=f"{same:.1e}")
        assert gap > 1e-6
        assert silent <= 1e-10
        assert same <= 1e-10


def test_criterion_6_dqc1():
    rng = np.random.default_rng(606)
    with criterion(6, "one-clean-qubit estimate of the normalized trace", 10.0) as d:
        worst = 0.0
        for k in range(20):
            n = k % 3 + 1
            u = random_unitary(rng, 2**n)
            alpha = float(rng.uniform(0.1, 1.0))
            worst = max(worst, abs(dqc1_estimate(u, alpha).estimate - alpha * np.trace(u) / 2**n))
        u = random_unitary(rng, 4)
        exact = dqc1_estimate(u, 0.8)
        sampled = dqc1_estimate(u, 0.8, shots=10**6, seed=6)
        zx = abs(sampled.expect_x - exact.expect_x) / sampled.stderr_x
        zy = abs(sampled.expect_y - exact.expect_y) / sampled.stderr_y
        d.update(exact_err=f"{worst:.1e}", z_x=f"{zx:.2f}", z_y=f"{zy:.2f}")
        assert worst <= 1e-10
        assert zx <= 5 and zy <= 5


def test_criterion_7_sampling_statistics():
    with criterion(7, "seeded firing samples follow p0", 1.0) as d:
        bits = sample_output(0.75, 77, 10**5)
        freq = float(np.mean(bits == 0))
        d["freq0"] = f"{freq:.5f}"
        assert abs(freq - 0.75) <= 0.0068
        assert np.array_equal(bits, sample_output(0.75, 77, 10**5))


def test_criterion_8_cli_determinism(tmp_path):
    with criterion(8, "CLI output is byte-identical and matches golden files", 5.0) as d:
        commands = set()
        for name in CASES:
            a, b = tmp_path / f"a_{name}", tmp_path / f"b_{name}"
            assert run_case(name, a) == 0 and run_case(name, b) == 0, name
            assert a.read_bytes() == b.read_bytes(), f"{name} differs between runs"
            assert a.read_bytes() == (GOLDEN / name).read_bytes(), f"{name} differs from golden"
            commands.add(CASES[name][0])
        d["commands"] = len(commands)
        assert commands == {"simulate", "discord", "order-test", "dqc1", "verify-channel"}
