"""Exit criteria. Each test prints one PASS/FAIL line (collected in the
terminal summary) and asserts at the stated tolerance."""

import math
import time

import numpy as np
import pytest
from mpmath import mp, mpc, matrix as mpmatrix

from frqme_grover.engine import compile_sequence, compose_map, propagate
from frqme_grover.grover import fidelity, fidelity_did, purity_did, target_state, uniform_state
from frqme_grover.linalg import expm, kron, unvec, vec
from frqme_grover.model import PhysicalParams
from frqme_grover.seqdsl import (AXES, HALF_J_PERIOD, PulseSegment, PulseSequence,
                                 oracle_sequence, parse, to_text)
from frqme_grover.sweep import SweepGrid, csv_text, emit, find_optimum, rows, run_point, run_sweep

from conftest import ACCEPTANCE_LINES

TARGETS = ("00", "01", "10", "11")
WSE = 2 * math.pi * 1e3


def report(label, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def grid_table(records, field):
    """2-D array indexed [tauc_s row, omega1_s column]."""
    return np.array([[getattr(r, field) for r in row] for row in rows(records).values()])


@pytest.fixture(scope="session")
def both_10k():
    start = time.perf_counter()
    recs = run_sweep(SweepGrid(mode="both", j_coupling=10e3), workers=1)
    return recs, time.perf_counter() - start


@pytest.fixture(scope="session")
def both_100k():
    return run_sweep(SweepGrid(mode="both", j_coupling=100e3), workers=1)


@pytest.fixture(scope="session")
def did_10k():
    return run_sweep(SweepGrid(mode="did-only", j_coupling=10e3), workers=1)


# 1 -------------------------------------------------------------------------

def test_c1_analytic_transcription():
    # independent evaluation from the coefficient/exponent table at 40 digits
    with mp.workdps(40):
        x = mp.mpf("0.1")
        ref = mp.sqrt(sum(c * mp.exp(-k * mp.pi * x)
                          for c, k in ((4, 0), (1, 9), (1, 5), (8, 4), (2, 1)))) / 4
    checks = {
        "F(0)=1": fidelity_did(0) == 1.0,
        "P(0)=1": purity_did(0) == 1.0,
        "F(10)~0.5": abs(fidelity_did(10) - 0.5) < 1e-9,
        "P(10)~17/64": abs(purity_did(10) - 0.265625) < 1e-9,
        "F(0.1)": abs(fidelity_did(0.1) - float(ref)) < 1e-12,
    }
    report("C1 analytic transcription", all(checks.values()),
           ", ".join(f"{k}:{'ok' if v else 'bad'}" for k, v in checks.items())
           + f"; F(0.1)={fidelity_did(0.1):.13f}")


# 2 -------------------------------------------------------------------------

def test_c2_unitary_limit():
    start = time.perf_counter()
    devs = {}
    for tcs in (1e-8, 1e-9):
        r = run_point(PhysicalParams.from_scaled(1.0, tcs, WSE), oracle_sequence("01"), "both")
        devs[tcs] = max(abs(r.fidelity - 1), abs(r.purity - 1), abs(r.efficiency - 1))
    elapsed = time.perf_counter() - start
    report("C2 unitary limit", max(devs.values()) < 1e-6 and elapsed < 1.0,
           "omega1_s = 1, max |metric-1| "
           + ", ".join(f"at tauc_s={t:g}: {d:.2e}" for t, d in devs.items())
           + f" (tol 1e-6), {elapsed:.2f}s")


# 3 -------------------------------------------------------------------------

def test_c3_ideal_oracle():
    p = PhysicalParams.from_scaled(1.0, 0.0, WSE)
    worst_f, worst_state = 0.0, 0.0
    for t in TARGETS:
        u = compose_map(compile_sequence(p, oracle_sequence(t), "unitary"))
        rho = unvec(u @ vec(uniform_state()), 4)
        phi = target_state(t)
        worst_f = max(worst_f, abs(fidelity(phi, rho) - 1))
        worst_state = max(worst_state, np.max(np.abs(rho - np.outer(phi, phi.conj()))))
    np.testing.assert_allclose(target_state("01"), [0.5, -0.5, 0.5, 0.5])
    report("C3 ideal oracle", worst_f < 1e-9 and worst_state < 1e-9,
           f"all targets: max |F-1| = {worst_f:.1e}, max |rho - |phi><phi|| = {worst_state:.1e}")


# 4 -------------------------------------------------------------------------

def test_c4_did_only_structure(did_10k):
    f = grid_table(did_10k, "fidelity")
    pur = grid_table(did_10k, "purity")
    monotone = bool(np.all(np.diff(f, axis=1) <= 1e-12))
    far = f[-1, -1]  # largest omega1 * tau_c on the grid
    ok = monotone and far >= 0.5 * (1 - 1e-3) and pur.min() >= 0.25 - 1e-12
    # experiment, not gated: engine vs closed form for the default sequence
    xs = np.array([r.omega1_s * r.tauc_s for r in did_10k])
    dev = np.abs(np.array([r.fidelity for r in did_10k]) - [fidelity_did(x) for x in xs])
    ACCEPTANCE_LINES.append(
        f"[INFO] C4 experiment: default sequence vs closed-form DID fidelity, "
        f"max |dF| = {dev.max():.3f} at omega1*tau_c = {xs[dev.argmax()]:.3g}")
    report("C4 DID-only structure", ok,
           f"rows non-increasing: {monotone}; F at max omega1*tau_c = {far:.6f} "
           f"(>= {0.5 * (1 - 1e-3)}); min purity = {pur.min():.6f}")


# 5 -------------------------------------------------------------------------

def test_c5_optimum_drive(both_10k):
    recs, elapsed = both_10k
    grid = SweepGrid()
    w = grid.omega1_axis
    unit = int(np.argmin(np.abs(np.log10(w))))
    hits, summary = 0, []
    for tcs, row in rows(recs).items():
        if not 1e-3 <= tcs <= 1e-1:  # central two decades of the tauc_s axis
            continue
        opt = find_optimum([r.omega1_s for r in row], [r.fidelity for r in row], tcs)
        near = opt.interior and abs(opt.index - unit) <= 1
        hits += near
        summary.append(opt.omega1_s)
    opts = np.unique(np.round(summary, 6))
    report("C5 optimum drive at omega1_s = 1", hits >= 3 and elapsed < 60,
           f"{hits} mid-range rows within one step of omega1_s=1 (need 3); "
           f"argmax omega1_s over mid-range rows = {opts.tolist()}; sweep {elapsed:.1f}s (< 60s)")


# 6 -------------------------------------------------------------------------

def test_c6_monotone_in_tauc(both_10k):
    recs, _ = both_10k
    unit = int(np.argmin(np.abs(np.log10(SweepGrid().omega1_axis))))
    col = grid_table(recs, "fidelity")[:, unit]
    steps = np.diff(col)
    report("C6 fidelity non-increasing in tauc_s at omega1_s = 1", bool(np.all(steps <= 1e-12)),
           f"largest step = {steps.max():.2e}; F from {col[0]:.6f} to {col[-1]:.6f}")


# 7 -------------------------------------------------------------------------

def test_c7_efficiency(both_10k, both_100k, tmp_path):
    recs10, _ = both_10k
    unitary = run_sweep(SweepGrid(omega1_s=(1e-2, 1e2, 7), tauc_s=(1e-4, 1, 5), mode="unitary"))
    unit_err = max(abs(r.efficiency - 1) for r in unitary)
    below = all(r.efficiency < 1 for r in recs10 if r.tauc_s >= 1e-2)
    columns_ok = True
    for name, recs in (("10k", recs10), ("100k", both_100k)):
        out = tmp_path / f"efficiency_j{name}.csv"
        emit(recs, "csv", out)
        assert len(out.read_text().splitlines()) == 49 * 49 + 1
        e = grid_table(recs, "efficiency")
        columns_ok &= bool(np.all(np.diff(e, axis=0) <= 1e-12) and np.all(e[0] > e[-1]))
    report("C7 efficiency", unit_err < 1e-6 and below and columns_ok,
           f"unitary |E-1| = {unit_err:.1e}; E < 1 for tauc_s >= 1e-2: {below}; "
           f"J=10k/100k files written, columns decreasing in tauc_s: {columns_ok}")


# 8 -------------------------------------------------------------------------

def _taylor(a, terms=90):
    with mp.workdps(40):
        m = mpmatrix([[mpc(complex(x)) for x in r] for r in a])
        term, total = mp.eye(4), mp.eye(4)
        for k in range(1, terms):
            term = term * m / k
            total += term
        return np.array([[complex(total[i, j]) for j in range(4)] for i in range(4)])


def _random_sequence(rng):
    segs = []
    for _ in range(rng.integers(1, 10)):
        if rng.random() < 0.6:
            deg = float(rng.choice([90.0, 180.0, 45.0, rng.uniform(1e-3, 720)]))
            segs.append(PulseSegment.pulse(str(rng.choice(AXES)), deg,
                                           [{1}, {2}, {1, 2}][rng.integers(3)]))
        else:
            segs.append(PulseSegment.wait(HALF_J_PERIOD if rng.random() < 0.5
                                          else float(rng.exponential(1e-4))))
    return PulseSequence(segs, f"fuzz{rng.integers(10**6)}")


def test_c8_property_suites():
    rng = np.random.default_rng(8)
    results = {}

    worst_tr = worst_h = 0.0
    modes = ("unitary", "did-only", "relax-only", "both")
    for _ in range(500):
        p = PhysicalParams.from_scaled(10 ** rng.uniform(-2, 2), 10 ** rng.uniform(-4, 0), WSE,
                                       float(rng.choice([10e3, 100e3])))
        rho = uniform_state()
        for seg in compile_sequence(p, oracle_sequence(str(rng.choice(TARGETS))),
                                    str(rng.choice(modes))):
            rho = propagate(seg, rho)
            worst_tr = max(worst_tr, abs(np.trace(rho) - 1))
            worst_h = max(worst_h, np.max(np.abs(rho - rho.conj().T)))
    results["trace"] = worst_tr < 1e-9
    results["hermiticity"] = worst_h < 1e-8

    worst_expm = 0.0
    for _ in range(100):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        ref = _taylor(a)
        worst_expm = max(worst_expm, np.max(np.abs(expm(a) - ref)) / np.max(np.abs(ref)))
    results["expm"] = worst_expm < 1e-9

    worst_vec = 0.0
    for _ in range(100):
        a, x, b = (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
                   for _ in range(3))
        worst_vec = max(worst_vec, np.max(np.abs(vec(a @ x @ b) - kron(b.T, a) @ vec(x))))
    results["vec"] = worst_vec < 1e-12

    failures = 0
    for _ in range(1000):
        seq = _random_sequence(rng)
        failures += parse(to_text(seq)) != seq
    results["parser"] = failures == 0

    grid = SweepGrid(omega1_s=(1e-2, 1e2, 6), tauc_s=(1e-4, 1, 4))
    first = csv_text(run_sweep(grid, workers=1))
    results["determinism"] = (csv_text(run_sweep(grid, workers=1)) == first
                              and csv_text(run_sweep(grid, workers=4)) == first)

    report("C8 property suites", all(results.values()),
           f"trace {worst_tr:.1e}, herm {worst_h:.1e}, expm {worst_expm:.1e}, "
           f"vec {worst_vec:.1e}, parser failures {failures}/1000, "
           f"csv deterministic {results['determinism']}")
