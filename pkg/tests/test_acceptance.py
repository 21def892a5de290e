"""Acceptance gate: one test (and one printed verdict line) per criterion.

Each criterion prints exactly one ``[PASS]``/``[FAIL]`` line before the
assertion fires, so the verdicts survive into captured output as well as
the pytest -v report.
"""

import json
import math
import time

import numpy as np
import pytest

from nopanet import (
    NopaParams,
    PassiveNetwork,
    build_closed_loop,
    closed_form,
    determinant_path,
    extract_uv,
    is_l2_matrix,
    random_l2_matrix,
    single_nopa_transfer,
    squeezing,
    squeezing_spectrum,
    stability,
    static_coefficients,
    static_transfer,
    to_quadrature,
    transfer,
    vanishing_search,
)
from nopanet.cli import main
from nopanet.closed_form import THETA_INDIFFERENT
from nopanet.linalg import kron
from nopanet.static_limit import elimination_matrix


def _report(number: int, label: str, ok: bool, detail: str = ""):
    verdict = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{verdict}] criterion {number}: {label}{suffix}")
    assert ok, f"criterion {number} failed: {label}{suffix}"


def parameter_grid():
    """(n, x, y) triples of the shared acceptance grid, stable instances only."""
    triples = []
    for n in range(2, 11):
        xs = (0.02, 0.05, 0.078 * math.sqrt(10.0 / n), 0.1)
        for x in xs:
            for y in (0.5, 1.0):
                if stability(NopaParams.from_normalized(x, y), PassiveNetwork.cfb(n)).stable:
                    triples.append((n, x, y))
    return triples


GRID = parameter_grid()


def test_criterion_1_three_path_uv_agreement():
    start = time.monotonic()
    worst = 0.0
    for n, x, y in GRID:
        c = static_coefficients(x, y)
        r = closed_form(c, n)
        u_d, v_d = determinant_path(c, n)
        u_m, v_m = extract_uv(static_transfer(c, PassiveNetwork.cfb(n)))
        scale = max(1.0, abs(r.u), abs(r.v))
        worst = max(
            worst,
            abs(r.u - u_d) / scale,
            abs(r.v - v_d) / scale,
            abs(r.u - u_m) / scale,
            abs(r.v - v_m) / scale,
        )
    elapsed = time.monotonic() - start
    ok = worst < 1e-9 and elapsed < 10.0
    _report(
        1,
        "three-path u/v agreement on the stable grid",
        ok,
        f"worst rel disagreement {worst:.2e}, {len(GRID)} instances, {elapsed:.1f}s",
    )


def test_criterion_2_optimality_certification():
    start = time.monotonic()
    worst_val = 0.0
    worst_phase = 0.0
    for n, x, y in GRID:
        c = static_coefficients(x, y)
        r = closed_form(c, n)
        st = static_transfer(c, PassiveNetwork.cfb(n))
        found = vanishing_search(st.h_n, grid=120)
        worst_val = max(worst_val, abs(found.v_total / 2.0 - 2.0 * (abs(r.u) - abs(r.v)) ** 2))
        if r.upsilon > 0:
            worst_phase = max(worst_phase, abs(math.cos(found.psi1 + found.psi2) + 1.0))
        elif r.upsilon < 0:
            worst_phase = max(worst_phase, abs(math.cos(found.psi1 + found.psi2) - 1.0))
    elapsed = time.monotonic() - start
    ok = worst_val < 1e-8 and worst_phase < 1e-4 and elapsed < 30.0
    _report(
        2,
        "grid-plus-refinement optimum matches 2(|u|-|v|)^2 and the phase class",
        ok,
        f"worst value gap {worst_val:.2e}, worst phase gap {worst_phase:.2e}, {elapsed:.1f}s",
    )


def test_criterion_3_zero_frequency_consistency():
    start = time.monotonic()
    worst = 0.0
    count = 0
    for n, x, y in GRID:
        if n > 6:
            continue
        ss = build_closed_loop(NopaParams.from_normalized(x, y), PassiveNetwork.cfb(n))
        st = static_transfer(static_coefficients(x, y), PassiveNetwork.cfb(n))
        worst = max(worst, float(np.max(np.abs(transfer(ss, 0.0) - st.h_n))))
        count += 1
    elapsed = time.monotonic() - start
    ok = worst < 1e-9 and elapsed < 5.0
    _report(
        3,
        "finite-bandwidth transfer at omega=0 equals the static map",
        ok,
        f"worst entry gap {worst:.2e}, {count} instances, {elapsed:.1f}s",
    )


def test_criterion_4_shot_noise_baseline():
    worst = 0.0
    p = NopaParams.from_normalized(0.0, 1.0)
    rng = np.random.default_rng(101)
    for n in (2, 3, 5):
        ss = build_closed_loop(p, PassiveNetwork.cfb(n))
        omegas = np.linspace(0.0, 2.0 * p.gamma, 5)
        for ta, tb in [(0.0, 0.0), (math.pi / 2, math.pi / 2)] + [
            tuple(rng.uniform(-math.pi, math.pi, 2)) for _ in range(3)
        ]:
            for r in squeezing_spectrum(ss, omegas, ta, tb):
                worst = max(worst, abs(r.v_plus - 2.0), abs(r.v_minus - 2.0))
    closed_ok = True
    for n in range(2, 11):
        r = closed_form(static_coefficients(0.0, 1.0), n)
        closed_ok &= abs(r.v_opt - 2.0) < 1e-12 and r.upsilon == 0.0
        closed_ok &= r.theta_class == THETA_INDIFFERENT
    ok = worst < 1e-12 and closed_ok
    _report(
        4,
        "pump-off baseline is exactly shot noise at every omega and phase",
        ok,
        f"worst variance gap {worst:.2e}",
    )


@pytest.mark.parametrize("x10", [0.078, 0.13], ids=["preset-0.078", "preset-0.13"])
def test_criterion_5_monotone_improvement(x10):
    start = time.monotonic()
    dbs = []
    all_stable = True
    for n in range(2, 11):
        x_n = math.sqrt(10.0 / n) * x10
        all_stable &= stability(
            NopaParams.from_normalized(x_n, 1.0), PassiveNetwork.cfb(n)
        ).stable
        dbs.append(10.0 * math.log10(closed_form(static_coefficients(x_n, 1.0), n).v_opt))
    monotone = all(b < a for a, b in zip(dbs, dbs[1:]))
    elapsed = time.monotonic() - start
    ok = all_stable and monotone and elapsed < 5.0
    _report(
        5,
        f"equal-power scaling from x10={x10} improves strictly with chain length",
        ok,
        f"stable={all_stable}, monotone={monotone}, dB n=2..10: "
        + ", ".join(f"{d:.3f}" for d in dbs),
    )


def test_criterion_6_randomized_property_suites():
    start = time.monotonic()
    rng = np.random.default_rng(2024)
    jj2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    failures = 0
    for _ in range(200):
        n = int(rng.integers(1, 6))
        # parity-pattern closure under product and inverse
        if not is_l2_matrix(random_l2_matrix(n, rng) @ random_l2_matrix(n, rng), tol=1e-9):
            failures += 1
        if not is_l2_matrix(
            np.linalg.inv(random_l2_matrix(n, rng, max_cond=1e6)), tol=1e-8
        ):
            failures += 1
        # quadrature map of a random unitary is orthogonal symplectic
        dim = 2 * (n + 1)
        z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, r = np.linalg.qr(z)
        u = q * (np.diagonal(r) / np.abs(np.diagonal(r))).conj()
        sq = to_quadrature(u)
        jj = kron(np.eye(dim), jj2)
        if (
            np.max(np.abs(sq.T @ sq - np.eye(2 * dim))) > 1e-12
            or np.max(np.abs(sq.T @ jj @ sq - jj)) > 1e-12
        ):
            failures += 1
        # stability implies the static loop elimination is invertible
        nn = int(rng.integers(2, 7))
        x = float(rng.uniform(0.01, 0.35))
        y = float(rng.uniform(0.5, 1.0))
        net = PassiveNetwork.cfb(nn)
        if stability(NopaParams.from_normalized(x, y), net).stable:
            q_mat = elimination_matrix(static_coefficients(x, y), net)
            if abs(np.linalg.det(q_mat)) == 0.0:
                failures += 1
    elapsed = time.monotonic() - start
    ok = failures == 0 and elapsed < 20.0
    _report(
        6,
        "200 randomized trials of all four property suites",
        ok,
        f"failures {failures}, {elapsed:.1f}s",
    )


def test_criterion_7_single_nopa_sanity():
    h = single_nopa_transfer(static_coefficients(0.5, 1.0))
    at_zero = squeezing(h, 0.0, 0.0)
    at_pi = squeezing(h, math.pi / 2, math.pi / 2)
    gap = max(
        abs(at_zero.v_plus - 18.0),
        abs(at_zero.v_minus - 18.0),
        abs(at_pi.v_plus - 2.0 / 9.0),
        abs(at_pi.v_minus - 2.0 / 9.0),
    )
    ok = gap < 1e-12
    _report(
        7,
        "single lossless NOPA at r=0.5: V=18 at zero phases, 2/9 at pi sum",
        ok,
        f"worst gap {gap:.2e}",
    )


def test_criterion_8_byte_identical_determinism(tmp_path):
    cmp_cfg = tmp_path / "cmp.json"
    cmp_cfg.write_text(json.dumps({"preset": "x10-text"}))
    blobs = {"verify": [], "compare": []}
    for tag in ("a", "b"):
        v_out = tmp_path / f"verify-{tag}.txt"
        c_out = tmp_path / f"compare-{tag}.csv"
        assert main(["verify", "--seed", "7", "--trials", "40", "--out", str(v_out)]) == 0
        assert main(["compare", "--config", str(cmp_cfg), "--out", str(c_out)]) == 0
        blobs["verify"].append(v_out.read_bytes())
        blobs["compare"].append(c_out.read_bytes())
    ok = blobs["verify"][0] == blobs["verify"][1] and blobs["compare"][0] == blobs["compare"][1]
    _report(8, "verify and compare outputs are byte-identical across runs", ok)
