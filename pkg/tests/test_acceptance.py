"""Acceptance criteria, one test per criterion.

Each test records a one-line PASS/FAIL verdict with the measured numbers.
Under pytest the verdicts are printed in the terminal summary; run this file
directly (``python3 tests/test_acceptance.py``) to print them without pytest.
"""
import filecmp
import json
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import GOLDEN, STATES
from golden_cases import CASES, resolve

from tfqm import errors
from tfqm import metrology as mt
from tfqm import phasespace as ps
from tfqm import spectra as sp
from tfqm import statedef as sd
from tfqm.cli import main

VERDICTS = {}
SEED = 20240611


def _close(value, expected, rel):
    return abs(value - expected) <= rel * max(1.0, abs(expected))


def _verdict(k, title, ok, detail):
    line = f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    VERDICTS[k] = line
    print(line)
    assert ok, line


def test_criterion_01_shot_noise_baseline():
    worst = max(abs(mt.collective_variance(sp.build_separable(n, 1.0)) - n) / n for n in range(1, 65))
    _verdict(1, "separable variance = n, n=1..64", worst <= 1e-12, f"max rel err {worst:.1e} (tol 1e-12)")


def test_criterion_02_heisenberg_saturation():
    worst = 0.0
    excess = -math.inf
    for n in range(2, 65):
        worst = max(worst, abs(mt.collective_variance(sp.build_heisenberg_family(n, 1.0, 0.0)) - n * n) / (n * n))
        for sigma in np.linspace(0.0, math.sqrt(n / (n - 1)), 41):
            v = mt.collective_variance(sp.build_heisenberg_family(n, 1.0, sigma))
            excess = max(excess, (v - n * n) / (n * n))
    ok = worst <= 1e-12 and excess <= 1e-12
    _verdict(2, "sigma=0 gives n^2, never above n^2", ok,
             f"max rel err {worst:.1e}, max rel excess over n^2 {excess:.1e} (tol 1e-12)")


def test_criterion_03_finite_width_formula():
    worst = 0.0
    for n in range(2, 33):
        for sigma in (0.0, 0.1, 0.5, 1.0):
            closed = n * n * (1 - sigma**2) + n * sigma**2
            built = mt.collective_variance(sp.build_heisenberg_family(n, 1.0, sigma))
            worst = max(worst, abs(built - closed) / max(1.0, closed))
    _verdict(3, "covariance construction vs closed form", worst <= 1e-12, f"max rel err {worst:.1e} (tol 1e-12)")


def test_criterion_04_transition():
    ns = [int(v) for v in np.unique(np.rint(np.geomspace(1, 10**4, 40)))]
    assert {3, 4, 5, 10**4} <= set(ns)
    start = time.perf_counter()
    report = mt.scaling_sweep(0.99, 1.0, ns)
    elapsed = time.perf_counter() - start
    slopes = dict(report.local_slopes)
    ok = (_close(report.transition_n, 99.0, 1e-12) and slopes[4] >= 1.85 and slopes[10**4] <= 1.1
          and elapsed < 1.0)
    _verdict(4, "eta=0.99 transition", ok,
             f"transition_n={report.transition_n:.12g}, slope(4)={slopes[4]:.4f}, "
             f"slope(1e4)={slopes[10**4]:.4f}, {elapsed * 1e3:.1f} ms")


def test_criterion_05_method_agreement():
    rng = np.random.default_rng(SEED)
    worst_grid = worst_analytic = 0.0
    for _ in range(20):
        rho = rng.uniform(-0.95, 0.95)
        dw = rng.uniform(0.5, 2.0)
        m1, m2 = rng.uniform(-3, 3, 2)
        j = sp.build_gaussian_pair(m1, m2, dw, rho)
        q = mt.overlap_qfi(j)
        worst_grid = max(worst_grid, abs(q - 4 * mt.collective_variance(j)) / q)
        worst_analytic = max(worst_analytic, abs(q - 8 * dw * dw * (1 + rho)) / q)
    ok = worst_grid <= 1e-4 and worst_analytic <= 1e-4
    _verdict(5, "overlap QFI vs 4 Var on 20 seeded pairs", ok,
             f"max rel err {worst_grid:.1e} vs grid variance, {worst_analytic:.1e} vs 2 dw^2 (1+rho) (tol 1e-4)")


def test_criterion_06_coherent_identity():
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(10):
        centre, dw = rng.uniform(-5, 5), rng.uniform(0.3, 2.0)
        beta = complex(*rng.normal(0, 2, 2))
        base = sp.gaussian_spectrum(centre, dw)
        w = base.grid.points
        s = sp.Spectrum1D(base.grid, base.amplitudes * np.exp(1j * rng.uniform(-1, 1) * (w - centre) ** 2))
        c = mt.coherent_variance(mt.CoherentSpec(beta, s))
        m = mt.separable_mode_variance([sp.ModeStatistics.coherent(beta, s)])
        worst = max(worst, abs(c - m) / max(1.0, abs(m)))
    # |beta|^2 <w^2> = n dw^2 matches n independent photons
    resource = 0.0
    for n in (1, 3, 10):
        s = sp.gaussian_spectrum(0.0, 1.0)
        beta = math.sqrt(n * 1.0 / sp.moments(s)[2])
        v = mt.coherent_variance(mt.CoherentSpec(beta, s))
        resource = max(resource, abs(v - mt.collective_variance(sp.build_separable(n, 1.0))) / n)
    ok = worst <= 1e-9 and resource <= 1e-9
    _verdict(6, "coherent = separable-mode variance", ok,
             f"max rel err {worst:.1e} on 10 spectra, {resource:.1e} vs n photons (tol 1e-9)")


def _gaussian_time_oracle(tau, sigma, beta, t0):
    var_t = 1 / (4 * sigma**2) + 4 * sigma**2 * beta**2
    return np.exp(-((tau - t0) ** 2) / (2 * var_t)) / math.sqrt(2 * math.pi * var_t)


def test_criterion_07_wigner_contract():
    norm_err = freq_err = time_err = 0.0
    for centre, sigma, beta, t0 in ((0.0, 1.0, 0.0, 0.0), (3.0, 0.5, 0.2, 1.0), (-1.0, 2.0, -0.1, -0.5)):
        grid = sp.default_grid(centre, sigma, 768, 8)
        base = sp.gaussian_spectrum(centre, sigma, grid)
        w = grid.points - centre
        s = sp.Spectrum1D(grid, base.amplitudes * np.exp(1j * (beta * w * w + t0 * w)))
        full = ps.wigner_single(s, ps.full_period_grid(grid))
        norm_err = max(norm_err, abs(full.integral() - 1))
        freq_err = max(freq_err, float(np.max(np.abs(full.frequency_marginal() - s.density))))
        rms = math.sqrt(1 / (4 * sigma**2) + 4 * sigma**2 * beta**2)
        tg = ps.time_grid_for(grid, rms, min_points=401, center=t0)
        tm = ps.wigner_single(s, tg).time_marginal()
        time_err = max(time_err, float(np.max(np.abs(tm - _gaussian_time_oracle(tg.points, sigma, beta, t0)))))

    s = sp.gaussian_spectrum(0.0, 1.0)
    tg = ps.time_grid_for(s.grid, 0.5, extra=1.0, min_points=401)
    before = ps.wigner_single(s, tg)
    trans_err = 0.0
    for k in (7, 40):
        dt = k * tg.step
        after = ps.wigner_single(ps.evolve(s, None, dt), tg)
        trans_err = max(trans_err, float(np.max(np.abs(after.values[:, k:] - before.values[:, :-k]))))
    dt = 0.123
    after = ps.wigner_single(ps.evolve(s, None, dt), tg.shifted(dt))
    trans_err = max(trans_err, float(np.max(np.abs(after.values - before.values))))

    j = sp.gaussian_to_jsa(sp.build_heisenberg_family(2, 1.0, 0.05))
    ratio = ps.collective_wigner_shift_check(j, delta_t=0.1).ratio
    ok = max(norm_err, freq_err, time_err) <= 1e-6 and trans_err <= 1e-5 and 1.9 <= ratio <= 2.1
    _verdict(7, "Wigner normalization, marginals, translation, shift ratio", ok,
             f"norm {norm_err:.1e}, freq marg {freq_err:.1e}, time marg {time_err:.1e} (tol 1e-6); "
             f"translation {trans_err:.1e} (tol 1e-5); ratio {ratio:.4f}")


def test_criterion_08_entanglement_not_sufficient(tmp_path):
    state = str(STATES / "entangled_shot_noise.json")
    assert main(["schmidt", "--state", state, "--out", str(tmp_path / "s.json")]) == 0
    assert main(["qfi", "--state", state, "--out", str(tmp_path / "q.json")]) == 0
    entropy = json.loads((tmp_path / "s.json").read_text())["entropy_bits"]
    variance = json.loads((tmp_path / "q.json").read_text())["reports"][0]["variance_omega"]
    ok = entropy > 0.5 and abs(variance - 2.0) <= 1e-3
    _verdict(8, "entangled state at shot noise", ok, f"entropy {entropy:.4f} bits (> 0.5), Var {variance:.6g} (2 +- 1e-3)")


def _fisher_states():
    g = sp.default_grid(0.0, 1.0)
    w1, w2 = np.meshgrid(g.points, g.points, indexing="ij")
    pair = sp.build_gaussian_pair(0.0, 0.0, 1.0, 0.9, g, g)
    chirp = sp.gaussian_spectrum(0.0, 1.0, g)
    return {
        "correlated pair sigma=0.1": sp.gaussian_to_jsa(sp.build_heisenberg_family(2, 1.0, 0.1)),
        "gaussian pair rho=0.9": pair,
        "chirped single photon": sp.Spectrum1D(g, chirp.amplitudes * np.exp(0.4j * g.points**2)),
        "chirped pair rho=0.9": sp.Jsa2D(g, g, pair.amplitudes * np.exp(0.3j * (w1 - w2) ** 2)),
        "separable, opposite chirps": sp.Jsa2D(g, g, sp.build_gaussian_pair(0, 0, 1.0, 0.0, g, g).amplitudes
                                               * np.exp(0.5j * (w1**2 - w2**2))),
    }


def test_criterion_09_fisher_below_qfi():
    ratios = {}
    for name, state in _fisher_states().items():
        ratios[name] = mt.time_of_flight_fisher(state) / mt.overlap_qfi(state)
    worst = max(ratios.values())
    detail = ", ".join(f"{k} {v:.4f}" for k, v in ratios.items())
    _verdict(9, "time-of-flight FI / QFI on 5 states", worst <= 1 + 1e-3, f"max {worst:.6f} (<= 1.001); {detail}")


def test_criterion_10_cli_goldens(tmp_path):
    mismatched = []
    files = 0
    for name, argv, outputs in CASES:
        stem = tmp_path / name
        if main(resolve(argv, STATES, stem)) != 0:
            mismatched.append(f"{name} (exit code)")
            continue
        for suffix in outputs:
            files += 1
            if not filecmp.cmp(f"{stem}{suffix}", GOLDEN / f"{name}{suffix}", shallow=False):
                mismatched.append(f"{name}{suffix}")
    expected = json.loads((STATES / "invalid_expected.json").read_text())
    wrong = []
    for name, cls_name in expected.items():
        try:
            sd.load(STATES / "invalid" / name)
            wrong.append(f"{name} (accepted)")
        except getattr(errors, cls_name):
            pass
        except Exception as e:  # noqa: BLE001
            wrong.append(f"{name} ({type(e).__name__})")
    ok = not mismatched and not wrong
    _verdict(10, "CLI goldens and negative examples", ok,
             f"{files - len(mismatched)}/{files} golden files identical, "
             f"{len(expected) - len(wrong)}/{len(expected)} negative examples rejected"
             + (f"; mismatched: {mismatched}" if mismatched else "") + (f"; wrong: {wrong}" if wrong else ""))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
