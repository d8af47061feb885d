"""Smoke tests for the python bindings: thin checks that the module loads and
the numbers flowing through it are the same ones the C++ tests pin down."""

import math

import numpy as np
import pytest

import phononbus as pb


def test_junction_device_conversion():
    p = pb.JunctionParams.from_device(21.0, 6.0)
    assert p.EJ / pb.meV == pytest.approx(43.14, abs=0.05)
    assert p.Ec / pb.neV == pytest.approx(53.4, abs=0.2)
    assert not p.ratio_warning
    # round trip through the energy form
    q = pb.JunctionParams.from_energies(p.EJ, p.Ec)
    assert q.critical_current_uA == pytest.approx(21.0, rel=1e-12)
    assert q.capacitance_pF == pytest.approx(6.0, rel=1e-12)


def test_spectrum_shapes_and_anharmonicity():
    p = pb.JunctionParams.from_energies(43.05 * pb.meV, 53.33 * pb.neV)
    spec = pb.diagonalize(p, 0.9)
    energies = np.asarray(spec["energies"])
    dipole = np.asarray(spec["dipole"])
    assert energies.ndim == 1 and dipole.shape == (len(energies), len(energies))
    ratios = (energies[:3] - 0.0) / spec["omega_p"]
    assert ratios[0] == pytest.approx(0.4995, abs=2e-3)
    assert ratios[1] == pytest.approx(1.4971, abs=2e-3)
    assert dipole[0, 1] == pytest.approx(3.46e-2, rel=0.02)
    assert spec["states_below_barrier"] < spec["basis_size"] + 1


def test_resonator_coupling():
    r = pb.ResonatorParams.aln_with_frequency(0.230, 15.0)
    d = pb.resonator_derive(r)
    assert d["omega0"] / pb.GHz == pytest.approx(15.0, rel=1e-6)
    assert d["C_res_fF"] == pytest.approx(0.042, rel=0.03)
    assert pb.coupling_strength(r, "full") / pb.ueV == pytest.approx(0.620, rel=0.02)
    assert pb.coupling_strength(r, "split") == pytest.approx(
        0.5 * pb.coupling_strength(r, "full"), rel=1e-12
    )
    th = pb.thermal_excited_probability(d["omega0"], 0.1)
    assert th["p1"] == pytest.approx(7.46e-4, rel=0.02)


def test_resonance_and_rwa():
    p = pb.JunctionParams.from_energies(43.05 * pb.meV, 53.33 * pb.neV)
    info = pb.resonance_info(p, 15.0 * pb.GHz, 0.620 * pb.ueV)
    assert 0.543 < info["s_star"] < 0.548
    assert info["period_ns"] == pytest.approx(113.7, rel=0.02)

    rabi = pb.rabi_frequency(0.620 * pb.ueV, info["x01"], 0.0)
    assert rabi["on_resonance"] == pytest.approx(info["omega_rabi"], rel=1e-12)

    # closed form conserves the single-quantum norm
    for t in np.linspace(0.0, 200.0, 7):
        a = pb.rwa_amplitudes(0.6, 0.8j, 0.620 * pb.ueV, info["x01"], 0.05, t)
        total = sum(abs(a[k]) ** 2 for k in ("c00", "c01", "c10", "c11"))
        assert total == pytest.approx(1.0, abs=1e-12)

    assert pb.pulse_phase("swap") == pytest.approx(math.pi)
    with pytest.raises(pb.SimulatorError):
        pb.pulse_phase("bogus")


def test_config_gateway():
    cfg = """{
      "kind": "simulate",
      "junction": {"josephson_energy": "43.05 meV", "charging_energy": "53.33 neV"},
      "resonator": {"material": "AlN", "radius": "0.23 um", "frequency": "15 GHz"},
      "schedule": {"J1": [{"kind": "hold", "s": 0.545, "duration": "0.1 ns"}]},
      "initial": {"state": "1_0"},
      "integrator": {"dt": "50 fs"}
    }"""
    canon = pb.canonical_config(cfg)
    assert pb.canonical_config(canon) == canon

    out = pb.simulate_config(cfg)
    assert out["duration_ns"] == pytest.approx(0.1)
    assert out["norm_drift"] < 7e-5
    total = sum(abs(v) ** 2 for v in out["final_amplitudes"].values())
    assert total == pytest.approx(1.0, abs=1e-6)

    with pytest.raises(pb.SimulatorError):
        pb.simulate_config('{"kind": "simulate"}')
