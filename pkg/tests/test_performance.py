import math

import numpy as np
import pytest

from photonic_ssp import NoCrossover, SSPInstance, ThetaOutOfRange
from photonic_ssp.performance import (
    ACTIN,
    PHOTON,
    CarrierModel,
    ElectronicModel,
    GeometryParams,
    QuantumSourceModel,
    SnrModel,
    calibrate_flops,
    crossover,
    electronic_time,
    fisher_info,
    flops_window,
    longest_path_length,
    photonic_time,
    quantum_photonic_time,
    quantum_time_multiplier,
    race_table,
    snr,
    snr_for_instance,
    theta_of_N,
    variance_bound,
)
from photonic_ssp.presets import calibration_targets, default_geometry, electronic_models
from photonic_ssp.ssp_core import successive_primes_instance

from .oracles import first_n_primes, snr_closed_form

FLAT = GeometryParams(node_pitch_mm=1.0, diagonal_factor=1.0, split_coupling_len_mm=0.0,
                      converge_coupling_len_mm=0.0)


class TestGeometry:
    def test_single_element_hand_count(self):
        geom = GeometryParams(node_pitch_mm=1.0, diagonal_factor=1.0)
        assert longest_path_length(SSPInstance((5,)), geom) == pytest.approx(10.1)

    @pytest.mark.parametrize("elements", [(5,), (2, 5, 7, 9), (3, 7, 9, 11), (1, 1, 40)])
    def test_degenerate_is_total(self, elements):
        inst = SSPInstance(elements)
        assert longest_path_length(inst, FLAT) == inst.total

    def test_extra_per_junction(self):
        geom = GeometryParams(node_pitch_mm=1.0, diagonal_factor=1.0, split_coupling_len_mm=0.0,
                              converge_coupling_len_mm=0.0, extra_len_per_junction_mm=0.5)
        # 4 blocks x (split + converge) on the all-include route
        assert longest_path_length(SSPInstance((2, 5, 7, 9)), geom) == 23 + 8 * 0.5

    def test_route_ends_at_total_port(self):
        inst = SSPInstance((2, 5, 7, 9))
        geom = GeometryParams(node_pitch_mm=0.1, diagonal_factor=1.5)
        assert longest_path_length(inst, geom) == pytest.approx(
            23 * 0.1 * 1.5 + 4 * (1.8 + 3.3))


class TestTimes:
    def test_photon_twenty_mm(self):
        geom = GeometryParams(node_pitch_mm=20.0, diagonal_factor=1.0, split_coupling_len_mm=0.0,
                              converge_coupling_len_mm=0.0)
        inst = SSPInstance((1,))
        assert photonic_time(inst, geom, PHOTON) == pytest.approx(1e-10)
        assert photonic_time(inst, geom, ACTIN) == pytest.approx(4000.0)

    def test_zero_length(self):
        geom = GeometryParams(node_pitch_mm=0.0, split_coupling_len_mm=0.0,
                              converge_coupling_len_mm=0.0)
        assert photonic_time(SSPInstance((3, 4)), geom) == 0.0

    def test_experimental_cases_sub_nanosecond(self):
        geom = default_geometry()
        for els in [(3, 7, 11), (3, 7, 9, 11), (2, 5, 7, 9)]:
            assert photonic_time(SSPInstance(els), geom) < 1e-9

    def test_electronic_single(self):
        assert electronic_time(1, ElectronicModel("unit", 1.0)) == 1.0

    def test_op_count_is_subset_cardinality_sum(self):
        m = ElectronicModel("unit", 1.0)
        for n in range(1, 12):
            brute = sum(bin(mask).count("1") for mask in range(1 << n))
            assert m.total_ops(n) == brute

    def test_carrier_validation(self):
        with pytest.raises(ValueError):
            CarrierModel("stuck", 0.0)

    def test_quantum_multiplier(self):
        assert quantum_time_multiplier(QuantumSourceModel(1)) == 1
        inst, geom = SSPInstance((3, 7, 11)), default_geometry()
        classical = photonic_time(inst, geom)
        assert quantum_photonic_time(inst, geom, QuantumSourceModel(100)) == pytest.approx(
            100 * classical)
        for m in (1, 2.5, 1e3):
            assert quantum_photonic_time(inst, geom, QuantumSourceModel(m)) >= classical

    def test_growth_rates(self):
        geom = default_geometry()
        cpu = electronic_models()[0]
        ph = [photonic_time(successive_primes_instance(n), geom) for n in range(1, 41)]
        el = [electronic_time(n, cpu) for n in range(1, 41)]
        ph_ratio = [b / a for a, b in zip(ph, ph[1:])]
        el_ratio = [b / a for a, b in zip(el, el[1:])]
        assert ph_ratio[-1] < 1.06
        assert ph_ratio[-1] < ph_ratio[10] < ph_ratio[0]
        assert el_ratio[-1] == pytest.approx(2 * 40 / 39)
        assert all(r > 2 for r in el_ratio)


class TestCrossover:
    def test_shipped_presets(self):
        geom = default_geometry()
        got = {m.name: crossover(geom, PHOTON, m) for m in electronic_models()}
        assert got == {"cpu": 6, "gpu": 12, "super": 28}
        assert calibration_targets() == got

    def test_calibration_reproduces_presets(self):
        geom = default_geometry()
        for m in electronic_models():
            target = calibration_targets()[m.name]
            assert calibrate_flops(target, geom) == m.flops
            lo, hi = flops_window(target, geom)
            assert lo <= m.flops < hi

    def test_window_edges(self):
        geom = default_geometry()
        lo, hi = flops_window(12, geom)
        assert crossover(geom, PHOTON, ElectronicModel("a", lo)) == 12
        assert crossover(geom, PHOTON, ElectronicModel("b", hi * 1.0000001)) == 13

    def test_monotone_in_flops(self):
        geom = default_geometry()
        grid = np.logspace(9, 20, 45)
        ns = [crossover(geom, PHOTON, ElectronicModel("x", f)) for f in grid]
        assert all(b >= a for a, b in zip(ns, ns[1:]))

    def test_no_crossover(self):
        with pytest.raises(NoCrossover):
            crossover(default_geometry(), ACTIN, ElectronicModel("fast", 1e30), cap=20)

    def test_race_table_molecular_always_slower(self):
        rows = race_table(range(1, 41), default_geometry(), electronic_models())
        assert all(r.molecular_s > r.photonic_s for r in rows)
        assert set(rows[0].electronic_s) == {"cpu", "gpu", "super"}


class TestSnr:
    def test_n4_zero_offset(self):
        assert snr(4, SnrModel()) == pytest.approx(-13.2764, abs=1e-12)

    def test_doubling_input(self):
        a = snr(7, SnrModel(input_power=1.0, noise_power=1e-4))
        b = snr(7, SnrModel(input_power=2.0, noise_power=1e-4))
        assert b - a == pytest.approx(10 * math.log10(2))
        assert b - a == pytest.approx(3.0103, abs=1e-4)

    def test_strictly_decreasing(self):
        values = [snr(n) for n in range(1, 60)]
        assert all(b < a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("n", range(1, 51))
    def test_against_closed_form(self, n):
        model = SnrModel(input_power=3.0, noise_power=1e-4)
        assert abs(snr(n, model) - snr_closed_form(n, 3.0, 1e-4)) <= 1e-9

    def test_instance_variant(self):
        inst = SSPInstance(tuple(first_n_primes(4)))
        assert snr_for_instance(inst) == snr(4)


class TestFisher:
    def test_fair_coin(self):
        assert fisher_info(0.5) == 4.0
        assert variance_bound(0.5, 100) == 0.0025

    def test_additivity(self):
        assert variance_bound(0.3, 200) == pytest.approx(variance_bound(0.3, 100) / 2)

    @pytest.mark.parametrize("theta", [1e-6, 0.01, 0.3, 0.5, 0.77, 0.999])
    @pytest.mark.parametrize("m", [1, 7, 10_000])
    def test_cramer_rao_identity(self, theta, m):
        assert abs(variance_bound(theta, m) * fisher_info(theta) * m - 1) <= 1e-12

    def test_theta_n4(self):
        assert theta_of_N(4) == pytest.approx(10 ** -1.32764, rel=1e-12)
        assert theta_of_N(4) == pytest.approx(0.047028, abs=1e-6)

    def test_theta_in_unit_interval(self):
        for n in range(1, 60):
            assert 0 < theta_of_N(n) < 1

    def test_theta_clamp(self):
        with pytest.raises(ThetaOutOfRange):
            theta_of_N(3, SnrModel(c1=3.0, c2=0.0))

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.5])
    def test_bad_theta(self, bad):
        with pytest.raises(ThetaOutOfRange):
            fisher_info(bad)
