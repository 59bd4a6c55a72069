"""Suite behavior: verdict recomputability, determinism, thread independence."""

import pytest

from bvosc import CantorSpec
from bvosc.verify import (
    CheckItem,
    band,
    flat_mix_function,
    run_suites,
    verify_cantor_oscillation,
    verify_density_range,
    verify_measure_properties,
    verify_one_dim_theorem,
    verify_sbv_representation,
)


class TestCheckItems:
    def test_pass_is_recomputable(self):
        item = CheckItem("x", measured=1.01, expected=1.0, tolerance=0.02)
        assert item.passed
        assert abs(item.measured - item.expected) <= item.tolerance
        assert not CheckItem("y", 1.05, 1.0, 0.02).passed

    def test_band_encoding(self):
        assert band("b", 0.45, 0.4, 0.5).passed
        assert not band("b", 0.39, 0.4, 0.5).passed
        assert band("edge", 0.4, 0.4, 0.5).passed


class TestSBVSuite:
    def test_mix_function_passes(self):
        rep = verify_sbv_representation(eps_schedule=(2 ** -5, 2 ** -6), steps=8)
        assert rep.passed
        final = rep.items[0]
        assert final.expected == pytest.approx(1.0)
        assert abs(final.measured - 1.0) <= 0.05

    def test_pure_jump_expected_value(self):
        from bvosc import BVFunction1D, Interval
        f = BVFunction1D(domain=Interval(-1, 1), atoms=((0.0, 2.0),))
        rep = verify_sbv_representation(f, eps_schedule=(2 ** -4, 2 ** -5), steps=8)
        assert rep.items[0].expected == pytest.approx(1.0)  # |jump| / 2
        assert rep.passed

    def test_pure_linear_expected_value(self):
        from bvosc import BVFunction1D, Interval
        f = BVFunction1D(domain=Interval(0, 1), slopes=(2.0,))
        rep = verify_sbv_representation(f, eps_schedule=(2 ** -4, 2 ** -5), steps=8)
        assert rep.items[0].expected == pytest.approx(0.5)  # |Df| / 4
        assert rep.passed


class TestCantorSuite:
    def test_canonical_bands(self):
        rep = verify_cantor_oscillation()
        assert rep.passed
        assert rep.config["k_jump"] >= 0.40
        assert rep.config["k_affine"] <= 0.35
        assert rep.config["margin"] > 0

    def test_depth_zero_both_quarter(self):
        rep = verify_cantor_oscillation(CantorSpec(ks=(), depth=0),
                                        scales=(1 / 8, 1 / 32),
                                        jump_min=0.2, affine_max=0.3)
        assert rep.config["k_jump"] == pytest.approx(0.25, abs=1e-9)
        assert rep.config["k_affine"] == pytest.approx(0.25, abs=1e-9)

    @pytest.mark.filterwarnings("ignore:growth condition")
    def test_gap_widens_with_larger_k(self):
        small = verify_cantor_oscillation(CantorSpec(ks=(4, 16), depth=2))
        large = verify_cantor_oscillation(CantorSpec(ks=(4, 64), depth=2))
        assert large.config["margin"] > small.config["margin"]


class TestOtherSuites:
    def test_measure_properties(self):
        rep = verify_measure_properties(seed=3)
        assert rep.passed
        names = [i.name for i in rep.items]
        assert any(n.startswith("superadditivity") for n in names)
        assert any(n.startswith("subadditivity") for n in names)
        assert "translate_doubling" in names
        assert "null_set_gives_zero" in names

    def test_density_range(self):
        rep = verify_density_range()
        assert rep.passed
        assert rep.config["windows_checked"] > 0
        assert rep.config["windows_skipped"] == 0  # mix has variation everywhere

    def test_density_range_skips_flat_windows(self):
        rep = verify_density_range(flat_mix_function())
        assert rep.passed
        assert rep.config["windows_skipped"] > 0

    def test_one_dim_tau_independence(self):
        rep = verify_one_dim_theorem()
        assert rep.passed
        jump_key = "0.000000"
        assert all(abs(v - 0.5) < 2e-2 for v in rep.config["estimates"][jump_key])


class TestRunner:
    def test_unknown_suite_rejected(self):
        with pytest.raises(ValueError):
            run_suites("nope")

    def test_reports_deterministic(self):
        a = verify_cantor_oscillation().to_dict()
        b = verify_cantor_oscillation().to_dict()
        assert a == b

    def test_threaded_matches_serial(self):
        serial = run_suites(["cantor", "onedim"], threads=1)
        threaded = run_suites(["cantor", "onedim"], threads=2)
        assert [r.to_dict() for r in serial] == [r.to_dict() for r in threaded]

    def test_runtime_excluded_by_default(self):
        rep = verify_cantor_oscillation()
        assert "runtime_s" not in rep.to_dict()
        assert "runtime_s" in rep.to_dict(include_runtime=True)
