import pytest

from germforge.errors import UnsupportedGermError
from germforge.germ_io import GermSpec
from germforge.mond import MondTag
from germforge.normal_form import TwoJetClass
from germforge.pipeline import (
    blowup_context,
    classify_germ,
    classify_spec,
    working_order,
)

from conftest import germ_from_strings


class TestClassifyGerm:
    def test_immersion(self):
        out = classify_germ(germ_from_strings(["u", "v", "u^2"], 3))
        assert out.mond.tag is MondTag.IMMERSION
        assert out.corank == 0
        assert out.nf is None

    def test_corank_two(self):
        out = classify_germ(germ_from_strings(["u^2", "v^2", "u*v"], 3))
        assert out.mond.tag is MondTag.INDETERMINATE
        assert "corank 2" in out.mond.reason

    def test_cross_cap(self):
        out = classify_germ(germ_from_strings(["u", "v^2", "u*v"], 3))
        assert out.mond.tag is MondTag.CROSS_CAP
        assert out.mond.label == "S0"
        assert out.two_jet is TwoJetClass.CROSS_CAP

    def test_hk_branch_detected_not_reduced(self):
        out = classify_germ(germ_from_strings(["u", "u*v + v^5", "v^3"], 5))
        assert out.mond.tag is MondTag.TWO_JET_UV
        assert out.nf is None

    def test_degenerate_two_jet(self):
        out = classify_germ(germ_from_strings(["u", "v^3", "v^4"], 4))
        assert out.mond.tag is MondTag.INDETERMINATE

    def test_s1_full_path(self):
        out = classify_germ(germ_from_strings(["u", "v^2", "v^3 + u^2*v"], 6))
        assert out.mond.label == "S1+"
        assert out.nf is not None and out.log is not None

    def test_geometry_context_requires_class(self):
        out = classify_germ(germ_from_strings(["u", "v", "0"], 3))
        with pytest.raises(UnsupportedGermError):
            blowup_context(out)


class TestClassifySpec:
    def test_working_order_raises_for_b_probes(self):
        spec = GermSpec(("u", "v"), ("u", "v^2", "u^2*v + v^13"), 6, "exact")
        assert working_order(spec, k_max=8) == 17
        out = classify_spec(spec, k_max=8)
        assert out.mond.tag is MondTag.B
        assert out.mond.k == 6

    def test_low_order_file_still_classifies(self):
        # the file asks for order 4, but B_2 needs order 5; the pipeline
        # reparses the polynomial at a sufficient order
        spec = GermSpec(("u", "v"), ("u", "v^2", "u^2*v + v^5"), 4, "exact")
        out = classify_spec(spec)
        assert out.mond.tag is MondTag.B and out.mond.k == 2


class TestHighIndexClasses:
    def test_high_k_classification_through_order_17(self):
        cases = [
            (("u", "v^2", "v^3 + u^8*v"), "S7+"),
            (("u", "v^2", "v^3 - u^9*v"), "S8"),
            (("u", "v^2", "u^2*v + v^17"), "B8+"),
            (("u", "v^2", "u^2*v - v^15"), "B7-"),
            (("u", "v^2", "u*v^3 + u^7*v"), "C7+"),
            (("u", "v^2", "u*v^3 - u^8*v"), "C8"),
        ]
        for comps, want in cases:
            spec = GermSpec(("u", "v"), comps, 6, "exact")
            out = classify_spec(spec, k_max=8)
            assert out.mond.label == want, (comps, out.mond.label)

    def test_beyond_k_max_is_indeterminate(self):
        spec = GermSpec(("u", "v"), ("u", "v^2", "v^3 + u^12*v"), 6, "exact")
        out = classify_spec(spec, k_max=8)
        assert out.mond.tag is MondTag.INDETERMINATE
