import pytest

from monofilt.kgroup import kclass_of_space
from monofilt.monodromy import JordanStringModel, NotPure, graded_kernel
from monofilt.theorems import (DiskModel, generate_model, generate_scrambled,
                               verify_kclass_independence,
                               verify_local_invariant_cycles,
                               verify_weight_mechanics)
from monofilt.weights import WeightedSpace


def disk(strings, n=1, point_dim=0, **kw):
    open_model = JordanStringModel(strings, n).to_nilpotent()
    point = WeightedSpace.pure(point_dim, n, "P") if point_dim \
        else WeightedSpace.zero()
    return DiskModel(open_model, point, **kw)


class TestKClassIndependence:
    def test_model_against_itself(self):
        m = JordanStringModel((("L", 2),), 1)
        assert verify_kclass_independence(m, m).passed

    def test_conjugated_j2(self):
        m = JordanStringModel((("L", 2),), 1)
        s = generate_scrambled(m, seed=3)
        rep = verify_kclass_independence(m, s)
        assert rep.passed

    def test_distinct_kernel_gradings_report_hypothesis(self):
        a = JordanStringModel((("L", 2),), 1)          # kernel at weight -1
        b = JordanStringModel((("L", 1), ("L", 1)), 1)  # kernel at weight 0
        rep = verify_kclass_independence(a, b)
        assert not rep.passed
        assert any("hypothesis not satisfied" in n for n in rep.notes)

    def test_impure_rejected(self):
        import monofilt.monodromy as M
        from monofilt.weights import (TwistedMap, WeightFiltration,
                                      WeightedSpace)
        from monofilt.qlinalg import Subspace
        from conftest import J2, span
        filt = WeightFiltration.from_spaces(2, [
            (-2, span(2, [1, 0])), (1, Subspace.full(2))])
        bad = M.NilpotentModel(WeightedSpace.from_filtration(filt), 1,
                               TwistedMap(J2, -1))
        with pytest.raises(NotPure):
            verify_kclass_independence(bad, bad)


class TestLocalInvariantCycles:
    def test_j2_string_exact(self):
        dm = disk((("L", 2),))
        rep = verify_local_invariant_cycles(dm, -1)
        assert rep.passed

    def test_zero_operator_surjects(self):
        dm = disk((("L", 1), ("L", 1)))
        assert verify_local_invariant_cycles(dm, -1).passed

    def test_point_part_slot(self):
        dm = disk((("L", 2),), point_dim=2)
        assert verify_local_invariant_cycles(dm, 0).passed

    def test_impure_shriek_fails(self):
        dm = disk((("L", 1),), pure=False, extension="shriek")
        rep = verify_local_invariant_cycles(dm, -1)
        assert not rep.passed
        assert any("hypothesis violated" in n for n in rep.notes)


class TestWeightMechanics:
    def test_pure_j2(self):
        dm = disk((("L", 2),))
        assert verify_weight_mechanics(dm, -1).all_hold
        assert verify_weight_mechanics(dm, 0).all_hold

    def test_zero_operator_vacuous_bound(self):
        dm = disk((("L", 1),))
        rep = verify_weight_mechanics(dm, -1)
        assert rep.all_hold
        assert rep.claim("i_shriek_lower_bound").detail.startswith("vacuous")

    def test_impure_shriek_pinpoints_claim_4(self):
        dm = disk((("L", 1),), pure=False, extension="shriek")
        rep = verify_weight_mechanics(dm, -1)
        assert not rep.claim("surjective_on_low_weights").holds

    def test_implication_holds_on_mixed_corpus(self, rng):
        for i in range(80):
            strings = tuple(("L", rng.randint(1, 3))
                            for _ in range(rng.randint(1, 3)))
            ext = rng.choice(["intermediate", "shriek", "star"])
            dm = disk(strings, n=rng.randint(0, 2),
                      pure=(ext == "intermediate"), extension=ext)
            for k in (-1, 0):
                wm = verify_weight_mechanics(dm, k)
                lic = verify_local_invariant_cycles(dm, k)
                if wm.all_hold:
                    assert lic.passed

    def test_pure_models_never_fail(self, rng):
        for i in range(40):
            m = generate_model(1000 + i, 3, 4, 1, ["L", "P"])
            dm = DiskModel(m.to_nilpotent(), WeightedSpace.zero())
            for k in (-1, 0):
                assert verify_weight_mechanics(dm, k).all_hold
                assert verify_local_invariant_cycles(dm, k).passed


class TestDiskModel:
    def test_pure_requires_intermediate(self):
        with pytest.raises(ValueError):
            disk((("L", 2),), pure=True, extension="shriek")

    def test_point_part_weight_checked(self):
        open_model = JordanStringModel((("L", 2),), 1).to_nilpotent()
        with pytest.raises(ValueError):
            DiskModel(open_model, WeightedSpace.pure(1, 5, "P"))


class TestGenerators:
    def test_determinism(self):
        a = generate_model(42, 3, 4, 1, ["L", "P"])
        b = generate_model(42, 3, 4, 1, ["L", "P"])
        assert a == b

    def test_scrambled_is_pure(self):
        from monofilt.monodromy import verify_hard_lefschetz
        for seed in range(10):
            m = generate_model(seed, 3, 4, 1, ["L", "P"])
            s = generate_scrambled(m, seed)
            assert verify_hard_lefschetz(s).passed

    def test_scrambled_preserves_kernel_grading_and_class(self):
        for seed in range(10):
            m = generate_model(seed, 3, 3, 2, ["L"])
            base = m.to_nilpotent()
            s = generate_scrambled(m, seed + 99)
            assert graded_kernel(base).grading == graded_kernel(s).grading
            assert kclass_of_space(base.space) == kclass_of_space(s.space)
