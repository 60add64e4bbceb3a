import pytest

from monofilt.monodromy import (GradedKernelMismatch, JordanStringModel,
                                NilpotentModel, NotNilpotent, NotPure,
                                check_monodromy_axioms, graded_kernel,
                                monodromy_filtration, nilpotency_index,
                                primitive_decomposition, verify_hard_lefschetz)
from monofilt.qlinalg import QMatrix, Subspace, apply_to_subspace, inverse
from monofilt.theorems import random_nilpotent, random_unimodular
from monofilt.weights import (TwistedLabel, TwistedMap, WeightFiltration,
                              WeightedSpace)

from conftest import J2, J3, qm, span


def block_diag(a: QMatrix, b: QMatrix) -> QMatrix:
    rows = []
    for r in a.entries:
        rows.append(list(r) + [0] * b.cols)
    for r in b.entries:
        rows.append([0] * a.cols + list(r))
    return QMatrix.from_rows(rows, cols=a.cols + b.cols)


class TestMonodromyFiltration:
    def test_zero_operator(self):
        f = monodromy_filtration(QMatrix.zero(4, 4), 7)
        assert f.weights == (7,)
        assert f.graded_dim(7) == 4

    def test_single_three_block(self):
        # per-block formula: weight of e_i is 2i - m - 1 (1-based, m = 3)
        f = monodromy_filtration(J3, 0)
        assert f.graded_dims() == {-2: 1, 0: 1, 2: 1}
        assert f.space_at(-2) == span(3, [1, 0, 0])
        assert f.space_at(0) == span(3, [1, 0, 0], [0, 1, 0])

    def test_j2_plus_j1(self):
        f = monodromy_filtration(block_diag(J2, QMatrix.zero(1, 1)), 0)
        assert f.graded_dims() == {-1: 1, 0: 1, 1: 1}

    def test_not_nilpotent(self):
        with pytest.raises(NotNilpotent):
            monodromy_filtration(QMatrix.identity(2), 0)

    def test_axioms_on_random_operators(self, rng):
        for _ in range(120):
            m = random_nilpotent(rng, max_dim=6)
            c = rng.randint(-2, 2)
            f = monodromy_filtration(m, c)
            assert check_monodromy_axioms(f, m, c).passed

    def test_uniqueness_under_conjugation(self, rng):
        for _ in range(40):
            m = random_nilpotent(rng, max_dim=5, scramble=False)
            d = m.rows
            p = random_unimodular(rng, d)
            conj = p @ m @ inverse(p)
            direct = monodromy_filtration(conj, 0)
            transported = WeightFiltration.from_spaces(d, [
                (w, apply_to_subspace(p, s))
                for w, s in monodromy_filtration(m, 0).steps])
            assert direct == transported

    def test_blockwise_additivity(self, rng):
        for _ in range(40):
            a = random_nilpotent(rng, max_dim=4, scramble=False)
            b = random_nilpotent(rng, max_dim=4, scramble=False)
            m = block_diag(a, b)
            fa = monodromy_filtration(a, 0)
            fb = monodromy_filtration(b, 0)
            fm = monodromy_filtration(m, 0)
            expected = []
            for w in sorted(set(fa.weights) | set(fb.weights)):
                vecs = [list(r) + [0] * b.cols
                        for r in fa.space_at(w).basis.entries]
                vecs += [[0] * a.cols + list(r)
                         for r in fb.space_at(w).basis.entries]
                expected.append((w, Subspace.from_vectors(m.cols, vecs)))
            assert fm == WeightFiltration.from_spaces(m.cols, expected)


class TestHardLefschetz:
    def test_string_models_pass(self):
        for strings in [(("L", 1),), (("L", 2),), (("L", 3), ("P", 1)),
                        (("L", 4), ("L", 2), ("P", 2))]:
            model = JordanStringModel(strings, 1).to_nilpotent()
            assert verify_hard_lefschetz(model).passed

    def test_wrong_filtration_fails(self):
        # shift-compatible but off-center filtration on J2: fails at k = 1
        filt = WeightFiltration.from_spaces(2, [
            (-2, span(2, [1, 0])), (1, Subspace.full(2))])
        model = NilpotentModel(WeightedSpace.from_filtration(filt), 1,
                               TwistedMap(J2, -1))
        rep = verify_hard_lefschetz(model)
        assert not rep.passed
        failing = [c.name for c in rep.checks if not c.passed]
        assert any("N^1" in name for name in failing)

    def test_zero_dim_passes_vacuously(self):
        model = JordanStringModel((), 1).to_nilpotent()
        assert verify_hard_lefschetz(model).passed


class TestGradedKernel:
    def test_zero_operator(self):
        model = JordanStringModel((("L", 1), ("P", 1)), 1).to_nilpotent()
        gk = graded_kernel(model)
        assert gk.grading == model.space.grading

    def test_j2(self):
        model = JordanStringModel((("L", 2),), 1).to_nilpotent()
        gk = graded_kernel(model)
        assert gk.grading.as_dict() == {-1: {TwistedLabel("L"): 1}}

    def test_j3_plus_j1(self):
        model = JordanStringModel((("L", 3), ("P", 1)), 1).to_nilpotent()
        gk = graded_kernel(model)
        assert gk.grading.as_dict() == {
            -2: {TwistedLabel("L"): 1}, 0: {TwistedLabel("P"): 1}}

    def test_per_string_bottom_entries(self, rng):
        for _ in range(50):
            strings = tuple(
                (rng.choice("LPQ"), rng.randint(1, 4))
                for _ in range(rng.randint(1, 4)))
            n = rng.randint(-1, 3)
            model = JordanStringModel(strings, n).to_nilpotent()
            gk = graded_kernel(model)
            expected = {}
            for lbl, length in strings:
                w = n - 1 - (length - 1)
                expected.setdefault(w, {})
                key = TwistedLabel(lbl)
                expected[w][key] = expected[w].get(key, 0) + 1
            assert gk.grading.as_dict() == expected

    def test_mismatch_on_non_strict_input(self):
        filt = WeightFiltration.from_spaces(2, [
            (-2, span(2, [1, 0])), (1, Subspace.full(2))])
        model = NilpotentModel(WeightedSpace.from_filtration(filt), 1,
                               TwistedMap(J2, -1))
        with pytest.raises(GradedKernelMismatch):
            graded_kernel(model)


class TestPrimitiveDecomposition:
    def test_single_j2_string(self):
        model = JordanStringModel((("L", 2),), 1).to_nilpotent()
        pd = primitive_decomposition(model)
        assert pd.passed
        assert set(pd.contributions) == {(-1, 1, 0, 1), (1, 1, -1, 1)}

    def test_zero_operator(self):
        model = JordanStringModel((("L", 1), ("L", 1)), 5).to_nilpotent()
        pd = primitive_decomposition(model)
        assert pd.passed
        assert set(pd.contributions) == {(4, 0, 0, 2)}

    def test_j3_plus_j1_weight_zero_piece(self):
        model = JordanStringModel((("L", 3), ("P", 1)), 1).to_nilpotent()
        pd = primitive_decomposition(model)
        assert pd.passed
        at_zero = [c for c in pd.contributions if c[0] == 0]
        assert sorted(at_zero) == [(0, 0, 0, 1), (0, 2, -1, 1)]

    def test_impure_rejected(self):
        filt = WeightFiltration.from_spaces(2, [
            (-2, span(2, [1, 0])), (1, Subspace.full(2))])
        model = NilpotentModel(WeightedSpace.from_filtration(filt), 1,
                               TwistedMap(J2, -1))
        with pytest.raises(NotPure):
            primitive_decomposition(model)


class TestNilpotentModel:
    def test_rejects_wrong_twist(self):
        with pytest.raises(ValueError):
            NilpotentModel(JordanStringModel((("L", 2),), 1).to_nilpotent().space,
                           1, TwistedMap(J2, 0))

    def test_rejects_unshifted_filtration(self):
        with pytest.raises(ValueError):
            NilpotentModel(WeightedSpace.pure(2, 0), 1, TwistedMap(J2, -1))

    def test_nilpotency_index(self):
        assert nilpotency_index(QMatrix.zero(3, 3)) == 1
        assert nilpotency_index(J3) == 3
        with pytest.raises(NotNilpotent):
            nilpotency_index(qm([[1, 0], [0, 1]]))
