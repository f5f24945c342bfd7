import os
import sys
from fractions import Fraction
from itertools import product

import pytest

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import linalg
from combin import Partition, count_syt, enumerate_partitions, max_label, min_label
from errors import ParameterError, UsageError
from finhecke import (
    FiniteHeckeModule,
    HeckeElement,
    HeckeParams,
    direct_sum,
    multiplicity,
    regular_representation,
    sign_character,
    specht_module,
    trivial_character,
)
from symgroup import Permutation, all_permutations


class TestHeckeParams:
    """Test suite for the deformation parameter checks."""

    @pytest.mark.parametrize("q", [0, -1, 1, "1"])
    def test_rejected_values(self, q):
        """Test that q in {0, -1, 1} is refused."""
        with pytest.raises(ParameterError):
            HeckeParams(3, q)

    def test_rank_must_be_positive(self):
        """Test that n = 0 is a usage error."""
        with pytest.raises(UsageError):
            HeckeParams(0)

    def test_text_q(self):
        """Test that q may be given as text."""
        params = HeckeParams(2, "5/2")
        assert params.q == Fraction(5, 2)
        assert str(params) == "H_2(q=5/2)"

    def test_quantum_integer(self):
        """Test [3]_3 = 1 + 3 + 9."""
        assert HeckeParams(3).quantum_integer(3) == 13


class TestHeckeElements:
    """Test suite for multiplication in the T_w basis."""

    @pytest.mark.parametrize("q", [2, 3, "1/2"])
    def test_quadratic_relation(self, q):
        """Test T_s^2 = (q-1)T_s + q."""
        params = HeckeParams(3, q)
        t1 = HeckeElement.generator(params, 1)
        one = HeckeElement.one(params)
        assert t1 * t1 == t1 * (params.q - 1) + one * params.q

    def test_braid_relation(self):
        """Test T1T2T1 = T2T1T2 = T_w0."""
        params = HeckeParams(3)
        t1, t2 = HeckeElement.generator(params, 1), HeckeElement.generator(params, 2)
        left = t1 * t2 * t1
        assert left == t2 * t1 * t2
        assert left == HeckeElement.basis(params, Permutation.longest(3))

    def test_associativity_on_basis(self):
        """Test (T_x T_y) T_z = T_x (T_y T_z) over S_3."""
        params = HeckeParams(3, 2)
        basis = [HeckeElement.basis(params, w) for w in all_permutations(3)]
        for a, b, c in product(basis, repeat=3):
            assert (a * b) * c == a * (b * c)

    def test_mixed_rank_is_rejected(self):
        """Test that elements of different algebras do not combine."""
        with pytest.raises(UsageError):
            HeckeElement.one(HeckeParams(2)) + HeckeElement.one(HeckeParams(3))


class TestModules:
    """Test suite for characters, the regular module and Specht modules."""

    def test_characters(self):
        """Test the one-dimensional modules satisfy the relations."""
        params = HeckeParams(4)
        assert sign_character(params).relation_failures == []
        assert trivial_character(params).relation_failures == []
        assert trivial_character(params).t_matrices[0][0, 0] == 3

    def test_bad_quadratic_relation_is_reported(self):
        """Test a T-matrix that is not a root of the quadratic."""
        params = HeckeParams(2)
        bad = FiniteHeckeModule(params, (linalg.scalar_matrix(1, 2),), "bad")
        assert bad.relation_failures == ["quadratic T_1"]
        with pytest.raises(UsageError):
            multiplicity(sign_character(params), bad)

    def test_module_without_matrices_needs_dimension(self):
        """Test that n = 1 modules need an explicit size."""
        with pytest.raises(UsageError):
            FiniteHeckeModule(HeckeParams(1), ())
        assert FiniteHeckeModule(HeckeParams(1), (), size=2).dim == 2

    @pytest.mark.relations
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_specht_relations(self, n):
        """Test every seminormal Specht module at n <= 5."""
        params = HeckeParams(n)
        for label in enumerate_partitions(n):
            module = specht_module(params, label)
            assert module.dim == count_syt(label)
            assert module.relation_failures == []

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_endpoint_labels(self, n):
        """Test that (n) is sign-type and (1^n) is trivial-type."""
        params = HeckeParams(n)
        assert multiplicity(specht_module(params, min_label(n)), sign_character(params)) == 1
        assert multiplicity(specht_module(params, max_label(n)), trivial_character(params)) == 1
        assert specht_module(params, min_label(n)).t_matrices[0][0, 0] == -1

    def test_label_size_mismatch(self):
        """Test that the label must partition n."""
        with pytest.raises(UsageError):
            specht_module(HeckeParams(3), Partition.of(2, 1, 1))


class TestMultiplicity:
    """Test suite for Hom dimensions."""

    @pytest.mark.parametrize("n", [2, 3])
    def test_regular_module(self, n):
        """Test mult(S^λ, regular) = dim S^λ."""
        params = HeckeParams(n)
        regular = regular_representation(params)
        assert regular.relation_failures == []
        for label in enumerate_partitions(n):
            assert multiplicity(specht_module(params, label), regular) == count_syt(label)

    @pytest.mark.parametrize("n,q", [(3, 3), (3, Fraction(5, 2)), (4, 2), (4, Fraction(1, 2))])
    def test_specht_modules_are_orthogonal(self, n, q):
        """Test Schur orthogonality: End(S^λ) is one-dimensional and distinct labels share no maps."""
        params = HeckeParams(n, q)
        labels = enumerate_partitions(n)
        for a, b in product(labels, repeat=2):
            expected = 1 if a == b else 0
            assert multiplicity(specht_module(params, a), specht_module(params, b)) == expected

    def test_direct_sum_is_additive(self):
        """Test mult over a direct sum."""
        params = HeckeParams(3)
        total = direct_sum(sign_character(params), specht_module(params, Partition.of(2, 1)))
        assert total.dim == 3
        assert multiplicity(sign_character(params), total) == 1
        assert multiplicity(specht_module(params, Partition.of(2, 1)), total) == 1
        assert multiplicity(trivial_character(params), total) == 0

    def test_params_mismatch(self):
        """Test that modules over different q are not compared."""
        with pytest.raises(UsageError):
            multiplicity(sign_character(HeckeParams(2, 3)), sign_character(HeckeParams(2, 2)))

    def test_calibrated_weights(self):
        """Test θ_k -> q^(-content(k)) for the shape [2,1] at q=3."""
        module = specht_module(HeckeParams(3), Partition.of(2, 1))
        third = Fraction(1, 3)
        assert module.calibrated_weights() == [(1, third, 3), (1, 3, third)]
        assert module.calibrated_weights(Fraction(5, 7))[0][0] == Fraction(5, 7)
