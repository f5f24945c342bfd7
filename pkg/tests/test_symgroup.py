import os
import sys

import pytest

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import symgroup
from errors import ConsistencyError, UsageError
from symgroup import (
    Composition,
    LongerRep,
    Permutation,
    ShorterRep,
    StaysInParabolic,
    all_permutations,
    deodhar_step,
    factor_coset,
    is_min_coset_rep,
    length,
    min_coset_reps,
    reduced_word,
)

COMPOSITIONS = [(4,), (2, 2), (2, 1, 1), (1, 3), (1, 1, 1, 1)]


class TestPermutations:
    """Test suite for one-line permutations."""

    def test_simple_reflection(self):
        """Test s_1 in S_3."""
        assert Permutation.simple(3, 1).images == (2, 1, 3)
        with pytest.raises(UsageError):
            Permutation.simple(3, 3)

    def test_composition_applies_right_factor_first(self):
        """Test s1·s2 = (2,3,1)."""
        assert Permutation.from_word(3, [1, 2]).images == (2, 3, 1)
        s1, s2 = Permutation.simple(3, 1), Permutation.simple(3, 2)
        assert (s1 * s2)(1) == s1(s2(1))

    def test_not_a_permutation(self):
        """Test that repeated images are rejected."""
        with pytest.raises(UsageError):
            Permutation((1, 1))

    def test_inverse(self):
        """Test w·w^-1 = e for all of S_4."""
        e = Permutation.identity(4)
        for w in all_permutations(4):
            assert w * w.inverse() == e

    def test_simple_multiplication_shortcuts(self):
        """Test that the value and position swaps agree with multiplication."""
        for w in all_permutations(4):
            for i in range(1, 4):
                s = Permutation.simple(4, i)
                assert w.left_multiply_simple(i) == s * w
                assert w.right_multiply_simple(i) == w * s

    def test_string_form(self):
        """Test the text rendering."""
        assert str(Permutation((2, 1, 3))) == "(2,1,3)"


class TestLengthAndWords:
    """Test suite for lengths and reduced words."""

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_longest_element(self, n):
        """Test l(w0) = n(n-1)/2."""
        assert length(Permutation.longest(n)) == n * (n - 1) // 2

    def test_all_permutations_order(self):
        """Test that S_3 is listed by length, identity first."""
        perms = all_permutations(3)
        assert len(perms) == 6
        assert perms[0] == Permutation.identity(3)
        assert perms[-1] == Permutation.longest(3)
        assert [length(w) for w in perms] == sorted(length(w) for w in perms)

    def test_reduced_words(self):
        """Test that reduced words have the right length and multiply back."""
        for w in all_permutations(4):
            word = reduced_word(w)
            assert len(word) == length(w)
            assert Permutation.from_word(4, word) == w

    def test_first_letter_is_left_descent(self):
        """Test that the first letter of a reduced word shortens w from the left."""
        for w in all_permutations(4):
            word = reduced_word(w)
            if word:
                assert w.has_left_descent(word[0])
                assert length(w.left_multiply_simple(word[0])) == length(w) - 1


class TestCosets:
    """Test suite for parabolic cosets and Deodhar's lemma."""

    @pytest.mark.parametrize("parts,count", [((4,), 1), ((2, 2), 6), ((2, 1, 1), 12), ((1, 3), 4), ((1, 1, 1, 1), 24)])
    def test_number_of_representatives(self, parts, count):
        """Test |S_4 / W_c| = 4! / ∏ c_i!."""
        reps = min_coset_reps(4, Composition(parts))
        assert len(reps) == count
        assert all(is_min_coset_rep(x, Composition(parts)) for x in reps)

    def test_composition_must_sum_to_n(self):
        """Test that the composition must match n."""
        with pytest.raises(UsageError):
            min_coset_reps(4, Composition((2, 1)))

    @pytest.mark.parametrize("parts", COMPOSITIONS)
    def test_factor_coset(self, parts):
        """Test w = x·u with x minimal, u in W_c and lengths adding."""
        c = Composition(parts)
        for w in all_permutations(4):
            x, u = factor_coset(w, c)
            assert x * u == w
            assert is_min_coset_rep(x, c)
            assert length(x) + length(u) == length(w)
            for block in c.blocks():
                assert {u(k) for k in block} == set(block)

    @pytest.mark.parametrize("parts", COMPOSITIONS)
    def test_deodhar_cases(self, parts):
        """Test the three cases of s·x for every representative and every s."""
        c = Composition(parts)
        for x in min_coset_reps(4, c):
            for s in range(1, 4):
                step = deodhar_step(s, x, c)
                if isinstance(step, LongerRep):
                    assert length(step.rep) == length(x) + 1
                elif isinstance(step, ShorterRep):
                    assert length(step.rep) == length(x) - 1
                else:
                    assert isinstance(step, StaysInParabolic)
                    assert c.same_block(step.t, step.t + 1)
                    assert x.left_multiply_simple(s) == x.right_multiply_simple(step.t)

    def test_deodhar_needs_a_representative(self):
        """Test that a non-minimal element is rejected."""
        with pytest.raises(UsageError):
            deodhar_step(1, Permutation((2, 1)), Composition((2,)))

    def test_wrong_representative_count_is_inconsistent(self, monkeypatch):
        """Test that a representative count other than n!/∏c_i! is an internal failure."""
        # Setup
        truncated = all_permutations(3)[:-1]
        monkeypatch.setattr(symgroup, "all_permutations", lambda n: truncated)

        # Execute / Verify
        with pytest.raises(ConsistencyError):
            min_coset_reps.__wrapped__(3, Composition((1, 2)))

    def test_deodhar_failure_is_inconsistent(self, monkeypatch):
        """Test that s·x outside both the representatives and x·W_c is an internal failure."""
        identity = Permutation((1, 2))
        monkeypatch.setattr(symgroup, "is_min_coset_rep", lambda w, c: w == identity)

        with pytest.raises(ConsistencyError):
            deodhar_step(1, identity, Composition((1, 1)))
