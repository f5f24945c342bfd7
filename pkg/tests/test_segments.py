import os
import sys

import pytest

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from errors import UsageError
from segments import (
    Multisegment,
    Segment,
    enumerate_multisegments,
    is_generic,
    is_langlands_ordered,
    langlands_sort,
    linked,
    precedes,
)

S = Segment.interval


class TestSegmentSyntax:
    """Test suite for segment and multisegment text."""

    @pytest.mark.parametrize("text,expected", [
        ("[0,2]", S(0, 2)),
        ("[3]", S(3, 3)),
        ("[-1,0]@2", S(-1, 0, 2)),
        (" [ 1 , 4 ] ", S(1, 4)),
    ])
    def test_parse(self, text, expected):
        """Test accepted segment forms."""
        assert Segment.parse(text) == expected

    @pytest.mark.parametrize("bad", ["[2,1]", "0,1", "[a]", "[0,1]@x", ""])
    def test_parse_rejects(self, bad):
        """Test that malformed or empty segments are usage errors."""
        with pytest.raises(UsageError):
            Segment.parse(bad)

    def test_points_print_as_intervals(self):
        """Test the canonical printed form."""
        assert str(S(0, 0)) == "[0,0]"
        assert str(S(1, 2, 1)) == "[1,2]@1"

    def test_multisegment(self):
        """Test totals, lengths and lines."""
        m = Multisegment.parse("[0,1];[0]@1;[3]")
        assert m.total == 4
        assert m.lengths == (2, 1, 1)
        assert m.lines() == [0, 1]
        assert str(m.on_line(1)) == "[0,0]@1"
        assert m.on_line(2) is None

    def test_empty_multisegment(self):
        """Test that a multisegment needs a segment."""
        with pytest.raises(UsageError):
            Multisegment.parse(" ; ")

    def test_canonical_form(self):
        """Test the canonical text of the three-point example."""
        assert Multisegment.parse("[0];[2];[4]").canonical() == "[4,4];[2,2];[0,0]"


class TestLinkage:
    """Test suite for linked segments and Langlands order."""

    @pytest.mark.parametrize("a,b,expected", [
        (S(0, 0), S(1, 1), True),
        (S(0, 1), S(1, 2), True),
        (S(0, 0), S(2, 2), False),
        (S(0, 2), S(1, 1), False),
        (S(0, 0), S(0, 0), False),
        (S(0, 0), S(1, 1, 1), False),
    ])
    def test_linked(self, a, b, expected):
        """Test adjacency, overlap, gaps, containment and different lines."""
        assert linked(a, b) is expected
        assert linked(b, a) is expected

    def test_precedes(self):
        """Test that the lower-starting segment precedes."""
        assert precedes(S(0, 0), S(1, 1))
        assert not precedes(S(1, 1), S(0, 0))

    def test_langlands_order(self):
        """Test ordering and sorting."""
        assert is_langlands_ordered(Multisegment.parse("[1];[0]"))
        assert not is_langlands_ordered(Multisegment.parse("[0];[1]"))
        assert str(langlands_sort(Multisegment.parse("[0];[1,2];[1]"))) == "[1,2];[1,1];[0,0]"

    def test_generic(self):
        """Test that generic means pairwise unlinked."""
        assert is_generic(Multisegment.parse("[0];[2];[4]"))
        assert is_generic(Multisegment.parse("[0,2];[1]"))
        assert not is_generic(Multisegment.parse("[1];[0]"))


class TestEnumeration:
    """Test suite for multisegment enumeration."""

    def test_small_window(self):
        """Test n=2 with ends in [0, 1]."""
        found = enumerate_multisegments(2, (0, 1))
        assert [str(m) for m in found] == ["[1,1];[1,1]", "[1,1];[0,0]", "[0,1]", "[0,0];[0,0]"]

    def test_default_window(self):
        """Test n=2 with the default window [0, 2]."""
        assert len(enumerate_multisegments(2)) == 8

    def test_all_sorted_and_distinct(self):
        """Test that n=3 results are Langlands-sorted and unique."""
        found = enumerate_multisegments(3)
        texts = [str(m) for m in found]
        assert len(texts) == len(set(texts))
        for m in found:
            assert m.total == 3
            assert langlands_sort(m) == m

    @pytest.mark.parametrize("n,window", [(0, None), (2, (2, 1))])
    def test_bad_arguments(self, n, window):
        """Test non-positive sizes and empty windows."""
        with pytest.raises(UsageError):
            enumerate_multisegments(n, window)
