import json
import os
import sys
from fractions import Fraction

import pytest

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pipeline
from combin import Partition, count_syt, enumerate_partitions
from errors import ConsistencyError, HeckeError, UsageError
from pipeline import Certificate, LineCheck, MultiplicityTable
from segments import Multisegment, enumerate_multisegments, langlands_sort

P = Partition.of


def table_for(text, q=3):
    return pipeline.ktype_table(Multisegment.parse(text), q)


class TestKTypeTables:
    """Test suite for multiplicity tables of Langlands quotients."""

    @pytest.mark.smoke
    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_gl3_counterexample(self, q):
        """Test three unlinked points: generic with the [2,1] K-type twice."""
        # Execute
        table = pipeline.gl3_counterexample(q)

        # Verify
        assert table.multisegment == "[4,4];[2,2];[0,0]"
        assert table.entries == ((P(3), 1), (P(2, 1), 2), (P(1, 1, 1), 1))
        assert table.quotient_dim == 6
        assert table.generic
        assert table.verdict == pipeline.PASS

    @pytest.mark.parametrize("text,n", [("[0,2]", 3), ("[0,3]", 4)])
    def test_single_segment_is_sign_type(self, text, n):
        """Test that one segment gives the sign-type character."""
        table = table_for(text)
        assert table.quotient_dim == 1
        assert table.multiplicity(P(n)) == 1
        assert table.verdict == pipeline.PASS

    @pytest.mark.parametrize("text,n", [
        ("[1];[0]", 2),
        ("[2];[1];[0]", 3),
        pytest.param("[3];[2];[1];[0]", 4, marks=pytest.mark.slow),
    ])
    def test_linked_points_give_trivial_type(self, text, n):
        """Test that a chain of linked points has a trivial-type quotient."""
        table = table_for(text)
        assert table.quotient_dim == 1
        assert table.multiplicity(P(*([1] * n))) == 1
        assert table.min_multiplicity == 0
        assert not table.generic
        assert table.verdict == pipeline.PASS

    def test_input_order_does_not_matter(self):
        """Test that the table uses the Langlands-sorted multisegment."""
        assert table_for("[0];[1]").to_dict() == table_for("[1];[0]").to_dict()

    def test_unlinked_points_restrict_to_regular(self):
        """Test the principal series oracle at n=3."""
        table = table_for("[5];[3];[0]")
        for label in enumerate_partitions(3):
            assert table.multiplicity(label) == count_syt(label)

    @pytest.mark.slow
    def test_unlinked_points_restrict_to_regular_rank_four(self):
        """Test the principal series oracle at n=4."""
        table = table_for("[0];[2];[4];[6]")
        assert table.quotient_dim == 24
        for label in enumerate_partitions(4):
            assert table.multiplicity(label) == count_syt(label)

    def test_second_line(self):
        """Test a multisegment spread over two cuspidal lines."""
        table = table_for("[0,1];[0]@1")
        assert table.generic
        assert table.min_multiplicity == 1


class TestStandardTables:
    """Test suite for whole standard modules."""

    @pytest.mark.parametrize("text,lengths", [("[1];[0]", (1, 1)), ("[1,2];[0]", (2, 1)), ("[0,1];[1]", (2, 1))])
    def test_kostka_oracle(self, text, lengths):
        """Test mult(S^λ, standard) = K(λ, lengths)."""
        table = pipeline.standard_table(Multisegment.parse(text), 3)
        assert table.kind == "standard"
        assert table.verdict == pipeline.PASS
        assert table.multiplicity(P(Multisegment.parse(text).total)) == 1

    def test_standard_text_mentions_module(self):
        """Test the text header of a standard table."""
        table = pipeline.standard_table(Multisegment.parse("[1];[0]"), 3)
        assert "standard module dimension=2" in table.text_lines()[1]


class TestCertificates:
    """Test suite for certificates and sweeps."""

    @pytest.mark.parametrize("text,generic,sign", [
        ("[1];[0]", False, 0),
        ("[2];[0]", True, 1),
        ("[0,1];[2]", False, 0),
        ("[0,2];[1]", True, 1),
    ])
    def test_certify(self, text, generic, sign):
        """Test the sign-type multiplicity against the linking criterion."""
        certificate = pipeline.certify(Multisegment.parse(text), 3)
        assert certificate.generic is generic
        assert certificate.sign_multiplicity == sign
        assert certificate.verdict == pipeline.PASS

    def test_certificate_verdicts(self):
        """Test pass, fail and error certificates."""
        assert Certificate("[1,1];[0,0]", False, 0).verdict == pipeline.PASS
        assert Certificate("[2,2];[0,0]", True, 0).verdict == pipeline.FAIL
        assert Certificate("[2,2];[0,0]", True, None, error="ConsistencyError: x").verdict == pipeline.FAIL
        assert "error: ConsistencyError: x" in Certificate("m", True, None, error="ConsistencyError: x").text_line()

    @pytest.mark.regression
    def test_sweep_rank_two(self):
        """Test the default-window sweep at n=2."""
        # Execute
        report = pipeline.sweep(2, q=3, jobs=1)

        # Verify
        assert len(report.certificates) == 8
        assert report.failed == 0
        assert report.verdict == pipeline.PASS
        assert report.window == (0, 2)
        assert report.max_sign_multiplicity == 1

    def test_sweep_rank_three(self):
        """Test the sweep at n=3 covers every multisegment."""
        report = pipeline.sweep(3, q=2, jobs=1)
        assert len(report.certificates) == len(enumerate_multisegments(3))
        assert report.verdict == pipeline.PASS
        assert 0 < report.generic_count < len(report.certificates)

    @pytest.mark.slow
    @pytest.mark.parametrize("n,count", [(2, 8), (3, 34)])
    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_small_sweeps_over_q(self, n, count, q):
        """Test the default-window sweeps for n <= 3 at several q."""
        report = pipeline.sweep(n, q=q, jobs=1)
        assert len(report.certificates) == count
        assert report.failed == 0
        assert report.verdict == pipeline.PASS

    @pytest.mark.slow
    def test_sweep_rank_four(self):
        """Test the full default window [0,4] at n=4, including both ends of the order."""
        # Execute
        report = pipeline.sweep(4, q=2, jobs=1)

        # Verify
        assert report.window == (0, 4)
        assert len(report.certificates) == 157
        assert report.verdict == pipeline.PASS
        by_name = {c.multisegment: c for c in report.certificates}
        assert by_name[str(Multisegment.parse("[0,3]"))].sign_multiplicity == 1
        chain = str(langlands_sort(Multisegment.parse("[3];[2];[1];[0]")))
        assert by_name[chain].sign_multiplicity == 0

    def test_sweep_cap(self, monkeypatch):
        """Test the default and configured size caps."""
        with pytest.raises(UsageError):
            pipeline.sweep(5)
        monkeypatch.setenv('HECKE_SWEEP_CAP', '2')
        with pytest.raises(UsageError):
            pipeline.sweep(3)

    def test_failed_job_becomes_failed_certificate(self, monkeypatch):
        """Test that an exception inside one job is reported, not raised."""
        original = pipeline.certify_job

        def flaky(text, q_text):
            if text == "[1,1];[0,0]":
                raise ConsistencyError("simulated")
            return original(text, q_text)

        monkeypatch.setattr(pipeline, "certify_job", flaky)
        report = pipeline.sweep(2, window=(0, 1), q=3, jobs=1)

        assert report.failed == 1
        failed = [c for c in report.certificates if c.verdict == pipeline.FAIL]
        assert failed[0].error == "ConsistencyError: simulated"
        assert failed[0].sign_multiplicity is None


class TestLineCheck:
    """Test suite for the product over cuspidal lines."""

    def test_product_over_lines(self):
        """Test a linked pair on line 0 next to a point on line 1."""
        check = pipeline.line_product_check(Multisegment.parse("[0];[1];[0]@1"), 3)
        assert check.full == 0
        assert dict(check.per_line) == {0: 0, 1: 1}
        assert check.product == 0
        assert check.verdict == pipeline.PASS

    def test_generic_over_lines(self):
        """Test a generic multisegment over two lines."""
        check = pipeline.line_product_check(Multisegment.parse("[0,1];[0]@1"), 3)
        assert check.full == 1 and check.product == 1

    def test_size_limit(self):
        """Test that line checks refuse sizes above the opt-in cap."""
        with pytest.raises(UsageError):
            pipeline.line_product_check(Multisegment.parse("[0];[2];[4];[6];[8];[10]"), 3)

    def test_mismatch_fails(self):
        """Test the verdict of a disagreeing check."""
        assert LineCheck("m", 1, ((0, 1), (1, 0))).verdict == pipeline.FAIL


class TestTableInvariants:
    """Test suite for table consistency checks."""

    def test_dimension_must_be_accounted_for(self):
        """Test that the entries must add up to the module dimension."""
        with pytest.raises(ConsistencyError):
            MultiplicityTable(2, Fraction(3), "[1,1];[0,0]", ((P(2), 1), (P(1, 1), 1)), 3, False)

    def test_sign_multiplicity_at_most_one(self):
        """Test that a quotient never contains the sign-type twice."""
        with pytest.raises(ConsistencyError):
            MultiplicityTable(2, Fraction(3), "[0,0];[0,0]", ((P(2), 2), (P(1, 1), 0)), 2, False)

    def test_missing_key(self):
        """Test that incomplete table data is a usage error."""
        with pytest.raises(UsageError):
            MultiplicityTable.from_dict({"n": 2})


class TestOutput:
    """Test suite for rendering and writing results."""

    def test_json_round_trip(self):
        """Test that a table survives JSON."""
        table = pipeline.gl3_counterexample(3)
        data = json.loads(pipeline.render(table, "json"))
        assert data["multiplicities"] == {"[3]": 1, "[2,1]": 2, "[1,1,1]": 1}
        assert data["q"] == "3"
        assert MultiplicityTable.from_dict(data) == table

    def test_csv_rows(self):
        """Test the CSV layout of a table."""
        text = pipeline.render(pipeline.gl3_counterexample(3), "csv")
        lines = text.splitlines()
        assert lines[0] == "partition,multiplicity,dimension"
        assert lines[2] == "\"[2,1]\",2,2"

    def test_text_rows(self):
        """Test the aligned text layout."""
        lines = pipeline.render(pipeline.gl3_counterexample(3), "text").splitlines()
        assert lines[2].startswith("K-type")
        assert lines[4].split() == ["[2,1]", "2"]

    def test_rendering_is_deterministic(self):
        """Test that two runs give the same bytes."""
        first = pipeline.render(table_for("[0,1];[2]"), "json")
        second = pipeline.render(table_for("[0,1];[2]"), "json")
        assert first == second

    @pytest.mark.parametrize("fmt", ["text", "json", "csv"])
    def test_certificates_are_byte_identical(self, fmt):
        """Test that certifying the same multisegment twice renders the same bytes."""
        # Execute
        first = pipeline.render(pipeline.certify(Multisegment.parse("[0];[2];[4]"), 2), fmt)
        second = pipeline.render(pipeline.certify(Multisegment.parse("[0];[2];[4]"), 2), fmt)

        # Verify
        assert first == second
        assert "seconds" not in first

    def test_sweeps_are_byte_identical(self):
        """Test that two runs of the same sweep render the same bytes."""
        first = pipeline.render(pipeline.sweep(2, window=(0, 1), q=3, jobs=1), "json")
        second = pipeline.render(pipeline.sweep(2, window=(0, 1), q=3, jobs=1), "json")
        assert first == second

    def test_unknown_format(self):
        """Test that only text, json and csv are rendered."""
        with pytest.raises(UsageError):
            pipeline.render(Certificate("m", True, 1), "xml")

    def test_emit_to_file(self, tmp_path):
        """Test writing to a file."""
        target = tmp_path / "report.json"
        text = pipeline.emit(Certificate("[0,0]", True, 1), "json", str(target))
        assert target.read_text(encoding="utf-8") == text
        assert json.loads(text)["verdict"] == "pass"

    def test_emit_to_stdout(self, capsys):
        """Test that '-' writes to standard output."""
        pipeline.emit(Certificate("[0,0]", True, 1), "text", "-")
        assert "PASS" in capsys.readouterr().out

    def test_emit_to_directory_fails(self, tmp_path):
        """Test that an unwritable destination raises OSError."""
        with pytest.raises(OSError):
            pipeline.emit(Certificate("[0,0]", True, 1), "text", str(tmp_path))


class TestSelftest:
    """Test suite for the built-in self test."""

    @pytest.mark.relations
    def test_selftest_passes(self):
        """Test that every self-test check passes at q=3."""
        report = pipeline.run_selftest(3)
        assert report.passed, report.text_lines()
        assert len(report.checks) == 6

    def test_failing_check_is_reported(self):
        """Test that a library error inside a check becomes a failed entry."""
        def run():
            raise HeckeError("simulated")

        name, ok, detail = pipeline._check("broken", run)
        assert not ok
        assert detail == "HeckeError: simulated"
