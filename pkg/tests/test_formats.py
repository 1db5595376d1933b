import json

import numpy as np
import pytest

from graphsense.constructors import g4_matrix, line_matrix
from graphsense.experiments import ExperimentRecord
from graphsense.formats import (ParseError, plan_from_dict, plan_to_dict,
                                read_graph, read_jsonl, read_matrix,
                                read_vector, write_graph, write_jsonl,
                                write_matrix, write_vector)
from graphsense.kernels import BINARY_EXPANSION, CompleteKernelSpec

from helpers import random_connected_graph


class TestGraphCodec:
    @pytest.mark.parametrize("seed", range(20))
    def test_round_trip(self, seed):
        g = random_connected_graph(4 + seed, seed % 7, seed)
        assert read_graph(write_graph(g)).adj == g.adj

    def test_header(self):
        g = random_connected_graph(6, 2, 0)
        first = write_graph(g).splitlines()[0]
        assert first == f"{g.n} {g.edge_count}"

    def test_empty_file_rejected(self):
        with pytest.raises(ParseError):
            read_graph("")

    def test_edge_order_enforced(self):
        with pytest.raises(ParseError, match="u < v"):
            read_graph("3 1\n2 1\n")

    def test_self_loop_rejected(self):
        with pytest.raises(ParseError):
            read_graph("3 1\n1 1\n")

    def test_duplicate_rejected(self):
        with pytest.raises(ParseError):
            read_graph("3 2\n0 1\n0 1\n")

    def test_trailing_garbage_rejected(self):
        with pytest.raises(ParseError):
            read_graph("2 1\n0 1\nextra\n")

    def test_count_mismatch_rejected(self):
        with pytest.raises(ParseError):
            read_graph("3 2\n0 1\n")


class TestMatrixCodec:
    def test_round_trip(self):
        a = line_matrix(11, 3)
        b = read_matrix(write_matrix(a))
        assert b.rows == a.rows and b.n == a.n

    def test_format_lines(self):
        a = line_matrix(5, 3)  # identity
        text = write_matrix(a)
        assert text.splitlines()[0] == "5 5"
        assert text.splitlines()[1] == "1 0"

    def test_unsorted_row_rejected(self):
        with pytest.raises(ParseError, match="sorted"):
            read_matrix("1 3\n2 1 0\n")

    def test_cardinality_mismatch_rejected(self):
        with pytest.raises(ParseError, match="cardinality"):
            read_matrix("1 3\n2 0\n")

    def test_empty_rejected(self):
        with pytest.raises(ParseError):
            read_matrix("")


class TestVectorCodec:
    def test_round_trip_exact(self):
        y = np.array([0.1, -2.5, 1e-17, 3.0])
        assert np.array_equal(read_vector(write_vector(y)), y)

    def test_header_count(self):
        assert write_vector([1.0]).splitlines()[0] == "1"

    def test_bad_value_rejected(self):
        with pytest.raises(ParseError):
            read_vector("1\nnot-a-number\n")

    def test_count_mismatch(self):
        with pytest.raises(ParseError):
            read_vector("2\n1.0\n")


class TestPlanCodec:
    def test_round_trip(self):
        a = g4_matrix(10, 1, CompleteKernelSpec(BINARY_EXPANSION))
        data = plan_to_dict(a.decode_plan)
        again = plan_from_dict(json.loads(json.dumps(data)))
        assert again == a.decode_plan

    def test_version_stamped(self):
        a = line_matrix(6, 2)
        data = plan_to_dict(a.decode_plan)
        assert data["formatVersion"] == 1
        assert "version" in data

    def test_unsupported_version(self):
        with pytest.raises(ValueError, match="format"):
            plan_from_dict({"formatVersion": 99, "groups": []})


class TestJsonl:
    def test_round_trip_with_stamps(self):
        records = [ExperimentRecord("exp", 0, 1, {"n": 3}, {"v": True})]
        text = write_jsonl(records)
        parsed = read_jsonl(text)
        assert parsed[0]["experiment"] == "exp"
        assert parsed[0]["formatVersion"] == 1
        assert "version" in parsed[0]

    def test_bad_json_rejected(self):
        with pytest.raises(ParseError):
            read_jsonl("{broken\n")
