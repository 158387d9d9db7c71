import math

import pytest
from derham_lab.checks import (
    ChainMapCheck,
    DeRhamCheck,
    ExactnessWitnessCheck,
    WhitneySplitCheck,
)


def test_whitney_split_check():
    results = WhitneySplitCheck(degrees=(0, 1, 2)).compute()
    assert results.passed
    values = [case["value"] for case in results.results["cases"]]
    assert values == pytest.approx([1.0, 1.0, math.sqrt(3) / 2])


def test_chain_map_check():
    results = ChainMapCheck(complexes=("circle", "sphere")).compute()
    assert results.passed
    # vertices of both plus the edges of the sphere
    assert results.results["checked"] == 3 + 4 + 6
    assert "counterexample" not in results.results


def test_derham_check():
    results = DeRhamCheck(expected={"circle": (1, 1), "sphere": (1, 0, 1)}).compute()
    assert results.passed
    assert results.results["complexes"]["sphere"]["betti"] == [1, 0, 1]


def test_derham_check_wrong_expectation():
    results = DeRhamCheck(expected={"circle": (1, 0)}).compute()
    assert not results.passed
    assert results.results["complexes"]["circle"]["expected_betti"] == [1, 0]


def test_exactness_witness_check():
    results = ExactnessWitnessCheck(complex="circle", degree=1, cases=3, seed=2).compute()
    assert results.passed
    assert results.results["max_residual"] == pytest.approx(0.0)
