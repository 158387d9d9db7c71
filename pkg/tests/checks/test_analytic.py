import pytest
from derham_lab.checks import (
    ExtensionNormCheck,
    GlobalRegularizationCheck,
    OperatorNormTrendCheck,
    SupBoundCheck,
)


def test_operator_norm_trend_check():
    results = OperatorNormTrendCheck(eps_values=(0.4, 0.2, 0.1)).compute()
    assert results.passed
    assert len(results.results["table"]) >= 3
    assert results.check_info["eps_values"] == [0.4, 0.2, 0.1]


def test_sup_bound_check():
    results = SupBoundCheck(eps=0.1).compute()
    assert results.passed


def test_extension_norm_check():
    results = ExtensionNormCheck(ps=(2.0,)).compute()
    assert results.passed
    (entry,) = results.results["exponents"]
    assert entry["bouquet"]["model_lp_factor"] == pytest.approx(2 / 3)
    assert all(report["lp_factor"] == pytest.approx(1 / 3) for report in entry["cylinder"])
    assert [step["dimension"] for step in entry["skeleton"]] == [2]


def test_global_regularization_check():
    results = GlobalRegularizationCheck(complex="circle", eps=0.1, quad_degree=8).compute()
    assert results.passed
    assert len(results.results["cases"]) == 6
    assert results.results["max_residual"] <= 1e-4
