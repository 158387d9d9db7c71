from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING, Any

import numpy as np
import pandas as pd
import sympy as sp

from derham_lab._errors import SupportError
from derham_lab.forms._norms import _check_p, patch_lp_norm, patch_sobolev_norm, pointwise_norm
from derham_lab.forms._poly import PolyForm, coordinates
from derham_lab.forms._quadrature import ball_rule
from derham_lab.mollify._flat import homotopy_flat, regularize_flat
from derham_lab.mollify._kernel import KernelProfile, make_kernel

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from derham_lab.mollify._kernel import KernelSpec

logger = logging.getLogger(__name__)

DEFAULT_EPS = (0.4, 0.2, 0.1, 0.05)


def mollify_scalar(
    g: Callable[[np.ndarray], np.ndarray],
    kernel: KernelSpec,
    points: np.ndarray,
    degree: int = 10,
) -> np.ndarray:
    """Convolution ``g * f_eps`` at (N, n) points by quadrature over the kernel.

    Args:
        g (Callable): vectorized function of (M, n) points returning (M,) values
        kernel (KernelSpec): the averaging kernel
        points (np.ndarray): where to evaluate
        degree (int): degree of the kernel rule

    Returns:
        np.ndarray: (N,) values
    """
    points = np.asarray(points, dtype=float).reshape(-1, kernel.dim)
    v, w = kernel.nodes(degree)
    shift = float(kernel.eps) * v
    samples = np.asarray(g((points[:, None, :] + shift[None, :, :]).reshape(-1, kernel.dim)))
    return samples.reshape(len(points), len(w)) @ w


def scalar_convergence(
    g: Callable[[np.ndarray], np.ndarray],
    points: np.ndarray,
    eps_values: Sequence[float] = DEFAULT_EPS,
    profile: KernelProfile | str = KernelProfile.POLYNOMIAL,
    degree: int = 10,
) -> pd.DataFrame:
    """Sup distance between ``g`` and its mollification over a range of widths."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    exact = np.asarray(g(points))
    rows = []
    for eps in eps_values:
        kernel = make_kernel(points.shape[1], profile, eps)
        smooth = mollify_scalar(g, kernel, points, degree)
        rows.append({"eps": float(eps), "sup_distance": float(np.max(np.abs(smooth - exact)))})
    return pd.DataFrame(rows)


def default_sample_forms() -> list[PolyForm]:
    """Thirty positive even forms on R^2 used by the operator norm scan."""
    x, y = coordinates(2)
    monomials = [x**2, y**2, x**4, x**2 * y**2, y**4]
    indices: list[tuple[int, ...]] = [(), (0,), (1,), (0, 1)]
    forms = [PolyForm.basis(2, index, c) for c in monomials for index in indices]
    forms += [
        PolyForm.basis(2, (0,), 1 + x**2),
        PolyForm.basis(2, (1,), 1 + y**2),
        PolyForm.function(2, x**2 + y**2),
        PolyForm.basis(2, (0, 1), x**2 + y**2),
        PolyForm.function(2, 1 + x**2 * y**2),
        PolyForm.basis(2, (0,), 2 * x**2 + y**4),
        PolyForm.basis(2, (1,), x**4 + 3 * y**2),
        PolyForm.basis(2, (0, 1), 1 + x**2 + y**2),
        PolyForm.function(2, x**2 + x**4),
    ]
    forms.append(PolyForm.basis(2, (0,)))
    return forms


def operator_norm_scan(
    eps_values: Sequence[float] = DEFAULT_EPS,
    forms: Sequence[PolyForm] | None = None,
    p: float = 2.0,
    profile: KernelProfile | str = KernelProfile.POLYNOMIAL,
    degree: int = 16,
) -> pd.DataFrame:
    """Empirical operator norms of ``R_eps`` and ``A_eps`` on the unit ball.

    For every width the table records ``C_hat = max |R w| / |w|`` and
    ``M_hat = max |A w| / |w|`` over the sample forms, with graph norms on
    ``B_1``. These are lower bounds for the operator norms. The last row is
    the limit ``eps = 0`` with ``(1, 0)``.

    Raises:
        ValueError: if the sample set is empty
    """
    p = _check_p(p)
    forms = default_sample_forms() if forms is None else list(forms)
    if not forms:
        raise ValueError("The operator norm scan needs at least one sample form")
    norms = [patch_sobolev_norm(form, p, degree) for form in forms]
    rows = []
    for eps in eps_values:
        c_hat, m_hat = 0.0, 0.0
        for form, norm in zip(forms, norms):
            if norm == 0:
                continue
            kernel = make_kernel(form.dim, profile, eps)
            c_hat = max(c_hat, patch_sobolev_norm(regularize_flat(form, kernel), p, degree) / norm)
            if form.degree > 0:
                A = homotopy_flat(form, kernel)
                m_hat = max(m_hat, patch_sobolev_norm(A, p, degree) / norm)
        logger.debug(f"eps={eps}: C_hat={c_hat:.6g}, M_hat={m_hat:.6g}")
        rows.append({"eps": float(eps), "C_hat": c_hat, "M_hat": m_hat})
    rows.append({"eps": 0.0, "C_hat": 1.0, "M_hat": 0.0})
    return pd.DataFrame(rows, columns=["eps", "C_hat", "M_hat"])


def scan_trends(table: pd.DataFrame, tol: float = 1e-12) -> dict[str, Any]:
    """Monotone trends of a scan table as the width shrinks."""
    scan = table[table["eps"] > 0].sort_values("eps", ascending=False)
    C = scan["C_hat"].to_numpy()
    M = scan["M_hat"].to_numpy()
    c_down = bool(np.all(np.diff(C) <= tol))
    m_down = bool(np.all(np.diff(M) <= tol))
    m_ratio = float(M[-1] / M[0]) if M[0] > 0 else 0.0
    return {
        "C_nonincreasing": c_down,
        "M_nonincreasing": m_down,
        "C_at_smallest_eps": float(C[-1]),
        "M_ratio": m_ratio,
        "holds": bool(c_down and m_down and C[-1] <= 1.1 and m_ratio <= 0.5),
    }


def sup_bound_check(
    forms: Sequence[PolyForm] | None = None,
    eps: float = 0.1,
    p: float = 2.0,
    profile: KernelProfile | str = KernelProfile.POLYNOMIAL,
    degree: int = 16,
) -> dict[str, Any]:
    """Compare ``sup_F |R_eps w|`` against ``mes(supp f_eps)^(1 - 1/p) sup f_eps ||w||_p``.

    ``F`` is the ball of radius ``1 - reach`` so that every average defining
    ``R_eps w`` on ``F`` only sees values of ``w`` inside ``B_1``.

    Raises:
        SupportError: if the kernel reaches past the center of the ball
    """
    p = _check_p(p)
    forms = default_sample_forms() if forms is None else list(forms)
    cases = []
    for form in forms:
        kernel = make_kernel(form.dim, profile, eps)
        radius = 1.0 - kernel.reach
        if radius <= 0:
            raise SupportError(f"Kernel reach {kernel.reach:.4g} leaves no compact set in B_1")
        exponent = 0.0 if math.isinf(p) else (p - 1) / p
        constant = kernel.support_measure**exponent * kernel.scaled_sup
        points, _ = ball_rule(form.dim, degree, radius)
        points = np.vstack([np.zeros((1, form.dim)), points])
        regularized = regularize_flat(form, kernel)
        lhs = float(pointwise_norm(regularized.evaluate(points)).max())
        rhs = constant * patch_lp_norm(form, p, degree)
        cases.append({"form": str(form), "lhs": lhs, "rhs": rhs, "holds": bool(lhs <= rhs)})
    return {
        "eps": float(sp.Rational(str(eps))),
        "p": p,
        "cases": cases,
        "holds": all(case["holds"] for case in cases),
    }
