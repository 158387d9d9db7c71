"""Kernels, local and global regularization operators and their chain homotopies."""

from ._bouquet import BouquetRegularization, bouquet_star_regularize
from ._charts import (
    DEFAULT_RADIUS,
    BouquetChart,
    ChartPushforward,
    ConeChart,
    ConePushforward,
    LineChart,
    PolarChart,
    StarChart,
    star_chart,
    star_charts,
)
from ._diffeo import BallDiffeo, FlowPullbackField, flow_group_law_defect, localized_flow_pullback
from ._flat import (
    flat_homotopy_residual,
    homotopy_flat,
    kernel_symbols,
    mollifier_suite,
    regularize_flat,
)
from ._global import (
    FiniteDifferenceField,
    GlobalRegularization,
    StarHomotopy,
    StarRegularization,
    complex_smoothness_samples,
    fit_star_kernel,
    global_regularize,
    order_dependence,
)
from ._kernel import KernelProfile, KernelSpec, ball_volume, make_kernel
from ._local import (
    FiniteDifferencePatch,
    LocalHomotopy,
    LocalRegularization,
    homotopy_local,
    local_homotopy_residual,
    regularize_local,
    smoothness_samples,
)
from ._scan import (
    DEFAULT_EPS,
    default_sample_forms,
    mollify_scalar,
    operator_norm_scan,
    scalar_convergence,
    scan_trends,
    sup_bound_check,
)

__all__ = [
    "DEFAULT_EPS",
    "DEFAULT_RADIUS",
    "BallDiffeo",
    "BouquetChart",
    "BouquetRegularization",
    "ChartPushforward",
    "ConeChart",
    "ConePushforward",
    "FiniteDifferenceField",
    "FiniteDifferencePatch",
    "FlowPullbackField",
    "GlobalRegularization",
    "KernelProfile",
    "KernelSpec",
    "LineChart",
    "LocalHomotopy",
    "LocalRegularization",
    "PolarChart",
    "StarChart",
    "StarHomotopy",
    "StarRegularization",
    "ball_volume",
    "bouquet_star_regularize",
    "complex_smoothness_samples",
    "default_sample_forms",
    "fit_star_kernel",
    "flat_homotopy_residual",
    "flow_group_law_defect",
    "global_regularize",
    "homotopy_flat",
    "homotopy_local",
    "kernel_symbols",
    "local_homotopy_residual",
    "localized_flow_pullback",
    "make_kernel",
    "mollifier_suite",
    "mollify_scalar",
    "operator_norm_scan",
    "order_dependence",
    "regularize_flat",
    "regularize_local",
    "scalar_convergence",
    "scan_trends",
    "smoothness_samples",
    "star_chart",
    "star_charts",
    "sup_bound_check",
]
