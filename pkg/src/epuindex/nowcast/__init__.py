"""Rolling-window nowcasting: elastic-net and principal-components estimators."""

from epuindex.nowcast.enet import EnetConfig, EnetFit, EnetSelection, enet_fit, enet_select, lambda_max
from epuindex.nowcast.evaluate import dm_test, metrics
from epuindex.nowcast.panel import MacroPanel, align, load_transforms, read_panel_csv
from epuindex.nowcast.pca import PCAResult, bai_ng_criteria, bai_ng_select, pca_reduce
from epuindex.nowcast.rolling import (
    Design,
    ModelVariant,
    NowcastRun,
    build_design,
    compare,
    rolling_nowcast,
    summarize,
)

__all__ = [
    "Design",
    "EnetConfig",
    "EnetFit",
    "EnetSelection",
    "MacroPanel",
    "ModelVariant",
    "NowcastRun",
    "PCAResult",
    "align",
    "bai_ng_criteria",
    "bai_ng_select",
    "build_design",
    "compare",
    "dm_test",
    "enet_fit",
    "enet_select",
    "lambda_max",
    "load_transforms",
    "metrics",
    "pca_reduce",
    "read_panel_csv",
    "rolling_nowcast",
    "summarize",
]
