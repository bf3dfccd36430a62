"""Document Schemas Package."""
from .bench import BENCH_COLUMNS, BenchRow
from .coloring import ColoredEdge, ColoringDocument
from .common import ErrorResponse, GraphSummary
from .forest import ForestDocument
from .report import VerificationReport, Violation
from .run import RunConfig
from .trace import StageRecord, TraceDocument

__all__ = [
    "BENCH_COLUMNS",
    "BenchRow",
    "ColoredEdge",
    "ColoringDocument",
    "ErrorResponse",
    "GraphSummary",
    "ForestDocument",
    "VerificationReport",
    "Violation",
    "RunConfig",
    "StageRecord",
    "TraceDocument",
]
