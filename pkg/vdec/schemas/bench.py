"""
Bench Schemas

One benchmark CSV row.
"""

from typing import List, Optional

from pydantic import BaseModel, Field

BENCH_COLUMNS: List[str] = [
    "name", "n", "m", "k", "method", "colors_used", "bound", "verified", "ms", "error",
]


class BenchRow(BaseModel):
    """Result of one (graph, method) run."""
    name: str
    n: int = Field(..., ge=0)
    m: int = Field(..., ge=0)
    k: Optional[int] = None
    method: str
    colors_used: Optional[int] = None
    bound: Optional[int] = None
    verified: bool = False
    ms: float = Field(default=0.0, ge=0)
    error: str = ""

    def csv_cells(self) -> List[str]:
        cells = []
        for column in BENCH_COLUMNS:
            value = getattr(self, column)
            if value is None:
                cells.append("")
            elif isinstance(value, bool):
                cells.append("true" if value else "false")
            elif isinstance(value, float):
                cells.append(f"{value:.1f}")
            else:
                cells.append(str(value))
        return cells
