"""
Trace Schemas

Per-stage records of a pipeline run.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class StageRecord(BaseModel):
    """One pipeline stage."""
    name: str
    palette_lo: int = Field(..., ge=0, description="Smallest color the stage may assign")
    palette_hi: int = Field(..., ge=0, description="Largest color the stage may assign")
    vertices: int = Field(..., ge=0, description="Vertices touched by the stage")
    edges: int = Field(..., ge=0, description="Edges colored or selected by the stage")
    elapsed_ms: float = Field(default=0.0, ge=0)
    seed: Optional[int] = Field(default=None, description="Seed derived for this stage")
    details: Dict[str, int] = Field(default_factory=dict)


class TraceDocument(BaseModel):
    """Whole-run trace. Timings are the only run-dependent fields."""
    method: str
    k: int = Field(..., description="k(G)")
    bound: int = Field(..., description="Palette bound guaranteed by the method")
    colors_used: int = 0
    seed: int = 0
    stages: List[StageRecord] = Field(default_factory=list)
