"""
Common Schemas

Shared schemas used across the command-line documents.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class ErrorResponse(BaseModel):
    """Error document printed when a command fails."""
    error: str
    detail: Optional[str] = None
    code: Optional[str] = None
    exit_code: int = Field(..., ge=1, description="Process exit status")


class GraphSummary(BaseModel):
    """Size and degree statistics of an input graph."""
    n: int = Field(..., ge=0, description="Number of vertices")
    m: int = Field(..., ge=0, description="Number of edges")
    min_degree: int = Field(..., ge=0)
    max_degree: int = Field(..., ge=0)
    degree_profile: Dict[int, int] = Field(default_factory=dict, description="n_d per degree d")
    k: Optional[int] = Field(default=None, description="The k(G) lower bound, when defined")
    labels: List[str] = Field(default_factory=list)
