"""
Run Configuration Schema

Command-line flags merged over the environment settings.
"""

from typing import Literal, Optional

from pydantic import BaseModel, Field

Method = Literal["general", "regular", "exact"]


class RunConfig(BaseModel):
    """Everything a command needs besides its input graph."""
    command: str
    input_path: Optional[str] = None
    seed: int = Field(default=0, ge=0, lt=2**64, description="64-bit master seed")
    method: Method = "general"
    exact_limit: int = Field(default=20, gt=0)
    semi_vd_restarts: int = Field(default=50, gt=0)
    forest_restarts: int = Field(default=200, gt=0)
    long_path_restarts: int = Field(default=20, gt=0)
    uphill_limit: int = Field(default=4, gt=0)
    oracle_slack: int = Field(default=3, gt=0)
    oracle_edge_limit: int = Field(default=12, gt=0)
    jobs: int = Field(default=1, gt=0)
    out_path: Optional[str] = None
    trace_path: Optional[str] = None
