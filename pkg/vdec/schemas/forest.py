"""
Forest Schemas

Linear forest document using input labels.
"""

from typing import List

from pydantic import BaseModel, Field


class ForestDocument(BaseModel):
    """Paths of the forest plus the uncovered vertices."""
    paths: List[List[str]] = Field(default_factory=list, description="Vertex sequences")
    uncovered: List[str] = Field(default_factory=list)
