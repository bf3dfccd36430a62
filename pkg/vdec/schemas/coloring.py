"""
Coloring Schemas

Edge-coloring document: palette size plus one entry per colored edge.
"""

from typing import List

from pydantic import BaseModel, Field, model_validator


class ColoredEdge(BaseModel):
    """One edge, named by input labels, with its color."""
    u: str
    v: str
    color: int = Field(..., ge=1)


class ColoringDocument(BaseModel):
    """Edge coloring in canonical edge order."""
    palette: int = Field(..., ge=1, description="Palette size K; colors lie in 1..K")
    edges: List[ColoredEdge] = Field(default_factory=list)

    @model_validator(mode="after")
    def colors_within_palette(self) -> "ColoringDocument":
        for edge in self.edges:
            if edge.color > self.palette:
                raise ValueError(
                    f"edge {edge.u} {edge.v} has color {edge.color} above palette {self.palette}"
                )
        return self
