"""
Report Schemas

Verification report with a stable violation order.
"""

from typing import List

from pydantic import BaseModel, Field, model_validator


class Violation(BaseModel):
    """A failed check with the vertices and edges that witness it."""
    check: str
    vertices: List[str] = Field(default_factory=list)
    edges: List[List[str]] = Field(default_factory=list)


class VerificationReport(BaseModel):
    """Outcome of one verifier; passed exactly when no violation was found."""
    passed: bool
    violations: List[Violation] = Field(default_factory=list)

    @model_validator(mode="after")
    def passed_matches_violations(self) -> "VerificationReport":
        if self.passed != (not self.violations):
            raise ValueError("passed must be true exactly when there are no violations")
        return self
