"""
Input file schemas: braiding files and Gaudin system descriptors
"""
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class MatrixEntry(BaseModel):
    """Single nonzero entry; value uses the scalar expression grammar"""
    row: int = Field(ge=0)
    col: int = Field(ge=0)
    value: str


class BraidingFile(BaseModel):
    """R-matrix file: an N^2 x N^2 matrix in the mixed-radix index convention"""
    name: str
    dim: int = Field(ge=2)
    kind: Literal["hecke", "involutive", "auto"] = "auto"
    entries: List[MatrixEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def _entries_in_range(self) -> "BraidingFile":
        size = self.dim**2
        seen = set()
        for index, entry in enumerate(self.entries):
            if entry.row >= size or entry.col >= size:
                raise ValueError(f"entry {index} at ({entry.row}, {entry.col}) is outside [0, {size})")
            key = (entry.row, entry.col)
            if key in seen:
                raise ValueError(f"entry {index} repeats position {key}")
            seen.add(key)
        return self


class SystemDescriptor(BaseModel):
    """Gaudin system description"""
    flavor: Literal["classical", "braided", "weighted"] = "classical"
    m: int = Field(default=2, ge=2)
    sites: int = Field(default=2, ge=1)
    points: List[str] = Field(default_factory=list)
    braiding: Optional[str] = None  # builtin name or file path; flip when omitted

    @model_validator(mode="after")
    def _points_match_sites(self) -> "SystemDescriptor":
        if self.points and len(self.points) != self.sites:
            raise ValueError(f"{len(self.points)} points given for {self.sites} sites")
        if len(set(self.points)) != len(self.points):
            raise ValueError("site points must be pairwise distinct")
        return self
