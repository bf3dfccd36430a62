"""
Document Service

Converts between in-memory artifacts and their JSON documents. Documents
name vertices by their input labels and list edges in canonical order.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, Tuple

from pydantic import ValidationError

from vdec.schemas.coloring import ColoredEdge, ColoringDocument
from vdec.schemas.common import GraphSummary
from vdec.schemas.forest import ForestDocument

from .edge_coloring import EdgeColoring
from .errors import InputError
from .graph_core import Edge, Graph, degree_profile, edge_key, is_vdec, k_lower_bound
from .path_factor import LinearForest


class ColoringParseError(InputError):
    """Raised when a coloring document is malformed or names unknown vertices."""
    pass


@dataclass
class ColoringTable:
    """
    Colors read from a document, kept as given.

    Unlike EdgeColoring nothing is checked on entry, so the verifiers can
    report improper or partial documents.
    """
    palette: int
    colors: Dict[Edge, int] = field(default_factory=dict)

    def items(self) -> Iterator[Tuple[Edge, int]]:
        return iter(sorted(self.colors.items()))


def graph_summary(g: Graph) -> GraphSummary:
    profile = degree_profile(g)
    return GraphSummary(
        n=g.n,
        m=g.m,
        min_degree=g.min_degree,
        max_degree=g.max_degree,
        degree_profile=dict(profile.items()),
        k=k_lower_bound(g) if is_vdec(g) else None,
        labels=list(g.labels),
    )


def coloring_document(c: EdgeColoring) -> ColoringDocument:
    labels = c.host.labels
    return ColoringDocument(
        palette=c.palette,
        edges=[ColoredEdge(u=labels[u], v=labels[v], color=color) for (u, v), color in c.items()],
    )


def read_coloring(g: Graph, text: str) -> ColoringTable:
    """
    Parse a coloring document against its graph.

    Raises:
        ColoringParseError: invalid JSON, unknown labels or a repeated edge.
    """
    try:
        document = ColoringDocument.model_validate_json(text)
    except ValidationError as e:
        raise ColoringParseError(f"invalid coloring document: {e.error_count()} error(s)") from e
    index = {label: v for v, label in enumerate(g.labels)}
    table = ColoringTable(document.palette)
    for entry in document.edges:
        if entry.u not in index or entry.v not in index:
            raise ColoringParseError(f"edge {entry.u} {entry.v} names an unknown vertex")
        e = edge_key(index[entry.u], index[entry.v])
        if e in table.colors:
            raise ColoringParseError(f"edge {entry.u} {entry.v} listed twice")
        table.colors[e] = entry.color
    return table


def forest_document(forest: LinearForest) -> ForestDocument:
    labels = forest.host.labels
    return ForestDocument(
        paths=[[labels[v] for v in p] for p in sorted(forest.paths, key=min)],
        uncovered=[labels[v] for v in forest.uncovered],
    )
