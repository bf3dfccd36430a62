"""
Recoloring Constraints

Pair constraints (disjoint vertex pairs whose color-sets must differ) and
per-vertex forbidden sets consumed by the recoloring stages.
"""

from math import comb
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Tuple

from .errors import PreconditionFailed


class ConstraintError(PreconditionFailed):
    """Raised when pair or forbidden-set invariants do not hold."""
    pass


class PairConstraints:
    """Pairwise disjoint unordered vertex pairs."""

    def __init__(self, pairs: Iterable[Tuple[int, int]] = ()):
        self._partner: Dict[int, int] = {}
        normalized = []
        for u, v in pairs:
            if u == v:
                raise ConstraintError(f"pair ({u}, {v}) repeats a vertex")
            if u in self._partner or v in self._partner:
                raise ConstraintError(f"pair ({u}, {v}) overlaps another pair")
            self._partner[u] = v
            self._partner[v] = u
            normalized.append((min(u, v), max(u, v)))
        self.pairs: Tuple[Tuple[int, int], ...] = tuple(sorted(normalized))

    def partner(self, v: int) -> Optional[int]:
        return self._partner.get(v)

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, v: object) -> bool:
        return v in self._partner

    def restricted_to(self, vertices: Iterable[int]) -> "PairConstraints":
        """Pairs with both ends inside `vertices`."""
        keep = set(vertices)
        return PairConstraints((u, v) for u, v in self.pairs if u in keep and v in keep)

    def __repr__(self) -> str:
        return f"PairConstraints({list(self.pairs)})"


class ForbiddenSets:
    """
    Map v -> vertices whose color-sets v must avoid.

    Lookups of vertices without an entry return the empty set.
    """

    def __init__(self, sets: Optional[Mapping[int, Iterable[int]]] = None):
        self._sets: Dict[int, FrozenSet[int]] = {}
        for v, others in (sets or {}).items():
            members = frozenset(others)
            if v in members:
                raise ConstraintError(f"vertex {v} forbids itself")
            if members:
                self._sets[v] = members

    def __getitem__(self, v: int) -> FrozenSet[int]:
        return self._sets.get(v, frozenset())

    def items(self):
        return self._sets.items()

    def __len__(self) -> int:
        return len(self._sets)

    def with_partners(self, pairs: PairConstraints) -> "ForbiddenSets":
        """B*(v): forb(v) plus v's pair partner, closed under symmetry."""
        merged: Dict[int, set] = {v: set(others) for v, others in self._sets.items()}
        for u, v in pairs:
            merged.setdefault(u, set()).add(v)
            merged.setdefault(v, set()).add(u)
        for v, others in list(merged.items()):
            for u in others:
                merged.setdefault(u, set()).add(v)
        return ForbiddenSets(merged)

    def check_bounds(
        self, k: int, forest_degree: Mapping[int, int], pairs: PairConstraints
    ) -> None:
        """
        Enforce |forb(v) + partner| <= 2*C(k, d_F(v)) - 1 and equal forest degrees.

        Raises:
            ConstraintError: naming the first offending vertex.
        """
        for v in sorted(set(self._sets) | {x for pair in pairs for x in pair}):
            if v not in forest_degree:
                continue
            d = forest_degree[v]
            members = set(self[v])
            for u in sorted(members):
                if u in forest_degree and forest_degree[u] != d:
                    raise ConstraintError(
                        f"vertex {v} (d_F={d}) constrained against {u} (d_F={forest_degree[u]})"
                    )
            # a partner with another forest degree is distinguished by set size
            partner = pairs.partner(v)
            if partner is not None and forest_degree.get(partner) == d:
                members.add(partner)
            limit = 2 * comb(k, d) - 1
            if len(members) > limit:
                raise ConstraintError(
                    f"vertex {v} has {len(members)} constraints, more than {limit} for d_F={d}"
                )

    def __repr__(self) -> str:
        return f"ForbiddenSets({ {v: sorted(s) for v, s in sorted(self._sets.items())} })"
