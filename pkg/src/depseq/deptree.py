"""Dependency trees: validation, crossing/projectivity analysis, plane
assignment, repair of raw decoder output and exhaustive enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

Arc = tuple[int, int]  # (head, dependent)

# Raw decoder output: heads[k] is the predicted head of token k + 1, or None.
HeadMap = Sequence[Optional[int]]

ROOT_DEPREL = "root"
MAX_ENUMERATE = 7


class InvalidTree(ValueError):
    pass


def default_deprels(heads: Sequence[int]) -> tuple[str, ...]:
    return tuple(ROOT_DEPREL if h == 0 else "dep" for h in heads)


def find_cycle(heads: Sequence[int]) -> Optional[list[int]]:
    """Return the positions of one cycle in a total head function, or None."""
    n = len(heads)
    state = [0] * (n + 1)  # 0 unvisited, 1 on current path, 2 done
    state[0] = 2
    for start in range(1, n + 1):
        path = []
        node = start
        while state[node] == 0:
            state[node] = 1
            path.append(node)
            node = heads[node - 1]
        if state[node] == 1:
            return path[path.index(node):]
        for p in path:
            state[p] = 2
    return None


@dataclass(frozen=True)
class DepTree:
    """A rooted dependency tree over tokens 1..n; 0 is the artificial root.

    ``heads[k]`` and ``deprels[k]`` describe token ``k + 1``.
    """

    heads: tuple[int, ...]
    deprels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        heads = tuple(int(h) for h in self.heads)
        object.__setattr__(self, "heads", heads)
        if not self.deprels:
            object.__setattr__(self, "deprels", default_deprels(heads))
        else:
            object.__setattr__(self, "deprels", tuple(self.deprels))
        n = len(heads)
        if n == 0:
            raise InvalidTree("a tree needs at least one token")
        if len(self.deprels) != n:
            raise InvalidTree(f"{len(self.deprels)} deprels for {n} tokens")
        for i, h in enumerate(heads, start=1):
            if not 0 <= h <= n:
                raise InvalidTree(f"token {i}: head {h} out of range 0..{n}")
            if h == i:
                raise InvalidTree(f"token {i} is its own head")
        cycle = find_cycle(heads)
        if cycle:
            raise InvalidTree(f"cycle through tokens {sorted(cycle)}")

    def __len__(self):
        return len(self.heads)

    @property
    def n(self) -> int:
        return len(self.heads)

    def head(self, i: int) -> int:
        return self.heads[i - 1]

    def arcs(self) -> list[Arc]:
        return [(h, d) for d, h in enumerate(self.heads, start=1)]

    def nonroot_arcs(self) -> list[Arc]:
        return [(h, d) for d, h in enumerate(self.heads, start=1) if h != 0]

    def children(self, h: int) -> list[int]:
        return [d for d, hd in enumerate(self.heads, start=1) if hd == h]


def crossing(a: Arc, b: Arc) -> bool:
    """True iff exactly one endpoint of one arc lies strictly inside the other.

    Arcs sharing an endpoint never cross.
    """
    l1, r1 = sorted(a)
    l2, r2 = sorted(b)
    if len({l1, r1, l2, r2}) < 4:
        return False
    return (l1 < l2 < r1 < r2) or (l2 < l1 < r2 < r1)


def crossing_pairs(arcs: Sequence[Arc]) -> Iterator[tuple[Arc, Arc]]:
    for a, b in itertools.combinations(arcs, 2):
        if crossing(a, b):
            yield a, b


def is_projective(tree: DepTree) -> bool:
    """No two arcs cross, arcs from the artificial root included."""
    # Sweep over arcs sorted by left endpoint; an arc crosses an open one
    # iff it starts strictly inside it and ends strictly outside.
    spans = sorted(((min(a), max(a)) for a in tree.arcs()), key=lambda s: (s[0], -s[1]))
    open_ends: list[int] = []
    for left, right in spans:
        while open_ends and open_ends[-1] <= left:
            open_ends.pop()
        if open_ends and right > open_ends[-1]:
            return False
        open_ends.append(right)
    return True


@dataclass
class PlaneAssignment:
    plane1: set[Arc]
    plane2: set[Arc]
    dropped: set[Arc]


def assign_planes(tree: DepTree) -> PlaneAssignment:
    """Greedy two-plane split of the non-root arcs.

    Arcs are visited by (rightmost endpoint, leftmost endpoint) and go to the
    first plane where they cross nothing; arcs fitting neither are dropped.
    """
    order = sorted(tree.nonroot_arcs(), key=lambda a: (max(a), min(a)))
    planes: tuple[list[Arc], list[Arc]] = ([], [])
    dropped: set[Arc] = set()
    for arc in order:
        for plane in planes:
            if not any(crossing(arc, other) for other in plane):
                plane.append(arc)
                break
        else:
            dropped.add(arc)
    return PlaneAssignment(set(planes[0]), set(planes[1]), dropped)


def repair(
    heads: HeadMap,
    deprels: Optional[Sequence[Optional[str]]] = None,
    *,
    single_root: bool = False,
) -> DepTree:
    """Turn an arbitrary predicted head map into a valid tree.

    Undefined, out-of-range and self-referencing heads become 0.  Each
    remaining cycle is broken by attaching its smallest position to 0.
    Tokens attached to the root by repair get the ``root`` deprel; all other
    positions keep their head and deprel.  With ``single_root`` every root
    child but the first is re-attached under the first one.
    """
    n = len(heads)
    fixed: list[int] = []
    rels: list[str] = []
    for i in range(1, n + 1):
        h = heads[i - 1]
        rel = deprels[i - 1] if deprels is not None else None
        if h is None or not 0 <= h <= n or h == i:
            fixed.append(0)
            rels.append(ROOT_DEPREL)
        else:
            fixed.append(h)
            rels.append(rel if rel else (ROOT_DEPREL if h == 0 else "dep"))

    while True:
        cycle = find_cycle(fixed)
        if cycle is None:
            break
        first = min(cycle)
        fixed[first - 1] = 0
        rels[first - 1] = ROOT_DEPREL

    if single_root:
        roots = [i for i, h in enumerate(fixed, start=1) if h == 0]
        for r in roots[1:]:
            fixed[r - 1] = roots[0]
    return DepTree(tuple(fixed), tuple(rels))


def enumerate_trees(n: int) -> Iterator[DepTree]:
    """Yield every dependency tree on n tokens ((n+1)^(n-1) of them)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_ENUMERATE:
        raise ValueError(f"enumeration limited to n <= {MAX_ENUMERATE}")
    choices = [[h for h in range(n + 1) if h != i] for i in range(1, n + 1)]
    for heads in itertools.product(*choices):
        if find_cycle(heads) is None:
            yield DepTree(heads)
