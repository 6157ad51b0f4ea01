"""Bracketing encodings: restricted non-projective (rx^b) and 2-planar (2p^b).

Per token i:

* ``<``  token i-1 has an incoming arc from the right
* ``\\`` (k times) token i has k outgoing arcs to the left
* ``/``  (k times) token i-1 has k outgoing arcs to the right
* ``>``  token i has an incoming arc from the left

Arcs from the artificial root are left implicit; headless tokens are
attached to the root by repair.  Second-plane symbols carry a ``*`` suffix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..deptree import Arc, DepTree, assign_planes, repair

EMPTY = "."
STAR = "*"


@dataclass(frozen=True)
class BracketLabel:
    has_lt: bool = False
    slash_count: int = 0
    backslash_count: int = 0
    has_gt: bool = False
    deprel: str = "_"

    def is_empty(self) -> bool:
        return not (self.has_lt or self.slash_count or self.backslash_count or self.has_gt)

    def brackets(self, star: bool = False) -> str:
        if self.is_empty():
            return EMPTY
        suffix = STAR if star else ""
        symbols = (
            ["<"] * self.has_lt
            + ["/"] * self.slash_count
            + ["\\"] * self.backslash_count
            + [">"] * self.has_gt
        )
        return "".join(s + suffix for s in symbols)

    def __str__(self):
        return self.brackets()


def parse_brackets(text: str, deprel: str = "_") -> BracketLabel:
    """Count-based parse: symbol order is irrelevant, ``*`` marks are ignored."""
    counts = {"<": 0, "/": 0, "\\": 0, ">": 0}
    for ch in text:
        if ch in counts:
            counts[ch] += 1
        elif ch not in (EMPTY, STAR):
            raise ValueError(f"unexpected bracket symbol {ch!r} in {text!r}")
    return BracketLabel(counts["<"] > 0, counts["/"], counts["\\"], counts[">"] > 0, deprel)


@dataclass(frozen=True)
class TwoPlanarLabel:
    plane1: BracketLabel
    plane2: BracketLabel
    deprel: str = "_"

    def components(self) -> tuple[str, str]:
        return self.plane1.brackets(), self.plane2.brackets(star=True)

    def __str__(self):
        return " ".join(self.components())


def _bracket_counts(n: int, arcs) -> list[list[int]]:
    """Per-token [lt, slash, backslash, gt] counts for a set of non-root arcs."""
    counts = [[0, 0, 0, 0] for _ in range(n + 2)]
    for h, d in arcs:
        if h > d:
            counts[d + 1][0] += 1
            counts[h][2] += 1
        else:
            counts[h + 1][1] += 1
            counts[d][3] += 1
    return counts


def _matched_arcs(tree: DepTree, arcs: set[Arc]) -> set[Arc]:
    """Arcs whose stack pop returns their own partner when the brackets for
    ``arcs`` are decoded left to right."""
    n = tree.n
    counts = _bracket_counts(n, arcs)
    left: list[int] = []
    right: list[int] = []
    matched: set[Arc] = set()
    for i in range(1, n + 1):
        lt, slash, backslash, gt = counts[i]
        left.extend([i - 1] * lt)
        right.extend([i - 1] * slash)
        popped = [left.pop() for _ in range(min(backslash, len(left)))]
        for d in popped:
            if (i, d) in arcs:
                matched.add((i, d))
        if gt:
            h = tree.head(i)
            if right and right.pop() == h and (h, i) in arcs:
                matched.add((h, i))
    return matched


def _labels_from_arcs(tree: DepTree, arcs) -> list[BracketLabel]:
    counts = _bracket_counts(tree.n, arcs)
    return [
        BracketLabel(lt > 0, slash, backslash, gt > 0, rel)
        for (lt, slash, backslash, gt), rel in zip(counts[1 : tree.n + 1], tree.deprels)
    ]


def encode_brackets(tree: DepTree) -> tuple[list[BracketLabel], set[Arc]]:
    """Bracket labels plus the arcs that cannot be decoded back.

    An arc is dropped when, decoding the brackets of all non-root arcs, its
    pop would be matched with the wrong partner.  The returned labels omit
    dropped arcs and decode to exactly the remaining ones.
    """
    arcs = set(tree.nonroot_arcs())
    kept = _matched_arcs(tree, arcs)
    return _labels_from_arcs(tree, kept), arcs - kept


def _sweep(planes: Sequence[Sequence[BracketLabel]], n: int) -> list[Optional[int]]:
    heads: list[Optional[int]] = [None] * (n + 1)
    stacks = [([], []) for _ in planes]

    def attach(h, d):
        if d >= 1 and heads[d] is None:
            heads[d] = h

    for i in range(1, n + 1):
        for labels, (left, right) in zip(planes, stacks):
            lab = labels[i - 1]
            if lab.has_lt:
                left.append(i - 1)
            right.extend([i - 1] * lab.slash_count)
            for _ in range(lab.backslash_count):
                if left:
                    attach(i, left.pop())
            if lab.has_gt and right:
                attach(right.pop(), i)
    return heads[1:]


def decode_brackets(labels: Sequence[BracketLabel], single_root: bool = False) -> DepTree:
    heads = _sweep([labels], len(labels))
    return repair(heads, [lab.deprel for lab in labels], single_root=single_root)


def encode_2planar(tree: DepTree) -> tuple[list[TwoPlanarLabel], set[Arc]]:
    planes = assign_planes(tree)
    first = _labels_from_arcs(tree, planes.plane1)
    second = _labels_from_arcs(tree, planes.plane2)
    labels = [
        TwoPlanarLabel(
            BracketLabel(a.has_lt, a.slash_count, a.backslash_count, a.has_gt),
            BracketLabel(b.has_lt, b.slash_count, b.backslash_count, b.has_gt),
            rel,
        )
        for a, b, rel in zip(first, second, tree.deprels)
    ]
    return labels, set(planes.dropped)


def decode_2planar(labels: Sequence[TwoPlanarLabel], single_root: bool = False) -> DepTree:
    n = len(labels)
    heads = _sweep([[lab.plane1 for lab in labels], [lab.plane2 for lab in labels]], n)
    return repair(heads, [lab.deprel for lab in labels], single_root=single_root)
