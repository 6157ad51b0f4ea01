"""Relative PoS-based head selection (rp^h).

Token i's head is written as ``{sign}{k}@{tag}``: the k-th token carrying
``tag`` when scanning right (+) or left (-) from i.  The artificial root is
position 0 with the reserved tag ``ROOT``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from ..deptree import DepTree, repair

ROOT_TAG = "ROOT"

_HEAD_RE = re.compile(r"^([+-])(\d+)@(.+)$")


@dataclass(frozen=True)
class RelPosLabel:
    offset: int
    tag: str
    deprel: str = "_"

    def __post_init__(self):
        if self.offset == 0:
            raise ValueError("offset must be nonzero")
        if not self.tag:
            raise ValueError("tag must be nonempty")

    @property
    def head(self) -> str:
        sign = "+" if self.offset > 0 else "-"
        return f"{sign}{abs(self.offset)}@{self.tag}"

    @classmethod
    def parse(cls, head: str, deprel: str = "_") -> "RelPosLabel":
        m = _HEAD_RE.match(head)
        if not m or int(m.group(2)) == 0:
            raise ValueError(f"malformed head label {head!r}")
        sign = 1 if m.group(1) == "+" else -1
        return cls(sign * int(m.group(2)), m.group(3), deprel)


def _with_root(tags: Sequence[Optional[str]]) -> list[str]:
    # missing tags behave like an ordinary "_" tag
    return [ROOT_TAG, *(t or "_" for t in tags)]


def encode_relpos(tree: DepTree, tags: Sequence[Optional[str]]) -> list[RelPosLabel]:
    if len(tags) != tree.n:
        raise ValueError(f"{len(tags)} tags for {tree.n} tokens")
    full = _with_root(tags)
    labels = []
    for i, (h, rel) in enumerate(zip(tree.heads, tree.deprels), start=1):
        target = full[h]
        if h > i:
            offset = sum(1 for k in range(i + 1, h + 1) if full[k] == target)
        else:
            offset = -sum(1 for k in range(h, i) if full[k] == target)
        labels.append(RelPosLabel(offset, target, rel))
    return labels


def resolve(i: int, label: RelPosLabel, full: Sequence[str]) -> Optional[int]:
    """Position the label points to from token i, or None if there is none."""
    step = 1 if label.offset > 0 else -1
    remaining = abs(label.offset)
    k = i + step
    while 0 <= k < len(full):
        if full[k] == label.tag:
            remaining -= 1
            if remaining == 0:
                return k
        k += step
    return None


def decode_relpos(
    labels: Sequence[RelPosLabel],
    tags: Sequence[Optional[str]],
    single_root: bool = False,
) -> DepTree:
    if len(labels) != len(tags):
        raise ValueError(f"{len(labels)} labels for {len(tags)} tags")
    full = _with_root(tags)
    heads = [resolve(i, lab, full) for i, lab in enumerate(labels, start=1)]
    return repair(heads, [lab.deprel for lab in labels], single_root=single_root)
