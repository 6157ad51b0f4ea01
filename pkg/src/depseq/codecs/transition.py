"""Transition-based encodings: arc-hybrid (ah^tb) and Covington (c^tb).

A left-to-right oracle produces a transition sequence with exactly one SH
per word; the sequence is cut before every SH so that word i receives the
i-th chunk.  Decoding concatenates the chunks and replays them, skipping any
transition that is illegal in the current state.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from ..deptree import Arc, DepTree, crossing, repair


class Transition(str, Enum):
    SH = "SH"
    LA = "LA"
    RA = "RA"
    NOARC = "NOARC"

    def __str__(self):
        return self.value


ARC_HYBRID = "arc-hybrid"
COVINGTON = "covington"
SYSTEMS = (ARC_HYBRID, COVINGTON)


@dataclass(frozen=True)
class TransitionChunk:
    transitions: tuple[Transition, ...]
    deprel: str = "_"

    def __post_init__(self):
        if not self.transitions or self.transitions[0] is not Transition.SH:
            raise ValueError("a chunk must start with SH")

    def __str__(self):
        return "_".join(t.value for t in self.transitions)

    @classmethod
    def parse(cls, text: str, deprel: str = "_") -> "TransitionChunk":
        """Parse ``SH_LA_RA``-style text.  Anything not starting with a valid
        SH (including unknown names) is normalized to a bare SH."""
        try:
            transitions = tuple(Transition(part) for part in text.split("_"))
        except ValueError:
            transitions = ()
        if not transitions or transitions[0] is not Transition.SH:
            transitions = (Transition.SH,)
        return cls(transitions, deprel)


def kept_arcs_bfs(tree: DepTree) -> set[Arc]:
    """Breadth-first from the root, keep each arc that crosses no kept arc."""
    kept: list[Arc] = []
    queue = deque([0])
    while queue:
        h = queue.popleft()
        for d in tree.children(h):
            arc = (h, d)
            if not any(crossing(arc, k) for k in kept):
                kept.append(arc)
            queue.append(d)
    return set(kept)


def oracle_archybrid(tree: DepTree) -> list[Transition]:
    kept = kept_arcs_bfs(tree)
    head = {d: h for h, d in kept}
    pending = {i: 0 for i in range(tree.n + 1)}
    for h, _ in kept:
        pending[h] += 1

    stack = [0]
    buffer = deque(range(1, tree.n + 1))
    out: list[Transition] = []
    while True:
        s0 = stack[-1]
        done = pending[s0] == 0
        if buffer and s0 != 0 and done and head.get(s0) == buffer[0]:
            out.append(Transition.LA)
            pending[buffer[0]] -= 1
            stack.pop()
        elif len(stack) >= 2 and done and head.get(s0) == stack[-2]:
            out.append(Transition.RA)
            pending[stack[-2]] -= 1
            stack.pop()
        elif buffer:
            out.append(Transition.SH)
            stack.append(buffer.popleft())
        else:
            return out


def oracle_covington(tree: DepTree) -> list[Transition]:
    out: list[Transition] = []
    for j in range(1, tree.n + 1):
        chunk = [Transition.SH]
        last_arc = 0
        for i in range(j - 1, -1, -1):
            if i >= 1 and tree.head(i) == j:
                chunk.append(Transition.LA)
                last_arc = len(chunk)
            elif tree.head(j) == i:
                chunk.append(Transition.RA)
                last_arc = len(chunk)
            else:
                chunk.append(Transition.NOARC)
        out.extend(chunk[: max(last_arc, 1)])
    return out


def chunk_transitions(transitions: Sequence[Transition], deprels: Optional[Sequence[str]] = None):
    """Split a transition sequence before each SH; leading non-SH transitions
    are not allowed, trailing ones join the last chunk."""
    if Transition.SH not in transitions:
        raise ValueError("transition sequence has no SH")
    if transitions[0] is not Transition.SH:
        raise ValueError("transition sequence must start with SH")
    groups: list[list[Transition]] = []
    for t in transitions:
        if t is Transition.SH:
            groups.append([t])
        else:
            groups[-1].append(t)
    if deprels is None:
        deprels = ["_"] * len(groups)
    if len(deprels) != len(groups):
        raise ValueError(f"{len(groups)} chunks but {len(deprels)} deprels")
    return [TransitionChunk(tuple(g), rel) for g, rel in zip(groups, deprels)]


def _replay_archybrid(transitions, n: int) -> list[Optional[int]]:
    heads: list[Optional[int]] = [None] * (n + 1)
    stack = [0]
    buffer = deque(range(1, n + 1))
    for t in transitions:
        if t is Transition.SH:
            if buffer:
                stack.append(buffer.popleft())
        elif t is Transition.LA:
            if buffer and len(stack) >= 2:
                heads[stack.pop()] = buffer[0]
        elif t is Transition.RA:
            if len(stack) >= 2:
                d = stack.pop()
                heads[d] = stack[-1]
        # NOARC does not exist in arc-hybrid: skipped
    return heads[1:]


def _creates_cycle(heads: list[Optional[int]], h: int, d: int) -> bool:
    node: Optional[int] = h
    while node is not None and node != 0:
        if node == d:
            return True
        node = heads[node]
    return False


def _replay_covington(transitions, n: int) -> list[Optional[int]]:
    heads: list[Optional[int]] = [None] * (n + 1)
    j = 0  # last shifted word
    i = -1  # current left candidate
    for t in transitions:
        if t is Transition.SH:
            if j < n:
                j += 1
                i = j - 1
            continue
        if j < 1 or i < 0:
            continue
        if t is Transition.LA:
            if i == 0 or heads[i] is not None or _creates_cycle(heads, j, i):
                continue
            heads[i] = j
        elif t is Transition.RA:
            if heads[j] is not None or _creates_cycle(heads, i, j):
                continue
            heads[j] = i
        i -= 1
    return heads[1:]


def replay(chunks: Sequence[TransitionChunk], system: str, single_root: bool = False) -> DepTree:
    n = len(chunks)
    transitions = [t for chunk in chunks for t in chunk.transitions]
    if system == ARC_HYBRID:
        heads = _replay_archybrid(transitions, n)
    elif system == COVINGTON:
        heads = _replay_covington(transitions, n)
    else:
        raise ValueError(f"unknown transition system {system!r}")
    return repair(heads, [c.deprel for c in chunks], single_root=single_root)


def encode_transitions(tree: DepTree, system: str) -> tuple[list[TransitionChunk], set[Arc]]:
    """Chunked oracle sequence plus the gold arcs the replay cannot recover."""
    if system == ARC_HYBRID:
        transitions = oracle_archybrid(tree)
    elif system == COVINGTON:
        transitions = oracle_covington(tree)
    else:
        raise ValueError(f"unknown transition system {system!r}")
    chunks = chunk_transitions(transitions, tree.deprels)
    decoded = replay(chunks, system)
    dropped = {(h, d) for (h, d) in tree.arcs() if decoded.head(d) != h}
    return chunks, dropped
