"""Uniform access to the five linearizations.

Every encoding turns a tree into one row of string components per token
(the head part(s) followed by the dependency relation) and back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from ..deptree import Arc, DepTree
from . import bracket, headsel, transition

Row = tuple[str, ...]


@dataclass(frozen=True)
class Encoding:
    name: str
    components: tuple[str, ...]
    needs_tags: bool
    _encode: Callable
    _decode: Callable

    def encode(self, tree: DepTree, tags: Optional[Sequence[str]] = None) -> tuple[list[Row], set[Arc]]:
        """Rows of component strings and the set of arcs lost by encoding."""
        if self.needs_tags and tags is None:
            raise ValueError(f"{self.name} needs PoS tags")
        return self._encode(tree, tags)

    def decode(self, rows: Sequence[Row], tags: Optional[Sequence[str]] = None, single_root: bool = False) -> DepTree:
        if self.needs_tags and tags is None:
            raise ValueError(f"{self.name} needs PoS tags")
        for row in rows:
            if len(row) != len(self.components):
                raise ValueError(f"{self.name} rows have {len(self.components)} components, got {row!r}")
        return self._decode(rows, tags, single_root)


def _rph_encode(tree, tags):
    labels = headsel.encode_relpos(tree, tags)
    return [(lab.head, lab.deprel) for lab in labels], set()


def _rph_decode(rows, tags, single_root):
    labels = []
    for head, rel in rows:
        try:
            labels.append(headsel.RelPosLabel.parse(head, rel))
        except ValueError:
            # unreadable head component: point nowhere so repair roots it
            labels.append(headsel.RelPosLabel(-(len(rows) + 1), headsel.ROOT_TAG, rel))
    return headsel.decode_relpos(labels, tags, single_root=single_root)


def _rxb_encode(tree, tags):
    labels, dropped = bracket.encode_brackets(tree)
    return [(lab.brackets(), lab.deprel) for lab in labels], dropped


def _rxb_decode(rows, tags, single_root):
    labels = [bracket.parse_brackets(b, rel) for b, rel in rows]
    return bracket.decode_brackets(labels, single_root=single_root)


def _2pb_encode(tree, tags):
    labels, dropped = bracket.encode_2planar(tree)
    return [(*lab.components(), lab.deprel) for lab in labels], dropped


def _2pb_decode(rows, tags, single_root):
    labels = [
        bracket.TwoPlanarLabel(bracket.parse_brackets(p1), bracket.parse_brackets(p2), rel)
        for p1, p2, rel in rows
    ]
    return bracket.decode_2planar(labels, single_root=single_root)


def _transition_codec(system):
    def encode(tree, tags):
        chunks, dropped = transition.encode_transitions(tree, system)
        return [(str(c), c.deprel) for c in chunks], dropped

    def decode(rows, tags, single_root):
        chunks = [transition.TransitionChunk.parse(t, rel) for t, rel in rows]
        return transition.replay(chunks, system, single_root=single_root)

    return encode, decode


ENCODINGS: dict[str, Encoding] = {
    "rph": Encoding("rph", ("head", "deprel"), True, _rph_encode, _rph_decode),
    "rxb": Encoding("rxb", ("brackets", "deprel"), False, _rxb_encode, _rxb_decode),
    "2pb": Encoding("2pb", ("plane1", "plane2", "deprel"), False, _2pb_encode, _2pb_decode),
    "ahtb": Encoding("ahtb", ("transitions", "deprel"), False, *_transition_codec(transition.ARC_HYBRID)),
    "ctb": Encoding("ctb", ("transitions", "deprel"), False, *_transition_codec(transition.COVINGTON)),
}

ALIASES = {"rp^h": "rph", "rx^b": "rxb", "2p^b": "2pb", "ah^tb": "ahtb", "c^tb": "ctb"}


def get_encoding(name: str) -> Encoding:
    key = ALIASES.get(name, name)
    try:
        return ENCODINGS[key]
    except KeyError:
        raise ValueError(f"unknown encoding {name!r}; choose from {', '.join(ENCODINGS)}") from None
