"""Encoded-label files.

Tab-separated, one token per line: index, form, upos, then one column per
label component of the encoding.  Sentences are separated by blank lines.
The file may start with a ``# encoding = NAME`` line; other ``#`` lines are
ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .codecs import Row


@dataclass
class LabeledSentence:
    forms: list[str]
    tags: list[str]
    rows: list[Row]


def write_labels(sentences: Iterable[LabeledSentence], encoding: Optional[str] = None) -> str:
    out = []
    if encoding:
        out.append(f"# encoding = {encoding}\n")
    for sent in sentences:
        for i, (form, tag, row) in enumerate(zip(sent.forms, sent.tags, sent.rows), start=1):
            out.append("\t".join([str(i), form, tag or "_", *row]) + "\n")
        out.append("\n")
    return "".join(out)


def read_labels(text: str, n_components: Optional[int] = None) -> tuple[Optional[str], list[LabeledSentence]]:
    """Parse a label file; returns the declared encoding (if any) and sentences."""
    encoding = None
    sentences: list[LabeledSentence] = []
    cur = LabeledSentence([], [], [])
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            if cur.rows:
                sentences.append(cur)
                cur = LabeledSentence([], [], [])
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            if key.strip() == "encoding":
                encoding = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) < 4 or (n_components is not None and len(cols) != 3 + n_components):
            raise ValueError(f"line {lineno}: unexpected column count {len(cols)}")
        if int(cols[0]) != len(cur.rows) + 1:
            raise ValueError(f"line {lineno}: token index {cols[0]} out of sequence")
        cur.forms.append(cols[1])
        cur.tags.append(cols[2])
        cur.rows.append(tuple(cols[3:]))
    if cur.rows:
        sentences.append(cur)
    return encoding, sentences
