"""CoNLL-U reading and writing.

Only ID, FORM, UPOS, HEAD and DEPREL are kept; the remaining columns are
read but written back as ``_``.  Multiword-token ranges (``3-4``) and empty
nodes (``5.1``) are skipped and counted on the sentence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .deptree import DepTree, find_cycle

N_COLUMNS = 10


class ConlluError(ValueError):
    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Token:
    id: int
    form: str
    upos: Optional[str]
    head: int
    deprel: str


@dataclass
class Sentence:
    tokens: list[Token]
    comments: list[str] = field(default_factory=list)
    skipped: int = 0

    def __len__(self):
        return len(self.tokens)

    @property
    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    @property
    def tags(self) -> list[Optional[str]]:
        return [t.upos for t in self.tokens]

    @property
    def heads(self) -> list[int]:
        return [t.head for t in self.tokens]

    def tree(self) -> DepTree:
        return DepTree(tuple(self.heads), tuple(t.deprel for t in self.tokens))

    def with_tree(self, tree: DepTree) -> "Sentence":
        """Copy of this sentence with heads and deprels taken from ``tree``."""
        tokens = [
            Token(t.id, t.form, t.upos, h, rel)
            for t, h, rel in zip(self.tokens, tree.heads, tree.deprels)
        ]
        return Sentence(tokens, list(self.comments), self.skipped)

    def with_tags(self, tags: Sequence[Optional[str]]) -> "Sentence":
        tokens = [Token(t.id, t.form, p, t.head, t.deprel) for t, p in zip(self.tokens, tags)]
        return Sentence(tokens, list(self.comments), self.skipped)


def _finish(rows: list[tuple[int, list[str]]], comments, skipped, strict) -> Sentence:
    n = len(rows)
    tokens = []
    for expected, (lineno, cols) in enumerate(rows, start=1):
        try:
            tid = int(cols[0])
        except ValueError:
            raise ConlluError(f"bad token id {cols[0]!r}", lineno) from None
        if tid != expected:
            raise ConlluError(f"token id {tid}, expected {expected}", lineno)
        try:
            head = int(cols[6])
        except ValueError:
            raise ConlluError(f"non-integer head {cols[6]!r}", lineno) from None
        if not 0 <= head <= n:
            raise ConlluError(f"head out of range: {head} (sentence has {n} tokens)", lineno)
        if head == tid:
            raise ConlluError(f"token {tid} is its own head", lineno)
        upos = None if cols[3] == "_" else cols[3]
        tokens.append(Token(tid, cols[1], upos, head, cols[7]))
    if strict:
        cycle = find_cycle([t.head for t in tokens])
        if cycle:
            raise ConlluError(f"cycle through tokens {sorted(cycle)}", rows[cycle[0] - 1][0])
    return Sentence(tokens, comments, skipped)


def parse_conllu(text: str, strict: bool = False) -> list[Sentence]:
    """Parse CoNLL-U text into sentences.

    Non-strict mode accepts multi-rooted and cyclic head columns so raw
    decoder output can be stored; strict mode requires each sentence to be a
    tree.  Errors raise :class:`ConlluError` carrying the line number.
    """
    sentences: list[Sentence] = []
    rows: list[tuple[int, list[str]]] = []
    comments: list[str] = []
    skipped = 0
    start = 0

    def flush():
        nonlocal rows, comments, skipped
        if rows:
            sentences.append(_finish(rows, comments, skipped, strict))
        elif comments or skipped:
            raise ConlluError("sentence without tokens", start)
        rows, comments, skipped = [], [], 0

    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            flush()
            continue
        if not rows and not comments and not skipped:
            start = lineno
        if line.startswith("#"):
            comments.append(line)
            continue
        cols = line.split("\t")
        if len(cols) != N_COLUMNS:
            raise ConlluError(f"expected {N_COLUMNS} columns, found {len(cols)}", lineno)
        if "-" in cols[0] or "." in cols[0]:
            skipped += 1
            continue
        rows.append((lineno, cols))
    flush()
    return sentences


def read_conllu(path, strict: bool = False) -> list[Sentence]:
    with open(path, encoding="utf-8") as f:
        return parse_conllu(f.read(), strict=strict)


def write_conllu(sentences: Iterable[Sentence]) -> str:
    blocks = []
    for sent in sentences:
        lines = list(sent.comments)
        for t in sent.tokens:
            cols = [str(t.id), t.form, "_", t.upos or "_", "_", "_", str(t.head), t.deprel, "_", "_"]
            lines.append("\t".join(cols))
        blocks.append("\n".join(lines) + "\n\n")
    return "".join(blocks)


def save_conllu(sentences: Iterable[Sentence], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(write_conllu(sentences))


def make_sentence(forms, tags, heads, deprels=None, comments=()) -> Sentence:
    """Build a sentence from parallel columns (handy for fixtures)."""
    if deprels is None:
        deprels = ["root" if h == 0 else "dep" for h in heads]
    tokens = [
        Token(i, f, p, h, r)
        for i, (f, p, h, r) in enumerate(zip(forms, tags, heads, deprels), start=1)
    ]
    return Sentence(tokens, list(comments))
