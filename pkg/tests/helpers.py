"""Fixtures and independent oracles shared by the test modules."""

import itertools
import random

from depseq.deptree import DepTree

# Afrikaans sentence from the AfriBooms treebank: "Ons demokrasie is gesond ."
EX_FORMS = ["Ons", "demokrasie", "is", "gesond", "."]
EX_HEADS = (2, 4, 4, 0, 3)
EX_TAGS = ["X", "NOUN", "AUX", "ADJ", "PUNCT"]
EX_DEPRELS = ("det", "nsubj", "cop", "root", "punct")
EX_ROWS = {
    "rph": ["+1@NOUN", "+1@ADJ", "+1@ADJ", "-1@ROOT", "-1@AUX"],
    "rxb": [".", "<\\", "<", "</\\\\", ">"],
    "2pb": [(".", "."), ("<\\", "."), ("<", "."), ("<\\\\", "/*"), (".", ">*")],
    "ahtb": ["SH_LA", "SH", "SH_LA_LA", "SH_RA", "SH"],
    "ctb": ["SH", "SH_LA", "SH", "SH_LA_LA_NOARC_RA", "SH_NOARC_RA"],
}

DEPRELS = ["nsubj", "obj", "det", "amod", "punct", "case"]


def example_tree():
    return DepTree(EX_HEADS, EX_DEPRELS)


def with_deprels(heads, rng):
    return DepTree(tuple(heads), tuple("root" if h == 0 else rng.choice(DEPRELS) for h in heads))


def random_tree(rng: random.Random, n: int) -> DepTree:
    """Uniform random tree on tokens 1..n rooted at 0, via a Pruefer sequence."""
    nodes = n + 1
    if nodes == 2:
        return with_deprels([0], rng)
    seq = [rng.randrange(nodes) for _ in range(nodes - 2)]
    degree = [1] * nodes
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(nodes) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(nodes) if degree[i] == 1]
    edges.append((u, v))
    adj = {i: [] for i in range(nodes)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    heads = [None] * nodes
    stack, seen = [0], {0}
    while stack:
        h = stack.pop()
        for d in adj[h]:
            if d not in seen:
                seen.add(d)
                heads[d] = h
                stack.append(d)
    return with_deprels(heads[1:], rng)


def random_projective_tree(rng: random.Random, n: int) -> DepTree:
    heads = [None] * (n + 1)

    def attach(lo, hi, head):
        while lo <= hi:
            end = rng.randint(lo, hi)
            root = rng.randint(lo, end)
            heads[root] = head
            attach(lo, root - 1, root)
            attach(root + 1, end, root)
            lo = end + 1

    attach(1, n, 0)
    return with_deprels(heads[1:], rng)


def brute_crossing(a, b):
    """Crossing by explicit position membership (independent of the library)."""
    (l1, r1), (l2, r2) = sorted(a), sorted(b)
    inside = lambda x, lo, hi: lo < x < hi
    if {l1, r1} & {l2, r2}:
        return False
    return (inside(l2, l1, r1) + inside(r2, l1, r1)) == 1


def brute_projective(heads) -> bool:
    arcs = [(h, d) for d, h in enumerate(heads, start=1)]
    return not any(brute_crossing(a, b) for a, b in itertools.combinations(arcs, 2))


def brute_trees(n):
    """All head functions on 1..n that reach 0 from every token (path following)."""
    out = []
    for heads in itertools.product(range(n + 1), repeat=n):
        ok = True
        for i in range(1, n + 1):
            seen, node = set(), i
            while node != 0 and node not in seen:
                seen.add(node)
                node = heads[node - 1]
            if node != 0:
                ok = False
                break
        if ok:
            out.append(tuple(heads))
    return out
