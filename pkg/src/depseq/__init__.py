"""Dependency parsing as sequence labeling: tree linearizations, a baseline
labeler and an experiment harness for low-resource comparisons."""

from .codecs import ENCODINGS, get_encoding
from .conllu import Sentence, Token, parse_conllu, read_conllu, write_conllu
from .deptree import DepTree, assign_planes, crossing, enumerate_trees, is_projective, repair

__version__ = "0.1.0"

__all__ = [
    "DepTree",
    "ENCODINGS",
    "Sentence",
    "Token",
    "assign_planes",
    "crossing",
    "enumerate_trees",
    "get_encoding",
    "is_projective",
    "parse_conllu",
    "read_conllu",
    "repair",
    "write_conllu",
]
