"""Normalized syntax trees, parsing entry points, and vocabularies."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ParseError
from .lexing import tokenize_camel


@dataclass
class AstNode:
    id: int
    type_label: str
    token: str | None = None
    children: list[int] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return self.token is not None


@dataclass
class Ast:
    """Tree over an id-indexed node table; node ids are preorder indices."""

    root: int
    nodes: list[AstNode]
    source_id: str = ""

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> AstNode:
        return self.nodes[node_id]

    def children(self, node_id: int) -> list[AstNode]:
        return [self.nodes[c] for c in self.nodes[node_id].children]

    def walk(self, start: int | None = None) -> Iterator[AstNode]:
        """Depth-first, children in order (in-order for leaf purposes)."""
        stack = [self.root if start is None else start]
        while stack:
            node = self.nodes[stack.pop()]
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list[AstNode]:
        return [n for n in self.walk() if n.is_leaf]

    def leaf_tokens(self) -> list[str]:
        return [n.token for n in self.leaves()]  # type: ignore[misc]

    def depth(self) -> int:
        """Number of levels; a single node counts as depth 1."""
        depths = {self.root: 1}
        best = 1
        stack = [self.root]
        while stack:
            nid = stack.pop()
            d = depths[nid]
            best = max(best, d)
            for c in self.nodes[nid].children:
                depths[c] = d + 1
                stack.append(c)
        return best

    def parent_map(self) -> dict[int, int]:
        return {c: n.id for n in self.nodes for c in n.children}

    def validate(self) -> None:
        """Check tree well-formedness: single root, |edges| = |nodes| - 1."""
        seen: set[int] = set()
        edge_count = 0
        for node in self.nodes:
            if node.id in seen:
                raise ValueError(f"duplicate node id {node.id}")
            seen.add(node.id)
            edge_count += len(node.children)
            if node.is_leaf and node.children:
                raise ValueError(f"leaf node {node.id} has children")
            if not node.is_leaf and node.token is not None:
                raise ValueError(f"internal node {node.id} carries a token")
        if edge_count != len(self.nodes) - 1:
            raise ValueError(
                f"not a tree: {edge_count} edges over {len(self.nodes)} nodes"
            )
        reached = sum(1 for _ in self.walk())
        if reached != len(self.nodes):
            raise ValueError("nodes unreachable from root")

    def to_json(self) -> str:
        payload = {
            "root": self.root,
            "nodes": [
                {
                    "id": n.id,
                    "type": n.type_label,
                    **({"token": n.token} if n.token is not None else {}),
                    "children": n.children,
                }
                for n in self.nodes
            ],
        }
        return json.dumps(payload, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, source_id: str = "") -> "Ast":
        payload = json.loads(text)
        nodes = [
            AstNode(
                id=rec["id"],
                type_label=rec["type"],
                token=rec.get("token"),
                children=list(rec["children"]),
            )
            for rec in payload["nodes"]
        ]
        nodes.sort(key=lambda n: n.id)
        return cls(root=payload["root"], nodes=nodes, source_id=source_id)


class AstBuilder:
    """Incremental Ast construction with preorder ids."""

    def __init__(self, source_id: str = "") -> None:
        self.nodes: list[AstNode] = []
        self.source_id = source_id

    def add(self, type_label: str, token: str | None = None,
            parent: int | None = None) -> int:
        node = AstNode(id=len(self.nodes), type_label=type_label, token=token)
        self.nodes.append(node)
        if parent is not None:
            self.nodes[parent].children.append(node.id)
        return node.id

    def build(self, root: int = 0) -> Ast:
        ast = Ast(root=root, nodes=self.nodes, source_id=self.source_id)
        ast.validate()
        return ast


def parse_to_ast(program) -> Ast:
    """Parse a SourceProgram into a normalized Ast.

    Dispatches on program.lang; raises ParseError (with line/column when
    the underlying parser provides them) for unparseable input.
    """
    from . import cparse, jparse  # deferred: keeps import cost off the hot path

    if not program.text.strip():
        raise ParseError("empty program text", source_id=program.id)
    if program.lang == "C":
        return cparse.parse_c(program.text, source_id=program.id)
    if program.lang == "Java":
        return jparse.parse_java(program.text, source_id=program.id)
    raise ValueError(f"unsupported language: {program.lang!r}")


PAD_TOKEN = "<pad>"
UNK_TOKEN = "<unk>"


class Vocabulary:
    """Frequency-truncated token index. PAD=0, UNK=1, content from 2 on.

    max_size bounds the number of content tokens, so len(vocab) is at most
    max_size + 2.
    """

    PAD = 0
    UNK = 1

    def __init__(self, tokens: Iterable[str]) -> None:
        self._tokens = [PAD_TOKEN, UNK_TOKEN, *tokens]
        self._index = {tok: i for i, tok in enumerate(self._tokens)}
        if len(self._index) != len(self._tokens):
            raise ValueError("duplicate tokens in vocabulary")

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def index(self, token: str) -> int:
        return self._index.get(token, self.UNK)

    def indices(self, tokens: Iterable[str]) -> list[int]:
        return [self.index(t) for t in tokens]

    def token(self, index: int) -> str:
        return self._tokens[index]

    def save(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self._tokens) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        lines = Path(path).read_text().splitlines()
        if lines[:2] != [PAD_TOKEN, UNK_TOKEN]:
            raise ValueError(f"{path}: not a vocabulary file")
        return cls(lines[2:])


def build_vocab(token_streams: Iterable[Iterable[str]], max_size: int = 1000,
                min_freq: int = 1) -> Vocabulary:
    """Most-frequent-first vocabulary; ties broken lexicographically."""
    counts: Counter[str] = Counter()
    empty = True
    for stream in token_streams:
        empty = False
        counts.update(stream)
    if empty:
        raise ValueError("build_vocab: no token streams given")
    kept = sorted(
        (tok for tok, c in counts.items() if c >= min_freq),
        key=lambda tok: (-counts[tok], tok),
    )
    return Vocabulary(kept[:max_size])


def subtoken_stream(tokens: Iterable[str]) -> list[str]:
    """Camel-split a token stream (the default feeding build_vocab)."""
    return [s for tok in tokens for s in tokenize_camel(tok)]
