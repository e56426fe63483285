"""Model-specific input views derived from token streams and ASTs."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from enum import Enum

from .astcore import Ast, AstNode, Vocabulary
from .lexing import lex_code, tokenize_camel


@dataclass
class TokenSeq:
    ids: list[int]
    tokens: list[str]

    @property
    def length(self) -> int:
        return len(self.ids)

    def to_dict(self) -> dict:
        return {"kind": "token_seq", "ids": self.ids, "tokens": self.tokens}


@dataclass
class PathContext:
    """One leaf-to-leaf AST path.

    Leaf tokens are stored raw; consumers needing subtokens split them
    (code2seq does, code2vec keeps whole tokens). Node ids refer back to
    the source Ast for attribution.
    """

    left_token: str
    left_node: int
    path_labels: list[str]
    path_nodes: list[int]
    right_token: str
    right_node: int


@dataclass
class PathContextSet:
    contexts: list[PathContext]
    n_candidates: int = 0

    def to_dict(self) -> dict:
        return {
            "kind": "path_contexts",
            "n_candidates": self.n_candidates,
            "contexts": [c.__dict__ for c in self.contexts],
        }


class EdgeType(str, Enum):
    CHILD = "Child"
    NEXT_TOKEN = "NextToken"
    LAST_LEXICAL_USE = "LastLexicalUse"


@dataclass
class GraphNode:
    id: int  # Ast node id
    type_label: str
    token: str | None = None

    @property
    def content(self) -> str:
        return self.token if self.token is not None else self.type_label


@dataclass
class ProgramGraph:
    nodes: list[GraphNode]
    edges: list[tuple[int, int, EdgeType]]

    def edges_of(self, kind: EdgeType) -> list[tuple[int, int]]:
        return [(s, d) for s, d, e in self.edges if e == kind]

    def to_dict(self) -> dict:
        return {
            "kind": "program_graph",
            "nodes": [n.__dict__ for n in self.nodes],
            "edges": [[s, d, e.value] for s, d, e in self.edges],
        }


@dataclass
class StatementTree:
    """An Ast fragment rooted at one statement; ids are fragment-local,
    source_ids maps them back to the original Ast."""

    ast: Ast
    source_ids: list[int]


@dataclass
class StatementTreeSeq:
    subtrees: list[StatementTree]

    def to_dict(self) -> dict:
        return {
            "kind": "statement_trees",
            "subtrees": [
                {"ast": t.ast.to_json(), "source_ids": t.source_ids}
                for t in self.subtrees
            ],
        }


@dataclass
class LeafSeq:
    ids: list[int]
    tokens: list[str]
    node_ids: list[int] = field(default_factory=list)  # owning leaf per subtoken

    def to_dict(self) -> dict:
        return {"kind": "leaf_seq", "ids": self.ids, "tokens": self.tokens,
                "node_ids": self.node_ids}


# --- token sequences ----------------------------------------------------------

def to_token_seq(program, vocab: Vocabulary, cap: int = 1000,
                 split_subtokens: bool = True) -> TokenSeq:
    tokens = lex_code(program.text)
    if split_subtokens:
        tokens = [s for t in tokens for s in tokenize_camel(t)]
    tokens = tokens[:cap]
    return TokenSeq(ids=vocab.indices(tokens), tokens=tokens)


# --- path contexts ------------------------------------------------------------

def extract_path_contexts(ast: Ast, max_len: int = 8, max_width: int = 2,
                          max_contexts: int = 200, seed: int = 0) -> PathContextSet:
    """All leaf pairs whose connecting path fits (max_len, max_width),
    uniformly subsampled to max_contexts.

    Path length counts the internal nodes from parent(a) through the lowest
    common ancestor to parent(b); width is the child-index gap between the
    two branches at that ancestor.
    """
    leaves = ast.leaves()
    if len(leaves) < 2:
        return PathContextSet(contexts=[], n_candidates=0)
    parent = ast.parent_map()

    # root path (node -> list of ancestors from root down to node)
    chains: dict[int, list[int]] = {}

    def chain(nid: int) -> list[int]:
        if nid not in chains:
            up = []
            cur = nid
            while cur is not None:
                up.append(cur)
                cur = parent.get(cur)
            chains[nid] = up[::-1]
        return chains[nid]

    child_pos = {
        c: i for node in ast.nodes for i, c in enumerate(node.children)
    }

    candidates: list[PathContext] = []
    for ai in range(len(leaves)):
        for bi in range(ai + 1, len(leaves)):
            a, b = leaves[ai], leaves[bi]
            ca, cb = chain(a.id), chain(b.id)
            lca_depth = 0
            for x, y in zip(ca, cb):
                if x != y:
                    break
                lca_depth += 1
            # internal nodes: a-side up to lca, then down the b side
            up_side = ca[lca_depth - 1:-1][::-1]
            down_side = cb[lca_depth:-1]
            path = up_side + down_side
            if len(path) > max_len:
                continue
            branch_a = ca[lca_depth] if len(ca) > lca_depth else ca[-1]
            branch_b = cb[lca_depth] if len(cb) > lca_depth else cb[-1]
            width = abs(child_pos.get(branch_a, 0) - child_pos.get(branch_b, 0))
            if width > max_width:
                continue
            candidates.append(PathContext(
                left_token=a.token or "", left_node=a.id,
                path_labels=[ast.node(p).type_label for p in path],
                path_nodes=list(path),
                right_token=b.token or "", right_node=b.id,
            ))
    n_candidates = len(candidates)
    if n_candidates > max_contexts:
        candidates = random.Random(seed).sample(candidates, max_contexts)
        candidates.sort(key=lambda c: (c.left_node, c.right_node))
    return PathContextSet(contexts=candidates, n_candidates=n_candidates)


# --- program graphs -------------------------------------------------------------

_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*\Z")

# identifiers never carry LastLexicalUse edges when they are reserved words
_RESERVED = frozenset("""
    auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    abstract assert boolean byte catch class extends final finally implements
    import instanceof interface native new package private protected public
    strictfp super synchronized this throw throws transient try
""".split())


def is_identifier_token(token: str) -> bool:
    return bool(_IDENT_RE.match(token)) and token not in _RESERVED


def build_program_graph(ast: Ast) -> ProgramGraph:
    nodes = [GraphNode(n.id, n.type_label, n.token) for n in ast.nodes]
    edges: list[tuple[int, int, EdgeType]] = [
        (n.id, c, EdgeType.CHILD) for n in ast.nodes for c in n.children
    ]
    leaves = ast.leaves()
    for prev, nxt in zip(leaves, leaves[1:]):
        edges.append((prev.id, nxt.id, EdgeType.NEXT_TOKEN))
    last_seen: dict[str, int] = {}
    for leaf in leaves:
        tok = leaf.token or ""
        if is_identifier_token(tok):
            if tok in last_seen:
                edges.append((leaf.id, last_seen[tok], EdgeType.LAST_LEXICAL_USE))
            last_seen[tok] = leaf.id
    return ProgramGraph(nodes=nodes, edges=edges)


# --- statement trees -------------------------------------------------------------

# Nodes of these kinds head their own statement subtree wherever they occur.
STATEMENT_HEADER_KINDS = frozenset({
    # C
    "FuncDef", "If", "For", "While", "DoWhile", "Switch",
    # Java
    "MethodDeclaration", "ConstructorDeclaration", "IfStatement",
    "ForStatement", "WhileStatement", "DoStatement", "SwitchStatement",
    "TryStatement", "SynchronizedStatement",
})

# Any direct child of these containers is a statement (declarations,
# expression statements, return/break/..., nested blocks).
STATEMENT_CONTAINER_KINDS = frozenset({
    "Compound",          # C
    "BlockStatement",    # Java
    "SwitchCase",
})

# Wrapper-only fragments (e.g. a FileAST whose single function was split
# out) carry no content and are dropped from the sequence.
_WRAPPER_KINDS = frozenset({"FileAST", "CompilationUnit"})


def split_statement_trees(ast: Ast) -> StatementTreeSeq:
    """Partition an Ast into statement-rooted fragments in source order.

    Every node lands in exactly one fragment (the one headed by its nearest
    statement ancestor-or-self), so the leaf-token multiset is preserved.
    """
    parent = ast.parent_map()

    def is_statement_root(nid: int) -> bool:
        if nid == ast.root:
            return True
        node = ast.node(nid)
        if node.type_label in STATEMENT_HEADER_KINDS:
            return True
        parent_label = ast.node(parent[nid]).type_label
        return parent_label in STATEMENT_CONTAINER_KINDS and not node.is_leaf

    roots = [n.id for n in ast.walk() if is_statement_root(n.id)]
    fragments: list[StatementTree] = []
    for rid in roots:
        local_nodes: list[AstNode] = []
        source_ids: list[int] = []

        def copy(nid: int) -> int:
            node = ast.node(nid)
            local = AstNode(id=len(local_nodes), type_label=node.type_label,
                            token=node.token)
            local_nodes.append(local)
            source_ids.append(nid)
            for c in node.children:
                if c != rid and is_statement_root(c):
                    continue  # nested statement: excised into its own fragment
                local.children.append(copy(c))
            return local.id

        copy(rid)
        frag_ast = Ast(root=0, nodes=local_nodes, source_id=ast.source_id)
        if (all(n.type_label in _WRAPPER_KINDS for n in local_nodes)
                and not any(n.is_leaf for n in local_nodes)):
            continue
        fragments.append(StatementTree(ast=frag_ast, source_ids=source_ids))
    if not fragments:
        fragments = [StatementTree(
            ast=Ast(root=ast.root, nodes=ast.nodes, source_id=ast.source_id),
            source_ids=[n.id for n in ast.nodes])]
    return StatementTreeSeq(subtrees=fragments)


# --- leaf sequences ----------------------------------------------------------------

def to_leaf_seq(ast: Ast, vocab: Vocabulary) -> LeafSeq:
    """Leaves in source order, camel-split and id-mapped."""
    tokens: list[str] = []
    node_ids: list[int] = []
    for leaf in ast.leaves():
        for sub in tokenize_camel(leaf.token or ""):
            tokens.append(sub)
            node_ids.append(leaf.id)
    return LeafSeq(ids=vocab.indices(tokens), tokens=tokens, node_ids=node_ids)
