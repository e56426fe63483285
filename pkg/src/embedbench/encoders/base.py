"""Shared encoder machinery: configs, embedded views, the encoder base."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import torch
import torch.nn as nn

from ..astcore import Ast
from ..features import (LeafSeq, PathContextSet, ProgramGraph,
                        StatementTreeSeq, TokenSeq)


class ModelKind(str, Enum):
    LSTM = "lstm"
    TRANSFORMER = "transformer"
    TBCNN = "tbcnn"
    AUTOENCODE = "autoencode"
    CODE2VEC = "code2vec"
    CODE2SEQ = "code2seq"
    GGNN = "ggnn"
    ASTNN = "astnn"


def default_vocab_sizes() -> dict[str, int]:
    # roles: token = shared subtoken/node-content vocab; leaf = whole leaf
    # tokens (code2vec); path = whole path strings (code2vec); node_type =
    # internal node labels (code2seq)
    return {"token": 1000, "leaf": 1000, "path": 1000, "node_type": 1000}


@dataclass
class EncoderConfig:
    model_kind: ModelKind
    d: int = 128
    vocab_sizes: dict[str, int] = field(default_factory=default_vocab_sizes)
    seed: int = 0
    dropout: float = 0.0
    # token models
    lstm_hidden: int = 288
    transformer_layers: int = 3
    transformer_heads: int = 8
    transformer_ff: int = 2048
    max_positions: int = 2048
    # path models
    context_size: int = 384       # code2vec transformed-context width
    path_lstm_layers: int = 2     # code2seq path encoder depth
    # graph model
    ggnn_steps: int = 4
    # statement-tree model
    astnn_hidden: int = 100

    def __post_init__(self) -> None:
        if isinstance(self.model_kind, str):
            self.model_kind = ModelKind(self.model_kind)
        if self.d <= 0:
            raise ValueError("embedding dimension must be positive")
        for role, size in self.vocab_sizes.items():
            if size <= 0:
                raise ValueError(f"vocab size for {role!r} must be positive")


@dataclass
class ProgramEmbedding:
    vector: list[float]
    model_kind: ModelKind
    source_id: str
    used_fallback: bool = False


@dataclass
class AttrUnit:
    """One attributable input row: its surface token and the Ast nodes it
    stands for (empty for plain-text tokens)."""

    token: str
    node_ids: list[int] = field(default_factory=list)
    position: int = 0


@dataclass
class EmbeddedView:
    """Differentiable input-embedding tensors plus the structure needed to
    re-run the encoder on them."""

    tensors: dict[str, torch.Tensor]
    units: dict[str, list[AttrUnit]]
    aux: dict


class ProgramEncoder(nn.Module):
    """Base for the eight program encoders.

    Subclasses implement embed() (view -> EmbeddedView) and
    encode_embedded() (EmbeddedView -> length-d vector), so attribution can
    interpolate the input embeddings while reusing the exact forward pass.
    """

    kind: ModelKind
    view_kind: str

    def __init__(self, config: EncoderConfig, vocabs: dict | None = None) -> None:
        super().__init__()
        if config.model_kind != self.kind:
            raise ValueError(
                f"config is for {config.model_kind}, encoder is {self.kind}")
        self.config = config
        self.d = config.d
        self.vocabs = vocabs or {}
        # learned stand-in for inputs that yield no content (e.g. a program
        # with zero path contexts)
        self.empty_program = nn.Parameter(torch.zeros(config.d))

    # --- subclass API ----------------------------------------------------
    def embed(self, view) -> EmbeddedView:
        raise NotImplementedError

    def encode_embedded(self, ev: EmbeddedView) -> torch.Tensor:
        raise NotImplementedError

    def is_empty_view(self, view) -> bool:
        return False

    # --- shared API --------------------------------------------------------
    def vocab(self, role: str):
        try:
            return self.vocabs[role]
        except KeyError:
            raise ValueError(
                f"{self.kind.value} encoder has no {role!r} vocabulary; "
                "construct it with build_encoder(config, vocabs)") from None

    def encode(self, view) -> torch.Tensor:
        self.check_view(view)
        if self.is_empty_view(view):
            return self.empty_program
        return self.encode_embedded(self.embed(view))

    def encode_batch(self, views: list) -> torch.Tensor:
        """Stack per-program encodings; token models override with padded
        batching. Must match single-program encoding to 1e-5."""
        return torch.stack([self.encode(v) for v in views])

    def check_view(self, view) -> None:
        expected = VIEW_TYPES[self.view_kind]
        if not isinstance(view, expected):
            raise ValueError(
                f"{self.kind.value} encoder expects a {self.view_kind} view, "
                f"got {type(view).__name__}")

    def embed_program(self, view, source_id: str) -> ProgramEmbedding:
        fallback = self.is_empty_view(view)
        with torch.no_grad():
            vec = self.encode(view)
        return ProgramEmbedding(vector=[float(x) for x in vec],
                                model_kind=self.kind, source_id=source_id,
                                used_fallback=fallback)


VIEW_TYPES: dict[str, tuple] = {
    "token_seq": (TokenSeq,),
    "ast": (Ast,),
    "leaf_seq": (LeafSeq,),
    "path_contexts": (PathContextSet,),
    "program_graph": (ProgramGraph,),
    "statement_trees": (StatementTreeSeq,),
}


def content_row(type_label: str, token: str | None, embedding: nn.Embedding,
                vocab) -> torch.Tensor:
    """Node content vector: type-label embedding for internal nodes, mean of
    camel-subtoken embeddings for leaves (keeps identifier coverage under
    the shared subtoken vocabulary)."""
    from ..lexing import tokenize_camel

    if token is None:
        return embedding(torch.tensor(vocab.index(type_label)))
    subs = tokenize_camel(token) or [token]
    ids = torch.tensor([vocab.index(s) for s in subs])
    return embedding(ids).mean(dim=0)


def content_rows(items, embedding: nn.Embedding, vocab) -> torch.Tensor:
    """items: iterable of objects with .type_label and .token."""
    return torch.stack([
        content_row(n.type_label, n.token, embedding, vocab) for n in items
    ])


def content_units(items) -> list[AttrUnit]:
    return [
        AttrUnit(token=n.token if n.token is not None else n.type_label,
                 node_ids=[n.id], position=i)
        for i, n in enumerate(items)
    ]
