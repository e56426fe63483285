"""Gated graph message passing over AST-plus-semantic-edge program graphs."""

from __future__ import annotations

import torch
import torch.nn as nn

from ..features import EdgeType, ProgramGraph
from .base import (EmbeddedView, EncoderConfig, ModelKind, ProgramEncoder,
                   content_rows, content_units)


class GgnnEncoder(ProgramEncoder):
    """Per-edge-type linear messages, GRU state updates, and a gated global
    attention readout over the final node states."""

    kind = ModelKind.GGNN
    view_kind = "program_graph"

    def __init__(self, config: EncoderConfig, vocabs=None) -> None:
        super().__init__(config, vocabs)
        d = config.d
        self.embedding = nn.Embedding(config.vocab_sizes["token"], d)
        self.edge_fc = nn.ModuleDict({
            e.value: nn.Linear(d, d) for e in EdgeType
        })
        self.update = nn.GRUCell(d, d)
        self.gate = nn.Linear(d, 1)
        self.transform = nn.Linear(d, d)
        self.steps = config.ggnn_steps

    def embed(self, view: ProgramGraph) -> EmbeddedView:
        edges: dict[str, tuple[torch.Tensor, torch.Tensor]] = {}
        for kind in EdgeType:
            pairs = view.edges_of(kind)
            if pairs:
                src, dst = zip(*pairs)
                edges[kind.value] = (torch.tensor(src, dtype=torch.long),
                                     torch.tensor(dst, dtype=torch.long))
        return EmbeddedView(
            tensors={"nodes": content_rows(
                view.nodes, self.embedding, self.vocab("token"))},
            units={"nodes": content_units(view.nodes)},
            aux={"edges": edges, "n_nodes": len(view.nodes)},
        )

    def encode_embedded(self, ev: EmbeddedView) -> torch.Tensor:
        h = ev.tensors["nodes"]
        n = ev.aux["n_nodes"]
        for _ in range(self.steps):
            message = torch.zeros_like(h)
            for kind, (src, dst) in ev.aux["edges"].items():
                message = message.index_add(0, dst, self.edge_fc[kind](h[src]))
            h = self.update(message, h)
        weights = torch.softmax(self.gate(h).squeeze(1), dim=0)
        return weights @ self.transform(h)
