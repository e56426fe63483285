"""Statement-subtree sequence encoder: recursive subtree encoding,
bidirectional GRU over the statement sequence, max-pool readout."""

from __future__ import annotations

import torch
import torch.nn as nn

from ..features import StatementTreeSeq
from .base import (EmbeddedView, EncoderConfig, ModelKind, ProgramEncoder,
                   content_rows, content_units)


class AstnnEncoder(ProgramEncoder):
    kind = ModelKind.ASTNN
    view_kind = "statement_trees"

    def __init__(self, config: EncoderConfig, vocabs=None) -> None:
        super().__init__(config, vocabs)
        d, hidden = config.d, config.astnn_hidden
        self.embedding = nn.Embedding(config.vocab_sizes["token"], d)
        self.combine = nn.Linear(d, d)
        self.gru = nn.GRU(d, hidden, batch_first=True, bidirectional=True)
        self.project = nn.Linear(2 * hidden, d)

    def embed(self, view: StatementTreeSeq) -> EmbeddedView:
        vocab = self.vocab("token")
        tensors, units, fragments = [], [], []
        offset = 0
        for tree in view.subtrees:
            nodes = tree.ast.nodes
            tensors.append(content_rows(nodes, self.embedding, vocab))
            for i, unit in enumerate(content_units(nodes)):
                unit.node_ids = [tree.source_ids[i]]
                unit.position = offset + i
                units.append(unit)
            fragments.append({
                "offset": offset,
                "children": [list(n.children) for n in nodes],
                "root": tree.ast.root,
            })
            offset += len(nodes)
        return EmbeddedView(
            tensors={"nodes": torch.cat(tensors)},
            units={"nodes": units},
            aux={"fragments": fragments},
        )

    def _encode_fragment(self, x: torch.Tensor, frag: dict) -> torch.Tensor:
        """Bottom-up recursive encoding, then element-wise max over the
        fragment's node states."""
        off = frag["offset"]
        children = frag["children"]
        combined = self.combine(x[off:off + len(children)])
        states: list[torch.Tensor | None] = [None] * len(children)
        order: list[int] = []
        stack = [(frag["root"], False)]
        while stack:
            nid, expanded = stack.pop()
            if expanded:
                order.append(nid)
                continue
            stack.append((nid, True))
            stack.extend((c, False) for c in children[nid])
        for nid in order:
            total = combined[nid]
            for c in children[nid]:
                total = total + states[c]
            states[nid] = torch.tanh(total)
        return torch.stack([s for s in states]).max(dim=0).values

    def encode_embedded(self, ev: EmbeddedView) -> torch.Tensor:
        x = ev.tensors["nodes"]
        statement_vectors = torch.stack([
            self._encode_fragment(x, frag) for frag in ev.aux["fragments"]
        ])
        outputs, _ = self.gru(statement_vectors.unsqueeze(0))
        return self.project(outputs[0].max(dim=0).values)
