"""Bottom-up tree encoders: tree convolution and the greedy recursive
autoencoder."""

from __future__ import annotations

import logging

import torch
import torch.nn as nn

from ..astcore import Ast
from ..features import LeafSeq
from .base import (AttrUnit, EmbeddedView, EncoderConfig, ModelKind,
                   ProgramEncoder, content_rows, content_units)

logger = logging.getLogger(__name__)


class TbcnnEncoder(ProgramEncoder):
    """Tree-based convolution with positional left/right kernels and dynamic
    max pooling; leaf nodes participate (they are not dropped)."""

    kind = ModelKind.TBCNN
    view_kind = "ast"

    def __init__(self, config: EncoderConfig, vocabs=None) -> None:
        super().__init__(config, vocabs)
        d = config.d
        self.embedding = nn.Embedding(config.vocab_sizes["token"], d)
        # node init: own embedding linearly combined with children aggregate
        self.combine_self = nn.Linear(d, d)
        self.combine_kids = nn.Linear(d, d, bias=False)
        # depth-2 convolution window
        self.conv_top = nn.Linear(d, d)
        self.conv_left = nn.Linear(d, d, bias=False)
        self.conv_right = nn.Linear(d, d, bias=False)
        self.out = nn.Linear(d, d)

    def embed(self, view: Ast) -> EmbeddedView:
        src, dst, eta_l, eta_r = [], [], [], []
        for node in view.nodes:
            n = len(node.children)
            for i, c in enumerate(node.children):
                src.append(c)
                dst.append(node.id)
                r = 0.5 if n == 1 else i / (n - 1)
                eta_r.append(r)
                eta_l.append(1.0 - r)
        return EmbeddedView(
            tensors={"nodes": content_rows(
                view.nodes, self.embedding, self.vocab("token"))},
            units={"nodes": content_units(view.nodes)},
            aux={
                "src": torch.tensor(src, dtype=torch.long),
                "dst": torch.tensor(dst, dtype=torch.long),
                "eta_l": torch.tensor(eta_l),
                "eta_r": torch.tensor(eta_r),
                "n_nodes": len(view.nodes),
            },
        )

    def encode_embedded(self, ev: EmbeddedView) -> torch.Tensor:
        x = ev.tensors["nodes"]
        n = ev.aux["n_nodes"]
        src, dst = ev.aux["src"], ev.aux["dst"]
        dtype = x.dtype

        def scatter(values: torch.Tensor) -> torch.Tensor:
            return torch.zeros(n, x.shape[1], dtype=dtype).index_add(0, dst, values)

        if len(src):
            counts = torch.zeros(n, dtype=dtype).index_add(
                0, dst, torch.ones(len(dst), dtype=dtype))
            kid_mean = scatter(x[src]) / counts.clamp(min=1).unsqueeze(1)
        else:
            kid_mean = torch.zeros_like(x)
        h = torch.tanh(self.combine_self(x) + self.combine_kids(kid_mean))

        conv = self.conv_top(h)
        if len(src):
            eta_l = ev.aux["eta_l"].to(dtype).unsqueeze(1)
            eta_r = ev.aux["eta_r"].to(dtype).unsqueeze(1)
            conv = conv + scatter(eta_l * self.conv_left(h[src])
                                  + eta_r * self.conv_right(h[src]))
        y = torch.tanh(conv)
        return torch.tanh(self.out(y.max(dim=0).values))


class AutoencodeEncoder(ProgramEncoder):
    """Recursive autoencoder over the leaf sequence, greedy variant: the
    adjacent pair with the smallest reconstruction loss merges first, until
    one vector remains.

    The leaf embedding table is pretrained (see pretrain_autoencode) and not
    a trainable parameter of the model; the encoder/decoder matrices are.
    """

    kind = ModelKind.AUTOENCODE
    view_kind = "leaf_seq"

    def __init__(self, config: EncoderConfig, vocabs=None) -> None:
        super().__init__(config, vocabs)
        d = config.d
        self.embedding = nn.Embedding(config.vocab_sizes["token"], d)
        self.embedding.weight.requires_grad_(False)
        self.encode_pair = nn.Linear(2 * d, d)
        self.decode_pair = nn.Linear(d, 2 * d)

    def is_empty_view(self, view: LeafSeq) -> bool:
        return len(view.ids) == 0

    def embed(self, view: LeafSeq) -> EmbeddedView:
        ids = torch.tensor(view.ids, dtype=torch.long)
        units = [
            AttrUnit(token=t, node_ids=[nid] if view.node_ids else [], position=i)
            for i, (t, nid) in enumerate(
                zip(view.tokens,
                    view.node_ids or [0] * len(view.tokens)))
        ]
        return EmbeddedView(
            tensors={"leaves": self.embedding(ids)},
            units={"leaves": units},
            aux={},
        )

    def encode_embedded(self, ev: EmbeddedView) -> torch.Tensor:
        root, _ = self.greedy_reduce(ev.tensors["leaves"])
        return root

    def greedy_reduce(self, leaves: torch.Tensor):
        """Merge until one vector remains; returns (root, total weighted
        reconstruction loss). Ties in the merge choice go to the leftmost
        pair."""
        items = list(leaves)
        counts = [1.0] * len(items)
        total = leaves.new_zeros(())
        while len(items) > 1:
            stacked = torch.stack(items)
            pairs = torch.cat([stacked[:-1], stacked[1:]], dim=1)
            encoded = torch.tanh(self.encode_pair(pairs))
            recon = self.decode_pair(encoded)
            w = torch.tensor(counts, dtype=leaves.dtype)
            w_left = (w[:-1] / (w[:-1] + w[1:])).unsqueeze(1)
            w_right = 1.0 - w_left
            err = (recon - pairs).pow(2)
            d = leaves.shape[1]
            losses = (w_left * err[:, :d] + w_right * err[:, d:]).sum(dim=1)
            best = int(torch.argmin(losses.detach()))
            total = total + losses[best]
            items[best:best + 2] = [encoded[best]]
            counts[best:best + 2] = [counts[best] + counts[best + 1]]
        return items[0], total

    def reconstruction_loss(self, view: LeafSeq) -> torch.Tensor:
        if len(view.ids) < 2:
            return torch.zeros((), dtype=self.encode_pair.weight.dtype)
        _, loss = self.greedy_reduce(self.embed(view).tensors["leaves"])
        return loss


def pretrain_autoencode(leaf_seqs: list[LeafSeq], encoder: AutoencodeEncoder,
                        epochs: int = 10, lr: float = 1e-3,
                        train_embeddings: bool = True,
                        log_every: int = 0) -> list[float]:
    """Minimize total greedy reconstruction loss; returns per-epoch means.

    The embedding table is updated during pretraining (its analogue is the
    word-vector pretraining of the original method) and re-frozen after, so
    the downstream trainable parameters stay the two coder matrices.
    """
    if not leaf_seqs:
        raise ValueError("pretrain_autoencode: empty corpus")
    usable = [s for s in leaf_seqs if len(s.ids) >= 2]
    if not usable:
        raise ValueError("pretrain_autoencode: no sequence has >= 2 leaves")
    if train_embeddings:
        encoder.embedding.weight.requires_grad_(True)
    params = [p for p in encoder.parameters() if p.requires_grad]
    opt = torch.optim.Adam(params, lr=lr)
    history: list[float] = []
    try:
        for epoch in range(epochs):
            epoch_loss = 0.0
            for seq in usable:
                opt.zero_grad()
                loss = encoder.reconstruction_loss(seq)
                if not torch.isfinite(loss):
                    raise RuntimeError(
                        f"pretrain_autoencode: non-finite loss at epoch "
                        f"{epoch} (last good epoch mean: "
                        f"{history[-1] if history else 'none'})")
                loss.backward()
                opt.step()
                epoch_loss += float(loss)
            history.append(epoch_loss / len(usable))
            if log_every and (epoch + 1) % log_every == 0:
                logger.info("autoencode pretrain epoch %d: %.6f",
                            epoch + 1, history[-1])
    finally:
        encoder.embedding.weight.requires_grad_(False)
    return history
