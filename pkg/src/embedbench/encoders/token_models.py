"""Plain-text encoders: recurrent and self-attention sequence models."""

from __future__ import annotations

import math

import torch
import torch.nn as nn

from ..features import TokenSeq
from .base import AttrUnit, EmbeddedView, EncoderConfig, ModelKind, ProgramEncoder


def _token_units(seq: TokenSeq) -> list[AttrUnit]:
    return [AttrUnit(token=t, position=i) for i, t in enumerate(seq.tokens)]


class LstmEncoder(ProgramEncoder):
    """Unidirectional LSTM; the last hidden state is the program vector."""

    kind = ModelKind.LSTM
    view_kind = "token_seq"

    def __init__(self, config: EncoderConfig, vocabs=None) -> None:
        super().__init__(config, vocabs)
        hidden = config.lstm_hidden
        self.embedding = nn.Embedding(config.vocab_sizes["token"], config.d)
        self.lstm = nn.LSTM(config.d, hidden, batch_first=True)
        self.project = (nn.Linear(hidden, config.d)
                        if hidden != config.d else nn.Identity())

    def is_empty_view(self, view: TokenSeq) -> bool:
        return view.length == 0

    def embed(self, view: TokenSeq) -> EmbeddedView:
        ids = torch.tensor(view.ids, dtype=torch.long)
        return EmbeddedView(
            tensors={"tokens": self.embedding(ids)},
            units={"tokens": _token_units(view)},
            aux={},
        )

    def encode_embedded(self, ev: EmbeddedView) -> torch.Tensor:
        x = ev.tensors["tokens"].unsqueeze(0)
        _, (h_n, _) = self.lstm(x)
        return self.project(h_n[-1, 0])

    def encode_batch(self, views: list[TokenSeq]) -> torch.Tensor:
        rows: list = [self.empty_program] * len(views)
        nonempty = [(i, v) for i, v in enumerate(views) if v.length > 0]
        if nonempty:
            lengths = torch.tensor([v.length for _, v in nonempty])
            padded = nn.utils.rnn.pad_sequence(
                [torch.tensor(v.ids, dtype=torch.long) for _, v in nonempty],
                batch_first=True)
            packed = nn.utils.rnn.pack_padded_sequence(
                self.embedding(padded), lengths, batch_first=True,
                enforce_sorted=False)
            _, (h_n, _) = self.lstm(packed)
            proj = self.project(h_n[-1])
            for row, (i, _) in enumerate(nonempty):
                rows[i] = proj[row]
        return torch.stack(rows)


class SinusoidalPositions(nn.Module):
    def __init__(self, d: int, max_positions: int) -> None:
        super().__init__()
        position = torch.arange(max_positions).unsqueeze(1)
        div = torch.exp(torch.arange(0, d, 2) * (-math.log(10000.0) / d))
        table = torch.zeros(max_positions, d)
        table[:, 0::2] = torch.sin(position * div)
        table[:, 1::2] = torch.cos(position * div)
        self.register_buffer("table", table)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x + self.table[: x.shape[-2]].to(x.dtype)


class TransformerEncoder(ProgramEncoder):
    """Self-attention encoder; the first-position encoding of the last layer
    (a prepended learned sentinel) is the program vector."""

    kind = ModelKind.TRANSFORMER
    view_kind = "token_seq"

    def __init__(self, config: EncoderConfig, vocabs=None) -> None:
        super().__init__(config, vocabs)
        self.embedding = nn.Embedding(config.vocab_sizes["token"], config.d)
        self.sentinel = nn.Parameter(torch.randn(config.d) * 0.02)
        self.positions = SinusoidalPositions(config.d, config.max_positions)
        layer = nn.TransformerEncoderLayer(
            d_model=config.d, nhead=config.transformer_heads,
            dim_feedforward=config.transformer_ff, dropout=config.dropout,
            batch_first=True)
        self.layers = nn.TransformerEncoder(layer, config.transformer_layers)

    def is_empty_view(self, view: TokenSeq) -> bool:
        return view.length == 0

    def embed(self, view: TokenSeq) -> EmbeddedView:
        ids = torch.tensor(view.ids, dtype=torch.long)
        return EmbeddedView(
            tensors={"tokens": self.embedding(ids)},
            units={"tokens": _token_units(view)},
            aux={},
        )

    def encode_embedded(self, ev: EmbeddedView) -> torch.Tensor:
        x = ev.tensors["tokens"]
        seq = torch.cat([self.sentinel.unsqueeze(0), x], dim=0)
        seq = self.positions(seq).unsqueeze(0)
        return self.layers(seq)[0, 0]

    def encode_batch(self, views: list[TokenSeq]) -> torch.Tensor:
        rows: list = [self.empty_program] * len(views)
        nonempty = [(i, v) for i, v in enumerate(views) if v.length > 0]
        if nonempty:
            maxlen = max(v.length for _, v in nonempty) + 1
            padded = [
                torch.cat([
                    self.sentinel.unsqueeze(0),
                    self.embedding(torch.tensor(v.ids, dtype=torch.long)),
                    torch.zeros(maxlen - v.length - 1, self.d),
                ])
                for _, v in nonempty
            ]
            batch = torch.stack(padded)
            mask = torch.ones(len(nonempty), maxlen, dtype=torch.bool)
            for row, (_, v) in enumerate(nonempty):
                mask[row, : v.length + 1] = False
            encoded = self.layers(self.positions(batch),
                                  src_key_padding_mask=mask)
            for row, (i, _) in enumerate(nonempty):
                rows[i] = encoded[row, 0]
        return torch.stack(rows)
