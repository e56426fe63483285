"""Path-context encoders.

Both aggregate transformed leaf-to-leaf path contexts with attention. The
coarse variant embeds each whole path as one symbol and each leaf as one
token; the fine variant embeds path nodes individually through an LSTM and
leaf subtokens as sums.
"""

from __future__ import annotations

import torch
import torch.nn as nn

from ..features import PathContextSet
from ..lexing import tokenize_camel
from .base import AttrUnit, EmbeddedView, EncoderConfig, ModelKind, ProgramEncoder

PATH_JOIN = "|"


def path_symbol(labels: list[str]) -> str:
    """The whole-path vocabulary key (internal nodes are inseparable)."""
    return PATH_JOIN.join(labels)


class Code2vecEncoder(ProgramEncoder):
    kind = ModelKind.CODE2VEC
    view_kind = "path_contexts"

    def __init__(self, config: EncoderConfig, vocabs=None) -> None:
        super().__init__(config, vocabs)
        d, c = config.d, config.context_size
        self.leaf_embedding = nn.Embedding(config.vocab_sizes["leaf"], d)
        self.path_embedding = nn.Embedding(config.vocab_sizes["path"], d)
        self.fc = nn.Linear(3 * d, c, bias=False)
        self.attention = nn.Parameter(torch.randn(c) * 0.05)
        self.project = nn.Linear(c, d)

    def is_empty_view(self, view: PathContextSet) -> bool:
        return not view.contexts

    def embed(self, view: PathContextSet) -> EmbeddedView:
        leaf_vocab = self.vocab("leaf")
        path_vocab = self.vocab("path")
        left = torch.tensor([leaf_vocab.index(c.left_token)
                             for c in view.contexts], dtype=torch.long)
        right = torch.tensor([leaf_vocab.index(c.right_token)
                              for c in view.contexts], dtype=torch.long)
        paths = torch.tensor([path_vocab.index(path_symbol(c.path_labels))
                              for c in view.contexts], dtype=torch.long)
        units = {
            "left": [AttrUnit(c.left_token, [c.left_node], i)
                     for i, c in enumerate(view.contexts)],
            "path": [AttrUnit(path_symbol(c.path_labels), list(c.path_nodes), i)
                     for i, c in enumerate(view.contexts)],
            "right": [AttrUnit(c.right_token, [c.right_node], i)
                      for i, c in enumerate(view.contexts)],
        }
        return EmbeddedView(
            tensors={"left": self.leaf_embedding(left),
                     "path": self.path_embedding(paths),
                     "right": self.leaf_embedding(right)},
            units=units,
            aux={},
        )

    def encode_embedded(self, ev: EmbeddedView) -> torch.Tensor:
        ctx = torch.cat([ev.tensors["left"], ev.tensors["path"],
                         ev.tensors["right"]], dim=1)
        transformed = torch.tanh(self.fc(ctx))
        weights = torch.softmax(transformed @ self.attention, dim=0)
        return self.project(weights @ transformed)


class Code2seqEncoder(ProgramEncoder):
    kind = ModelKind.CODE2SEQ
    view_kind = "path_contexts"

    def __init__(self, config: EncoderConfig, vocabs=None) -> None:
        super().__init__(config, vocabs)
        d = config.d
        self.subtoken_embedding = nn.Embedding(config.vocab_sizes["token"], d)
        self.node_embedding = nn.Embedding(config.vocab_sizes["node_type"], d)
        self.path_lstm = nn.LSTM(d, d, num_layers=config.path_lstm_layers,
                                 bidirectional=True, batch_first=True)
        self.fc = nn.Linear(4 * d, d, bias=False)
        self.attention = nn.Parameter(torch.randn(d) * 0.05)

    def is_empty_view(self, view: PathContextSet) -> bool:
        return not view.contexts

    def _side(self, tokens_nodes):
        """Flat subtoken ids + segment ids + units for one leaf side."""
        vocab = self.vocab("token")
        flat_ids, seg, units = [], [], []
        for ctx_i, (token, node) in enumerate(tokens_nodes):
            subs = tokenize_camel(token) or [token]
            for s in subs:
                flat_ids.append(vocab.index(s))
                seg.append(ctx_i)
                units.append(AttrUnit(s, [node], len(units)))
        return (torch.tensor(flat_ids, dtype=torch.long),
                torch.tensor(seg, dtype=torch.long), units)

    def embed(self, view: PathContextSet) -> EmbeddedView:
        node_vocab = self.vocab("node_type")
        left_ids, left_seg, left_units = self._side(
            [(c.left_token, c.left_node) for c in view.contexts])
        right_ids, right_seg, right_units = self._side(
            [(c.right_token, c.right_node) for c in view.contexts])
        flat_path_ids, path_units, lengths = [], [], []
        for c in view.contexts:
            lengths.append(len(c.path_labels))
            for label, node in zip(c.path_labels, c.path_nodes):
                flat_path_ids.append(node_vocab.index(label))
                path_units.append(AttrUnit(label, [node], len(path_units)))
        return EmbeddedView(
            tensors={
                "left": self.subtoken_embedding(left_ids),
                "path": self.node_embedding(
                    torch.tensor(flat_path_ids, dtype=torch.long)),
                "right": self.subtoken_embedding(right_ids),
            },
            units={"left": left_units, "path": path_units,
                   "right": right_units},
            aux={
                "left_seg": left_seg,
                "right_seg": right_seg,
                "path_lengths": lengths,
                "n_contexts": len(view.contexts),
            },
        )

    def encode_embedded(self, ev: EmbeddedView) -> torch.Tensor:
        n = ev.aux["n_contexts"]
        d = self.d
        dtype = ev.tensors["left"].dtype

        def segment_sum(values: torch.Tensor, seg: torch.Tensor) -> torch.Tensor:
            return torch.zeros(n, d, dtype=dtype).index_add(0, seg, values)

        left = segment_sum(ev.tensors["left"], ev.aux["left_seg"])
        right = segment_sum(ev.tensors["right"], ev.aux["right_seg"])

        lengths = ev.aux["path_lengths"]
        seqs = list(torch.split(ev.tensors["path"], lengths))
        padded = nn.utils.rnn.pad_sequence(seqs, batch_first=True)
        packed = nn.utils.rnn.pack_padded_sequence(
            padded, torch.tensor(lengths), batch_first=True,
            enforce_sorted=False)
        _, (h_n, _) = self.path_lstm(packed)
        # final layer, both directions
        path_enc = torch.cat([h_n[-2], h_n[-1]], dim=1)

        ctx = torch.cat([left, path_enc, right], dim=1)
        transformed = torch.tanh(self.fc(ctx))
        weights = torch.softmax(transformed @ self.attention, dim=0)
        return weights @ transformed
