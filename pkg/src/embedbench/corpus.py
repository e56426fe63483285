"""Dataset ingestion, deterministic splits, clone-pair construction, stats."""

from __future__ import annotations

import gzip
import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import IngestionError
from .lexing import lex_code, tokenize_camel

logger = logging.getLogger(__name__)

DATASET_KINDS = ("poj104", "bigclonebench", "codesearchnet")


@dataclass
class SourceProgram:
    id: str
    lang: str  # "C" | "Java"
    text: str
    label: int | None = None
    doc: str | None = None

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError(f"program {self.id}: empty text")
        if self.lang not in ("C", "Java"):
            raise ValueError(f"program {self.id}: bad lang {self.lang!r}")


@dataclass(frozen=True)
class ClonePair:
    id_a: str
    id_b: str
    is_clone: bool

    def __post_init__(self) -> None:
        if self.id_a == self.id_b:
            raise ValueError(f"clone pair of {self.id_a} with itself")


@dataclass(frozen=True)
class QueryCodePair:
    query: str
    code_id: str

    def __post_init__(self) -> None:
        if not self.query:
            raise ValueError(f"empty query for {self.code_id}")


@dataclass
class DatasetSplit:
    train: list[str]
    valid: list[str]
    test: list[str]
    seed: int

    def all_ids(self) -> list[str]:
        return [*self.train, *self.valid, *self.test]


@dataclass
class CorpusStats:
    max_code_tokens: int
    avg_code_tokens: float
    max_doc_tokens: int
    avg_doc_tokens: float
    max_ast_depth: int
    avg_ast_depth: float
    max_ast_nodes: int
    avg_ast_nodes: float
    n_programs: int
    n_excluded: int  # programs without a parsed AST

    def as_dict(self) -> dict:
        return dict(self.__dict__)


# --- loading ----------------------------------------------------------------

def load_dataset(kind: str, root: str | Path):
    """Load a benchmark dataset from its published on-disk layout.

    Returns (programs, pairs) where pairs is None for poj104, ClonePair
    records for bigclonebench and QueryCodePair records for codesearchnet.
    Unparseable records are skipped with a logged warning and counted.
    """
    root = Path(root)
    if not root.exists():
        raise IngestionError(f"dataset root does not exist: {root}")
    if kind == "poj104":
        return _load_poj104(root), None
    if kind == "bigclonebench":
        return _load_bigclonebench(root)
    if kind == "codesearchnet":
        return _load_codesearchnet(root)
    raise ValueError(f"unknown dataset kind {kind!r}; expected one of {DATASET_KINDS}")


def _load_poj104(root: Path) -> list[SourceProgram]:
    class_dirs = sorted(
        (d for d in root.iterdir() if d.is_dir()),
        key=lambda d: (0, int(d.name)) if d.name.isdigit() else (1, d.name),
    )
    if not class_dirs:
        raise IngestionError(f"no class directories under {root}")
    programs: list[SourceProgram] = []
    skipped = 0
    for label, cdir in enumerate(class_dirs):
        for f in sorted(cdir.iterdir()):
            if not f.is_file():
                continue
            try:
                text = f.read_text(errors="replace")
                programs.append(SourceProgram(
                    id=f"{cdir.name}/{f.stem}", lang="C", text=text, label=label))
            except (OSError, ValueError) as exc:
                skipped += 1
                logger.warning("poj104: skipping %s: %s", f, exc)
    if not programs:
        raise IngestionError(f"no programs found under {root}")
    if skipped:
        logger.warning("poj104: skipped %d unreadable files", skipped)
    logger.info("poj104: %d programs, %d classes", len(programs), len(class_dirs))
    return programs


def _load_bigclonebench(root: Path):
    data_file = _first_existing(root, ["data.jsonl", "data.jsonl.gz"])
    if data_file is None:
        raise IngestionError(f"missing data.jsonl under {root}")
    programs: list[SourceProgram] = []
    skipped = 0
    for lineno, rec in _iter_jsonl(data_file):
        try:
            programs.append(SourceProgram(
                id=str(rec["idx"]), lang="Java", text=rec["func"]))
        except (KeyError, ValueError) as exc:
            skipped += 1
            logger.warning("bigclonebench: skipping %s:%d: %s",
                           data_file, lineno, exc)
    if not programs:
        raise IngestionError(f"no programs in {data_file}")
    known = {p.id for p in programs}
    pairs: list[ClonePair] = []
    for name in ("train.txt", "valid.txt", "test.txt"):
        pf = root / name
        if not pf.exists():
            continue
        for lineno, line in enumerate(pf.read_text().splitlines(), 1):
            parts = line.split()
            if len(parts) != 3 or parts[0] == parts[1]:
                skipped += 1
                logger.warning("bigclonebench: skipping %s:%d", pf, lineno)
                continue
            if parts[0] not in known or parts[1] not in known:
                skipped += 1
                continue
            pairs.append(ClonePair(parts[0], parts[1], parts[2] == "1"))
    if skipped:
        logger.warning("bigclonebench: skipped %d records", skipped)
    logger.info("bigclonebench: %d programs, %d pairs", len(programs), len(pairs))
    return programs, (pairs or None)


def _load_codesearchnet(root: Path):
    files = sorted(root.rglob("*.jsonl")) + sorted(root.rglob("*.jsonl.gz"))
    files = [f for f in files if f.name != "data.jsonl"]
    if not files:
        raise IngestionError(f"no JSONL files under {root}")
    programs: list[SourceProgram] = []
    pairs: list[QueryCodePair] = []
    skipped = 0
    for f in files:
        for lineno, rec in _iter_jsonl(f):
            code = rec.get("code") or rec.get("func_code_string")
            doc = rec.get("docstring") or rec.get("func_documentation_string")
            pid = str(rec.get("url") or rec.get("id") or f"{f.stem}:{lineno}")
            try:
                programs.append(SourceProgram(
                    id=pid, lang="Java", text=code or "", doc=doc))
                if doc:
                    pairs.append(QueryCodePair(query=doc, code_id=pid))
            except ValueError as exc:
                skipped += 1
                logger.warning("codesearchnet: skipping %s:%d: %s", f, lineno, exc)
    if not programs:
        raise IngestionError(f"no records in {root}")
    if skipped:
        logger.warning("codesearchnet: skipped %d records", skipped)
    logger.info("codesearchnet: %d programs, %d query-code pairs",
                len(programs), len(pairs))
    return programs, (pairs or None)


def _first_existing(root: Path, names: list[str]) -> Path | None:
    for name in names:
        if (root / name).exists():
            return root / name
    return None


def _iter_jsonl(path: Path):
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", errors="replace") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                logger.warning("skipping %s:%d: %s", path, lineno, exc)


# --- canonical serialization -------------------------------------------------

def save_programs_jsonl(programs: Sequence[SourceProgram], path: str | Path) -> None:
    with open(path, "w") as fh:
        for p in programs:
            rec = {"id": p.id, "lang": p.lang, "text": p.text}
            if p.label is not None:
                rec["label"] = p.label
            if p.doc is not None:
                rec["doc"] = p.doc
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def load_programs_jsonl(path: str | Path) -> list[SourceProgram]:
    path = Path(path)
    if not path.exists():
        raise IngestionError(f"missing canonical corpus file: {path}")
    return [
        SourceProgram(id=rec["id"], lang=rec["lang"], text=rec["text"],
                      label=rec.get("label"), doc=rec.get("doc"))
        for _, rec in _iter_jsonl(path)
    ]


def save_pairs_jsonl(pairs, path: str | Path) -> None:
    with open(path, "w") as fh:
        for pair in pairs:
            if isinstance(pair, ClonePair):
                rec = {"id_a": pair.id_a, "id_b": pair.id_b,
                       "is_clone": pair.is_clone}
            else:
                rec = {"query": pair.query, "code_id": pair.code_id}
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def load_pairs_jsonl(path: str | Path):
    out = []
    for _, rec in _iter_jsonl(Path(path)):
        if "is_clone" in rec:
            out.append(ClonePair(rec["id_a"], rec["id_b"], bool(rec["is_clone"])))
        else:
            out.append(QueryCodePair(rec["query"], rec["code_id"]))
    return out


# --- splits and pairs ---------------------------------------------------------

def split(items: Sequence[str], ratios: tuple[int, int, int] = (3, 1, 1),
          seed: int = 0) -> DatasetSplit:
    """Deterministic train/valid/test partition, sizes within +/-1 of exact."""
    if not items:
        raise ValueError("split: empty item list")
    if len(set(items)) != len(items):
        raise ValueError("split: duplicate ids")
    order = sorted(items)
    random.Random(seed).shuffle(order)
    total = sum(ratios)
    n = len(order)
    b1 = round(n * ratios[0] / total)
    b2 = round(n * (ratios[0] + ratios[1]) / total)
    return DatasetSplit(train=order[:b1], valid=order[b1:b2],
                        test=order[b2:], seed=seed)


def build_ojclone(programs: Sequence[SourceProgram], n_problems: int = 15,
                  n_pairs: int = 50_000, seed: int = 0) -> list[ClonePair]:
    """Sample clone pairs from the first n_problems classes of a labeled corpus.

    Pairs are drawn uniformly without replacement over unordered program
    pairs; same-label pairs are marked is_clone. Uniform sampling over the
    full class set reproduces the known ~6% positive rate.
    """
    labels = sorted({p.label for p in programs if p.label is not None})
    if len(labels) < n_problems:
        raise ValueError(
            f"build_ojclone: {n_problems} problems requested, "
            f"{len(labels)} available")
    keep = set(labels[:n_problems])
    pool = sorted((p for p in programs if p.label in keep), key=lambda p: p.id)
    if len(pool) < 2:
        raise ValueError("build_ojclone: fewer than two programs in range")
    rng = random.Random(seed)
    n = len(pool)
    possible = n * (n - 1) // 2
    chosen: list[tuple[int, int]]
    if n_pairs >= possible:
        chosen = [(i, j) for i in range(n) for j in range(i + 1, n)]
        rng.shuffle(chosen)
    else:
        seen: set[tuple[int, int]] = set()
        chosen = []
        while len(chosen) < n_pairs:
            i = rng.randrange(n)
            j = rng.randrange(n)
            if i == j:
                continue
            key = (i, j) if i < j else (j, i)
            if key in seen:
                continue
            seen.add(key)
            chosen.append(key)
    pairs = [
        ClonePair(pool[i].id, pool[j].id, pool[i].label == pool[j].label)
        for i, j in chosen
    ]
    positives = sum(p.is_clone for p in pairs)
    logger.info("ojclone: %d pairs, %.2f%% positive",
                len(pairs), 100.0 * positives / len(pairs))
    return pairs


# --- statistics ---------------------------------------------------------------

def corpus_stats(programs: Sequence[SourceProgram], asts: dict) -> CorpusStats:
    """Token/AST statistics over the programs that parsed.

    Code and doc sizes count camel subtokens of the lexed streams; programs
    missing from asts (parse failures) are excluded and counted.
    """
    if not programs:
        raise ValueError("corpus_stats: no programs")
    included = [p for p in programs if p.id in asts]
    if not included:
        raise ValueError("corpus_stats: no program has a parsed AST")
    code_counts = [
        sum(len(tokenize_camel(t)) for t in lex_code(p.text)) for p in included
    ]
    doc_counts = [
        sum(len(tokenize_camel(t)) for t in p.doc.split())
        for p in included if p.doc
    ]
    depths = [asts[p.id].depth() for p in included]
    sizes = [len(asts[p.id]) for p in included]

    def avg(xs):
        return sum(xs) / len(xs) if xs else 0.0

    return CorpusStats(
        max_code_tokens=max(code_counts),
        avg_code_tokens=avg(code_counts),
        max_doc_tokens=max(doc_counts, default=0),
        avg_doc_tokens=avg(doc_counts),
        max_ast_depth=max(depths),
        avg_ast_depth=avg(depths),
        max_ast_nodes=max(sizes),
        avg_ast_nodes=avg(sizes),
        n_programs=len(included),
        n_excluded=len(programs) - len(included),
    )
