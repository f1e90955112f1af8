"""Lexical retrieval over a codebase snapshot.

Files are indexed as overlapping line windows and scored against a
query with BM25 weighting (k1 = 1.2, b = 0.75) over lowercased
identifier tokens. Length normalization uses a fixed reference length
rather than the corpus average, so indexing additional unrelated files
rescales scores but never reorders existing matches.

The index persists as a single JSON file carrying a version tag, the
chunk array and the global document-frequency table.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "ChunkRecord",
    "Index",
    "ContextBundle",
    "index_codebase",
    "save_index",
    "load_index",
    "retrieve",
    "wrap_context",
    "tokenize",
    "CONTEXT_WRAPPER",
]

CONTEXT_WRAPPER = "Answer the user's questions based on the context below:"

WINDOW_LINES = 60
STRIDE_LINES = 40
BUDGET_CHARS = 12000
BM25_K1 = 1.2
BM25_B = 0.75
# Fixed reference length for the BM25 length normalization (in tokens).
REFERENCE_CHUNK_TOKENS = 256.0

_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def tokenize(text: str) -> Counter:
    """Lowercased identifier/word multiset of ``text``."""
    return Counter(match.group(0).lower() for match in _TOKEN_RE.finditer(text))


@dataclass(frozen=True)
class ChunkRecord:
    """One indexed line window of one file."""

    path: str
    start_line: int
    end_line: int
    text: str
    tokens: dict[str, int]


@dataclass
class Index:
    chunks: list[ChunkRecord] = field(default_factory=list)
    df: dict[str, int] = field(default_factory=dict)
    window: int = WINDOW_LINES
    stride: int = STRIDE_LINES
    warnings: list[str] = field(default_factory=list)
    version: int = 1


@dataclass
class ContextBundle:
    """Scored chunks in non-increasing score order, within a size budget."""

    chunks: list[tuple[ChunkRecord, float]] = field(default_factory=list)
    budget_chars: int = BUDGET_CHARS


def _chunk_file(rel_path: str, text: str, window: int, stride: int) -> list[ChunkRecord]:
    lines = text.splitlines()
    chunks = []
    for start in range(0, len(lines), stride):
        body = lines[start:start + window]
        if not body:
            break
        chunk_text = "\n".join(body)
        chunks.append(ChunkRecord(
            path=rel_path,
            start_line=start + 1,
            end_line=start + len(body),
            text=chunk_text,
            tokens=dict(sorted(tokenize(chunk_text).items())),
        ))
    return chunks


def index_codebase(root_dir: str | Path, *, window: int = WINDOW_LINES,
                   stride: int = STRIDE_LINES,
                   extensions: tuple[str, ...] = (".py",)) -> Index:
    """Index every matching file under ``root_dir``.

    Deterministic given identical file bytes and paths: files are walked
    in sorted relative-path order. Unreadable files are skipped and
    reported in the index warnings.
    """
    root = Path(root_dir)
    index = Index(window=window, stride=stride)
    if not root.is_dir():
        raise FileNotFoundError(f"not a directory: {root}")
    files = sorted(
        (p for p in root.rglob("*") if p.is_file() and p.suffix in extensions),
        key=lambda p: p.relative_to(root).as_posix(),
    )
    for path in files:
        rel = path.relative_to(root).as_posix()
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            index.warnings.append(f"skipped {rel}: {exc}")
            continue
        index.chunks.extend(_chunk_file(rel, text, window, stride))
    df: Counter = Counter()
    for chunk in index.chunks:
        df.update(chunk.tokens.keys())
    index.df = dict(sorted(df.items()))
    return index


def save_index(index: Index, path: str | Path) -> None:
    payload = {
        "version": index.version,
        "window": index.window,
        "stride": index.stride,
        "warnings": index.warnings,
        "chunks": [
            {
                "path": c.path,
                "start_line": c.start_line,
                "end_line": c.end_line,
                "text": c.text,
                "tokens": c.tokens,
            }
            for c in index.chunks
        ],
        "df": index.df,
    }
    Path(path).write_text(
        json.dumps(payload, indent=2, ensure_ascii=True, sort_keys=True) + "\n",
        encoding="utf-8")


def load_index(path: str | Path) -> Index:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    chunks = [
        ChunkRecord(
            path=c["path"],
            start_line=c["start_line"],
            end_line=c["end_line"],
            text=c["text"],
            tokens=dict(c["tokens"]),
        )
        for c in data["chunks"]
    ]
    return Index(chunks=chunks, df=dict(data["df"]), window=data["window"],
                 stride=data["stride"], warnings=list(data.get("warnings", [])),
                 version=data.get("version", 1))


def _score(chunk: ChunkRecord, terms: list[str], df: dict[str, int], n_chunks: int) -> float:
    length = sum(chunk.tokens.values())
    norm = BM25_K1 * (1.0 - BM25_B + BM25_B * length / REFERENCE_CHUNK_TOKENS)
    score = 0.0
    for term in terms:
        tf = chunk.tokens.get(term, 0)
        if tf == 0:
            continue
        idf = math.log(1.0 + (n_chunks - df.get(term, 0) + 0.5) / (df.get(term, 0) + 0.5))
        score += idf * tf * (BM25_K1 + 1.0) / (tf + norm)
    return score


def retrieve(index: Index, query: str, k: int,
             budget_chars: int = BUDGET_CHARS) -> ContextBundle:
    """Top-``k`` chunks for ``query``, ties broken by path and start line.

    Zero-scoring chunks are dropped, so an empty query or an empty index
    yields an empty bundle. The bundle is then trimmed from the tail
    until its rendered size fits the character budget.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    terms = sorted(set(tokenize(query).keys()))
    if not terms or not index.chunks:
        return ContextBundle(chunks=[], budget_chars=budget_chars)
    scored = []
    for chunk in index.chunks:
        score = _score(chunk, terms, index.df, len(index.chunks))
        if score > 0.0:
            scored.append((chunk, score))
    scored.sort(key=lambda item: (-item[1], item[0].path, item[0].start_line))
    bundle = ContextBundle(chunks=scored[:k], budget_chars=budget_chars)
    while bundle.chunks and len(wrap_context(bundle)) > budget_chars:
        bundle.chunks.pop()
    return bundle


def wrap_context(bundle: ContextBundle) -> str:
    """The context block handed to the modification agent."""
    parts = [CONTEXT_WRAPPER]
    for chunk, _ in bundle.chunks:
        parts.append(f"--- {chunk.path}:{chunk.start_line}-{chunk.end_line}\n{chunk.text}")
    return "\n\n".join(parts)
