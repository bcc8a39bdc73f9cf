"""Embedding providers and the averaged-cosine sentence similarity metric.

The sentence-embedding model is externalized behind :class:`EmbeddingProvider`
so deployments can plug a precomputed-vector file or an embedding service;
the deterministic :class:`HashedStemEmbedder` keeps the repository testable
without any model runtime.
"""

from __future__ import annotations

import hashlib
import json
from abc import ABC, abstractmethod

import numpy as np
import requests

from .ngram_metrics import MetricScore
from .textproc import stem, tokenize


class EmbeddingError(Exception):
    """Base class for provider failures."""


class MissingEmbeddingError(EmbeddingError):
    """A file-backed provider was asked for a text it does not hold."""


class ProviderError(EmbeddingError):
    """Transport or protocol failure while fetching embeddings."""


def cosine(u, v) -> float:
    """Cosine similarity of two vectors, clamped to [-1, 1].

    Raises ValueError on dimension mismatch or an all-zero vector.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine undefined for zero vectors")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


class EmbeddingProvider(ABC):
    """Maps texts to fixed-dimension vectors; same text, same vector."""

    dim: int

    @abstractmethod
    def embed_batch(self, texts: list[str]) -> np.ndarray:
        """Return an array of shape (len(texts), dim), rows in input order."""

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]


def sbert_score(candidate: str, references: list[str], provider: EmbeddingProvider) -> MetricScore:
    """Mean cosine similarity between the candidate and each reference embedding."""
    if not references:
        raise ValueError("sbert_score needs at least one reference")
    vectors = provider.embed_batch([candidate] + list(references))
    cand = vectors[0]
    sims = [cosine(cand, vectors[i + 1]) for i in range(len(references))]
    return MetricScore("sbert", sum(sims) / len(sims))


class HashedStemEmbedder(EmbeddingProvider):
    """Deterministic test embedder: L2-normalized bag of hashed Porter stems.

    Texts with identical stem multisets embed identically; texts with
    disjoint stems and no hash collisions are orthogonal. Empty texts map to
    a dedicated sentinel bucket so every embedding is nonzero.
    """

    def __init__(self, dim: int = 256, seed: int = 0):
        if dim < 8:
            raise ValueError(f"dim must be >= 8, got {dim}")
        self.dim = dim
        self._key = f"hashed-stem-{seed}".encode()

    def _bucket(self, token: str) -> int:
        digest = hashlib.blake2b(token.encode(), digest_size=8, key=self._key).digest()
        return int.from_bytes(digest, "big") % self.dim

    def embed_batch(self, texts: list[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dim), dtype=np.float64)
        for row, text in enumerate(texts):
            stems = [stem(t) for t in tokenize(text)] or ["<empty>"]
            for s in stems:
                out[row, self._bucket(s)] += 1.0
            out[row] /= np.linalg.norm(out[row])
        return out


class FileEmbeddingProvider(EmbeddingProvider):
    """Read-only provider backed by newline-delimited {"text", "vec"} records."""

    def __init__(self, path):
        self._vectors: dict[str, np.ndarray] = {}
        dim = None
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    text, vec = record["text"], record["vec"]
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise ValueError(f"{path}:{line_no}: bad embedding record: {exc}") from exc
                if text in self._vectors:
                    raise ValueError(f"{path}:{line_no}: duplicate text {text!r}")
                arr = np.asarray(vec, dtype=np.float64)
                if dim is None:
                    dim = arr.shape[0]
                elif arr.shape[0] != dim:
                    raise ValueError(
                        f"{path}:{line_no}: vector length {arr.shape[0]} != {dim}"
                    )
                self._vectors[text] = arr
        if dim is None:
            raise ValueError(f"{path}: no embedding records")
        self.dim = dim

    def embed_batch(self, texts: list[str]) -> np.ndarray:
        rows = []
        for text in texts:
            if text not in self._vectors:
                raise MissingEmbeddingError(f"no stored embedding for {text!r}")
            rows.append(self._vectors[text])
        return np.stack(rows) if rows else np.zeros((0, self.dim))


class HttpEmbeddingProvider(EmbeddingProvider):
    """Provider speaking the embedding wire contract.

    POST {endpoint}/embed with {"texts": [...]} must return
    {"dim": D, "vectors": [[...], ...]} with rows in input order; an empty
    text list is allowed and serves as the startup probe for ``dim``.
    """

    def __init__(self, endpoint: str, timeout: float = 30.0):
        self._url = endpoint.rstrip("/") + "/embed"
        self._timeout = timeout
        self.dim = int(self._post([])["dim"])

    def _post(self, texts: list[str]) -> dict:
        try:
            resp = requests.post(self._url, json={"texts": texts}, timeout=self._timeout)
            resp.raise_for_status()
            payload = resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise ProviderError(f"embedding request to {self._url} failed: {exc}") from exc
        if "dim" not in payload or "vectors" not in payload:
            raise ProviderError(f"malformed embedding response from {self._url}")
        return payload

    def embed_batch(self, texts: list[str]) -> np.ndarray:
        payload = self._post(list(texts))
        vectors = np.asarray(payload["vectors"], dtype=np.float64)
        if vectors.shape != (len(texts), self.dim):
            raise ProviderError(
                f"expected {(len(texts), self.dim)} vectors, got {vectors.shape}"
            )
        return vectors


def parse_provider(spec: str, test_dim: int = 256) -> EmbeddingProvider:
    """Build a provider from a ``file:PATH``, ``http:URL``, or ``test:SEED`` spec."""
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise ValueError(f"provider spec {spec!r} must look like kind:argument")
    if kind == "file":
        return FileEmbeddingProvider(arg)
    if kind in ("http", "https"):
        # the whole argument is the endpoint URL, e.g. http://localhost:8900
        return HttpEmbeddingProvider(spec)
    if kind == "test":
        return HashedStemEmbedder(dim=test_dim, seed=int(arg))
    raise ValueError(f"unknown provider kind {kind!r} (expected file, http, or test)")
