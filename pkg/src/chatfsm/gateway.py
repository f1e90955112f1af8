"""Provider-agnostic chat-completion access with record/replay cassettes.

The wire format is the mainstream chat-completion shape: a list of
system/user/assistant messages goes in, assistant text comes out.
Credentials are read from a named environment variable, never from
configuration files.

A cassette maps a stable digest of (model id, rendered messages) to the
recorded response text. In replay mode a missing digest is an error and
no network operation ever happens, which makes every agent pipeline
deterministic and offline-testable.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
import enum
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    AuthenticationError,
    CassetteMissError,
    GatewayError,
    GatewayTimeoutError,
    MalformedResponseError,
    TransportError,
)

__all__ = [
    "LlmProviderConfig",
    "ChatMessage",
    "CassetteMode",
    "Cassette",
    "ChatResult",
    "ChatGateway",
    "request_digest",
    "http_transport",
]


@dataclass(frozen=True)
class LlmProviderConfig:
    """Connection settings for one chat-completion provider."""

    base_url: str = "https://api.openai.com/v1"
    model_id: str = "gpt-4o-2024-05-13"
    credential_env_var: str = "CHATFSM_API_KEY"
    request_timeout: float = 60.0
    max_retries: int = 2
    temperature: float = 0.0

    def __post_init__(self):
        if self.request_timeout <= 0:
            raise ValueError("request_timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must not be negative")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be within [0, 2]")


_ROLES = ("system", "user", "assistant")


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in _ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if self.role in ("system", "user") and not self.content:
            raise ValueError(f"{self.role} message must not be empty")


class CassetteMode(enum.Enum):
    RECORD = "record"
    REPLAY = "replay"
    PASSTHROUGH = "passthrough"


def request_digest(model_id: str, messages: list[ChatMessage]) -> str:
    """Stable hash of the rendered messages and the model id."""
    payload = {
        "model": model_id,
        "messages": [{"role": m.role, "content": m.content} for m in messages],
    }
    data = json.dumps(payload, sort_keys=True, ensure_ascii=True, separators=(",", ":"))
    return hashlib.sha256(data.encode("utf-8")).hexdigest()


class Cassette:
    """A digest-to-response store backed by one JSON file.

    Writes are serialized through a lock and land atomically; replay
    reads touch only the in-memory map. One file can serve several
    models because the digest covers the model id.
    """

    def __init__(self, path: str | Path, mode: CassetteMode = CassetteMode.REPLAY):
        self.path = Path(path)
        self.mode = mode
        self._lock = threading.Lock()
        self.entries: dict[str, str] = {}
        if self.path.exists():
            data = json.loads(self.path.read_text(encoding="utf-8"))
            self.entries = dict(data.get("entries", {}))

    def lookup(self, digest: str) -> str | None:
        return self.entries.get(digest)

    def store(self, digest: str, response: str) -> None:
        with self._lock:
            self.entries[digest] = response
            self._save()

    def _save(self) -> None:
        payload = {"version": 1, "entries": dict(sorted(self.entries.items()))}
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        tmp.parent.mkdir(parents=True, exist_ok=True)
        tmp.write_text(json.dumps(payload, indent=2, ensure_ascii=True) + "\n",
                       encoding="utf-8")
        tmp.replace(self.path)


@dataclass(frozen=True)
class ChatResult:
    text: str
    elapsed: float
    digest: str


def http_transport(config: LlmProviderConfig, messages: list[ChatMessage]) -> str:
    """POST one chat-completion request and return the assistant text."""
    import httpx

    key = os.environ.get(config.credential_env_var)
    if not key:
        raise AuthenticationError(
            f"environment variable {config.credential_env_var} is not set")
    url = config.base_url.rstrip("/") + "/chat/completions"
    body = {
        "model": config.model_id,
        "messages": [{"role": m.role, "content": m.content} for m in messages],
        "temperature": config.temperature,
    }
    try:
        response = httpx.post(
            url, json=body, timeout=config.request_timeout,
            headers={"Authorization": f"Bearer {key}"},
        )
    except httpx.TimeoutException as exc:
        raise GatewayTimeoutError(str(exc)) from exc
    except httpx.TransportError as exc:
        raise TransportError(str(exc)) from exc
    if response.status_code in (401, 403):
        raise AuthenticationError(f"provider rejected credentials: {response.text}")
    if response.status_code == 429 or response.status_code >= 500:
        raise TransportError(f"provider returned {response.status_code}")
    if response.status_code != 200:
        raise GatewayError(f"provider returned {response.status_code}: {response.text}")
    try:
        data = response.json()
        content = data["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise MalformedResponseError(f"cannot read assistant text: {exc}") from exc
    if not isinstance(content, str):
        raise MalformedResponseError("assistant content is not text")
    return content


class ChatGateway:
    """Chat access shared by all agents.

    Safe to share across threads: every call is independent, cassette
    writes are serialized, replay reads are lock-free.
    """

    def __init__(self, config: LlmProviderConfig, cassette: Cassette | None = None,
                 transport=None, backoff_base: float = 0.5):
        self.config = config
        self.cassette = cassette
        self.transport = transport or http_transport
        self.backoff_base = backoff_base

    def chat(self, messages: list[ChatMessage]) -> ChatResult:
        """Send one exchange and return the assistant text plus latency.

        Record mode reuses an existing entry, otherwise performs the live
        call and stores the reply. Replay mode never performs a live call.
        """
        started = time.perf_counter()
        digest = request_digest(self.config.model_id, messages)
        mode = self.cassette.mode if self.cassette else CassetteMode.PASSTHROUGH

        if mode in (CassetteMode.REPLAY, CassetteMode.RECORD):
            recorded = self.cassette.lookup(digest)
            if recorded is not None:
                return ChatResult(recorded, time.perf_counter() - started, digest)
            if mode is CassetteMode.REPLAY:
                raise CassetteMissError(digest)

        text = self._call_with_retry(messages)
        if mode is CassetteMode.RECORD:
            self.cassette.store(digest, text)
        return ChatResult(text, time.perf_counter() - started, digest)

    def _call_with_retry(self, messages: list[ChatMessage]) -> str:
        attempts = self.config.max_retries + 1
        for attempt in range(attempts):
            try:
                return self.transport(self.config, messages)
            except TransportError:
                if attempt == attempts - 1:
                    raise
                time.sleep(self.backoff_base * (2 ** attempt))
        raise AssertionError("unreachable")
