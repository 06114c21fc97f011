"""Wire protocol: newline-delimited JSON over two HTTP endpoints.

Server → client messages stream on ``POST /stream`` (one JSON object
per line); client → server messages post to ``POST /message``. Every
server message carries the session_id and a per-session seq that is
strictly increasing, so clients can order and de-duplicate.

Server kinds: state_snapshot, block_proposed, block_updated,
trace_appended, mode_changed, compliance_warning (streamed), plus ack /
protocol_error as direct responses. Client kinds: subscribe, human_verb,
tool_call.
"""

from __future__ import annotations

import json
from typing import Any

from ..errors import ProtocolError

SERVER_STREAM_KINDS = frozenset(
    {
        "state_snapshot",
        "block_proposed",
        "block_updated",
        "trace_appended",
        "mode_changed",
        "compliance_warning",
    }
)
CLIENT_KINDS = frozenset({"subscribe", "human_verb", "tool_call"})


def encode_line(message: dict[str, Any]) -> bytes:
    return (json.dumps(message, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


def stream_message(kind: str, session_id: str, seq: int, body: dict[str, Any]) -> dict[str, Any]:
    if kind not in SERVER_STREAM_KINDS:
        raise ValueError(f"not a stream message kind: {kind}")
    return {"kind": kind, "session_id": session_id, "seq": seq, **body}


def parse_client_message(raw: bytes | str) -> dict[str, Any]:
    """Validate the envelope of an inbound message; bodies are checked later."""
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise ProtocolError("message is not valid UTF-8") from None
    if not raw.strip():
        return {"kind": "subscribe"}  # an empty subscribe body is fine
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"malformed JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ProtocolError("message must be a JSON object")
    kind = data.get("kind")
    if kind not in CLIENT_KINDS:
        raise ProtocolError(f"unknown message kind {kind!r}")
    if kind in ("human_verb", "tool_call"):
        if not isinstance(data.get("session_id"), str) or not data["session_id"]:
            raise ProtocolError(f"{kind} messages need a session_id")
        body_key = "verb" if kind == "human_verb" else "payload"
        if not isinstance(data.get(body_key), dict):
            raise ProtocolError(f"{kind} messages need a {body_key} object")
    return data


def verb_message(session_id: str, verb_data: dict[str, Any]) -> dict[str, Any]:
    return {"kind": "human_verb", "session_id": session_id, "verb": verb_data}


def tool_call_message(session_id: str, payload_data: dict[str, Any]) -> dict[str, Any]:
    return {"kind": "tool_call", "session_id": session_id, "payload": payload_data}
