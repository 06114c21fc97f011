from __future__ import annotations

import json

import pytest

from hax.errors import ProtocolError
from hax.session.protocol import (
    CLIENT_KINDS,
    SERVER_STREAM_KINDS,
    encode_line,
    parse_client_message,
    stream_message,
    tool_call_message,
    verb_message,
)


def test_encode_line_is_compact_sorted_and_newline_terminated():
    line = encode_line({"z": 1, "a": {"b": [1, 2]}})
    assert line == b'{"a":{"b":[1,2]},"z":1}\n'


def test_encoded_lines_never_embed_newlines():
    line = encode_line({"text": "one\ntwo"})
    assert line.count(b"\n") == 1 and line.endswith(b"\n")
    assert json.loads(line)["text"] == "one\ntwo"


def test_stream_message_wraps_the_body():
    msg = stream_message("mode_changed", "ses-1", 7, {"mode": "execution"})
    assert msg == {"kind": "mode_changed", "session_id": "ses-1", "seq": 7, "mode": "execution"}


def test_stream_message_rejects_non_stream_kinds():
    with pytest.raises(ValueError):
        stream_message("ack", "ses-1", 1, {})


def test_the_two_kind_sets_do_not_overlap():
    assert not SERVER_STREAM_KINDS & CLIENT_KINDS
    assert "state_snapshot" in SERVER_STREAM_KINDS
    assert CLIENT_KINDS == {"subscribe", "human_verb", "tool_call"}


def test_empty_body_parses_as_subscribe():
    assert parse_client_message(b"") == {"kind": "subscribe"}
    assert parse_client_message("   \n") == {"kind": "subscribe"}


def test_subscribe_envelope_round_trips():
    assert parse_client_message(b'{"kind": "subscribe"}') == {"kind": "subscribe"}


def test_parse_rejects_bad_utf8():
    with pytest.raises(ProtocolError, match="UTF-8"):
        parse_client_message(b"\xff\xfe")


def test_parse_rejects_malformed_json():
    with pytest.raises(ProtocolError, match="malformed JSON"):
        parse_client_message(b"{oops")


def test_parse_rejects_non_objects():
    with pytest.raises(ProtocolError, match="JSON object"):
        parse_client_message(b"[1, 2]")


def test_parse_rejects_unknown_kinds():
    with pytest.raises(ProtocolError, match="unknown message kind 'nonsense'"):
        parse_client_message(b'{"kind": "nonsense"}')


@pytest.mark.parametrize("kind,body_key", [("human_verb", "verb"), ("tool_call", "payload")])
def test_directed_messages_need_session_and_body(kind, body_key):
    with pytest.raises(ProtocolError, match="session_id"):
        parse_client_message(json.dumps({"kind": kind, body_key: {}}))
    with pytest.raises(ProtocolError, match=body_key):
        parse_client_message(json.dumps({"kind": kind, "session_id": "ses-1"}))
    with pytest.raises(ProtocolError, match=body_key):
        parse_client_message(json.dumps({"kind": kind, "session_id": "ses-1", body_key: "str"}))


def test_verb_message_round_trips_through_the_parser():
    msg = verb_message("ses-9", {"kind": "undo"})
    assert parse_client_message(encode_line(msg)) == msg


def test_tool_call_message_round_trips_through_the_parser():
    msg = tool_call_message("ses-9", {"component_id": "plan-preview", "values": {}})
    assert parse_client_message(encode_line(msg)) == msg
