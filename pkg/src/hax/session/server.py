"""Local HTTP server that mediates scenario sessions over the wire protocol.

Each ``POST /stream`` subscription gets its own fresh session running
the configured scenario. The scenario driver advances the script until
a block is waiting on a human decision, then pauses; verbs posted to
``POST /message`` (addressed by session_id) resolve the block and the
driver advances again. Every mutation is followed by a state_snapshot
broadcast, so clients can always rebuild from the latest snapshot.
"""

from __future__ import annotations

import json
import queue
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any

from ..clocks import SequentialIds, SystemClock, TickClock
from ..errors import HaxError, ProtocolError
from ..guardrails.permissions import Verdict
from ..schemas import SchemaError, ToolCallPayload
from .blocks import BlockStatus, HumanVerb
from .protocol import encode_line, parse_client_message
from .scenarios import Scenario, build_session, run_scenario
from .service import Session


class ScenarioDriver:
    """Steps a session through a scenario script, pausing for approvals."""

    def __init__(self, session: Session, scenario: Scenario) -> None:
        self.session = session
        self.scenario = scenario
        self.step_blocks: dict[int, str] = {}
        self._next = 0
        self.started = False

    @property
    def finished(self) -> bool:
        return self._next >= len(self.scenario.script)

    def awaiting_approval(self) -> list[str]:
        return [
            b.block_id
            for b in self.session.blocks
            if b.status is BlockStatus.PROPOSED and b.decision.verdict is Verdict.REQUIRE_APPROVAL
        ]

    def start(self) -> None:
        if self.started:
            return
        self.started = True
        self.session.note("system", f"scenario '{self.scenario.name}' started")
        self.advance()

    def advance(self) -> int:
        """Run script steps until a block needs a human or the script ends."""
        ran = 0
        while not self.finished and not self.awaiting_approval():
            step = self.scenario.script[self._next]
            self._next += 1
            block = self.session.submit_tool_call(step.payload)
            self.step_blocks[self._next] = block.block_id
            if step.event is not None:
                self.session.fire_event(step.event, caused_by=self.session.last_root_seq)
            ran += 1
        return ran


class SessionHost:
    """One live session plus its driver, subscriber queues, and lock."""

    def __init__(self, session_id: str, scenario: Scenario, fixed_clock: bool) -> None:
        clock = TickClock() if fixed_clock else SystemClock()
        self.session = build_session(
            scenario, session_id=session_id, clock=clock, ids=SequentialIds()
        )
        self.driver = ScenarioDriver(self.session, scenario)
        self.lock = threading.RLock()
        self._seq = 0
        self._queues: list[queue.Queue] = []
        self.session.observers.append(self._broadcast)

    def _broadcast(self, kind: str, body: dict[str, Any]) -> None:
        # Called with self.lock held: every session mutation happens under it.
        self._seq += 1
        line = encode_line(
            {"kind": kind, "session_id": self.session.session_id, "seq": self._seq, **body}
        )
        for q in self._queues:
            q.put(line)

    def _broadcast_snapshot(self) -> None:
        self._broadcast("state_snapshot", {"snapshot": self.session.snapshot()})

    def subscribe(self) -> queue.Queue:
        with self.lock:
            q: queue.Queue = queue.Queue()
            self._queues.append(q)
            self.driver.start()
            self._broadcast_snapshot()
            return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self.lock:
            if q in self._queues:
                self._queues.remove(q)

    def handle_client_message(self, message: dict[str, Any]) -> dict[str, Any]:
        """Apply one verb or tool call; returns the ack body."""
        with self.lock:
            error: str | None = None
            if message["kind"] == "human_verb":
                verb = HumanVerb.from_dict(message["verb"])
                try:
                    self.session.handle_verb(verb)
                except HaxError as exc:
                    error = str(exc)  # rejected verb; session state is unharmed
            else:
                try:
                    payload = ToolCallPayload.from_dict(message["payload"])
                except SchemaError as exc:
                    raise ProtocolError(str(exc)) from None
                self.session.submit_tool_call(payload)
            self.driver.advance()
            self._broadcast_snapshot()
            ack: dict[str, Any] = {
                "kind": "ack",
                "session_id": self.session.session_id,
                "seq": self._seq,
            }
            if error is not None:
                ack["error"] = error
            return ack


class HaxServer(ThreadingHTTPServer):
    daemon_threads = True
    block_on_close = False

    def __init__(self, address: tuple[str, int], scenario: Scenario, fixed_clock: bool):
        self.scenario = scenario
        self.fixed_clock = fixed_clock
        self.hosts: dict[str, SessionHost] = {}
        self.hosts_lock = threading.Lock()
        self.stopping = threading.Event()
        self._session_counter = 0
        super().__init__(address, _Handler)

    def new_host(self) -> SessionHost:
        with self.hosts_lock:
            if self.fixed_clock:
                self._session_counter += 1
                session_id = f"ses-{self._session_counter:04d}"
            else:
                session_id = f"ses-{uuid.uuid4().hex[:12]}"
            host = SessionHost(session_id, self.scenario, self.fixed_clock)
            self.hosts[session_id] = host
            return host

    def find_host(self, session_id: str) -> SessionHost | None:
        with self.hosts_lock:
            return self.hosts.get(session_id)

    def shutdown(self) -> None:
        self.stopping.set()
        super().shutdown()

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server: HaxServer

    def log_message(self, format: str, *args: Any) -> None:
        pass  # keep stdout/stderr clean; the trace is the record

    def _read_body(self) -> bytes:
        length = int(self.headers.get("Content-Length") or 0)
        return self.rfile.read(length) if length else b""

    def _send_json(self, status: int, body: dict[str, Any]) -> None:
        data = encode_line(body)
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def do_OPTIONS(self) -> None:
        # Browser preflight; the UI may be served from a different origin.
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self) -> None:
        if self.path == "/healthz":
            self._send_json(200, {"status": "ok", "scenario": self.server.scenario.name})
        else:
            self._send_json(404, {"kind": "protocol_error", "error": f"no route {self.path}"})

    def do_POST(self) -> None:
        if self.path == "/stream":
            self._handle_stream()
        elif self.path == "/message":
            self._handle_message()
        else:
            self._send_json(404, {"kind": "protocol_error", "error": f"no route {self.path}"})

    def _handle_message(self) -> None:
        try:
            message = parse_client_message(self._read_body())
            if message["kind"] == "subscribe":
                raise ProtocolError("subscribe must be posted to /stream")
            host = self.server.find_host(message["session_id"])
            if host is None:
                raise ProtocolError(f"no session '{message['session_id']}'")
            ack = host.handle_client_message(message)
        except ProtocolError as exc:
            self._send_json(400, {"kind": "protocol_error", "error": str(exc)})
            return
        self._send_json(200, ack)

    def _handle_stream(self) -> None:
        try:
            message = parse_client_message(self._read_body())
            if message["kind"] != "subscribe":
                raise ProtocolError("only subscribe messages open a stream")
        except ProtocolError as exc:
            self._send_json(400, {"kind": "protocol_error", "error": str(exc)})
            return
        host = self.server.new_host()
        q = host.subscribe()
        self.send_response(200)
        self.send_header("Content-Type", "application/x-ndjson")
        self.send_header("Cache-Control", "no-store")
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Connection", "close")
        self.end_headers()
        try:
            while not self.server.stopping.is_set():
                try:
                    line = q.get(timeout=0.5)
                except queue.Empty:
                    continue
                self.wfile.write(line)
                self.wfile.flush()
        except (BrokenPipeError, ConnectionResetError):
            pass
        finally:
            host.unsubscribe(q)


def create_server(scenario: Scenario, host: str = "127.0.0.1", port: int = 8765,
                  fixed_clock: bool = False) -> HaxServer:
    return HaxServer((host, port), scenario, fixed_clock)
