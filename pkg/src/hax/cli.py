"""The ``hax`` command-line interface.

Exit codes: 0 success, 1 user error (bad arguments, unknown names,
invalid content, locally modified files), 2 environment error (missing
files, unreadable IO, unreachable network, occupied ports). Every
command takes ``--format structured`` for machine-readable JSON on
stdout; diagnostics and warnings go to stderr. Honours NO_COLOR.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any

from .errors import (
    AlreadyInitializedError,
    ComponentNotFoundError,
    FetchError,
    HaxError,
    InstructionError,
    IntegrityError,
    LocallyModifiedError,
    ManifestError,
    NotInitializedError,
    ProtocolError,
    RegistryError,
    ScenarioError,
    SchemaError,
    ScopeError,
    TraceError,
    VerbError,
)
from .guardrails.trace import parse_jsonl, verify_jsonl
from .registry.models import RepositoryConfig
from .registry.project import init_project, install, load_project, save_project
from .registry.resolver import resolve
from .schemas import ComponentKind, ToolCallPayload, enforce_clarity, parse_schema, validate_payload
from .session.scenarios import build_session, bundled_scenarios, load_scenario, run_scenario
from .session.server import create_server

EXIT_OK = 0
EXIT_USER = 1
EXIT_ENV = 2


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


_USER_ERRORS = (
    UsageError,
    SchemaError,
    InstructionError,
    TraceError,
    ScenarioError,
    ScopeError,
    VerbError,
    ProtocolError,
    ComponentNotFoundError,
    LocallyModifiedError,
    AlreadyInitializedError,
    NotInitializedError,
)
_ENV_ERRORS = (FetchError, IntegrityError, ManifestError, RegistryError, OSError)


def _color_enabled() -> bool:
    return sys.stdout.isatty() and "NO_COLOR" not in os.environ


def _style(text: str, code: str) -> str:
    return f"\x1b[{code}m{text}\x1b[0m" if _color_enabled() else text


def _good(text: str) -> str:
    return _style(text, "32")


def _bad(text: str) -> str:
    return _style(text, "31")


def _emit(args: argparse.Namespace, human: list[str], structured: dict[str, Any]) -> None:
    if args.format == "structured":
        print(json.dumps(structured, indent=2, sort_keys=True))
    else:
        for line in human:
            print(line)


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


# -- commands -----------------------------------------------------------------


def cmd_init(args: argparse.Namespace) -> int:
    root = Path(args.path)
    if not root.is_dir():
        raise UsageError(f"{root} is not an existing directory")
    project, created = init_project(root)
    rels = [str(p.relative_to(root)) for p in created]
    _emit(
        args,
        [f"initialized hax project at {root.resolve()}"] + [f"  {r}" for r in rels],
        {"status": "ok", "root": str(root.resolve()), "created": rels},
    )
    return EXIT_OK


def cmd_add(args: argparse.Namespace) -> int:
    project = load_project(Path(args.root))
    kind = ComponentKind(args.kind)
    resolution = resolve(args.name, kind, project.repositories)
    for warning in resolution.warnings:
        _warn(warning)
    written = install(resolution.package, project, resolution.repository, force=args.force)
    rels = sorted(str(p.relative_to(project.root)) for p in written)
    manifest = resolution.package.manifest
    _emit(
        args,
        [
            f"installed {manifest.component_id} {manifest.version} "
            f"({manifest.kind.value}) from '{resolution.repository}'"
        ]
        + [f"  {r}" for r in rels],
        {
            "status": "ok",
            "component_id": manifest.component_id,
            "version": manifest.version,
            "kind": manifest.kind.value,
            "repository": resolution.repository,
            "files": rels,
            "warnings": list(resolution.warnings),
        },
    )
    return EXIT_OK


def cmd_repo_list(args: argparse.Namespace) -> int:
    project = load_project(Path(args.root))
    repos = sorted(project.repositories, key=lambda r: (r.priority, r.name))
    width = max((len(r.name) for r in repos), default=4)
    lines = ["PRIORITY  " + "NAME".ljust(width) + "  LOCATION"]
    lines += [f"{r.priority:>8}  {r.name.ljust(width)}  {r.location}" for r in repos]
    _emit(args, lines, {"repositories": [r.to_dict() for r in repos]})
    return EXIT_OK


def cmd_repo_add(args: argparse.Namespace) -> int:
    project = load_project(Path(args.root))
    if any(r.name == args.name for r in project.repositories):
        raise UsageError(f"repository '{args.name}' already exists")
    try:
        config = RepositoryConfig(
            name=args.name,
            location=args.location,
            priority=args.priority,
            auth_env=args.auth_env,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    project.repositories.append(config)
    save_project(project)
    _emit(
        args,
        [f"added repository '{config.name}' (priority {config.priority})"],
        {"status": "ok", "repository": config.to_dict()},
    )
    return EXIT_OK


def cmd_repo_remove(args: argparse.Namespace) -> int:
    project = load_project(Path(args.root))
    if not any(r.name == args.name for r in project.repositories):
        raise UsageError(f"no repository '{args.name}'")
    if len(project.repositories) == 1:
        raise UsageError("at least one repository must remain")
    project.repositories = [r for r in project.repositories if r.name != args.name]
    save_project(project)
    _emit(
        args,
        [f"removed repository '{args.name}'"],
        {"status": "ok", "removed": args.name},
    )
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    schema = parse_schema(_read_text(args.schema_file))
    try:
        payload_data = json.loads(_read_text(args.payload_file))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"payload file: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    payload = ToolCallPayload.from_dict(payload_data)
    try:
        report = validate_payload(schema, payload)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if report.valid:
        report = report.merged(enforce_clarity(schema, payload))
    if report.valid:
        _emit(args, [_good("valid")], report.to_dict())
        return EXIT_OK
    count = len(report.violations)
    lines = [_bad(f"invalid: {count} violation{'s' if count != 1 else ''}")]
    lines += [f"  {v.path}: {v.kind.value}: {v.message}" for v in report.violations]
    _emit(args, lines, report.to_dict())
    return EXIT_USER


def cmd_trace_verify(args: argparse.Namespace) -> int:
    broken, count = verify_jsonl(_read_text(args.trace_file))
    if broken is None:
        _emit(
            args,
            [_good(f"trace intact: {count} entries")],
            {"intact": True, "entries": count, "broken_at": None},
        )
        return EXIT_OK
    _emit(
        args,
        [_bad(f"trace broken at entry {broken}")],
        {"intact": False, "entries": count, "broken_at": broken},
    )
    return EXIT_USER


def _entry_lines(entries: list) -> list[str]:
    lines = []
    for e in entries:
        suffix = f" (caused_by {e.caused_by})" if e.caused_by is not None else ""
        lines.append(f"[{e.seq_no:04d}] {e.actor}: {e.summary}{suffix}")
    return lines


def cmd_trace_show(args: argparse.Namespace) -> int:
    entries = list(parse_jsonl(_read_text(args.trace_file)))
    _emit(args, _entry_lines(entries), {"entries": [e.to_dict() for e in entries]})
    return EXIT_OK


def cmd_trace_diff(args: argparse.Namespace) -> int:
    entries = list(parse_jsonl(_read_text(args.trace_file)))
    lo, hi = args.from_seq, args.to_seq
    if not 0 <= lo <= hi < len(entries):
        raise UsageError(f"diff range ({lo}, {hi}] is outside 0..{len(entries) - 1}")
    window = entries[lo + 1 : hi + 1]
    _emit(args, _entry_lines(window), {"entries": [e.to_dict() for e in window]})
    return EXIT_OK


def cmd_scenario_list(args: argparse.Namespace) -> int:
    names = bundled_scenarios()
    _emit(args, names, {"scenarios": names})
    return EXIT_OK


def cmd_scenario_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.name)
    session = build_session(scenario)
    run_scenario(session, scenario, args.verbs or ())
    state_lines = [f"  {k} = {v}" for k, v in sorted(session.domain_state.items())]
    human = [
        f"scenario '{scenario.name}' complete: {len(scenario.script)} steps, "
        f"{len(session.trace)} trace entries, mode {session.mode.value}",
        "final state:",
        *state_lines,
    ]
    structured: dict[str, Any] = {
        "scenario": scenario.name,
        "steps": len(scenario.script),
        "trace_entries": len(session.trace),
        "mode": session.mode.value,
        "final_state": dict(sorted(session.domain_state.items())),
    }
    if args.export:
        Path(args.export).write_text(session.trace.to_jsonl(), encoding="utf-8")
        human.append(f"trace exported to {args.export}")
        structured["export"] = args.export
    _emit(args, human, structured)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.name)
    server = create_server(scenario, host=args.host, port=args.port, fixed_clock=args.fixed_clock)
    print(f"serving scenario '{scenario.name}' on {server.url}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
        server.server_close()
    return EXIT_OK


# -- wiring ------------------------------------------------------------------


def build_parser() -> Parser:
    common = Parser(add_help=False)
    common.add_argument(
        "--format",
        choices=["human", "structured"],
        default="human",
        help="output format (default: human)",
    )
    parser = Parser(prog="hax", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=Parser)

    p = sub.add_parser("init", parents=[common], help="create a hax project here")
    p.add_argument("path", nargs="?", default=".", help="project root (default: .)")
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("add", parents=[common], help="install a component into the project")
    p.add_argument("kind", choices=["artifact", "composer"])
    p.add_argument("name", help="component id to install")
    p.add_argument("--root", default=".", help="project root (default: .)")
    p.add_argument("--force", action="store_true", help="overwrite locally modified files")
    p.set_defaults(func=cmd_add)

    repo = sub.add_parser("repo", help="manage configured repositories")
    repo_sub = repo.add_subparsers(dest="repo_command", parser_class=Parser)
    p = repo_sub.add_parser("list", parents=[common], help="list repositories by priority")
    p.add_argument("--root", default=".")
    p.set_defaults(func=cmd_repo_list)
    p = repo_sub.add_parser("add", parents=[common], help="add a repository")
    p.add_argument("name")
    p.add_argument("location", help="directory, http(s) URL, or builtin:official")
    p.add_argument("--priority", type=int, required=True, help="lower number wins")
    p.add_argument("--auth-env", default=None, help="env var holding a bearer token")
    p.add_argument("--root", default=".")
    p.set_defaults(func=cmd_repo_add)
    p = repo_sub.add_parser("remove", parents=[common], help="remove a repository")
    p.add_argument("name")
    p.add_argument("--root", default=".")
    p.set_defaults(func=cmd_repo_remove)

    p = sub.add_parser("validate", parents=[common], help="validate a payload against a schema")
    p.add_argument("schema_file")
    p.add_argument("payload_file")
    p.set_defaults(func=cmd_validate)

    trace = sub.add_parser("trace", help="inspect exported traces")
    trace_sub = trace.add_subparsers(dest="trace_command", parser_class=Parser)
    p = trace_sub.add_parser("verify", parents=[common], help="check a trace's hash chain")
    p.add_argument("trace_file")
    p.set_defaults(func=cmd_trace_verify)
    p = trace_sub.add_parser("show", parents=[common], help="print a trace")
    p.add_argument("trace_file")
    p.set_defaults(func=cmd_trace_show)
    p = trace_sub.add_parser("diff", parents=[common], help="entries in (from, to]")
    p.add_argument("trace_file")
    p.add_argument("from_seq", type=int)
    p.add_argument("to_seq", type=int)
    p.set_defaults(func=cmd_trace_diff)

    scenario = sub.add_parser("scenario", help="run bundled scenarios")
    scenario_sub = scenario.add_subparsers(dest="scenario_command", parser_class=Parser)
    p = scenario_sub.add_parser("list", parents=[common], help="list bundled scenarios")
    p.set_defaults(func=cmd_scenario_list)
    p = scenario_sub.add_parser("run", parents=[common], help="replay a scenario deterministically")
    p.add_argument("name", help="bundled scenario name or scenario file path")
    p.add_argument("--verbs", default=None, help="named verb script to inject")
    p.add_argument("--export", default=None, help="write the trace to this file")
    p.set_defaults(func=cmd_scenario_run)

    p = sub.add_parser("serve", parents=[common], help="serve a scenario session over HTTP")
    p.add_argument("name", help="bundled scenario name or scenario file path")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument(
        "--fixed-clock",
        action="store_true",
        help="deterministic timestamps and session ids (for demos and tests)",
    )
    p.set_defaults(func=cmd_serve)

    return parser


def _report_error(args: argparse.Namespace | None, detail: str, code: int) -> int:
    print(f"error: {detail}", file=sys.stderr)
    if args is not None and getattr(args, "format", "human") == "structured":
        print(json.dumps({"status": "error", "error": detail, "exit_code": code}, sort_keys=True))
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args: argparse.Namespace | None = None
    try:
        args = parser.parse_args(argv)
        if not hasattr(args, "func"):
            parser.print_help(sys.stderr)
            return EXIT_USER
        return args.func(args)
    except _USER_ERRORS as exc:
        if isinstance(exc, ComponentNotFoundError):
            for warning in exc.warnings:
                _warn(warning)
        return _report_error(args, str(exc), EXIT_USER)
    except _ENV_ERRORS as exc:
        if isinstance(exc, OSError) and not isinstance(exc, RegistryError):
            detail = f"{exc.strerror or exc}: {exc.filename}" if getattr(exc, "filename", None) else str(exc)
        else:
            detail = str(exc)
        return _report_error(args, detail, EXIT_ENV)
    except HaxError as exc:
        return _report_error(args, str(exc), EXIT_USER)


if __name__ == "__main__":
    sys.exit(main())
