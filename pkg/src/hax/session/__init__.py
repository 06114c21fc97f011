"""Live session mediation: the pipeline, scenarios, wire protocol, server."""

from .blocks import BlockStatus, HumanVerb, SurfacedBlock, VerbKind
from .scenarios import (
    Scenario,
    ScenarioStep,
    ScheduledVerb,
    build_session,
    bundled_scenarios,
    load_scenario,
    run_scenario,
    scenario_from_dict,
)
from .server import HaxServer, ScenarioDriver, SessionHost, create_server
from .service import Session

__all__ = [
    "BlockStatus",
    "HaxServer",
    "HumanVerb",
    "Scenario",
    "ScenarioDriver",
    "ScenarioStep",
    "ScheduledVerb",
    "Session",
    "SessionHost",
    "SurfacedBlock",
    "VerbKind",
    "build_session",
    "bundled_scenarios",
    "create_server",
    "load_scenario",
    "run_scenario",
    "scenario_from_dict",
]
