"""Holonic cooperative-manufacturing control.

Autonomous customer, product, order, worker and robot holons exchange
ontology-validated messages over a deterministic in-process platform to
plan and execute cooperative assembly, operable by humans through a
service API and web panels.
"""

from .acl import (
    ACT_PURPOSE,
    ActPurpose,
    Aid,
    AclMessage,
    CommunicativeAct,
    TokenSource,
    act_from_name,
    act_purpose,
    build_message,
    make_reply,
    validate_message,
)
from .gateway import (
    ScenarioScript,
    Workcell,
    export_trace,
    load_scenario,
    parse_scenario,
    reference_scenario,
    run_scenario,
)
from .holons import (
    CustomerHolon,
    OrderHolon,
    ProductHolon,
    RobotHolon,
    RobotStatus,
    WorkerHolon,
    WorkerStatus,
    pick_and_place_duration,
)
from .ontology import OntologyRegistry, build_case_study_ontology
from .runtime import Behaviour, MessageFilter, Platform, VirtualClock
from .sl import parse_content, print_content
from .trace import EventTrace, validate_trace

__all__ = [
    "ACT_PURPOSE",
    "ActPurpose",
    "Aid",
    "AclMessage",
    "Behaviour",
    "CommunicativeAct",
    "CustomerHolon",
    "EventTrace",
    "MessageFilter",
    "OntologyRegistry",
    "OrderHolon",
    "Platform",
    "ProductHolon",
    "RobotHolon",
    "RobotStatus",
    "ScenarioScript",
    "TokenSource",
    "VirtualClock",
    "Workcell",
    "WorkerHolon",
    "WorkerStatus",
    "act_from_name",
    "act_purpose",
    "build_case_study_ontology",
    "build_message",
    "export_trace",
    "load_scenario",
    "make_reply",
    "parse_content",
    "parse_scenario",
    "pick_and_place_duration",
    "print_content",
    "reference_scenario",
    "run_scenario",
    "validate_message",
    "validate_trace",
]
