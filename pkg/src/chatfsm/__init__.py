"""Toolkit for extracting, validating, diffing, visualizing and
chat-modifying robot finite state machines."""

from .model import (
    Fsm,
    FsmDocument,
    StateNode,
    Transition,
    ValidationReport,
    parse_fsm_json,
    serialize_fsm_json,
    sink_states,
    validate_document,
)
from .diff import (
    DiffCategory,
    DiffItem,
    DiffKind,
    DiffReport,
    categorize,
    find_renaming,
    render_messages,
    structural_diff,
)
from .codefilter import CodeSpan, filter_fsm_regex
from .dot import DotOptions, RankDirection, diff_overlay, to_dot
from .gateway import Cassette, CassetteMode, ChatGateway, ChatMessage, LlmProviderConfig
from .agents import FsmAgents
from .retrieval import index_codebase, retrieve, wrap_context

__version__ = "0.1.0"

__all__ = [
    "Fsm", "FsmDocument", "StateNode", "Transition", "ValidationReport",
    "parse_fsm_json", "serialize_fsm_json", "sink_states", "validate_document",
    "DiffCategory", "DiffItem", "DiffKind", "DiffReport",
    "categorize", "find_renaming", "render_messages", "structural_diff",
    "CodeSpan", "filter_fsm_regex",
    "DotOptions", "RankDirection", "diff_overlay", "to_dot",
    "Cassette", "CassetteMode", "ChatGateway", "ChatMessage", "LlmProviderConfig",
    "FsmAgents",
    "index_codebase", "retrieve", "wrap_context",
    "__version__",
]
