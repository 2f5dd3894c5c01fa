"""Central dispatcher: classify each instruction as physical or social work."""

from __future__ import annotations

from .core import RouteDecision, TaskInstruction
from .gateway import SCHEMA_ROUTE, CompletionRequest, Gateway

ROUTER_SYSTEM_PROMPT = (
    "You are the task router for a social robot. Decide which agent owns the "
    "instruction. Choose PIA for sensor-triggered events or direct tool "
    "invocation; choose SIA for dialogue-oriented requests (conversation, "
    "stories, planning, task tracking, emotional support). Answer with a JSON "
    'object: {"target": "PIA"|"SIA", "rationale": "..."}.'
)


class Router:
    """Stateless dispatcher; every decision is a structured completion."""

    def __init__(self, gateway: Gateway, session_summary: str = "") -> None:
        self.gateway = gateway
        self.session_summary = session_summary

    def route(self, instruction: TaskInstruction) -> RouteDecision:
        """Exactly one of {PIA, SIA}; gateway errors surface to the caller."""
        system = ROUTER_SYSTEM_PROMPT
        if self.session_summary:
            system = f"{system}\nSession summary: {self.session_summary}"
        request = CompletionRequest(
            system_prompt=system,
            user_content=instruction.text,
            schema_id=SCHEMA_ROUTE,
            tier="light",
        )
        return self.gateway.complete_structured(request)
