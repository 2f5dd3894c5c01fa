from __future__ import annotations

import pytest

from pilot.core import AgentTarget, TaskInstruction
from pilot.errors import SchemaViolation
from pilot.router import Router

NYC_PROMPT = (
    "Hi Misty, I'd like to plan a day trip to New York City for tomorrow. "
    "Please create an itinerary that allows me to enjoy the city and return to my hotel by 7:00 PM."
)


def instruction(text: str) -> TaskInstruction:
    return TaskInstruction.create("router-test", text)


class TestRoute:
    @pytest.mark.parametrize(
        "text,target",
        [
            ("Tell me the story of Three Little Pig", AgentTarget.SIA),
            ("touch your head and make a cute sound", AgentTarget.PIA),
            (NYC_PROMPT, AgentTarget.SIA),
            (
                "when I tap your chin, take a photo; press your forehead to say hi; "
                "touch your right side to show sadness",
                AgentTarget.PIA,
            ),
        ],
    )
    def test_anchor_examples(self, default_gateway, text, target):
        router = Router(default_gateway)
        assert router.route(instruction(text)).target is target

    def test_deterministic_across_runs(self, default_gateway):
        router = Router(default_gateway)
        decisions = {router.route(instruction("Tell me the story of Three Little Pig")).target for _ in range(5)}
        assert decisions == {AgentTarget.SIA}

    def test_totality_exactly_two_routes(self, default_gateway):
        router = Router(default_gateway)
        decision = router.route(instruction("help me plan a lovely picnic"))
        assert decision.target in (AgentTarget.PIA, AgentTarget.SIA)

    def test_no_default_route_on_gateway_failure(self, default_gateway):
        router = Router(default_gateway)
        with pytest.raises(SchemaViolation):
            router.route(instruction("kwyjibo gibberish nothing matches this"))

    def test_session_summary_joins_system_prompt(self, default_rules):
        from pilot.gateway import Gateway

        seen = {}

        class Recorder:
            def complete(self, request):
                seen["system"] = request.system_prompt
                return {"target": "SIA", "rationale": ""}

        router = Router(Gateway({"light": Recorder()}), session_summary="user loves stories")
        router.route(instruction("anything"))
        assert "user loves stories" in seen["system"]
