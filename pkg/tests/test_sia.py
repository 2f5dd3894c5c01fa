from __future__ import annotations

import random
from fractions import Fraction

import pytest

from pilot.core import (
    EmotionLabel,
    ModelTier,
    Script,
    SiaAction,
    SiaActionKind,
    TaskInstruction,
    TaskState,
    Utterance,
)
from pilot.errors import NoActiveTask, NoMatchingDetail, RobotUnreachable
from pilot.gateway import SCHEMA_SCRIPT, SCHEMA_SIA, Gateway, Rule, ScriptedProvider
from pilot.memory import MemoryStore
from pilot.robotsim import LocalRobotClient, RobotSimulator
from pilot.sia import SocialAgent, apply_action, render_state, token_jaccard

TABLE_STATE = TaskState(
    main_task="Plan a day trip to New York City",
    details=("Date tomorrow", "return by 7:00 PM", "goal enjoy the city"),
)

NYC_PROMPT = (
    "Hi Misty, I'd like to plan a day trip to New York City for tomorrow. "
    "Please create an itinerary that allows me to enjoy the city and return to my hotel by 7:00 PM."
)


def oracle_jaccard(a: str, b: str) -> Fraction:
    ta, tb = set(a.casefold().split()), set(b.casefold().split())
    if not ta or not tb:
        return Fraction(0)
    return Fraction(len(ta & tb), len(ta | tb))


def agent_with(rules, auto_store=False, memory=None, robot=None):
    sim = RobotSimulator()
    gateway = Gateway({"light": ScriptedProvider(rules), "heavy": ScriptedProvider(rules)})
    return (
        SocialAgent(gateway, memory or MemoryStore(), robot or LocalRobotClient(sim), auto_store=auto_store),
        sim,
    )


class TestParseAction:
    def test_table_state_example(self, default_gateway):
        agent = SocialAgent(default_gateway, MemoryStore(), None)
        action = agent.parse_action(NYC_PROMPT, None)
        assert action.kind is SiaActionKind.NEW
        assert action.main_task == "Plan a day trip to New York City"
        assert action.details == ("Date tomorrow", "return by 7:00 PM", "goal enjoy the city")

    def test_time_change_is_update(self, default_gateway):
        agent = SocialAgent(default_gateway, MemoryStore(), None)
        action = agent.parse_action("changing the time to 6 PM", TABLE_STATE)
        assert action.kind is SiaActionKind.UPDATE
        assert action.details == ("return by 6:00 PM",)

    def test_smarter_model_is_upgrade(self, default_gateway):
        agent = SocialAgent(default_gateway, MemoryStore(), None)
        assert agent.parse_action("use your smarter model for this", TABLE_STATE).kind is SiaActionKind.UPGRADE


class TestApplyAction:
    def test_update_replaces_best_jaccard_match(self):
        # hand-computed: {return,by,6:00,pm} vs {return,by,7:00,pm} -> 3/5 = 0.6 >= 0.5
        assert oracle_jaccard("return by 6:00 PM", "return by 7:00 PM") == Fraction(3, 5)
        assert token_jaccard("return by 6:00 PM", "return by 7:00 PM") == pytest.approx(0.6)
        updated = apply_action(
            TABLE_STATE, SiaAction(SiaActionKind.UPDATE, details=("return by 6:00 PM",))
        )
        assert updated.details == ("Date tomorrow", "return by 6:00 PM", "goal enjoy the city")

    def test_untouched_units_byte_identical(self):
        updated = apply_action(
            TABLE_STATE, SiaAction(SiaActionKind.UPDATE, details=("return by 6:00 PM",))
        )
        assert updated.details[0] is TABLE_STATE.details[0]
        assert updated.details[2] is TABLE_STATE.details[2]

    def test_update_appends_when_no_match(self):
        # best overlap of "pack an umbrella" against Table state is 0 < 0.5
        best = max(oracle_jaccard("pack an umbrella", unit) for unit in TABLE_STATE.details)
        assert best < Fraction(1, 2)
        updated = apply_action(
            TABLE_STATE, SiaAction(SiaActionKind.UPDATE, details=("pack an umbrella",))
        )
        assert updated.details == TABLE_STATE.details + ("pack an umbrella",)

    def test_delete_exact_unit(self):
        updated = apply_action(
            TABLE_STATE, SiaAction(SiaActionKind.DELETE, details=("goal enjoy the city",))
        )
        assert updated.details == ("Date tomorrow", "return by 7:00 PM")

    def test_delete_without_match_errors(self):
        with pytest.raises(NoMatchingDetail):
            apply_action(TABLE_STATE, SiaAction(SiaActionKind.DELETE, details=("feed the llama",)))

    def test_update_delete_require_active_state(self):
        with pytest.raises(NoActiveTask):
            apply_action(None, SiaAction(SiaActionKind.UPDATE, details=("x y z",)))
        with pytest.raises(NoActiveTask):
            apply_action(None, SiaAction(SiaActionKind.DELETE, details=("x y z",)))

    def test_new_replaces_whole_state(self):
        fresh = apply_action(TABLE_STATE, SiaAction(SiaActionKind.NEW, main_task="Bake bread", details=("use rye",)))
        assert fresh.main_task == "Bake bread"
        assert fresh.details == ("use rye",)

    def test_tier_toggling_idempotent_pair(self):
        up = apply_action(TABLE_STATE, SiaAction(SiaActionKind.UPGRADE))
        assert up.model_tier is ModelTier.HEAVY
        down = apply_action(up, SiaAction(SiaActionKind.DOWNGRADE))
        assert down.model_tier is ModelTier.LIGHT
        assert down.details == TABLE_STATE.details

    def test_tier_persists_across_new(self):
        up = apply_action(TABLE_STATE, SiaAction(SiaActionKind.UPGRADE))
        fresh = apply_action(up, SiaAction(SiaActionKind.NEW, main_task="New thing"))
        assert fresh.model_tier is ModelTier.HEAVY

    def test_memory_leaves_state_unchanged(self):
        assert apply_action(TABLE_STATE, SiaAction(SiaActionKind.MEMORY)) is TABLE_STATE

    def test_locality_randomized_trials(self):
        rng = random.Random(42)
        words = "alpha beta gamma delta epsilon zeta eta theta iota kappa".split()
        for _ in range(100):
            units = []
            for i in range(rng.randint(2, 5)):
                unit = " ".join(rng.sample(words, rng.randint(2, 4))) + f" {i}"
                units.append(unit)
            state = TaskState("random task", tuple(units))
            if rng.random() < 0.5:
                victim = rng.randrange(len(units))
                tokens = units[victim].split()
                tokens[rng.randrange(len(tokens))] = "changed"
                incoming = " ".join(tokens)
                action = SiaAction(SiaActionKind.UPDATE, details=(incoming,))
            else:
                incoming = "totally fresh unit " + str(rng.random())
                action = SiaAction(SiaActionKind.UPDATE, details=(incoming,))
            # independent oracle decides replace-vs-append and the target index
            overlaps = [oracle_jaccard(incoming, unit) for unit in units]
            best = max(overlaps)
            best_index = overlaps.index(best)
            updated = apply_action(state, action)
            if best >= Fraction(1, 2):
                expected = list(units)
                expected[best_index] = incoming
            else:
                expected = list(units) + [incoming]
            assert list(updated.details) == expected
            untouched_before = [u for i, u in enumerate(units) if i != best_index or best < Fraction(1, 2)]
            assert all(u in updated.details for u in untouched_before)


class TestWriteScript:
    def test_three_little_pig_script(self, default_gateway):
        agent = SocialAgent(default_gateway, MemoryStore(), None)
        state = TaskState("Tell the story of Three Little Pig")
        script = agent.write_script(state)
        texts = [u.text for u in script.utterances]
        emotions = [u.emotion for u in script.utterances]
        assert texts[0] == "Three little pigs left home to build their own houses."
        assert emotions[:4] == [
            EmotionLabel.NEUTRAL, EmotionLabel.CONTEMPT, EmotionLabel.CONTEMPT, EmotionLabel.HAPPINESS,
        ]
        assert script.utterances[3].text.endswith("sturdy home.")

    def test_sadness_rate(self):
        rules = [
            Rule(
                schema_id=SCHEMA_SCRIPT,
                pattern="task: *",
                output={"utterances": [{"text": "oh no", "emotion": "Sadness"}]},
            )
        ]
        agent, _ = agent_with(rules)
        script = agent.write_script(TaskState("anything"))
        assert script.utterances[0].rate == 0.95

    def test_deterministic_across_five_runs(self, default_gateway):
        agent = SocialAgent(default_gateway, MemoryStore(), None)
        state = TaskState("Tell the story of Three Little Pig")
        outputs = {tuple((u.text, u.emotion.value) for u in agent.write_script(state).utterances) for _ in range(5)}
        assert len(outputs) == 1

    def test_tier_flows_to_request(self):
        seen = {}

        class Recorder:
            def complete(self, request):
                seen["tier"] = request.tier
                return {"utterances": [{"text": "x", "emotion": "Neutral"}]}

        agent = SocialAgent(Gateway({"heavy": Recorder(), "light": Recorder()}), MemoryStore(), None)
        agent.write_script(TaskState("t", model_tier=ModelTier.HEAVY))
        assert seen["tier"] == "heavy"


class FlakyRobot(LocalRobotClient):
    """Fails both requests of selected utterance indices."""

    def __init__(self, sim, fail_utterances):
        super().__init__(sim)
        self.fail_utterances = fail_utterances
        self._speaks = 0
        self._motions = 0

    def speak(self, text, rate, emotion):
        index = self._speaks
        self._speaks += 1
        if index in self.fail_utterances:
            raise RobotUnreachable("speak rejected")
        return super().speak(text, rate, emotion)

    def motion_bundle(self, emotion):
        index = self._motions
        self._motions += 1
        if index in self.fail_utterances:
            raise RobotUnreachable("motion rejected")
        return super().motion_bundle(emotion)


class TestDeliver:
    def four_utterance_script(self) -> Script:
        return Script(
            tuple(
                Utterance(f"utterance number {i}", emotion)
                for i, emotion in enumerate(
                    [EmotionLabel.NEUTRAL, EmotionLabel.HAPPINESS, EmotionLabel.SADNESS, EmotionLabel.ANGER]
                )
            )
        )

    def test_ordering_and_counts(self):
        sim = RobotSimulator()
        agent = SocialAgent(Gateway({"light": ScriptedProvider([])}), MemoryStore(), LocalRobotClient(sim))
        report = agent.deliver(self.four_utterance_script())
        assert report.ok
        log = sim.action_log()
        speaks = [a for a in log if a.op.value == "speak"]
        leds = [a for a in log if a.op.value == "led"]
        assert len(speaks) == 4 and len(leds) == 4
        # utterance i's speak+bundle (5 actions) all precede utterance i+1's
        for i in range(4):
            block = log[i * 5 : (i + 1) * 5]
            block_speaks = [a for a in block if a.op.value == "speak"]
            assert len(block_speaks) == 1
            assert block_speaks[0].args["text"] == f"utterance number {i}"

    def test_happiness_utterance_rate_and_template(self):
        sim = RobotSimulator()
        agent = SocialAgent(Gateway({"light": ScriptedProvider([])}), MemoryStore(), LocalRobotClient(sim))
        agent.deliver(Script((Utterance("yay", EmotionLabel.HAPPINESS),)))
        log = sim.action_log()
        speak = next(a for a in log if a.op.value == "speak")
        led = next(a for a in log if a.op.value == "led")
        assert speak.args["rate"] == 1.05
        assert led.args["color"] == "yellow"

    def test_partial_failure_continues(self):
        sim = RobotSimulator()
        robot = FlakyRobot(sim, fail_utterances={1})
        agent = SocialAgent(Gateway({"light": ScriptedProvider([])}), MemoryStore(), robot)
        report = agent.deliver(self.four_utterance_script())
        assert [u.ok for u in report.utterances] == [True, False, True, True]


class TestRespond:
    def rules(self):
        return [
            Rule(schema_id="route-decision", pattern="*", output={"target": "SIA"}),
            Rule(
                schema_id=SCHEMA_SIA,
                exact="plan the garden party",
                output={"action": "NEW", "main_task": "Plan the garden party", "details": ["invite six guests"]},
            ),
            Rule(
                schema_id=SCHEMA_SIA,
                exact="remember this plan",
                output={"action": "MEMORY"},
            ),
            Rule(
                schema_id=SCHEMA_SCRIPT,
                pattern="task: plan the garden party*",
                output={
                    "utterances": [
                        {"text": "A garden party, lovely!", "emotion": "Happiness"},
                        {"text": "I drafted the invitations for your six guests.", "emotion": "Neutral"},
                    ]
                },
            ),
        ]

    def test_novel_task_takes_slow_path(self):
        agent, _ = agent_with(self.rules())
        result = agent.respond(TaskInstruction.create("s", "plan the garden party"))
        assert result.path == "slow"
        names = result.trace.function_names()
        assert names == ["parse_action", "apply_action", "memory_lookup", "write_script", "deliver"]

    def test_stored_task_takes_fast_path_no_writer(self):
        agent, _ = agent_with(self.rules(), auto_store=True)
        agent.respond(TaskInstruction.create("s", "plan the garden party"))
        result = agent.respond(TaskInstruction.create("s", "plan the garden party"))
        assert result.path == "fast"
        names = result.trace.function_names()
        assert "write_script" not in names
        assert any(n == "memory_lookup" for n in names)

    def test_fast_path_exclusivity(self):
        agent, _ = agent_with(self.rules(), auto_store=True)
        for _ in range(3):
            result = agent.respond(TaskInstruction.create("s", "plan the garden party"))
            names = result.trace.function_names()
            hit = any(s.detail.startswith("hit") for s in result.trace.steps if s.function_name == "memory_lookup")
            assert not (hit and "write_script" in names)

    def test_memory_action_stores_last_script(self):
        memory = MemoryStore()
        agent, _ = agent_with(self.rules(), memory=memory)
        agent.respond(TaskInstruction.create("s", "plan the garden party"))
        result = agent.respond(TaskInstruction.create("s", "remember this plan"))
        assert result.path == "control"
        assert len(memory.records) == 1
        assert memory.records[0].main_task == "Plan the garden party"

    def test_memory_action_without_task_errors(self):
        agent, _ = agent_with(self.rules())
        with pytest.raises(NoActiveTask):
            agent.respond(TaskInstruction.create("s", "remember this plan"))

    def test_delivery_failure_still_returns_script(self):
        sim = RobotSimulator()
        robot = FlakyRobot(sim, fail_utterances={0, 1})
        memory = MemoryStore()
        agent, _ = agent_with(self.rules(), memory=memory, robot=robot)
        result = agent.respond(TaskInstruction.create("s", "plan the garden party"))
        assert result.script is not None
        deliver_step = next(s for s in result.trace.steps if s.function_name == "deliver")
        assert deliver_step.outcome.value == "error"


class TestRenderState:
    def test_rendering(self):
        assert render_state(TABLE_STATE) == (
            "task: Plan a day trip to New York City; details: Date tomorrow; return by 7:00 PM; goal enjoy the city"
        )
        assert render_state(TaskState("Solo")) == "task: Solo"


class TestMultiUnitUpdate:
    def test_units_applied_in_order_against_evolving_state(self):
        action = SiaAction(
            SiaActionKind.UPDATE,
            details=("return by 6:00 PM", "pack a light jacket"),
        )
        updated = apply_action(TABLE_STATE, action)
        assert updated.details == (
            "Date tomorrow",
            "return by 6:00 PM",
            "goal enjoy the city",
            "pack a light jacket",
        )
