from __future__ import annotations

import pytest

from pilot.core import (
    ALL_SENSORS,
    Arousal,
    EmotionLabel,
    ExecutionTrace,
    ModelTier,
    PiaCommand,
    PiaCommandKind,
    Script,
    SensorId,
    SiaAction,
    SiaActionKind,
    TaskInstruction,
    TaskState,
    Utterance,
    arousal_of,
    rate_of,
)
from pilot.errors import UnknownSensor


class TestEmotionRates:
    def test_arousal_table(self):
        assert arousal_of(EmotionLabel.NEUTRAL) is Arousal.BASELINE
        assert arousal_of(EmotionLabel.ANGER) is Arousal.HIGH
        assert arousal_of(EmotionLabel.SADNESS) is Arousal.LOW
        assert arousal_of(EmotionLabel.DISGUST) is Arousal.BASELINE
        assert arousal_of(EmotionLabel.CONTEMPT) is Arousal.LOW
        for emotion in (EmotionLabel.HAPPINESS, EmotionLabel.FEAR, EmotionLabel.SURPRISE):
            assert arousal_of(emotion) is Arousal.HIGH

    def test_rate_values(self):
        assert rate_of(EmotionLabel.NEUTRAL) == 1.00
        assert rate_of(EmotionLabel.SADNESS) == 0.95
        assert rate_of(EmotionLabel.HAPPINESS) == 1.05

    def test_rate_total_and_image(self):
        rates = {rate_of(emotion) for emotion in EmotionLabel}
        assert rates == {0.95, 1.00, 1.05}

    def test_emotion_parse_rejects_unknown(self):
        with pytest.raises(ValueError):
            EmotionLabel.parse("Melancholy")


class TestSensorId:
    def test_namespace_has_ten_sensors(self):
        assert len(ALL_SENSORS) == 10

    def test_parse_roundtrip(self):
        for sensor in ALL_SENSORS:
            assert SensorId.parse(sensor.value) is sensor

    @pytest.mark.parametrize("bad", ["nose", "head", "", "bumper_front", "head_top "])
    def test_parse_rejects_outside_namespace(self, bad):
        if bad == "head_top ":
            # whitespace is trimmed, so this one parses
            assert SensorId.parse(bad) is SensorId.HEAD_TOP
            return
        with pytest.raises(UnknownSensor):
            SensorId.parse(bad)


class TestUtterance:
    def test_rate_derived_from_emotion(self):
        utterance = Utterance("hello", EmotionLabel.HAPPINESS)
        assert utterance.rate == 1.05

    def test_explicit_consistent_rate_accepted(self):
        assert Utterance("hi", EmotionLabel.SADNESS, rate=0.95).rate == 0.95

    def test_inconsistent_rate_rejected(self):
        with pytest.raises(ValueError):
            Utterance("hi", EmotionLabel.SADNESS, rate=1.05)

    def test_script_requires_utterances(self):
        with pytest.raises(ValueError):
            Script(())


class TestTaskState:
    def test_detail_units_reject_semicolons(self):
        with pytest.raises(ValueError):
            TaskState("t", ("a; b",))

    def test_detail_units_reject_duplicates_after_casefold(self):
        with pytest.raises(ValueError):
            TaskState("t", ("Date tomorrow", "date TOMORROW"))

    def test_model_tier_defaults_light(self):
        assert TaskState("t").model_tier is ModelTier.LIGHT

    def test_empty_main_task_rejected(self):
        with pytest.raises(ValueError):
            TaskState("  ")


class TestActions:
    def test_new_requires_main_task(self):
        with pytest.raises(ValueError):
            SiaAction(SiaActionKind.NEW, main_task="  ")

    def test_update_requires_details(self):
        with pytest.raises(ValueError):
            SiaAction(SiaActionKind.UPDATE)

    def test_control_actions_take_no_payload(self):
        with pytest.raises(ValueError):
            SiaAction(SiaActionKind.UPGRADE, details=("x",))

    def test_pia_command_field_rules(self):
        with pytest.raises(ValueError):
            PiaCommand(PiaCommandKind.BIND, sensor=None, skill="x")
        with pytest.raises(ValueError):
            PiaCommand(PiaCommandKind.UNBIND, sensor=SensorId.CHIN, skill="x")
        with pytest.raises(ValueError):
            PiaCommand(PiaCommandKind.BIND, sensor=SensorId.CHIN, skill="x", args={"a": 1})
        invoke = PiaCommand(PiaCommandKind.INVOKE, skill="say_hi", args={"a": 1})
        assert invoke.to_dict() == {"command": "INVOKE", "skill": "say_hi", "args": {"a": 1}}


class TestInstructionAndTrace:
    def test_instruction_requires_text(self):
        with pytest.raises(ValueError):
            TaskInstruction(id="i", session_id="s", text="   ", received_at=0.0)

    def test_trace_preserves_order(self):
        trace = ExecutionTrace()
        trace.record("a")
        trace.record("b", {"x": 1})
        assert trace.function_names() == ["a", "b"]
