"""Structured-completion gateway.

Every agent decision flows through ``complete_structured``: the provider
returns raw JSON-able output which must validate against one of four
registered schemas (route-decision, sia-action, pia-commands, script).
Malformed output is re-asked with the validation error appended, up to
``max_retries`` times, then surfaced as ``SchemaViolation``.

The scripted provider is a deterministic rule table (exact keys first,
then ordered wildcard patterns) used for tests, the REPL in offline mode,
and every benchmark run.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping, Protocol, Sequence

from .core import (
    AgentTarget,
    EmotionLabel,
    PiaCommand,
    PiaCommandKind,
    RouteDecision,
    Script,
    SensorId,
    SiaAction,
    SiaActionKind,
    Utterance,
    rate_of,
)
from .errors import NoRule, ProviderUnavailable, SchemaViolation

SCHEMA_ROUTE = "route-decision"
SCHEMA_SIA = "sia-action"
SCHEMA_PIA = "pia-commands"
SCHEMA_SCRIPT = "script"
SCHEMA_IDS = (SCHEMA_ROUTE, SCHEMA_SIA, SCHEMA_PIA, SCHEMA_SCRIPT)


@dataclass(frozen=True)
class CompletionRequest:
    system_prompt: str
    user_content: str
    schema_id: str
    tier: str = "light"

    def __post_init__(self) -> None:
        if self.schema_id not in SCHEMA_IDS:
            raise ValueError(f"unregistered schema: {self.schema_id!r}")


# ---------------------------------------------------------------------------
# Schema decoding: raw provider output -> validated domain value
# ---------------------------------------------------------------------------

def _require_mapping(payload: Any) -> Mapping[str, Any]:
    if not isinstance(payload, Mapping):
        raise SchemaViolation(f"expected a JSON object, got {type(payload).__name__}")
    return payload


def _decode_route(payload: Any) -> RouteDecision:
    data = _require_mapping(payload)
    target = data.get("target")
    if target not in (AgentTarget.PIA.value, AgentTarget.SIA.value):
        raise SchemaViolation(f"target must be PIA or SIA, got {target!r}")
    rationale = data.get("rationale", "")
    if not isinstance(rationale, str):
        raise SchemaViolation("rationale must be a string")
    return RouteDecision(target=AgentTarget(target), rationale=rationale)


def _decode_sia_action(payload: Any) -> SiaAction:
    data = _require_mapping(payload)
    kind_raw = data.get("action")
    try:
        kind = SiaActionKind(kind_raw)
    except ValueError:
        raise SchemaViolation(f"action must be one of the six keywords, got {kind_raw!r}") from None
    details_raw = data.get("details", [])
    if not isinstance(details_raw, list) or not all(isinstance(d, str) for d in details_raw):
        raise SchemaViolation("details must be a list of strings")
    try:
        if kind is SiaActionKind.NEW:
            main_task = data.get("main_task")
            if not isinstance(main_task, str):
                raise SchemaViolation("NEW requires a main_task string")
            return SiaAction(kind=kind, main_task=main_task, details=tuple(details_raw))
        if kind in (SiaActionKind.UPDATE, SiaActionKind.DELETE):
            return SiaAction(kind=kind, details=tuple(details_raw))
        return SiaAction(kind=kind)
    except ValueError as exc:
        raise SchemaViolation(str(exc)) from None


def _decode_pia_commands(payload: Any) -> list[PiaCommand]:
    data = _require_mapping(payload)
    commands_raw = data.get("commands")
    if not isinstance(commands_raw, list) or not commands_raw:
        raise SchemaViolation("commands must be a non-empty list")
    commands: list[PiaCommand] = []
    for item in commands_raw:
        entry = _require_mapping(item)
        kind_raw = entry.get("command")
        try:
            kind = PiaCommandKind(kind_raw)
        except ValueError:
            raise SchemaViolation(f"command must be BIND/UPDATE/UNBIND/INVOKE, got {kind_raw!r}") from None
        sensor = None
        if "sensor" in entry and entry["sensor"] is not None:
            sensor = SensorId.parse(str(entry["sensor"]))  # raises UnknownSensor
        skill = entry.get("skill")
        if skill is not None and not isinstance(skill, str):
            raise SchemaViolation("skill must be a string")
        args = entry.get("args", {})
        if not isinstance(args, Mapping):
            raise SchemaViolation("args must be an object")
        try:
            commands.append(PiaCommand(kind=kind, sensor=sensor, skill=skill, args=dict(args)))
        except ValueError as exc:
            raise SchemaViolation(str(exc)) from None
    return commands


def _decode_script(payload: Any) -> Script:
    data = _require_mapping(payload)
    utterances_raw = data.get("utterances")
    if not isinstance(utterances_raw, list) or not utterances_raw:
        raise SchemaViolation("utterances must be a non-empty list")
    utterances: list[Utterance] = []
    for item in utterances_raw:
        entry = _require_mapping(item)
        text = entry.get("text")
        if not isinstance(text, str) or not text.strip():
            raise SchemaViolation("utterance text must be a non-empty string")
        try:
            emotion = EmotionLabel.parse(str(entry.get("emotion")))
        except ValueError as exc:
            raise SchemaViolation(str(exc)) from None
        rate = entry.get("rate")
        if rate is not None and abs(float(rate) - rate_of(emotion)) > 1e-9:
            raise SchemaViolation(
                f"rate {rate} inconsistent with emotion {emotion.value}"
            )
        utterances.append(Utterance(text=text, emotion=emotion))
    return Script(utterances=tuple(utterances))


_DECODERS: dict[str, Callable[[Any], Any]] = {
    SCHEMA_ROUTE: _decode_route,
    SCHEMA_SIA: _decode_sia_action,
    SCHEMA_PIA: _decode_pia_commands,
    SCHEMA_SCRIPT: _decode_script,
}


def decode_structured(schema_id: str, payload: Any):
    """Validate raw provider output against a registered schema."""
    try:
        decoder = _DECODERS[schema_id]
    except KeyError:
        raise SchemaViolation(f"unregistered schema: {schema_id!r}") from None
    return decoder(payload)


# ---------------------------------------------------------------------------
# Providers
# ---------------------------------------------------------------------------

class CompletionProvider(Protocol):
    def complete(self, request: CompletionRequest) -> Any:
        """Return raw JSON-able output for the request."""


def normalize_text(text: str) -> str:
    """Case-fold and collapse whitespace; the exact-match key space."""
    return " ".join(text.casefold().split())


@dataclass(frozen=True)
class Rule:
    """One scripted rule: an exact key or an ordered wildcard pattern."""

    schema_id: str
    output: Any
    exact: str | None = None
    pattern: str | None = None

    def __post_init__(self) -> None:
        if (self.exact is None) == (self.pattern is None):
            raise ValueError("rule needs exactly one of exact/pattern")
        if self.schema_id not in SCHEMA_IDS:
            raise ValueError(f"unregistered schema: {self.schema_id!r}")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Rule":
        match = data.get("match", {})
        return cls(
            schema_id=data["schema_id"],
            output=data["output"],
            exact=match.get("exact"),
            pattern=match.get("pattern"),
        )

    def to_dict(self) -> dict[str, Any]:
        match = {"exact": self.exact} if self.exact is not None else {"pattern": self.pattern}
        return {"match": match, "schema_id": self.schema_id, "output": self.output}


def _pattern_regex(pattern: str) -> re.Pattern[str]:
    # '*' is the only wildcard; no-star patterns match as substrings.
    parts = [re.escape(p) for p in normalize_text(pattern).split("*")]
    return re.compile("(.*)".join(parts))


def _fill_placeholders(value: Any, captures: Sequence[str]) -> Any:
    if isinstance(value, str):
        out = value
        for i, cap in enumerate(captures):
            out = out.replace("{%d}" % i, cap)
        return out
    if isinstance(value, list):
        return [_fill_placeholders(v, captures) for v in value]
    if isinstance(value, Mapping):
        return {k: _fill_placeholders(v, captures) for k, v in value.items()}
    return value


def scripted_lookup(rules: Sequence[Rule], schema_id: str, user_content: str) -> Any:
    """Exact-match first, then first matching pattern rule; NoRule otherwise."""
    key = normalize_text(user_content)
    for rule in rules:
        if rule.schema_id == schema_id and rule.exact is not None and normalize_text(rule.exact) == key:
            return rule.output
    for rule in rules:
        if rule.schema_id != schema_id or rule.pattern is None:
            continue
        found = _pattern_regex(rule.pattern).search(key)
        if found:
            captures = [user_content.strip()] + [g.strip() for g in found.groups()]
            return _fill_placeholders(rule.output, captures)
    raise NoRule(f"no scripted rule for schema {schema_id!r} and input {user_content[:80]!r}")


class ScriptedProvider:
    """Deterministic rule-table provider.

    ``simulated_delay_ms`` models generation latency: one delay unit per
    call, except script outputs which cost one unit per generated
    utterance (long generations dominate real provider latency).
    """

    def __init__(self, rules: Sequence[Rule], simulated_delay_ms: float = 0.0) -> None:
        self.rules = list(rules)
        self.simulated_delay_ms = simulated_delay_ms
        self.calls = 0

    @classmethod
    def from_file(cls, path: str | Path, simulated_delay_ms: float = 0.0) -> "ScriptedProvider":
        return cls(load_rule_table(path), simulated_delay_ms=simulated_delay_ms)

    def _delay_units(self, schema_id: str, output: Any) -> int:
        if schema_id == SCHEMA_SCRIPT and isinstance(output, Mapping):
            utterances = output.get("utterances")
            if isinstance(utterances, list) and utterances:
                return len(utterances)
        return 1

    def complete(self, request: CompletionRequest) -> Any:
        self.calls += 1
        output = scripted_lookup(self.rules, request.schema_id, request.user_content)
        if self.simulated_delay_ms > 0:
            units = self._delay_units(request.schema_id, output)
            time.sleep(self.simulated_delay_ms * units / 1000.0)
        return output


def load_rule_table(path: str | Path) -> list[Rule]:
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    if not isinstance(doc, Mapping) or doc.get("version") != 1:
        raise ValueError(f"unsupported rule table document: {path}")
    return [Rule.from_dict(entry) for entry in doc["rules"]]


def dump_rule_table(rules: Sequence[Rule], path: str | Path) -> None:
    doc = {"version": 1, "rules": [r.to_dict() for r in rules]}
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2, sort_keys=True)


class ExternalProvider:
    """HTTP provider: POST {system, user, schema} -> structured JSON body."""

    def __init__(
        self,
        endpoint: str,
        headers: Mapping[str, str] | None = None,
        timeout_s: float = 30.0,
        client: Any = None,
    ) -> None:
        import httpx

        self.endpoint = endpoint
        self._client = client or httpx.Client(timeout=timeout_s, headers=dict(headers or {}))

    def complete(self, request: CompletionRequest) -> Any:
        import httpx

        body = {
            "system": request.system_prompt,
            "user": request.user_content,
            "schema": request.schema_id,
        }
        try:
            response = self._client.post(self.endpoint, json=body)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(f"completion endpoint failed: {exc}") from exc
        return response.json()


# ---------------------------------------------------------------------------
# Gateway facade: tiered provider selection plus validation/retry loop
# ---------------------------------------------------------------------------

@dataclass
class ProviderConfig:
    mode: str = "scripted"  # scripted | external
    rule_table: str | None = None
    simulated_delay_ms: float = 0.0
    max_retries: int = 2
    tier_endpoints: dict[str, str] = field(default_factory=dict)
    headers: dict[str, str] = field(default_factory=dict)
    timeout_s: float = 30.0

    def __post_init__(self) -> None:
        if self.mode not in ("scripted", "external"):
            raise ValueError(f"unknown provider mode: {self.mode!r}")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


class Gateway:
    """Validated structured completion with retry-on-malformed-output."""

    def __init__(self, providers: Mapping[str, CompletionProvider], max_retries: int = 2) -> None:
        if not providers:
            raise ValueError("at least one tier provider is required")
        self._providers = dict(providers)
        self.max_retries = max_retries

    @classmethod
    def from_config(cls, config: ProviderConfig, rules: Sequence[Rule] | None = None) -> "Gateway":
        if config.mode == "scripted":
            if rules is None:
                if not config.rule_table:
                    raise ValueError("scripted mode requires a rule table")
                rules = load_rule_table(config.rule_table)
            provider = ScriptedProvider(rules, simulated_delay_ms=config.simulated_delay_ms)
            return cls({"light": provider, "heavy": provider}, max_retries=config.max_retries)
        providers = {
            tier: ExternalProvider(endpoint, headers=config.headers, timeout_s=config.timeout_s)
            for tier, endpoint in config.tier_endpoints.items()
        }
        return cls(providers, max_retries=config.max_retries)

    def _provider_for(self, tier: str) -> CompletionProvider:
        if tier in self._providers:
            return self._providers[tier]
        return next(iter(self._providers.values()))

    def complete_structured(
        self,
        request: CompletionRequest,
        extra_validate: Callable[[Any], None] | None = None,
    ) -> Any:
        """Decode and validate; re-ask with the error appended, then fail.

        The provider is called at most ``1 + max_retries`` times.
        ``extra_validate`` lets callers add contract checks (e.g. inventory
        membership) that participate in the same retry loop.
        """
        from .errors import PilotError

        provider = self._provider_for(request.tier)
        attempt_request = request
        last_error: Exception | None = None
        for _ in range(1 + self.max_retries):
            try:
                raw = provider.complete(attempt_request)
                value = decode_structured(request.schema_id, raw)
                if extra_validate is not None:
                    extra_validate(value)
                return value
            except ProviderUnavailable:
                raise
            except PilotError as exc:  # decode failures and caller validation alike
                last_error = exc
                attempt_request = CompletionRequest(
                    system_prompt=f"{request.system_prompt}\n[validation error: {exc}]",
                    user_content=request.user_content,
                    schema_id=request.schema_id,
                    tier=request.tier,
                )
        if isinstance(last_error, NoRule):
            raise SchemaViolation(f"no valid output after retries: {last_error}") from last_error
        assert last_error is not None
        raise last_error
