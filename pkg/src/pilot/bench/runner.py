"""Evaluate generated suites against the scripted provider and report mean±std.

Each configuration is executed ``runs`` times. In scripted mode the runs
are deterministic, so reports are byte-stable — except when optional
wall-clock latency conditions are requested (``include_latency``), which
are necessarily timing-dependent.
"""

from __future__ import annotations

import json
import statistics
import tempfile
import time
from pathlib import Path
from typing import Any, Sequence

from ..config import MemoryConfig, PilotConfig
from ..core import TaskInstruction
from ..embedding import ReferenceEmbedder, ranked_distances
from ..gateway import Gateway, ProviderConfig, Rule, ScriptedProvider
from ..memory import MemoryStore
from ..orchestrator import Orchestrator
from ..pia import PhysicalAgent, scan_skills
from ..robotsim import LocalRobotClient, RobotSimulator
from ..router import Router
from ..sia import apply_action
from ..stm import Scheduler, SchedulerConfig
from .report import Condition, Report, condition_over_runs
from .suites import Suite, generate_suite

PROVIDER_DELAY_MS = 300.0


def _gateway_for(suite: Suite) -> Gateway:
    provider = ScriptedProvider(suite.rules)
    return Gateway({"light": provider, "heavy": provider})


def _write_skills(manifests: Sequence[dict[str, Any]], directory: Path) -> None:
    for manifest in manifests:
        path = directory / f"{manifest['name']}.skill.json"
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(manifest, handle, indent=2)


# ---------------------------------------------------------------------------
# Per-suite evaluations (one run each)
# ---------------------------------------------------------------------------

def _eval_route(suite: Suite) -> dict[str, float]:
    router = Router(_gateway_for(suite))
    correct: dict[str, list[int]] = {}
    for instance in suite.instances:
        decision = router.route(TaskInstruction.create("bench", instance.text))
        ok = decision.target.value == instance.expected["target"]
        correct.setdefault(instance.category, []).append(1 if ok else 0)
    return {cat: 100.0 * sum(v) / len(v) for cat, v in correct.items()}


def _eval_sensorbind(suite: Suite, skills_dir: Path) -> dict[str, float]:
    inventory, _ = scan_skills(skills_dir)
    gateway = _gateway_for(suite)
    sim = RobotSimulator()
    robot = LocalRobotClient(sim)
    correct: dict[str, list[int]] = {}
    for instance in suite.instances:
        scheduler = Scheduler(robot, {s.name: s for s in inventory}.get, SchedulerConfig(period_ms=200))
        agent = PhysicalAgent(gateway, scheduler, robot, inventory)
        ok = False
        try:
            commands = agent.parse_commands(instance.text)
            parsed = [c.to_dict() for c in commands]
            expected = []
            for entry in instance.expected["commands"]:
                entry = dict(entry)
                if entry["command"] == "INVOKE":
                    entry.setdefault("args", {})
                else:
                    entry.pop("args", None)
                expected.append(entry)
            if parsed == expected:
                _, results = agent.execute(commands)
                n_binds = sum(1 for e in expected if e["command"] == "BIND")
                ok = all(r.outcome.value == "ok" for r in results) and len(
                    scheduler.snapshot()
                ) == n_binds
        finally:
            scheduler.stop()
        correct.setdefault(instance.category, []).append(1 if ok else 0)
    return {cat: 100.0 * sum(v) / len(v) for cat, v in correct.items()}


def _eval_taskparser(suite: Suite) -> dict[str, float]:
    from ..sia import SocialAgent

    gateway = _gateway_for(suite)
    memory = MemoryStore()  # in-memory; MEMORY turns need a live store
    sim = RobotSimulator()
    robot = LocalRobotClient(sim)
    correct: dict[str, list[int]] = {}
    for instance in suite.instances:
        agent = SocialAgent(gateway, memory, robot)
        state = None
        for turn in instance.turns:
            action = agent.parse_action(turn.text, state)
            ok = action.to_dict() == turn.expected
            correct.setdefault(instance.category, []).append(1 if ok else 0)
            state = apply_action(state, action)
    return {cat: 100.0 * sum(v) / len(v) for cat, v in correct.items()}


def _eval_fastthinking(suite: Suite) -> dict[str, Any]:
    from ..gateway import decode_structured

    embedder = ReferenceEmbedder()
    store = MemoryStore(embedder=embedder)
    record_cluster: dict[str, int] = {}
    for cluster in suite.clusters:
        script = decode_structured("script", cluster.script)
        record_id = store.store(cluster.canonical, script)
        record_cluster[record_id] = cluster.cluster_id

    def evaluate(query_texts: list[tuple[str, int]]) -> dict[str, Any]:
        top1_hits = 0
        rank1: list[float] = []
        rank2: list[float] = []
        for text, cluster_id in query_texts:
            ranked = ranked_distances(embedder.embed(text), store.records, k=2)
            best_record, best_distance = ranked[0]
            if record_cluster[best_record.record_id] == cluster_id:
                top1_hits += 1
            rank1.append(best_distance)
            rank2.append(ranked[1][1] if len(ranked) > 1 else float("nan"))
        return {
            "top1_pct": 100.0 * top1_hits / len(query_texts),
            "rank1_mean": statistics.fmean(rank1),
            "rank1_std": statistics.pstdev(rank1),
            "rank2_mean": statistics.fmean(rank2),
            "rank2_std": statistics.pstdev(rank2),
            "margin_mean": statistics.fmean(r2 - r1 for r1, r2 in zip(rank1, rank2)),
        }

    fast_queries = [(inst.expected["canonical"], inst.expected["cluster_id"]) for inst in suite.instances]
    raw_queries = [(inst.text, inst.expected["cluster_id"]) for inst in suite.instances]
    return {"fastpath": evaluate(fast_queries), "rawtext": evaluate(raw_queries)}


def _eval_toolext(suite: Suite, skills_dir: Path) -> dict[str, Any]:
    inventory, warnings = scan_skills(skills_dir)
    gateway = _gateway_for(suite)
    sim = RobotSimulator()
    robot = LocalRobotClient(sim)
    scheduler = Scheduler(robot, {s.name: s for s in inventory}.get, SchedulerConfig(period_ms=200))
    agent = PhysicalAgent(gateway, scheduler, robot, inventory)
    hits = 0
    try:
        for instance in suite.instances:
            commands = agent.parse_commands(instance.text)
            if (
                len(commands) == 1
                and commands[0].kind.value == "INVOKE"
                and commands[0].skill == instance.expected["skill"]
            ):
                before = len(robot.action_log())
                agent.execute(commands)
                if len(robot.action_log()) > before:
                    hits += 1
    finally:
        scheduler.stop()
    scale = suite.params["scale"]
    return {
        "descriptors": len(inventory),
        "warnings": len(warnings),
        "success_pct": 100.0 * hits / len(suite.instances),
        "scale": scale,
    }


# ---------------------------------------------------------------------------
# Latency comparison (fast vs slow path, simulated provider delay)
# ---------------------------------------------------------------------------

def measure_latency_pair(
    suite: Suite, delay_ms: float = PROVIDER_DELAY_MS, cluster_index: int = 0
) -> tuple[float, float]:
    """Wall-clock ms for (first=slow, second=fast) submission of one task."""
    cluster = suite.clusters[cluster_index]
    config = PilotConfig(
        provider=ProviderConfig(mode="scripted", simulated_delay_ms=delay_ms),
        memory=MemoryConfig(auto_store=True),
    )
    orchestrator = Orchestrator(config, rules=suite.rules).start()
    try:
        t0 = time.perf_counter()
        first = orchestrator.submit("latency", cluster.canonical)
        t1 = time.perf_counter()
        second = orchestrator.submit("latency", cluster.canonical)
        t2 = time.perf_counter()
        if first.error or second.error:
            raise RuntimeError(f"latency turns failed: {first.error or second.error}")
        if first.path != "slow" or second.path != "fast":
            raise RuntimeError(f"unexpected paths: {first.path}/{second.path}")
        if "write_script" in second.trace.function_names():
            raise RuntimeError("fast path must not call the script writer")
        return (t1 - t0) * 1000.0, (t2 - t1) * 1000.0
    finally:
        orchestrator.shutdown()


# ---------------------------------------------------------------------------
# run_suite
# ---------------------------------------------------------------------------

def run_suite(
    name: str,
    runs: int = 5,
    seed: int = 7,
    include_latency: bool = False,
    **params: Any,
) -> Report:
    """Generate the suite once, evaluate it ``runs`` times, aggregate mean±std."""
    report = Report(suite=name, runs=runs, seed=seed)

    if name == "toolext":
        scales = params.pop("scales", (30, 50, 70, 100))
        for scale in scales:
            suite = generate_suite("toolext", seed=seed, scale=scale, **params)
            per_run: list[float] = []
            descriptors = 0
            with tempfile.TemporaryDirectory(prefix="toolext-") as tmp:
                skills_dir = Path(tmp)
                _write_skills(suite.skills, skills_dir)
                for _ in range(runs):
                    outcome = _eval_toolext(suite, skills_dir)
                    per_run.append(outcome["success_pct"])
                    descriptors = outcome["descriptors"]
            report.conditions.append(condition_over_runs(f"scale-{scale}", "success_pct", per_run))
            report.artifacts[f"scale-{scale}"] = {"descriptors": descriptors, "queries": len(suite.instances)}
        return report

    suite = generate_suite(name, seed=seed, **params)
    report.artifacts["instances"] = len(suite.instances)

    if name == "route":
        per_condition: dict[str, list[float]] = {}
        for _ in range(runs):
            for category, accuracy in _eval_route(suite).items():
                per_condition.setdefault(category, []).append(accuracy)
        for category in sorted(per_condition):
            report.conditions.append(
                condition_over_runs(category, "accuracy_pct", per_condition[category])
            )
        return report

    if name == "sensorbind":
        per_condition = {}
        with tempfile.TemporaryDirectory(prefix="sensorbind-") as tmp:
            skills_dir = Path(tmp)
            _write_skills(suite.skills, skills_dir)
            for _ in range(runs):
                for category, accuracy in _eval_sensorbind(suite, skills_dir).items():
                    per_condition.setdefault(category, []).append(accuracy)
        for category in sorted(per_condition):
            report.conditions.append(
                condition_over_runs(category, "accuracy_pct", per_condition[category])
            )
        return report

    if name == "taskparser":
        per_condition = {}
        turn_counts = {"easy": 0, "hard": 0}
        for instance in suite.instances:
            turn_counts[instance.category] += len(instance.turns)
        report.artifacts["turns"] = turn_counts
        for _ in range(runs):
            for category, accuracy in _eval_taskparser(suite).items():
                per_condition.setdefault(category, []).append(accuracy)
        for category in sorted(per_condition):
            report.conditions.append(
                condition_over_runs(category, "accuracy_pct", per_condition[category])
            )
        return report

    if name == "fastthinking":
        metric_runs: dict[str, list[float]] = {}
        detail: dict[str, Any] = {}
        for _ in range(runs):
            outcome = _eval_fastthinking(suite)
            detail = outcome
            for variant in ("fastpath", "rawtext"):
                metric_runs.setdefault(f"{variant}-top1", []).append(outcome[variant]["top1_pct"])
                metric_runs.setdefault(f"{variant}-rank1-dist", []).append(outcome[variant]["rank1_mean"])
                metric_runs.setdefault(f"{variant}-rank2-dist", []).append(outcome[variant]["rank2_mean"])
                metric_runs.setdefault(f"{variant}-rank-margin", []).append(outcome[variant]["margin_mean"])
        for key in sorted(metric_runs):
            metric = "percent" if key.endswith("top1") else "distance"
            report.conditions.append(condition_over_runs(key, metric, metric_runs[key]))
        report.artifacts["within_run_std"] = {
            variant: {"rank1_std": detail[variant]["rank1_std"], "rank2_std": detail[variant]["rank2_std"]}
            for variant in ("fastpath", "rawtext")
        }
        if include_latency:
            slow_runs: list[float] = []
            fast_runs: list[float] = []
            for _ in range(runs):
                slow_ms, fast_ms = measure_latency_pair(suite)
                slow_runs.append(slow_ms)
                fast_runs.append(fast_ms)
            report.conditions.append(condition_over_runs("latency-slow", "ms", slow_runs))
            report.conditions.append(condition_over_runs("latency-fast", "ms", fast_runs))
            ratio = statistics.median(fast_runs) / statistics.median(slow_runs)
            report.conditions.append(Condition("latency-ratio", "ratio", round(ratio, 6), 0.0))
        return report

    raise ValueError(f"unknown suite: {name!r}")
