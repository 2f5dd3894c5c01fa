"""Sensor & tool manager: supervised per-sensor workers and the process table.

One worker owns one bound sensor. A worker is an isolated thread that
subscribes to its sensor's event stream, runs the bound skill's actions on
each trigger, and refreshes a heartbeat every loop. The scheduler probes
liveness (thread alive + heartbeat fresh) on every tick, restarts dead
workers, and caps restarts per period with exponential backoff so a
crash-looping skill cannot livelock the table.

The table is persisted atomically on every mutation; ``recover`` reloads
it at startup and remounts every binding with a fresh worker id.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

from .core import (
    ActionSpec,
    ProcessTableEntry,
    SensorId,
    SkillDescriptor,
    WorkerStatus,
    new_id,
    now,
)
from .errors import (
    AlreadyBound,
    CorruptTable,
    NotBound,
    PersistenceFailure,
    RobotUnreachable,
    SpawnFailure,
    UnknownSkill,
)

logger = logging.getLogger(__name__)

TABLE_VERSION = 1


@dataclass
class SchedulerConfig:
    period_ms: float = 1000.0
    persistence_path: str | Path | None = None
    max_restart_burst: int = 5

    def __post_init__(self) -> None:
        if self.period_ms <= 0:
            raise ValueError("period must be positive")

    @property
    def period_s(self) -> float:
        return self.period_ms / 1000.0


@dataclass(frozen=True)
class RestartEvent:
    sensor: SensorId
    old_worker_id: str
    new_worker_id: str
    at: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": "restart",
            "sensor": self.sensor.value,
            "old_worker_id": self.old_worker_id,
            "new_worker_id": self.new_worker_id,
            "at": self.at,
        }


@dataclass(frozen=True)
class BackoffEvent:
    sensor: SensorId
    until: float
    level: int
    at: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": "backoff",
            "sensor": self.sensor.value,
            "until": self.until,
            "level": self.level,
            "at": self.at,
        }


def substitute_params(args: Mapping[str, Any], params: Mapping[str, Any]) -> dict[str, Any]:
    """Replace "{name}" placeholders in string arg values with param values."""
    out: dict[str, Any] = {}
    for key, value in args.items():
        if isinstance(value, str):
            for pname, pvalue in params.items():
                value = value.replace("{%s}" % pname, str(pvalue))
        out[key] = value
    return out


def run_skill(skill: SkillDescriptor, robot, params: Mapping[str, Any] | None = None) -> None:
    """Execute a skill's action list against the robot, in order."""
    params = dict(params or {})
    for action in skill.actions:
        robot.do(action.op, substitute_params(action.args, params))


class _Worker:
    """One supervised unit of execution bound to a sensor."""

    def __init__(
        self,
        sensor: SensorId,
        skill_name: str,
        robot,
        skill_lookup: Callable[[str], SkillDescriptor | None],
        heartbeat_interval_s: float,
        fault_injector: Callable[[SensorId], None] | None = None,
    ) -> None:
        self.worker_id = new_id("w-")
        self.sensor = sensor
        self.skill_name = skill_name
        self._robot = robot
        self._skill_lookup = skill_lookup
        self._interval = max(0.01, heartbeat_interval_s)
        self._fault_injector = fault_injector
        self.heartbeat_at = now()
        self._stop = threading.Event()
        self._sub = robot.subscribe(sensor)
        self._thread = threading.Thread(
            target=self._run, name=f"worker-{sensor.value}-{self.worker_id}", daemon=True
        )

    def start(self) -> None:
        try:
            self._thread.start()
        except RuntimeError as exc:
            raise SpawnFailure(f"cannot start worker for {self.sensor.value}: {exc}") from exc

    def _run(self) -> None:
        try:
            if self._fault_injector is not None:
                self._fault_injector(self.sensor)  # may raise: crash-loop injection
            while not self._stop.is_set():
                self.heartbeat_at = now()
                event = self._sub.get(timeout=self._interval)
                if event is None:
                    continue
                if self._stop.is_set():
                    break
                self._fire(event.event_id)
        except Exception:
            # A worker crash must never take down the scheduler; the stale
            # thread is observed by the next liveness probe.
            logger.exception("worker %s for %s died", self.worker_id, self.sensor.value)
        finally:
            self._sub.close()

    def _fire(self, event_id: str) -> None:
        skill = self._skill_lookup(self.skill_name)
        if skill is None:
            logger.warning("skill %s vanished from inventory; trigger %s dropped", self.skill_name, event_id)
            return
        try:
            run_skill(skill, self._robot)
        except RobotUnreachable as exc:
            logger.warning("trigger %s on %s failed: %s", event_id, self.sensor.value, exc)

    def stop(self, timeout: float = 2.0) -> None:
        """Graceful termination: no trigger fires after this returns."""
        self._stop.set()
        self._sub.close()
        if self._thread.is_alive():
            self._thread.join(timeout=timeout)

    def kill(self) -> None:
        """Abrupt termination for fault injection: table entry stays behind."""
        self._stop.set()
        self._sub.close()
        self._thread.join(timeout=2.0)

    def is_alive(self) -> bool:
        return self._thread.is_alive()

    def probe(self, period_s: float) -> bool:
        """Liveness: thread running and heartbeat younger than 2 periods."""
        if not self._thread.is_alive():
            # Not yet started counts as alive-pending only before start();
            # here every worker is started by the scheduler.
            return False
        return (now() - self.heartbeat_at) <= 2.0 * period_s


@dataclass
class _Supervision:
    restart_times: list[float] = field(default_factory=list)
    backoff_until: float = 0.0
    backoff_level: int = 0
    announced_backoff: bool = False


class Scheduler:
    """Owns the process table; bind/update/unbind/tick/recover are serialized."""

    def __init__(
        self,
        robot,
        skill_lookup: Callable[[str], SkillDescriptor | None],
        config: SchedulerConfig | None = None,
    ) -> None:
        self.robot = robot
        self.skill_lookup = skill_lookup
        self.config = config or SchedulerConfig()
        self._lock = threading.RLock()
        self._workers: dict[SensorId, _Worker] = {}
        self._all_workers: list[_Worker] = []
        self._skills: dict[SensorId, str] = {}
        self._supervision: dict[SensorId, _Supervision] = {}
        self.events: list[RestartEvent | BackoffEvent] = []
        self._event_listeners: list[Callable[[RestartEvent | BackoffEvent], None]] = []
        self._tick_thread: threading.Thread | None = None
        self._tick_stop = threading.Event()
        # Test hook: raises inside a freshly spawned worker (crash-loop injection).
        self.fault_injector: Callable[[SensorId], None] | None = None

    # -- helpers ------------------------------------------------------------

    def add_event_listener(self, fn: Callable[[RestartEvent | BackoffEvent], None]) -> None:
        self._event_listeners.append(fn)

    def _emit(self, event: RestartEvent | BackoffEvent) -> None:
        self.events.append(event)
        for listener in list(self._event_listeners):
            listener(event)

    def _require_skill(self, skill_name: str) -> SkillDescriptor:
        skill = self.skill_lookup(skill_name)
        if skill is None:
            raise UnknownSkill(f"skill not in inventory: {skill_name!r}")
        return skill

    def _spawn(self, sensor: SensorId, skill_name: str) -> _Worker:
        worker = _Worker(
            sensor,
            skill_name,
            self.robot,
            self.skill_lookup,
            heartbeat_interval_s=self.config.period_s / 4.0,
            fault_injector=self.fault_injector,
        )
        worker.start()
        self._all_workers.append(worker)
        return worker

    # -- table operations ------------------------------------------------------

    def bind(self, sensor: SensorId | str, skill_name: str) -> ProcessTableEntry:
        if isinstance(sensor, str):
            sensor = SensorId.parse(sensor)
        with self._lock:
            if sensor in self._skills:
                raise AlreadyBound(f"sensor already bound: {sensor.value}")
            self._require_skill(skill_name)
            worker = self._spawn(sensor, skill_name)
            self._workers[sensor] = worker
            self._skills[sensor] = skill_name
            self._supervision[sensor] = _Supervision()
            self._persist()
            return self._entry_for(sensor)

    def update(self, sensor: SensorId | str, skill_name: str) -> ProcessTableEntry:
        if isinstance(sensor, str):
            sensor = SensorId.parse(sensor)
        with self._lock:
            if sensor not in self._skills:
                raise NotBound(f"sensor not bound: {sensor.value}")
            self._require_skill(skill_name)
            old = self._workers.pop(sensor, None)
            if old is not None:
                old.stop()  # old binding never fires after return
            worker = self._spawn(sensor, skill_name)
            self._workers[sensor] = worker
            self._skills[sensor] = skill_name
            self._supervision[sensor] = _Supervision()
            self._persist()
            return self._entry_for(sensor)

    def unbind(self, sensor: SensorId | str) -> None:
        if isinstance(sensor, str):
            sensor = SensorId.parse(sensor)
        with self._lock:
            if sensor not in self._skills:
                raise NotBound(f"sensor not bound: {sensor.value}")
            worker = self._workers.pop(sensor, None)
            if worker is not None:
                worker.stop()
            del self._skills[sensor]
            self._supervision.pop(sensor, None)
            self._persist()

    # -- supervision ----------------------------------------------------------

    def tick(self) -> list[RestartEvent | BackoffEvent]:
        """Probe every binding; restart dead workers within the burst budget."""
        emitted: list[RestartEvent | BackoffEvent] = []
        with self._lock:
            at = now()
            period = self.config.period_s
            for sensor, skill_name in list(self._skills.items()):
                worker = self._workers.get(sensor)
                if worker is not None and worker.probe(period):
                    continue
                sup = self._supervision.setdefault(sensor, _Supervision())
                if at < sup.backoff_until:
                    continue  # still backing off
                sup.restart_times = [t for t in sup.restart_times if at - t <= period]
                if len(sup.restart_times) >= self.config.max_restart_burst:
                    sup.backoff_level += 1
                    sup.backoff_until = at + period * (2.0**sup.backoff_level)
                    sup.restart_times.clear()
                    event: RestartEvent | BackoffEvent = BackoffEvent(
                        sensor=sensor, until=sup.backoff_until, level=sup.backoff_level, at=at
                    )
                    self._emit(event)
                    emitted.append(event)
                    continue
                old_id = worker.worker_id if worker is not None else "?"
                if worker is not None:
                    worker.stop(timeout=0.2)  # a wedged-but-alive thread must not linger
                new_worker = self._spawn(sensor, skill_name)
                self._workers[sensor] = new_worker
                sup.restart_times.append(at)
                event = RestartEvent(
                    sensor=sensor, old_worker_id=old_id, new_worker_id=new_worker.worker_id, at=at
                )
                self._emit(event)
                emitted.append(event)
            if emitted:
                self._persist()
        return emitted

    def recover(self) -> list[ProcessTableEntry]:
        """Load the persisted table and remount every binding, all Active."""
        entries = self._load_table()
        remounted: list[ProcessTableEntry] = []
        with self._lock:
            for sensor, skill_name in entries:
                worker = self._spawn(sensor, skill_name)
                self._workers[sensor] = worker
                self._skills[sensor] = skill_name
                self._supervision[sensor] = _Supervision()
                remounted.append(self._entry_for(sensor))
            if remounted:
                self._persist()
        return remounted

    def kill_worker(self, sensor: SensorId | str) -> None:
        """Fault-injection hook: terminate the worker, leaving its entry."""
        if isinstance(sensor, str):
            sensor = SensorId.parse(sensor)
        worker = self._workers.get(sensor)
        if worker is None:
            raise NotBound(f"sensor not bound: {sensor.value}")
        worker.kill()

    # -- periodic ticking ---------------------------------------------------------

    def start(self) -> None:
        if self._tick_thread is not None:
            return
        self._tick_stop.clear()

        def loop() -> None:
            while not self._tick_stop.wait(self.config.period_s):
                try:
                    self.tick()
                except Exception:
                    logger.exception("scheduler tick failed")

        self._tick_thread = threading.Thread(target=loop, name="stm-scheduler", daemon=True)
        self._tick_thread.start()

    def stop(self) -> None:
        self._tick_stop.set()
        if self._tick_thread is not None:
            self._tick_thread.join(timeout=2.0)
            self._tick_thread = None
        with self._lock:
            for worker in self._workers.values():
                worker.stop()

    # -- observation -----------------------------------------------------------

    def _entry_for(self, sensor: SensorId) -> ProcessTableEntry:
        worker = self._workers.get(sensor)
        status = (
            WorkerStatus.ACTIVE
            if worker is not None and worker.probe(self.config.period_s)
            else WorkerStatus.INACTIVE
        )
        return ProcessTableEntry(
            sensor=sensor,
            worker_id=worker.worker_id if worker is not None else "?",
            bound_skill=self._skills[sensor],
            status=status,
            heartbeat_at=worker.heartbeat_at if worker is not None else 0.0,
        )

    def snapshot(self) -> list[ProcessTableEntry]:
        """Probe-derived view: status is Inactive iff the liveness probe fails."""
        with self._lock:
            return [self._entry_for(sensor) for sensor in self._skills]

    def audit_workers(self) -> dict[SensorId, int]:
        """Live-worker count per sensor over every worker ever spawned.

        The single-owner invariant: no sensor may ever show more than one
        live worker, whatever interleaving of bind/update/unbind/tick ran.
        """
        counts: dict[SensorId, int] = {}
        with self._lock:
            for worker in self._all_workers:
                if worker.is_alive():
                    counts[worker.sensor] = counts.get(worker.sensor, 0) + 1
        return counts

    # -- persistence ---------------------------------------------------------

    def _persist(self) -> None:
        path = self.config.persistence_path
        if path is None:
            return
        path = Path(path)
        doc = {
            "version": TABLE_VERSION,
            "entries": [self._entry_for(sensor).to_dict() for sensor in self._skills],
        }
        tmp = path.with_suffix(path.suffix + ".tmp")
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(tmp, "w", encoding="utf-8") as handle:
                json.dump(doc, handle)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, path)
        except OSError as exc:
            raise PersistenceFailure(f"cannot persist process table: {exc}") from exc

    def _load_table(self) -> list[tuple[SensorId, str]]:
        path = self.config.persistence_path
        if path is None or not Path(path).exists():
            return []
        try:
            with open(path, "r", encoding="utf-8") as handle:
                doc = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise CorruptTable(f"process table unreadable: {path}: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("version") != TABLE_VERSION:
            raise CorruptTable(f"process table has unsupported version: {path}")
        entries_raw = doc.get("entries")
        if not isinstance(entries_raw, list):
            raise CorruptTable(f"process table missing entries: {path}")
        from .errors import UnknownSensor

        entries: list[tuple[SensorId, str]] = []
        try:
            for item in entries_raw:
                entries.append((SensorId.parse(item["sensor"]), str(item["skill"])))
        except (KeyError, TypeError, UnknownSensor) as exc:
            raise CorruptTable(f"process table entry malformed: {path}: {exc}") from exc
        return entries
