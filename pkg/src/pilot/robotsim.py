"""Simulated robot: actuator log, sensor-event fan-out, emotion templates.

The append-only action log is the system-wide test oracle: every actuator
request becomes exactly one logged action with a gap-free sequence number.
"""

import queue
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Mapping

from .core import EmotionLabel, RobotOp, SensorId, new_id, now
from .errors import RobotUnreachable, UnknownSensor

SPEAK_CHARS_PER_SECOND = 15.0


@dataclass(frozen=True)
class RobotAction:
    seq: int
    at: float
    op: RobotOp
    args: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"seq": self.seq, "at": self.at, "op": self.op.value, "args": dict(self.args)}


@dataclass(frozen=True)
class MotionTemplate:
    emotion: EmotionLabel
    led_color: str
    head: tuple[float, float, float]  # pitch, yaw, roll degrees
    arms: tuple[float, float]  # left, right degrees


# One template per emotion; LED colors chosen for discriminability.
MOTION_TEMPLATES: dict[EmotionLabel, MotionTemplate] = {
    EmotionLabel.HAPPINESS: MotionTemplate(EmotionLabel.HAPPINESS, "yellow", (-10.0, 0.0, 5.0), (60.0, 60.0)),
    EmotionLabel.ANGER: MotionTemplate(EmotionLabel.ANGER, "red", (10.0, 0.0, 0.0), (80.0, 80.0)),
    EmotionLabel.SADNESS: MotionTemplate(EmotionLabel.SADNESS, "blue", (25.0, 0.0, 0.0), (0.0, 0.0)),
    EmotionLabel.FEAR: MotionTemplate(EmotionLabel.FEAR, "purple", (15.0, -20.0, 0.0), (20.0, 20.0)),
    EmotionLabel.DISGUST: MotionTemplate(EmotionLabel.DISGUST, "green", (5.0, 30.0, -5.0), (30.0, 10.0)),
    EmotionLabel.SURPRISE: MotionTemplate(EmotionLabel.SURPRISE, "cyan", (-20.0, 0.0, 0.0), (90.0, 90.0)),
    EmotionLabel.CONTEMPT: MotionTemplate(EmotionLabel.CONTEMPT, "orange", (0.0, 15.0, 10.0), (10.0, 40.0)),
    EmotionLabel.NEUTRAL: MotionTemplate(EmotionLabel.NEUTRAL, "white", (0.0, 0.0, 0.0), (45.0, 45.0)),
}


@dataclass(frozen=True)
class SensorEvent:
    sensor: SensorId
    event_id: str
    at: float

    def to_dict(self) -> dict[str, Any]:
        return {"sensor": self.sensor.value, "event_id": self.event_id, "at": self.at}


class Subscription:
    """Per-subscriber event queue; events arrive in injection order."""

    def __init__(self, owner: "RobotSimulator", sensor: SensorId | None) -> None:
        self._owner = owner
        self.sensor = sensor
        self._queue: "queue.Queue[SensorEvent | None]" = queue.Queue()
        self._closed = False

    def push(self, event: SensorEvent) -> None:
        if self.sensor is None or event.sensor is self.sensor:
            self._queue.put(event)

    def get(self, timeout: float | None = None) -> SensorEvent | None:
        try:
            return self._queue.get(timeout=timeout)
        except queue.Empty:
            return None

    def close(self) -> None:
        if not self._closed:
            self._closed = True
            self._owner._drop_subscription(self)
            self._queue.put(None)  # unblock any waiter


class RobotSimulator:
    """In-process simulated robot; thread-safe."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._actions: list[RobotAction] = []
        self._next_seq = 1
        self._subs: list[Subscription] = []
        self._action_listeners: list[Callable[[RobotAction], None]] = []
        self._event_listeners: list[Callable[[SensorEvent], None]] = []
        self.online = True

    # -- actuators --------------------------------------------------------

    def _append(self, op: RobotOp, args: Mapping[str, Any]) -> RobotAction:
        with self._lock:
            action = RobotAction(seq=self._next_seq, at=now(), op=op, args=dict(args))
            self._next_seq += 1
            self._actions.append(action)
        for listener in list(self._action_listeners):
            listener(action)
        return action

    def do(self, op: RobotOp | str, args: Mapping[str, Any] | None = None) -> RobotAction:
        if not self.online:
            raise RobotUnreachable("simulated robot is offline")
        if isinstance(op, str):
            try:
                op = RobotOp(op)
            except ValueError:
                raise ValueError(f"unknown robot op: {op!r}") from None
        args = dict(args or {})
        if op is RobotOp.SPEAK:
            text = args.get("text")
            if not isinstance(text, str) or not text:
                raise ValueError("speak requires non-empty text")
            rate = float(args.get("rate", 1.0))
            if rate <= 0:
                raise ValueError("speak rate must be positive")
            args["rate"] = rate
            args["duration_s"] = len(text) / SPEAK_CHARS_PER_SECOND / rate
        elif op is RobotOp.CAPTURE_PHOTO:
            args.setdefault("image", f"photo-{new_id()}.sim")
        return self._append(op, args)

    def motion_bundle(self, emotion: EmotionLabel | str) -> list[RobotAction]:
        """Expand an emotion into its led+head+arms+display template actions."""
        if not self.online:
            raise RobotUnreachable("simulated robot is offline")
        if isinstance(emotion, str):
            emotion = EmotionLabel.parse(emotion)
        template = MOTION_TEMPLATES[emotion]
        pitch, yaw, roll = template.head
        left, right = template.arms
        return [
            self._append(RobotOp.LED, {"color": template.led_color}),
            self._append(RobotOp.MOVE_HEAD, {"pitch": pitch, "yaw": yaw, "roll": roll}),
            self._append(RobotOp.MOVE_ARMS, {"left": left, "right": right}),
            self._append(RobotOp.DISPLAY_EMOTION, {"emotion": emotion.value}),
        ]

    # -- sensors ------------------------------------------------------------

    def inject_sensor_event(self, sensor: SensorId | str) -> str:
        if isinstance(sensor, str):
            sensor = SensorId.parse(sensor)  # raises UnknownSensor
        event = SensorEvent(sensor=sensor, event_id=new_id("evt-"), at=now())
        with self._lock:
            subs = list(self._subs)
        for sub in subs:
            sub.push(event)
        for listener in list(self._event_listeners):
            listener(event)
        return event.event_id

    def subscribe(self, sensor: SensorId | None = None) -> Subscription:
        sub = Subscription(self, sensor)
        with self._lock:
            self._subs.append(sub)
        return sub

    def _drop_subscription(self, sub: Subscription) -> None:
        with self._lock:
            if sub in self._subs:
                self._subs.remove(sub)

    # -- observation ----------------------------------------------------------

    def action_log(self, since_seq: int = 0) -> list[RobotAction]:
        with self._lock:
            return [a for a in self._actions if a.seq > since_seq]

    def add_action_listener(self, fn: Callable[[RobotAction], None]) -> None:
        self._action_listeners.append(fn)

    def add_event_listener(self, fn: Callable[[SensorEvent], None]) -> None:
        self._event_listeners.append(fn)


# ---------------------------------------------------------------------------
# Clients: the rest of the system talks to the robot through this surface
# ---------------------------------------------------------------------------

class LocalRobotClient:
    """Direct in-process client around a simulator instance."""

    def __init__(self, sim: RobotSimulator) -> None:
        self.sim = sim

    def do(self, op: RobotOp | str, args: Mapping[str, Any] | None = None) -> RobotAction:
        try:
            return self.sim.do(op, args)
        except ValueError as exc:
            raise RobotUnreachable(f"robot rejected request: {exc}") from exc

    def speak(self, text: str, rate: float, emotion: EmotionLabel) -> RobotAction:
        return self.do(RobotOp.SPEAK, {"text": text, "rate": rate, "emotion": emotion.value})

    def motion_bundle(self, emotion: EmotionLabel) -> None:
        self.sim.motion_bundle(emotion)

    def inject_sensor_event(self, sensor: SensorId | str) -> str:
        return self.sim.inject_sensor_event(sensor)

    def action_log(self, since_seq: int = 0) -> list[RobotAction]:
        return self.sim.action_log(since_seq)

    def subscribe(self, sensor: SensorId | None = None) -> Subscription:
        return self.sim.subscribe(sensor)


class HttpRobotClient:
    """HTTP client for a remotely hosted simulator."""

    def __init__(self, base_url: str, client: Any = None, timeout_s: float = 10.0) -> None:
        import httpx

        self.base_url = base_url.rstrip("/")
        self._client = client or httpx.Client(timeout=timeout_s)

    def _post(self, path: str, body: Mapping[str, Any]) -> Any:
        import httpx

        try:
            response = self._client.post(f"{self.base_url}{path}", json=dict(body))
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise RobotUnreachable(f"robot endpoint failed: {exc}") from exc
        return response.json()

    def do(self, op: RobotOp | str, args: Mapping[str, Any] | None = None) -> dict:
        op_value = op.value if isinstance(op, RobotOp) else op
        return self._post(f"/api/{op_value}", args or {})

    def speak(self, text: str, rate: float, emotion: EmotionLabel) -> dict:
        return self.do(RobotOp.SPEAK, {"text": text, "rate": rate, "emotion": emotion.value})

    def motion_bundle(self, emotion: EmotionLabel) -> None:
        self._post("/api/motion_bundle", {"emotion": emotion.value})

    def inject_sensor_event(self, sensor: SensorId | str) -> str:
        sensor_value = sensor.value if isinstance(sensor, SensorId) else sensor
        return self._post(f"/api/sensors/{sensor_value}/trigger", {})["event_id"]

    def action_log(self, since_seq: int = 0) -> list[dict]:
        import httpx

        try:
            response = self._client.get(f"{self.base_url}/api/actions", params={"since": since_seq})
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise RobotUnreachable(f"robot endpoint failed: {exc}") from exc
        return response.json()["actions"]

    def subscribe(self, sensor: SensorId | None = None):
        raise NotImplementedError("HTTP sensor streaming requires the SSE reader (see api docs)")


def create_robot_app(sim: RobotSimulator):
    """FastAPI app exposing the simulator's HTTP surface."""
    import json as _json

    from fastapi import FastAPI
    from fastapi.responses import JSONResponse, StreamingResponse
    from fastapi import Request

    app = FastAPI(title="robot-sim")

    @app.post("/api/{op_name}")
    async def actuate(op_name: str, request: Request):
        try:
            body = await request.json()
        except Exception:
            body = {}
        if not isinstance(body, dict):
            return JSONResponse({"error": "body must be a JSON object"}, status_code=400)
        if op_name == "motion_bundle":
            try:
                actions = sim.motion_bundle(str(body.get("emotion")))
            except (ValueError, RobotUnreachable) as exc:
                return JSONResponse({"error": str(exc)}, status_code=400)
            return {"actions": [a.to_dict() for a in actions]}
        try:
            action = sim.do(op_name, body)
        except (ValueError, RobotUnreachable) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        return action.to_dict()

    @app.post("/api/sensors/{sensor_id}/trigger")
    async def trigger(sensor_id: str):
        try:
            event_id = sim.inject_sensor_event(sensor_id)
        except UnknownSensor as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        return {"event_id": event_id}

    @app.get("/api/actions")
    async def actions(since: int = 0):
        return {"actions": [a.to_dict() for a in sim.action_log(since_seq=since)]}

    @app.get("/api/events")
    async def events() -> StreamingResponse:
        sub = sim.subscribe()

        def stream() -> Iterator[str]:
            try:
                while True:
                    event = sub.get(timeout=1.0)
                    if event is None:
                        yield ": keepalive\n\n"
                        continue
                    yield f"data: {_json.dumps(event.to_dict())}\n\n"
            finally:
                sub.close()

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app
