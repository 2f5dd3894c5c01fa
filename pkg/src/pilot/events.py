"""Merged event stream: turns, restarts, sensor firings, robot actions."""

from __future__ import annotations

import queue
import threading
from typing import Any

from .core import now


class EventBus:
    """Fan-out of orchestrator events to per-subscriber queues."""

    def __init__(self, history_limit: int = 1000) -> None:
        self._lock = threading.Lock()
        self._subs: list["queue.Queue[dict[str, Any] | None]"] = []
        self.history: list[dict[str, Any]] = []
        self._history_limit = history_limit

    def publish(self, event_type: str, **data: Any) -> dict[str, Any]:
        event = {"type": event_type, "at": now(), **data}
        with self._lock:
            self.history.append(event)
            if len(self.history) > self._history_limit:
                del self.history[: -self._history_limit]
            subs = list(self._subs)
        for sub in subs:
            sub.put(event)
        return event

    def subscribe(self) -> "queue.Queue[dict[str, Any] | None]":
        sub: "queue.Queue[dict[str, Any] | None]" = queue.Queue()
        with self._lock:
            self._subs.append(sub)
        return sub

    def unsubscribe(self, sub: "queue.Queue[dict[str, Any] | None]") -> None:
        with self._lock:
            if sub in self._subs:
                self._subs.remove(sub)
        sub.put(None)
