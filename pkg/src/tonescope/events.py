"""Per-session event bus: one sequencer, many bounded subscribers.

The pipeline must never wait on a viewer, so emit() is non-blocking: a
subscriber whose queue fills up is disconnected (it gets an out-of-band
notice with seq -1, then end-of-stream) while everyone else continues.
"""
from __future__ import annotations

import queue
import threading
import time
from dataclasses import dataclass
from typing import Iterator

DEFAULT_SUBSCRIBER_QUEUE = 1024

_SENTINEL = object()


@dataclass(frozen=True)
class SessionEvent:
    session_id: str
    seq: int
    kind: str  # prosody | keyword_bar | snapshot | suggestion | transcript | status
    payload: dict
    emitted_at_ms: float

    def to_wire(self) -> dict:
        return {"seq": self.seq, "kind": self.kind, **self.payload}


class Subscription:
    def __init__(self, session_id: str, maxsize: int):
        self.session_id = session_id
        self._queue: queue.Queue = queue.Queue(maxsize=maxsize)
        self.dropped = False  # set when disconnected for falling behind

    def get(self, timeout: float | None = None) -> SessionEvent | None:
        """Next event, or None once the stream has ended for this subscriber.

        Raises queue.Empty when a timeout is given and nothing arrives.
        The dropped flag terminates the stream even if the end-of-stream
        marker could not be queued (pathologically tiny queues).
        """
        deadline = None if timeout is None else time.monotonic() + timeout
        while True:
            try:
                item = self._queue.get(timeout=0.25)
            except queue.Empty:
                if self.dropped and self._queue.empty():
                    return None
                if deadline is not None and time.monotonic() >= deadline:
                    raise
                continue
            return None if item is _SENTINEL else item

    def __iter__(self) -> Iterator[SessionEvent]:
        while True:
            item = self.get()
            if item is None:
                return
            yield item


class EventBus:
    def __init__(self, session_id: str, subscriber_queue: int = DEFAULT_SUBSCRIBER_QUEUE):
        self.session_id = session_id
        self._subscriber_queue = subscriber_queue
        self._lock = threading.Lock()
        self._seq = 0
        self._subscribers: list[Subscription] = []
        self._closed = False
        self._terminal: SessionEvent | None = None

    def emit(self, kind: str, payload: dict) -> SessionEvent | None:
        """Sequence and fan out one event. No-op after close."""
        with self._lock:
            if self._closed:
                return None
            event = SessionEvent(
                session_id=self.session_id,
                seq=self._seq,
                kind=kind,
                payload=payload,
                emitted_at_ms=time.time() * 1000.0,
            )
            self._seq += 1
            if kind == "status" and payload.get("state") == "ended":
                self._terminal = event
            for sub in list(self._subscribers):
                try:
                    sub._queue.put_nowait(event)
                except queue.Full:
                    self._disconnect(sub)
            return event

    def _disconnect(self, sub: Subscription):
        # caller holds the lock
        if sub in self._subscribers:
            self._subscribers.remove(sub)
        sub.dropped = True
        try:
            while True:
                sub._queue.get_nowait()
        except queue.Empty:
            pass
        notice = SessionEvent(
            session_id=self.session_id,
            seq=-1,  # out-of-band: not part of the session sequence
            kind="status",
            payload={"state": "ended", "detail": "disconnected: subscriber queue overflow"},
            emitted_at_ms=time.time() * 1000.0,
        )
        try:
            sub._queue.put_nowait(notice)
            sub._queue.put_nowait(_SENTINEL)
        except queue.Full:
            pass  # dropped flag alone ends the stream for the reader

    def subscribe(self, maxsize: int | None = None) -> Subscription:
        """Attach a subscriber receiving events from now on, in seq order.

        Subscribing after session end yields only the terminal status event.
        """
        sub = Subscription(self.session_id, maxsize or self._subscriber_queue)
        with self._lock:
            if self._closed:
                if self._terminal is not None:
                    sub._queue.put_nowait(self._terminal)
                sub._queue.put_nowait(_SENTINEL)
            else:
                self._subscribers.append(sub)
        return sub

    def close(self):
        """End the stream: all current subscribers see end-of-stream."""
        with self._lock:
            self._closed = True
            for sub in list(self._subscribers):
                try:
                    sub._queue.put_nowait(_SENTINEL)
                except queue.Full:
                    self._disconnect(sub)
            self._subscribers.clear()


class DropOldestQueue:
    """Bounded handoff between pipeline stages: the producer never blocks,
    overflow evicts the oldest item and counts the drop."""

    def __init__(self, maxsize: int):
        self.maxsize = maxsize
        self.dropped = 0
        self._items: list = []
        self._cond = threading.Condition()
        self._closed = False

    def put(self, item):
        with self._cond:
            if self._closed:
                return
            if len(self._items) >= self.maxsize:
                self._items.pop(0)
                self.dropped += 1
            self._items.append(item)
            self._cond.notify()

    def close(self):
        with self._cond:
            self._closed = True
            self._cond.notify_all()

    def get(self, timeout: float | None = None):
        """Next item, or None when the queue is closed and drained."""
        with self._cond:
            while not self._items and not self._closed:
                if not self._cond.wait(timeout=timeout):
                    raise TimeoutError("queue get timed out")
            if self._items:
                return self._items.pop(0)
            return None

    def __iter__(self):
        while True:
            item = self.get()
            if item is None:
                return
            yield item
