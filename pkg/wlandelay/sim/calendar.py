"""Pending-event calendar."""

import heapq
from typing import Any, NamedTuple


class ScheduledEvent(NamedTuple):
    """An event popped from the calendar."""

    time: float
    sequence: int
    payload: Any


class EventCalendar:
    """Priority queue of timestamped events.

    Events pop in nondecreasing time; equal times pop by priority class, then in
    insertion order.
    """

    def __init__(self) -> None:
        self._heap: list[tuple[float, int, int, Any]] = []
        self._sequence = 0

    def push(self, time: float, payload: Any, priority: int = 0) -> int:
        """Schedule payload at time and return its insertion sequence number."""
        sequence = self._sequence
        self._sequence += 1
        heapq.heappush(self._heap, (time, priority, sequence, payload))
        return sequence

    def pop(self) -> ScheduledEvent:
        """Remove and return the earliest event."""
        if not self._heap:
            raise IndexError("pop from an empty calendar")
        time, _, sequence, payload = heapq.heappop(self._heap)
        return ScheduledEvent(time, sequence, payload)

    def peek_time(self) -> float:
        """Timestamp of the earliest event, or +inf when empty."""
        return self._heap[0][0] if self._heap else float("inf")

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)
