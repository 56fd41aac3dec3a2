"""Shared domain types for LED blink signalling.

LED identities and colors, timed event timelines with step-function
semantics (an event asserts its color until the next event on the same
LED), bitstream helpers, and the timeline CSV codec.

All types are immutable values after construction; they can be shared
freely between threads or processes.
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


class LedModemError(Exception):
    """Base class for errors raised by this package."""


class ParseError(LedModemError):
    """Malformed serialized input. Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class LedId(enum.Enum):
    """The two LEDs of an Ethernet port: link status and port activity."""

    LINK = "LINK"
    ACTIVITY = "ACTIVITY"

    @property
    def sort_order(self) -> int:
        # LINK sorts before ACTIVITY wherever event order must be canonical
        return 0 if self is LedId.LINK else 1


class LedColor(enum.Enum):
    """LED states. OFF is the unique dark state; everything else is lit."""

    OFF = "OFF"
    GREEN = "GREEN"
    AMBER = "AMBER"
    YELLOW = "YELLOW"
    RED = "RED"
    BLUE = "BLUE"

    @property
    def lit(self) -> bool:
        return self is not LedColor.OFF


LIT_COLORS = tuple(c for c in LedColor if c.lit)


@dataclass(frozen=True)
class LedEvent:
    """At ``time_ms`` the given LED switches to ``color`` and holds it
    until the next event on the same LED."""

    time_ms: int
    led: LedId
    color: LedColor

    def __post_init__(self):
        if not isinstance(self.time_ms, int) or self.time_ms < 0:
            raise ValueError(f"event time must be a non-negative integer, got {self.time_ms!r}")

    @property
    def key(self) -> tuple[int, int]:
        return (self.time_ms, self.led.sort_order)


@dataclass(frozen=True)
class LedTimeline:
    """A time-ordered sequence of LED state events over [0, duration_ms).

    Events are normalized on construction: sorted by (time, LED), with
    LINK before ACTIVITY on ties. Duplicate (time, LED) keys and event
    times at or past the duration are rejected. Any LED without an event
    at t=0 starts OFF.
    """

    events: tuple[LedEvent, ...]
    duration_ms: int

    def __post_init__(self):
        if not isinstance(self.duration_ms, int) or self.duration_ms < 0:
            raise ValueError(f"duration_ms must be a non-negative integer, got {self.duration_ms!r}")
        events = tuple(sorted(self.events, key=lambda e: e.key))
        seen: set[tuple[int, int]] = set()
        for ev in events:
            if ev.time_ms >= self.duration_ms:
                raise ValueError(
                    f"event at t={ev.time_ms} is outside the timeline duration {self.duration_ms}"
                )
            if ev.key in seen:
                raise ValueError(f"duplicate event for {ev.led.value} at t={ev.time_ms}")
            seen.add(ev.key)
        object.__setattr__(self, "events", events)

    @classmethod
    def empty(cls, duration_ms: int = 0) -> "LedTimeline":
        return cls(events=(), duration_ms=duration_ms)

    @cached_property
    def _per_led(self) -> dict[LedId, tuple[list[int], list[LedColor]]]:
        table: dict[LedId, tuple[list[int], list[LedColor]]] = {
            led: ([], []) for led in LedId
        }
        for ev in self.events:
            times, colors = table[ev.led]
            times.append(ev.time_ms)
            colors.append(ev.color)
        return table

    def events_for(self, led: LedId) -> tuple[list[int], list[LedColor]]:
        """Sorted event times and colors for one LED (parallel lists)."""
        return self._per_led[led]

    def state_at(self, led: LedId, t_ms: int) -> LedColor:
        """Color asserted at t_ms: latest event with time <= t_ms, else OFF."""
        if not 0 <= t_ms < self.duration_ms:
            raise ValueError(
                f"t_ms={t_ms} out of range [0, {self.duration_ms})"
            )
        times, colors = self._per_led[led]
        i = bisect_right(times, t_ms)
        return colors[i - 1] if i else LedColor.OFF

    def lit_anywhere_at(self, t_ms: int) -> bool:
        """True if any LED is lit at t_ms."""
        return any(self.state_at(led, t_ms).lit for led in LedId)

    def segments(self, led: LedId) -> list[tuple[int, int, LedColor]]:
        """Constant-color segments (start, end, color) covering [0, duration)."""
        times, colors = self._per_led[led]
        segs: list[tuple[int, int, LedColor]] = []
        cursor, current = 0, LedColor.OFF
        for t, c in zip(times, colors):
            if t > cursor:
                segs.append((cursor, t, current))
                cursor = t
            current = c
        if cursor < self.duration_ms:
            segs.append((cursor, self.duration_ms, current))
        return segs


def timeline_state_at(timeline: LedTimeline, led: LedId, t_ms: int) -> LedColor:
    """Module-level alias for LedTimeline.state_at."""
    return timeline.state_at(led, t_ms)


def timeline_merge(a: LedTimeline, b: LedTimeline) -> LedTimeline:
    """Merge two timelines of equal duration; b's events override a's on
    (time, LED) collisions."""
    if a.duration_ms != b.duration_ms:
        raise ValueError(
            f"cannot merge timelines of different durations ({a.duration_ms} vs {b.duration_ms})"
        )
    merged: dict[tuple[int, int], LedEvent] = {ev.key: ev for ev in a.events}
    for ev in b.events:
        merged[ev.key] = ev
    return LedTimeline(events=tuple(merged.values()), duration_ms=a.duration_ms)


# --- timeline CSV -----------------------------------------------------------
#
# Canonical format (bit-exact, UTF-8, LF line endings):
#   #duration_ms=<N>
#   time_ms,led,color
#   0,LINK,GREEN
#   ...
# The parser additionally skips '#' comment lines between the duration
# line and the header so tools can embed provenance metadata.

TIMELINE_HEADER = "time_ms,led,color"


def timeline_serialize(timeline: LedTimeline) -> str:
    lines = [f"#duration_ms={timeline.duration_ms}", TIMELINE_HEADER]
    for ev in timeline.events:
        lines.append(f"{ev.time_ms},{ev.led.value},{ev.color.value}")
    return "\n".join(lines) + "\n"


def timeline_parse(text: str) -> LedTimeline:
    lines = text.split("\n")
    if not lines or not lines[0].startswith("#duration_ms="):
        raise ParseError("expected '#duration_ms=<N>' on the first line", line=1)
    try:
        duration = int(lines[0].removeprefix("#duration_ms="))
    except ValueError:
        raise ParseError(f"bad duration {lines[0]!r}", line=1) from None

    idx = 1
    while idx < len(lines) and lines[idx].startswith("#"):
        idx += 1
    if idx >= len(lines) or lines[idx] != TIMELINE_HEADER:
        raise ParseError(f"expected header {TIMELINE_HEADER!r}", line=idx + 1)

    events: list[LedEvent] = []
    prev_key: tuple[int, int] | None = None
    for lineno, row in enumerate(lines[idx + 1 :], start=idx + 2):
        if row == "":
            continue
        parts = row.split(",")
        if len(parts) != 3:
            raise ParseError(f"expected 3 fields, got {len(parts)}", line=lineno)
        t_raw, led_raw, color_raw = parts
        try:
            t = int(t_raw)
        except ValueError:
            raise ParseError(f"bad time {t_raw!r}", line=lineno) from None
        try:
            led = LedId(led_raw)
        except ValueError:
            raise ParseError(f"unknown LED {led_raw!r}", line=lineno) from None
        try:
            color = LedColor(color_raw)
        except ValueError:
            raise ParseError(f"unknown color {color_raw!r}", line=lineno) from None
        ev = LedEvent(t, led, color)
        if prev_key is not None and ev.key <= prev_key:
            raise ParseError("events out of order or duplicated", line=lineno)
        prev_key = ev.key
        if t >= duration:
            raise ParseError(f"event time {t} exceeds duration {duration}", line=lineno)
        events.append(ev)
    return LedTimeline(events=tuple(events), duration_ms=duration)


# --- bitstreams -------------------------------------------------------------
#
# A bitstream is a plain sequence of 0/1 ints. Byte conversion is
# most-significant-bit first within each byte.

Bits = Sequence[int]


def check_bits(bits: Iterable[int]) -> list[int]:
    """Validate and copy a bit sequence."""
    out = []
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit {i} is {b!r}, expected 0 or 1")
        out.append(int(b))
    return out


def bits_from_bytes(data: bytes) -> list[int]:
    return [(byte >> (7 - i)) & 1 for byte in data for i in range(8)]


def bytes_from_bits(bits: Bits) -> bytes:
    if len(bits) % 8:
        raise ValueError(f"bit count {len(bits)} is not a multiple of 8")
    out = bytearray()
    for i in range(0, len(bits), 8):
        byte = 0
        for b in bits[i : i + 8]:
            byte = (byte << 1) | b
        out.append(byte)
    return bytes(out)


def bits_from_str(text: str) -> list[int]:
    """Parse '0101...', '0b0101...' or '0x2d' into a bit list."""
    text = text.strip().lower()
    if text.startswith("0x"):
        hexpart = text[2:]
        if len(hexpart) % 2:
            raise ValueError("hex bitstring needs an even number of digits")
        return bits_from_bytes(bytes.fromhex(hexpart))
    text = text.removeprefix("0b")
    if not set(text) <= {"0", "1"}:
        raise ValueError(f"not a bitstring: {text!r}")
    return [int(c) for c in text]


def bits_to_str(bits: Bits) -> str:
    return "".join(str(b) for b in bits)
