"""Structured event source: episodes of compound events plus noise.

The environment plays back configured episodes on a fixed schedule and
sprinkles Bernoulli noise, so recurrence (the thing coalitions latch on
to) and forgetting (what happens when a playback stops) are both
controllable and exactly reproducible.  Emission for a tick is a pure
function of (configuration, tick, seed); nothing in here accumulates
hidden state besides the active/inactive flag per episode.

Schedule
--------
A playback of episode ``e`` starts at ``offset + k * period`` for every
k >= 0.  Compound event ``i`` of the sequence starts ``sum(window_j +
gap for j < i)`` ticks into the playback.  Its components are emitted in
ascending event_type order, one per tick from the compound's start,
wrapping within the compound's window, so every component lands inside
the declared window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import ContractViolation
from .events import SOURCE_ENV, SimpleEvent, canonical_signature
from .rng import SubStream


class Outcome(str, Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    UNSCORED = "unscored"


@dataclass(frozen=True)
class CompoundEvent:
    """A set of contingent simple events co-occurring within a window."""

    signature: tuple
    window: int

    def __post_init__(self):
        object.__setattr__(self, "signature", canonical_signature(self.signature))
        if len(self.signature) < 2:
            raise ContractViolation("compound signature needs >= 2 distinct event types")
        if self.window < 1:
            raise ContractViolation("compound window must be >= 1")


@dataclass
class Episode:
    """A recurring ordered sequence of compound events.

    ``expected_response`` (when given) holds one action id per compound
    event; a coordinated action matching it scores Success.  ``None``
    means the episode is never scored.
    """

    sequence: list[CompoundEvent]
    period: int
    gap: int
    offset: int = 0
    active: bool = True
    expected_response: list[int] | None = None

    def step_start(self, index: int) -> int:
        """Offset of compound ``index`` from the playback start."""
        return sum(ce.window + self.gap for ce in self.sequence[:index])

    def span(self) -> int:
        """Ticks from playback start to one past the last component slot."""
        last = len(self.sequence) - 1
        return self.step_start(last) + self.sequence[last].window


@dataclass
class Environment:
    """Owns the episode schedule, the noise stream, and response scoring."""

    episodes: list[Episode]
    n_types: int
    noise_rate: float = 0.0
    noise_types: tuple[int, ...] = ()
    rng_stream: SubStream | None = None

    _deactivated_at: dict[int, int] = field(default_factory=dict)

    def emit_events(self, tick: int) -> list[SimpleEvent]:
        """All simple events due at ``tick``: playback components + noise."""
        if tick < 0:
            raise ContractViolation("tick must be >= 0")
        due: list[SimpleEvent] = []
        for ep_id, episode in enumerate(self.episodes):
            if not episode.active:
                continue
            due.extend(self._playback_events(ep_id, episode, tick))
        due.sort(key=lambda e: (e.event_type, e.episode if e.episode is not None else -1))
        if self.noise_rate > 0.0 and self.noise_types and self.rng_stream is not None:
            rng = self.rng_stream.at_tick(tick)
            for noise_type in self.noise_types:
                if rng.random() < self.noise_rate:
                    due.append(SimpleEvent(noise_type, tick, SOURCE_ENV))
        return due

    def _playback_events(self, ep_id: int, episode: Episode, tick: int) -> list[SimpleEvent]:
        rel = tick - episode.offset
        if rel < 0:
            return []
        within = rel % episode.period
        if within >= episode.span():
            return []
        out = []
        for step, compound in enumerate(episode.sequence):
            start = episode.step_start(step)
            if not (start <= within < start + compound.window):
                continue
            for idx, event_type in enumerate(compound.signature):
                if start + (idx % compound.window) == within:
                    out.append(
                        SimpleEvent(event_type, tick, SOURCE_ENV, episode=ep_id, step=step)
                    )
        return out

    def score_response(self, episode_id: int, step_index: int, action: int) -> Outcome:
        """Success iff ``action`` equals the configured expected response."""
        episode = self._episode(episode_id)
        if episode.expected_response is None:
            raise ContractViolation(f"episode {episode_id} has no expected response")
        if not 0 <= step_index < len(episode.sequence):
            raise ContractViolation(f"step index {step_index} out of range")
        expected = episode.expected_response[step_index]
        return Outcome.SUCCESS if action == expected else Outcome.FAILURE

    def is_scored(self, episode_id: int) -> bool:
        return self.episodes[episode_id].expected_response is not None

    def deactivate_episode(self, episode_id: int, tick: int = 0) -> None:
        """Silence an episode permanently (used by forgetting experiments)."""
        episode = self._episode(episode_id)
        episode.active = False
        self._deactivated_at[episode_id] = tick

    def _episode(self, episode_id: int) -> Episode:
        if not 0 <= episode_id < len(self.episodes):
            raise ContractViolation(f"unknown episode id {episode_id}")
        return self.episodes[episode_id]
