"""Super-agents: consolidated coalitions re-entering the machinery one scale up.

A coalition that stays strong and keeps recurring is promoted to a
super-agent.  Its "simple events" are the compound signatures detected
at the scale below; its sensitivity is a joint context merged from its
members; and it keeps an episodic memory of recurring signature
sequences, reinforced and forgotten under the same laws as coalition
strengths.  Because super-agents feed the identical detection and
coalition code, the whole construction recurses: coalitions of
super-agents, super-super-agents, and so on up to the configured scale
ceiling.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .agents import AgentContext, RelevanceVerdict, sort_verdicts
from .coalitions import Coalition
from .events import Signature, SimpleEvent


def known_items(actor) -> set:
    """Input items an actor has nonzero relevance for, as far as is knowable."""
    if isinstance(actor, AgentContext):
        return set(actor.sensitivity)
    items = {actor.trigger}
    items.update(k for k, v in actor.gestalt_sensitivity.items() if v > 0.0)
    return items


@dataclass
class EpisodeTrace:
    """One remembered signature sequence with its compound response."""

    sequence: list[Signature]
    responses: list[int | None]
    strength: float
    last_seen: int


@dataclass
class SuperAgent:
    """A promoted coalition acting as a cognitive agent at scale + 1."""

    super_id: int
    origin_coalition: int
    scale: int
    trigger: Signature
    joint_sensitivity: dict = field(default_factory=dict)
    gestalt_sensitivity: dict[Signature, float] = field(default_factory=dict)
    tendencies: dict[Signature, float] = field(default_factory=dict)
    recent: deque = field(default_factory=lambda: deque(maxlen=16))
    capacity_limit: int = 4
    open_trace: EpisodeTrace | None = None
    stored_traces: list[EpisodeTrace] = field(default_factory=list)

    def relevance(self, signature: Signature) -> float:
        """Own trigger is always fully relevant; anything else is judged
        through the joint context: the mean member sensitivity over the
        signature's components (0 for wholly unknown signatures)."""
        if signature == self.trigger:
            self.gestalt_sensitivity[signature] = 1.0
            return 1.0
        cached = self.gestalt_sensitivity.get(signature)
        if cached is not None:
            return cached
        if not isinstance(signature, tuple) or not signature:
            return 0.0
        value = sum(self.joint_sensitivity.get(c, 0.0) for c in signature) / len(signature)
        self.gestalt_sensitivity[signature] = value
        return value


def promote(
    coalition: Coalition,
    theta_promote: float,
    n_promote: int,
    already_promoted: set[int],
    super_id: int,
    members: dict,
) -> SuperAgent | None:
    """Create a super-agent from a consolidated coalition, or ``None``.

    Requires mean strength >= theta_promote, activation count >=
    n_promote, and no existing super-agent for this coalition.  The
    joint context is frozen at promotion time: for every item any member
    knows, the mean relevance across all members.
    """
    if coalition.coalition_id in already_promoted:
        return None
    if coalition.activation_count < n_promote:
        return None
    if coalition.mean_strength() < theta_promote:
        return None
    member_actors = [members[m] for m in sorted(coalition.members) if m in members]
    universe: set = set()
    for actor in member_actors:
        universe.update(known_items(actor))
    joint = {}
    for item in universe:
        total = sum(actor.relevance(item) for actor in member_actors)
        joint[item] = total / len(member_actors) if member_actors else 0.0
    sa = SuperAgent(
        super_id=super_id,
        origin_coalition=coalition.coalition_id,
        scale=coalition.scale + 1,
        trigger=coalition.trigger,
        joint_sensitivity=joint,
    )
    sa.gestalt_sensitivity[sa.trigger] = 1.0
    return sa


def super_attend(sa: SuperAgent, detections: list[SimpleEvent], theta_att: float) -> list[RelevanceVerdict]:
    """Attention over compound signatures; same contract as agent attend."""
    verdicts = []
    for det in detections:
        relevance = sa.relevance(det.event_type)
        verdicts.append(RelevanceVerdict(det, relevance, relevance >= theta_att))
    ordered = sort_verdicts(verdicts)
    for verdict in ordered:
        if verdict.passed:
            sa.recent.append((verdict.event.event_type, verdict.event.tick))
    return ordered


# ---------------------------------------------------------------------------
# Episodic memory
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MemoryEvent:
    """What the memory did this tick, for tracing: recall checks, stores,
    reinforcements, and deletions."""

    kind: str  # "recall" | "stored" | "reinforced" | "forgotten"
    sequence: tuple = ()
    responses: tuple = ()
    strength: float = 0.0
    prefix: tuple = ()
    predicted: Signature | None = None
    actual: Signature | None = None
    hit: bool = False


def recall(sa: SuperAgent, prefix: list[Signature] | tuple) -> Signature | None:
    """Next signature of the strongest stored trace extending ``prefix``.

    Ties go to the most recently seen trace.  ``None`` when nothing
    matches (or nothing extends past the prefix).
    """
    prefix = list(prefix)
    best: EpisodeTrace | None = None
    for trace in sa.stored_traces:
        if len(trace.sequence) <= len(prefix):
            continue
        if trace.sequence[: len(prefix)] != prefix:
            continue
        if best is None or (trace.strength, trace.last_seen) > (best.strength, best.last_seen):
            best = trace
    if best is None:
        return None
    return best.sequence[len(prefix)]


def record_episode(
    sa: SuperAgent,
    signature: Signature,
    action: int | None,
    tick: int,
    gap_threshold: int,
    eta_c: float,
    t0: float,
) -> tuple[list[MemoryEvent], set[int]]:
    """Feed one attended signature into the open episode trace.

    Extends the open trace while observations arrive within
    ``gap_threshold`` ticks of each other; a longer silence closes the
    trace (storing or reinforcing, see ``_close_open``) and starts a new
    one.  Before extending, the memory predicts the next element from
    its stored traces; the returned "recall" event says whether the
    prediction matched.  Also returns ids of traces reinforced now, so
    the same-tick decay pass can skip them.
    """
    events: list[MemoryEvent] = []
    reinforced: set[int] = set()
    if sa.open_trace is not None and tick - sa.open_trace.last_seen <= gap_threshold:
        predicted = recall(sa, sa.open_trace.sequence)
        if predicted is not None:
            events.append(
                MemoryEvent(
                    kind="recall",
                    prefix=tuple(sa.open_trace.sequence),
                    predicted=predicted,
                    actual=signature,
                    hit=predicted == signature,
                )
            )
        sa.open_trace.sequence.append(signature)
        sa.open_trace.responses.append(action)
        sa.open_trace.last_seen = tick
        return events, reinforced
    if sa.open_trace is not None:
        closed_events, closed_reinforced = _close_open(sa, eta_c, t0)
        events.extend(closed_events)
        reinforced.update(closed_reinforced)
    sa.open_trace = EpisodeTrace([signature], [action], t0, tick)
    return events, reinforced


def decay_memory(
    sa: SuperAgent,
    tick: int,
    gap_threshold: int,
    eta_c: float,
    delta: float,
    t0: float,
    eps_diss: float,
    reinforced: set[int] = frozenset(),
) -> list[MemoryEvent]:
    """Once-per-tick memory upkeep: timeout closes, decay, forgetting."""
    events: list[MemoryEvent] = []
    reinforced = set(reinforced)
    if sa.open_trace is not None and tick - sa.open_trace.last_seen > gap_threshold:
        closed_events, closed_reinforced = _close_open(sa, eta_c, t0)
        events.extend(closed_events)
        reinforced.update(closed_reinforced)
    if delta > 0.0:
        for trace in sa.stored_traces:
            if id(trace) in reinforced:
                continue
            trace.strength = t0 + (trace.strength - t0) * (1.0 - delta)
    kept: list[EpisodeTrace] = []
    for trace in sa.stored_traces:
        if trace.strength < eps_diss:
            events.append(
                MemoryEvent(
                    kind="forgotten",
                    sequence=tuple(trace.sequence),
                    responses=tuple(trace.responses),
                    strength=trace.strength,
                )
            )
        else:
            kept.append(trace)
    sa.stored_traces = kept
    return events


def _close_open(sa: SuperAgent, eta_c: float, t0: float) -> tuple[list[MemoryEvent], set[int]]:
    """Store the open trace, or reinforce the stored trace it recurs.

    A closed trace matches a stored one when either sequence is a prefix
    of the other; the longest such trace wins (most recently seen on
    ties).  A match is reinforced with the coalition update law and
    extended if the new observation saw further.  A novel sequence is
    stored at the once-reinforced baseline, the same strength a
    just-formed, just-activated coalition would have, so it can survive
    until its first recurrence.
    """
    closed = sa.open_trace
    sa.open_trace = None
    if closed is None:
        return [], set()
    best: EpisodeTrace | None = None
    for trace in sa.stored_traces:
        n = min(len(trace.sequence), len(closed.sequence))
        if trace.sequence[:n] != closed.sequence[:n]:
            continue
        if best is None or (len(trace.sequence), trace.last_seen) > (len(best.sequence), best.last_seen):
            best = trace
    if best is not None:
        if len(closed.sequence) > len(best.sequence):
            best.sequence = list(closed.sequence)
            best.responses = list(closed.responses)
        best.strength = best.strength + eta_c * (1.0 - best.strength)
        best.last_seen = closed.last_seen
        return (
            [
                MemoryEvent(
                    kind="reinforced",
                    sequence=tuple(best.sequence),
                    responses=tuple(best.responses),
                    strength=best.strength,
                )
            ],
            {id(best)},
        )
    stored = EpisodeTrace(
        list(closed.sequence),
        list(closed.responses),
        t0 + eta_c * (1.0 - t0),
        closed.last_seen,
    )
    sa.stored_traces.append(stored)
    return (
        [
            MemoryEvent(
                kind="stored",
                sequence=tuple(stored.sequence),
                responses=tuple(stored.responses),
                strength=stored.strength,
            )
        ],
        set(),
    )
