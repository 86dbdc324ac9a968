"""The generic cognitive agent: selection for relevance and for action.

An agent owns a sensitivity profile (what it can notice), an action
table (what it tends to do about it), and tendencies (how strongly it
is committed to coalitions it has cooperated in).  ``attend`` filters
and prioritizes incoming events; ``intend`` picks a response;
``learn`` reinforces or weakens event-action associations from scored
outcomes; ``variety_reduction`` measures, in bits, how much information
a selection discarded.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .environment import Outcome
from .errors import ContractViolation
from .events import EventKey, Signature, SimpleEvent

# Relevance is bucketed on a fixed 0.1 grid so equivalence classes are
# reproducible across runs and platforms.
BUCKET_WIDTH = 0.1

INTENT_ARGMAX = "argmax"
INTENT_SOFTMAX = "softmax"


@dataclass(frozen=True)
class RelevanceVerdict:
    """One attended event with its relevance and pass/reject decision."""

    event: SimpleEvent
    relevance: float
    passed: bool

    @property
    def event_type(self) -> EventKey:
        return self.event.event_type


@dataclass
class AgentContext:
    """Mutable per-agent state: profile, learned associations, memory."""

    agent_id: int
    sensitivity: dict[EventKey, float] = field(default_factory=dict)
    action_table: dict[EventKey, dict[int, float]] = field(default_factory=dict)
    tendencies: dict[Signature, float] = field(default_factory=dict)
    recent: deque = field(default_factory=lambda: deque(maxlen=16))
    capacity_limit: int = 4

    def relevance(self, event_type: EventKey) -> float:
        return self.sensitivity.get(event_type, 0.0)


def sort_verdicts(verdicts: list[RelevanceVerdict]) -> list[RelevanceVerdict]:
    """Descending relevance, ties broken by ascending event type."""
    return sorted(verdicts, key=lambda v: (-v.relevance, v.event_type))


def attend(ctx: AgentContext, events: list[SimpleEvent], theta_att: float) -> list[RelevanceVerdict]:
    """Judge every incoming event; passed events enter ``ctx.recent``.

    Relevance is the agent's static sensitivity to the event type (0 when
    absent).  An event passes when relevance >= theta_att.  The returned
    verdicts are prioritized: descending relevance, ascending event type
    on ties.  Only ``ctx.recent`` is mutated.
    """
    verdicts = [
        RelevanceVerdict(ev, ctx.relevance(ev.event_type), ctx.relevance(ev.event_type) >= theta_att)
        for ev in events
    ]
    ordered = sort_verdicts(verdicts)
    for verdict in ordered:
        if verdict.passed:
            ctx.recent.append((verdict.event.event_type, verdict.event.tick))
    return ordered


def intend(
    ctx: AgentContext,
    event_type: EventKey,
    theta_act: float,
    rng=None,
    mode: str = INTENT_ARGMAX,
    temperature: float = 1.0,
) -> int | None:
    """Select an action for a relevant event, or ``None`` for no action.

    Argmax mode is deterministic and consumes no randomness: the highest
    weighted action wins when its weight clears theta_act, ties broken by
    ascending action id.  Softmax mode samples among the row's actions
    with probability proportional to exp(weight / temperature); it still
    returns ``None`` when the whole row sits below theta_act.
    """
    row = ctx.action_table.get(event_type)
    if not row:
        return None
    best_weight = max(row.values())
    if best_weight < theta_act:
        return None
    if mode == INTENT_SOFTMAX:
        if rng is None:
            raise ContractViolation("softmax intent mode needs a random substream")
        actions = sorted(row)
        weights = [math.exp(row[a] / temperature) for a in actions]
        total = sum(weights)
        point = rng.random() * total
        acc = 0.0
        for action, w in zip(actions, weights):
            acc += w
            if point <= acc:
                return action
        return actions[-1]
    return min(a for a, w in row.items() if w == best_weight)


def learn(ctx: AgentContext, event_type: EventKey, action: int, outcome: Outcome, eta_a: float) -> None:
    """Reinforce or weaken one event-action association in place.

    Success: w <- w + eta_a * (1 - w).  Failure: w <- w * (1 - eta_a).
    Both keep the weight in [0, 1] for any outcome sequence.
    """
    row = ctx.action_table.setdefault(event_type, {})
    w = row.get(action, 0.0)
    if outcome is Outcome.SUCCESS:
        row[action] = w + eta_a * (1.0 - w)
    elif outcome is Outcome.FAILURE:
        row[action] = w * (1.0 - eta_a)


def relevance_bucket(relevance: float) -> int:
    """Index of the 0.1-wide relevance bucket; 1.0 gets its own bucket."""
    return int(relevance / BUCKET_WIDTH)


def selection_classes(verdicts: list[RelevanceVerdict]) -> list[tuple]:
    """Post-selection equivalence classes over the verdicts' event types.

    Passed events group by relevance bucket; every rejected event falls
    into one shared "rejected" class.  Returned as sorted tuples of the
    class labels for reproducibility.
    """
    classes: dict[object, set] = {}
    for v in verdicts:
        label = ("bucket", relevance_bucket(v.relevance)) if v.passed else ("rejected",)
        classes.setdefault(label, set()).add(v.event_type)
    return sorted((label, tuple(sorted(members))) for label, members in classes.items())


def variety_reduction(verdicts: list[RelevanceVerdict]) -> float:
    """Bits of variety removed by the selection.

    log2(#distinct input event types) - log2(#post-selection classes).
    Zero only when the class partition is as fine as the type partition;
    never negative for verdicts produced by a single ``attend`` call.
    """
    if not verdicts:
        raise ContractViolation("variety_reduction needs a nonempty verdict list")
    distinct_types = {v.event_type for v in verdicts}
    n_classes = len(selection_classes(verdicts))
    return math.log2(len(distinct_types)) - math.log2(n_classes)
