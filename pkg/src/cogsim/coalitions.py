"""Coalition lifecycle: joint detection, formation, reinforcement, decay.

A coalition is a temporary group of actors (agents at scale 0, super
agents above) bound to a trigger signature: the set of event types they
jointly attended within a detection window.  Activations reinforce each
member's commitment strength; idle ticks relax strengths back toward the
baseline; a coalition whose mean strength falls below the dissipation
threshold is forgotten and its members freed.

Everything here is written against ``EventKey`` so the identical
machinery runs at every scale: at scale 0 the alphabet is ints, at scale
1 it is scale-0 signatures, and so on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .environment import Outcome
from .errors import ContractViolation
from .events import EventKey, Signature, canonical_signature


class CoalitionState(str, Enum):
    FORMING = "forming"
    ACTIVE = "active"
    DORMANT = "dormant"
    DISSIPATED = "dissipated"


@dataclass
class Coalition:
    coalition_id: int
    trigger: Signature
    scale: int
    window: int
    members: set[int] = field(default_factory=set)
    strengths: dict[int, float] = field(default_factory=dict)
    state: CoalitionState = CoalitionState.FORMING
    activation_count: int = 0
    last_activated: int | None = None
    busy_until: int | None = None
    # Actors currently locked by an in-flight coordinated action.
    active_participants: tuple[int, ...] = ()

    def mean_strength(self) -> float:
        if not self.strengths:
            return 0.0
        return sum(self.strengths[m] for m in sorted(self.strengths)) / len(self.strengths)

    def alive(self) -> bool:
        return self.state is not CoalitionState.DISSIPATED


@dataclass(frozen=True)
class ActivationRecord:
    """One coordinated activation, ready for strength updates and tracing."""

    coalition_id: int
    tick: int
    matched_events: tuple  # (item, tick, actor) per trigger component
    chosen_action: int | None
    outcome: Outcome


@dataclass(frozen=True)
class Candidate:
    """A jointly detected compound event, input to form_or_rejoin."""

    signature: Signature
    tick: int
    contributors: tuple[int, ...]


@dataclass(frozen=True)
class BufferEntry:
    actor: int
    item: EventKey
    tick: int
    relevance: float
    episode: int | None = None
    step: int | None = None


class DetectionState:
    """Sliding look-back buffer of passed verdicts for one scale.

    ``observe`` records every passed verdict; ``detect_joint`` emits the
    union signature of all in-window passes when at least two distinct
    actors cover at least two distinct event types, with any given
    signature emitted at most once per window.
    """

    def __init__(self, window: int):
        if window < 1:
            raise ContractViolation("detection window must be >= 1")
        self.window = window
        self.entries: list[BufferEntry] = []
        self._last_emitted: dict[Signature, int] = {}

    def observe(
        self,
        actor: int,
        item: EventKey,
        tick: int,
        relevance: float = 1.0,
        episode: int | None = None,
        step: int | None = None,
    ) -> None:
        self.entries.append(BufferEntry(actor, item, tick, relevance, episode, step))

    def in_window(self, tick: int) -> list[BufferEntry]:
        low = tick - self.window + 1
        return [e for e in self.entries if low <= e.tick <= tick]

    def prune(self, tick: int) -> None:
        low = tick - self.window + 1
        self.entries = [e for e in self.entries if e.tick >= low]

    def detect_joint(self, tick: int) -> list[Candidate]:
        """Candidates at ``tick`` under the joint co-occurrence rule."""
        window_entries = self.in_window(tick)
        fresh = [e for e in window_entries if e.tick == tick]
        if not fresh:
            return []
        actors = {e.actor for e in window_entries}
        items = {e.item for e in window_entries}
        if len(actors) < 2 or len(items) < 2:
            return []
        signature = canonical_signature(items)
        last = self._last_emitted.get(signature)
        if last is not None and tick - last < self.window:
            return []
        self._last_emitted[signature] = tick
        contributors = tuple(sorted(actors))
        return [Candidate(signature, tick, contributors)]

    def coverage(
        self, coalition: Coalition, tick: int, participants: set[int] | None = None
    ) -> "Coverage | None":
        """Trigger coverage for an existing coalition, if complete and fresh.

        A coalition triggers when its members' in-window passes cover the
        whole signature, at least one covering pass lands on this very
        tick, and at least two distinct members contribute.  Passing
        ``participants`` restricts the match to those members, which is
        how coverage is re-checked after conflict resolution pulls an
        actor away.
        """
        allowed = coalition.members if participants is None else participants
        low = tick - coalition.window + 1
        per_item: dict[EventKey, BufferEntry] = {}
        contributors: set[int] = set()
        fresh = False
        for entry in self.entries:
            if not (low <= entry.tick <= tick):
                continue
            if entry.actor not in allowed or entry.item not in coalition.trigger:
                continue
            contributors.add(entry.actor)
            if entry.tick == tick:
                fresh = True
            current = per_item.get(entry.item)
            if current is None or (entry.tick, -entry.actor) > (current.tick, -current.actor):
                per_item[entry.item] = entry
        if not fresh or len(contributors) < 2:
            return None
        if set(per_item) != set(coalition.trigger):
            return None
        return Coverage(coalition.coalition_id, tick, dict(per_item), tuple(sorted(contributors)))


@dataclass
class Coverage:
    """A completed, fresh trigger match awaiting conflict resolution."""

    coalition_id: int
    tick: int
    matched: dict[EventKey, BufferEntry]
    contributors: tuple[int, ...]

    def matched_tuples(self) -> tuple:
        """(item, tick, actor) triples in canonical item order."""
        return tuple(
            (item, self.matched[item].tick, self.matched[item].actor)
            for item in sorted(self.matched)
        )


class CoalitionRegistry:
    """All coalitions of a run, across scales, keyed by id."""

    def __init__(self):
        self.coalitions: dict[int, Coalition] = {}
        self._next_id = 0

    def new_id(self) -> int:
        cid = self._next_id
        self._next_id += 1
        return cid

    def add(self, coalition: Coalition) -> None:
        self.coalitions[coalition.coalition_id] = coalition

    def get(self, coalition_id: int) -> Coalition:
        return self.coalitions[coalition_id]

    def live(self, scale: int | None = None) -> list[Coalition]:
        out = [
            c
            for c in self.coalitions.values()
            if c.alive() and (scale is None or c.scale == scale)
        ]
        return sorted(out, key=lambda c: c.coalition_id)

    def find(self, signature: Signature, scale: int) -> Coalition | None:
        """The unique non-dissipated coalition for (signature, scale)."""
        for c in self.live(scale):
            if c.trigger == signature:
                return c
        return None

    def committed_count(self, actor: int, scale: int) -> int:
        """Memberships currently holding the actor's resources."""
        return sum(
            1
            for c in self.live(scale)
            if actor in c.members and c.state in (CoalitionState.FORMING, CoalitionState.ACTIVE)
        )

    def locked_count(self, actor: int, scale: int) -> int:
        """Coalitions whose in-flight action is using this actor right now."""
        return sum(
            1
            for c in self.live(scale)
            if c.state is CoalitionState.ACTIVE and actor in c.active_participants
        )


def form_or_rejoin(
    candidate: Candidate,
    registry: CoalitionRegistry,
    scale: int,
    window: int,
    p_join: float,
    t0: float,
    capacity: int,
    rng,
    actors: dict | None = None,
) -> tuple[Coalition | None, bool]:
    """Map a candidate onto an existing coalition or try to form a new one.

    Returns (coalition, formed): ``formed`` is True only when a new
    coalition was created.  Rejoining an identical live signature adds
    any capacity-free newcomers at baseline strength.  A new coalition
    forms from the contributors that pass an independent join draw with
    probability clamp(p_join + tendency, 0, 1); fewer than two joiners
    discards the candidate.
    """
    existing = registry.find(candidate.signature, scale)
    if existing is not None:
        for actor in candidate.contributors:
            if actor in existing.members:
                continue
            if registry.committed_count(actor, scale) >= capacity:
                continue
            existing.members.add(actor)
            existing.strengths[actor] = t0
            _mirror(actors, actor, existing.trigger, t0)
        return existing, False

    joiners = []
    for actor in candidate.contributors:
        if registry.committed_count(actor, scale) >= capacity:
            continue
        bonus = 0.0
        if actors is not None and actor in actors:
            bonus = actors[actor].tendencies.get(candidate.signature, 0.0)
        p = min(1.0, max(0.0, p_join + bonus))
        if rng.random() < p:
            joiners.append(actor)
    if len(joiners) < 2:
        return None, False

    coalition = Coalition(
        coalition_id=registry.new_id(),
        trigger=candidate.signature,
        scale=scale,
        window=window,
        members=set(joiners),
        strengths={a: t0 for a in joiners},
        state=CoalitionState.FORMING,
    )
    registry.add(coalition)
    for actor in joiners:
        _mirror(actors, actor, coalition.trigger, t0)
    return coalition, True


def plurality_vote(weights: dict[int, float], proposals: dict[int, int | None]) -> int | None:
    """Commitment-weighted plurality over member proposals.

    Members proposing ``None`` abstain from the tally.  Ties break by
    ascending action id; an empty tally yields ``None``.
    """
    tally: dict[int, float] = {}
    for member in sorted(proposals):
        action = proposals[member]
        if action is None:
            continue
        tally[action] = tally.get(action, 0.0) + weights.get(member, 0.0)
    if not tally:
        return None
    best = max(tally.values())
    return min(a for a, w in tally.items() if w == best)


def activate(
    coalition: Coalition,
    record: ActivationRecord,
    eta_c: float,
    mu_success: float,
    mu_failure: float,
    t0: float,
    duration: int = 1,
    participants: tuple[int, ...] = (),
    actors: dict | None = None,
) -> None:
    """Apply one coordinated activation to the coalition.

    Success (and unscored activations, with unit gain) pull every
    member's strength toward 1 by eta_c * mu; failure shrinks it
    multiplicatively, clamped at the baseline t0.  The coalition turns
    Active and its participants' resources stay locked for ``duration``
    ticks.
    """
    if coalition.state is CoalitionState.DISSIPATED:
        raise ContractViolation(
            f"coalition {coalition.coalition_id} is dissipated and cannot activate"
        )
    if {item for item, _, _ in record.matched_events} != set(coalition.trigger):
        raise ContractViolation("matched events must cover the full trigger signature")
    for member in sorted(coalition.members):
        s = coalition.strengths.get(member, t0)
        if record.outcome is Outcome.FAILURE:
            s = max(t0, s * (1.0 - eta_c * mu_failure))
        else:
            mu = mu_success if record.outcome is Outcome.SUCCESS else 1.0
            s = s + eta_c * mu * (1.0 - s)
        coalition.strengths[member] = s
        _mirror(actors, member, coalition.trigger, s)
    coalition.activation_count += 1
    coalition.last_activated = record.tick
    coalition.state = CoalitionState.ACTIVE
    coalition.busy_until = record.tick + duration - 1
    coalition.active_participants = tuple(sorted(participants))


def dismantle(coalition: Coalition) -> None:
    """Release a completed coalition to Dormant, strengths retained."""
    if coalition.state is not CoalitionState.ACTIVE:
        raise ContractViolation(
            f"cannot dismantle coalition {coalition.coalition_id} in state {coalition.state.value}"
        )
    coalition.state = CoalitionState.DORMANT
    coalition.busy_until = None
    coalition.active_participants = ()


def decay_all(
    registry: CoalitionRegistry,
    delta: float,
    t0: float,
    eps_diss: float,
    tick: int,
    activated_today: set[int] = frozenset(),
    actors: dict | None = None,
) -> tuple[list[Coalition], list[Coalition]]:
    """Relax strengths toward baseline and forget weak idle coalitions.

    Every live coalition not activated this tick decays each strength by
    s <- t0 + (s - t0) * (1 - delta); delta == 0 is an exact no-op.  Any
    non-Active coalition whose mean strength sits below eps_diss then
    dissipates, releasing its members.  Returns (decayed, dissipated).
    """
    decayed: list[Coalition] = []
    dissipated: list[Coalition] = []
    for coalition in registry.live():
        if coalition.coalition_id not in activated_today and delta > 0.0:
            for member in sorted(coalition.strengths):
                s = t0 + (coalition.strengths[member] - t0) * (1.0 - delta)
                coalition.strengths[member] = s
                _mirror(actors, member, coalition.trigger, s)
            decayed.append(coalition)
        if coalition.state is not CoalitionState.ACTIVE and coalition.mean_strength() < eps_diss:
            coalition.state = CoalitionState.DISSIPATED
            coalition.busy_until = None
            coalition.active_participants = ()
            dissipated.append(coalition)
    return decayed, dissipated


def resolve_conflict(agent: int, simultaneous: list[Coalition]) -> Coalition:
    """The coalition an over-demanded agent stays bound to.

    Highest commitment strength wins; ties go to the higher activation
    count, then to the lower coalition id.
    """
    if not simultaneous:
        raise ContractViolation("resolve_conflict needs at least one coalition")
    return min(
        simultaneous,
        key=lambda c: (-c.strengths.get(agent, 0.0), -c.activation_count, c.coalition_id),
    )


def _mirror(actors: dict | None, actor: int, signature: Signature, strength: float) -> None:
    """Keep the actor's own tendency memory in step with its commitment."""
    if actors is not None and actor in actors:
        actors[actor].tendencies[signature] = strength
