"""Event primitives shared by every scale of the simulation.

At scale 0 an event key is a plain ``int`` (an environment event type).
At scale k+1 the "simple events" are the compound signatures of scale k,
so keys become tuples of scale-k keys.  All machinery downstream of the
environment is written against ``EventKey`` and works unchanged at any
scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

EventKey = Union[int, tuple]
Signature = tuple

SOURCE_ENV = "env"
SOURCE_ACTION = "action"
SOURCE_DETECTION = "detection"


def canonical_signature(keys: Iterable[EventKey]) -> Signature:
    """Sorted, de-duplicated tuple form of a set of event keys."""
    return tuple(sorted(set(keys)))


@dataclass(frozen=True)
class SimpleEvent:
    """A single difference an agent can attend to.

    ``source`` is "env" for environment-generated events, "action" for
    events re-broadcast from a coordinated action (``actor`` is then the
    acting coalition's id), and "detection" for the synthetic events that
    carry compound signatures to super-agents.  ``episode``/``step`` are
    provenance for environment events that belong to an episode playback;
    they let an activation be scored against the expected response.
    """

    event_type: EventKey
    tick: int
    source: str = SOURCE_ENV
    actor: int | None = None
    episode: int | None = None
    step: int | None = None

    def provenance(self) -> tuple[int, int] | None:
        if self.episode is None or self.step is None:
            return None
        return (self.episode, self.step)
