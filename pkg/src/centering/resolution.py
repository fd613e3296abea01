"""Cue-constrained resolution of zeros against local candidate lists."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence, Union

from .model import (
    CbHistory,
    DiscourseEntity,
    ReferringExpression,
    Utterance,
)


class Verdict(Enum):
    COMPATIBLE = "compatible"
    ANOMALOUS = "anomalous"


Candidate = Union[DiscourseEntity, Iterable[DiscourseEntity]]


def check_compatibility(
    zero: ReferringExpression,
    candidate: Candidate,
    u: Optional[Utterance] = None,
) -> Verdict:
    """Check a candidate antecedent (entity or entity set) against a zero's
    cue annotations.

    COMPATIBLE iff every member's semantic types intersect the slot's
    selectional restriction (an empty restriction is unconstrained) and the
    total cardinality matches required_cardinality when one is annotated.
    """
    if isinstance(candidate, DiscourseEntity):
        members: list[DiscourseEntity] = [candidate]
    else:
        members = list(candidate)
    if not members:
        return Verdict.ANOMALOUS

    wanted = zero.compatible_types
    if wanted:
        for member in members:
            if not (member.semantic_types & wanted):
                return Verdict.ANOMALOUS

    required = zero.required_cardinality
    if required is not None:
        total = sum(member.cardinality for member in members)
        if total != required:
            return Verdict.ANOMALOUS
    return Verdict.COMPATIBLE


@dataclass(frozen=True)
class LocalResolution:
    """Outcome of a local resolution attempt.

    `exhausted` is true when there were candidates but every one was vetoed
    by the cue annotations; the reading is then semantically anomalous unless
    global retrieval later rescues it.
    """

    entity_id: Optional[str]
    exhausted: bool


def resolve_zero_local(
    zero: ReferringExpression,
    cf_prev: Sequence[str],
    u: Utterance,
    entities: Mapping[str, DiscourseEntity],
    exclude: frozenset[str] = frozenset(),
) -> Optional[str]:
    """Resolve a zero to the highest-ranked compatible member of the
    predecessor Cf, or None when none qualifies (the caller then goes
    global).

    Entities overtly realized in `u`, and any in `exclude` (antecedents
    already claimed by other zeros of the same utterance), are not
    candidates.
    """
    return local_resolution(zero, cf_prev, u, entities, exclude).entity_id


def local_resolution(
    zero: ReferringExpression,
    cf_prev: Sequence[str],
    u: Utterance,
    entities: Mapping[str, DiscourseEntity],
    exclude: frozenset[str] = frozenset(),
) -> LocalResolution:
    """Like resolve_zero_local but also reports veto exhaustion."""
    blocked = exclude | u.overt_entities()
    had_candidate = False
    for entity_id in cf_prev:
        if entity_id in blocked:
            continue
        entity = entities.get(entity_id)
        if entity is None:
            continue
        had_candidate = True
        if check_compatibility(zero, entity, u) is Verdict.COMPATIBLE:
            return LocalResolution(entity_id, exhausted=False)
    return LocalResolution(None, exhausted=had_candidate)


def form_set_candidates(
    history: CbHistory,
    cf_prev: Sequence[str],
    required_cardinality: int,
    entities: Mapping[str, DiscourseEntity],
    current_index: Optional[int] = None,
) -> list[tuple[str, ...]]:
    """Enumerate candidate antecedent sets for a plural-constrained zero.

    Sets are drawn from former Cbs, restricted to entities sharing at least
    one semantic type, with member cardinalities summing to the requirement.
    Membership in `cf_prev` refreshes an entity's recency to the predecessor
    utterance. Result is ordered by recency of the least-recent member (most
    recent first); each set is a tuple in recency order.
    """
    if required_cardinality < 2:
        raise ValueError("set-valued antecedents need required_cardinality >= 2")

    cf_members = set(cf_prev)
    recency: dict[str, int] = {}
    for entry in history.entries:
        rec = entry.index
        if current_index is not None and entry.entity_id in cf_members:
            rec = max(rec, current_index - 1)
        recency[entry.entity_id] = rec

    pool = sorted(recency, key=lambda eid: (-recency[eid], eid))

    def subsets(start: int, chosen: list[str], total: int) -> Iterable[tuple[str, ...]]:
        if total == required_cardinality and len(chosen) >= 2:
            yield tuple(chosen)
        if total >= required_cardinality:
            return
        for i in range(start, len(pool)):
            eid = pool[i]
            entity = entities.get(eid)
            if entity is None:
                continue
            if chosen:
                shared = entities[chosen[0]].semantic_types
                for cid in chosen[1:]:
                    shared = shared & entities[cid].semantic_types
                if not (shared & entity.semantic_types):
                    continue
            yield from subsets(i + 1, chosen + [eid], total + entity.cardinality)

    found = list(subsets(0, [], 0))
    found.sort(key=lambda members: (-min(recency[m] for m in members), members))
    return found
