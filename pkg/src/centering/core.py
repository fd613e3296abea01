"""Single-utterance centering computations: Cf ranking, Cb, transitions."""

from __future__ import annotations

from typing import Iterable, Mapping, Optional

from .model import (
    CfList,
    EffectiveRole,
    Resolution,
    TransitionLabel,
    Utterance,
)


def rank_cf(
    u: Utterance,
    zta_topic: Optional[str] = None,
    resolutions: Optional[Mapping[int, Resolution]] = None,
) -> CfList:
    """Order the entities realized in `u` by effective salience.

    `resolutions` maps zero surface positions to their antecedents; zeros
    still unresolved realize nothing and are skipped. An entity mentioned
    more than once takes its highest-ranked role; ties within a role break by
    surface position. When `zta_topic` is given it is promoted to the
    ZERO_TOP slot ahead of everything, including the grammatical topic.

    Raises ValueError if `zta_topic` is not realized by a zero in `u`.
    """
    resolutions = resolutions or {}

    # best (role, position) seen per realized entity
    best: dict[str, tuple[int, int]] = {}
    zero_realized: set[str] = set()

    def note(entity_id: str, rank: int, position: int, via_zero: bool) -> None:
        if via_zero:
            zero_realized.add(entity_id)
        cur = best.get(entity_id)
        if cur is None or (rank, position) < cur:
            best[entity_id] = (rank, position)

    for expr in u.expressions:
        if expr.is_zero:
            value = resolutions.get(expr.surface_position)
            if value is None:
                continue
            members = [value] if isinstance(value, str) else sorted(value)
            for member in members:
                note(member, expr.role.rank, expr.surface_position, True)
        elif expr.entity_ref is not None:
            note(expr.entity_ref, expr.role.rank, expr.surface_position, False)

    if zta_topic is not None and zta_topic not in zero_realized:
        raise ValueError(
            f"zero-topic entity '{zta_topic}' is not realized by a zero in "
            f"utterance {u.index}"
        )

    ordered = sorted(best.items(), key=lambda item: item[1])
    cf: list[tuple[str, EffectiveRole]] = []
    if zta_topic is not None:
        cf.append((zta_topic, EffectiveRole.ZERO_TOP))
    for entity_id, (rank, _pos) in ordered:
        if entity_id == zta_topic:
            continue
        cf.append((entity_id, EffectiveRole(rank)))
    return tuple(cf)


def compute_cb(cf_prev: Iterable[str], realized: Iterable[str]) -> Optional[str]:
    """Backward-looking center: the highest-ranked element of the previous
    Cf realized in the current utterance, or None when none is."""
    realized_set = set(realized)
    for entity_id in cf_prev:
        if entity_id in realized_set:
            return entity_id
    return None


def classify_transition(
    cb_prev: Optional[str],
    cb_cur: Optional[str],
    cp_cur: str,
    zta_applied: bool = False,
) -> TransitionLabel:
    """Four-way transition classification by Cb identity and Cb=Cp.

    Total over all inputs: an absent current Cb is always ROUGH_SHIFT. The
    CONTINUE cell upgrades to ZTA_CONTINUE when it holds under zero topic
    assignment.
    """
    if cb_cur is None:
        return TransitionLabel.ROUGH_SHIFT
    same_cb = cb_cur == cb_prev
    cb_is_cp = cb_cur == cp_cur
    if same_cb and cb_is_cp:
        return TransitionLabel.ZTA_CONTINUE if zta_applied else TransitionLabel.CONTINUE
    if same_cb:
        return TransitionLabel.RETAIN
    if cb_is_cp:
        return TransitionLabel.SMOOTH_SHIFT
    return TransitionLabel.ROUGH_SHIFT


def transition_preference(t: TransitionLabel) -> int:
    """Coherence preference rank; lower is preferred, ZTA ties with CONTINUE."""
    return t.preference_rank
