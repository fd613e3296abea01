"""Discourse-level engine: Cb history, global retrieval, coherence steps.

One mutable-looking `DiscourseState` is threaded per discourse, advanced
strictly by utterance index; every value inside is immutable, so distinct
discourses can run in parallel with no shared state.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

from .core import rank_cf
from .hypotheses import (
    DEFAULT_BEAM,
    ResolutionOutcome,
    expand_hypotheses,
    prune_hypotheses,
    rank_key,
)
from .model import (
    CbHistory,
    CbHistoryEntry,
    CenteringHypothesis,
    CfList,
    Discourse,
    DiscourseEntity,
    EffectiveRole,
    ReferringExpression,
    Resolution,
    Tense,
    TransitionLabel,
    Utterance,
)
from .resolution import (
    Verdict,
    check_compatibility,
    form_set_candidates,
    local_resolution,
)

CUE_LEXICAL = "LEXICAL"
CUE_TENSE = "TENSE"
CUE_AGREEMENT = "AGREEMENT"


def push_cb(history: CbHistory, cb: str, index: int, past_tense: bool = False) -> CbHistory:
    """Record `cb` as the center of utterance `index`.

    Returns a new history with the entry at the front; an older entry for the
    same entity collapses into it (keeping a sticky past-tense flag).
    """
    if history.entries and index < history.entries[0].index:
        raise ValueError(
            f"history indices must be non-decreasing: {index} after {history.entries[0].index}"
        )
    flag = past_tense
    kept = []
    for entry in history.entries:
        if entry.entity_id == cb:
            flag = flag or entry.past_tense
        else:
            kept.append(entry)
    return CbHistory(entries=(CbHistoryEntry(cb, index, flag), *kept))


@dataclass(frozen=True)
class RetrievalResult:
    """Outcome of one global retrieval for one zero.

    For set-valued antecedents `member_order` preserves the recency order the
    set was built in (the value itself is an unordered frozenset).
    """

    value: Resolution
    cues: tuple[str, ...] = ()
    candidates: tuple[str, ...] = ()
    member_order: tuple[str, ...] = ()


def global_retrieve(
    history: CbHistory,
    zero: ReferringExpression,
    u: Utterance,
    entities: Mapping[str, DiscourseEntity],
    cf_prev: Sequence[str] = (),
    prev_tense: Optional[Tense] = None,
) -> RetrievalResult:
    """Search the former-Cb list for an antecedent of a locally unresolved
    zero.

    Candidates are filtered by agreement (cardinality), then by the slot's
    selectional restriction, then reordered by the tense cue (a shift to past
    tense prefers centers introduced in past-tense utterances); the first
    survivor wins. Plural-constrained zeros search candidate entity sets
    instead. Value is None when the history is exhausted.
    """
    required = zero.required_cardinality
    if required is not None and required >= 2:
        return _retrieve_set(history, zero, u, entities, cf_prev, prev_tense)

    cues: list[str] = []
    candidates = [e for e in history.entries if e.entity_id in entities]
    considered = tuple(e.entity_id for e in candidates)

    if required is not None:
        kept = [e for e in candidates if entities[e.entity_id].cardinality == required]
        if len(kept) < len(candidates):
            cues.append(CUE_AGREEMENT)
        candidates = kept

    wanted = zero.compatible_types
    if wanted:
        kept = [
            e for e in candidates if entities[e.entity_id].semantic_types & wanted
        ]
        if len(kept) < len(candidates):
            cues.append(CUE_LEXICAL)
        candidates = kept

    candidates = _tense_reorder(candidates, u, prev_tense, cues)
    if not candidates:
        return RetrievalResult(None, tuple(cues), considered)
    return RetrievalResult(candidates[0].entity_id, tuple(cues), considered)


def _tense_reorder(
    candidates: list[CbHistoryEntry],
    u: Utterance,
    prev_tense: Optional[Tense],
    cues: list[str],
) -> list[CbHistoryEntry]:
    """Stable-partition past-introduced centers to the front when the
    discourse shifts into past tense; records the cue only when the reorder
    changed which candidate comes first."""
    if u.tense is not Tense.PAST or prev_tense is not Tense.NONPAST:
        return candidates
    reordered = [e for e in candidates if e.past_tense] + [
        e for e in candidates if not e.past_tense
    ]
    if reordered and candidates and reordered[0] != candidates[0]:
        cues.append(CUE_TENSE)
    return reordered


def _retrieve_set(
    history: CbHistory,
    zero: ReferringExpression,
    u: Utterance,
    entities: Mapping[str, DiscourseEntity],
    cf_prev: Sequence[str],
    prev_tense: Optional[Tense],
) -> RetrievalResult:
    required = zero.required_cardinality
    assert required is not None
    cues = [CUE_AGREEMENT]
    sets = form_set_candidates(history, cf_prev, required, entities, u.index)
    considered = tuple("+".join(s) for s in sets)
    kept = []
    for members in sets:
        verdict = check_compatibility(zero, [entities[m] for m in members], u)
        if verdict is Verdict.COMPATIBLE:
            kept.append(members)
    if len(kept) < len(sets):
        cues.append(CUE_LEXICAL)
    if not kept:
        return RetrievalResult(None, tuple(cues), considered)
    return RetrievalResult(
        frozenset(kept[0]), tuple(cues), considered, member_order=kept[0]
    )


@dataclass(frozen=True)
class EngineConfig:
    """Knobs of the coherence engine.

    `zta_enabled` / `global_enabled` are the ablation switches: they disable
    zero-topic promotion and former-Cb retrieval respectively.
    """

    beam: int = DEFAULT_BEAM
    zta_enabled: bool = True
    global_enabled: bool = True


@dataclass(frozen=True)
class Retrieval:
    """Trace record of one global retrieval at one zero slot."""

    position: int
    value: Resolution
    cues: tuple[str, ...]
    candidates: tuple[str, ...]
    member_order: tuple[str, ...] = ()


@dataclass(frozen=True)
class HypothesisView:
    """Serializable snapshot of one hypothesis for reports."""

    cb: Optional[str]
    cf: tuple[tuple[str, str], ...]
    transition: str
    zta_applied: bool
    dampened: bool
    anomalous: bool


@dataclass(frozen=True)
class UtteranceReport:
    """Per-utterance analysis record emitted by the engine."""

    discourse_id: str
    index: int
    tense: str
    text: Optional[str]
    seed: bool
    has_zero: bool
    label: str
    cb: Optional[str]
    cf: tuple[tuple[str, str], ...]
    resolutions: tuple[tuple[int, object], ...] = ()
    cues: tuple[str, ...] = ()
    retrievals: tuple[Retrieval, ...] = ()
    hypotheses: tuple[HypothesisView, ...] = ()
    ambiguous: bool = False

    @property
    def resolution_map(self) -> Mapping[int, object]:
        return dict(self.resolutions)


@dataclass(frozen=True)
class DiscourseReport:
    """Full trace for one discourse run."""

    discourse_id: str
    utterances: tuple[UtteranceReport, ...]
    unresolved_ambiguity: bool
    history: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class DiscourseState:
    """Engine state after processing a prefix of a discourse."""

    discourse: Discourse
    config: EngineConfig
    hypotheses: tuple[CenteringHypothesis, ...] = ()
    history: CbHistory = field(default_factory=CbHistory)
    steps: tuple["StepTrace", ...] = ()


@dataclass(frozen=True)
class StepTrace:
    """Raw per-utterance trace kept until end-of-discourse finalization."""

    utterance: Utterance
    hypotheses: tuple[CenteringHypothesis, ...]
    retrievals: tuple[Retrieval, ...]


def _view(h: CenteringHypothesis) -> HypothesisView:
    return HypothesisView(
        cb=h.cb,
        cf=tuple((eid, role.display) for eid, role in h.cf),
        transition=h.transition.display,
        zta_applied=h.zta_applied,
        dampened=h.dampened,
        anomalous=h.anomalous,
    )


def _resolve_locally(
    parent: CenteringHypothesis,
    u: Utterance,
    entities: Mapping[str, DiscourseEntity],
) -> ResolutionOutcome:
    """Resolve every zero of `u` against the parent's Cf, most salient zero
    first, each claim excluding earlier ones."""
    zeros = sorted(u.zeros(), key=lambda z: (z.role.rank, z.surface_position))
    cf_prev = [eid for eid, _ in parent.cf]
    assigned: dict[int, Resolution] = {}
    exhausted: set[int] = set()
    claimed: set[str] = set()
    for zero in zeros:
        res = local_resolution(zero, cf_prev, u, entities, frozenset(claimed))
        assigned[zero.surface_position] = res.entity_id
        if res.entity_id is not None:
            claimed.add(res.entity_id)
        elif res.exhausted:
            exhausted.add(zero.surface_position)
    return ResolutionOutcome(
        assignments=tuple(sorted(assigned.items())),
        exhausted_positions=frozenset(exhausted),
    )


def _seed_state(discourse: Discourse, config: EngineConfig) -> DiscourseState:
    return DiscourseState(discourse=discourse, config=config)


def _seed_hypothesis(u: Utterance) -> CenteringHypothesis:
    cf = rank_cf(u)
    return CenteringHypothesis(
        utterance_index=u.index,
        cb=cf[0][0] if cf else None,
        cf=cf,
        transition=TransitionLabel.CONTINUE,
        seed=True,
        eff_pref=1,
    )


def _apply_retrieval(
    child: CenteringHypothesis, u: Utterance, retrievals: list[Retrieval]
) -> CenteringHypothesis:
    """Fold successful retrievals into a hypothesis: fill the resolutions,
    re-rank the retrieved antecedent to Cf head (it becomes the new Cp), and
    record the cues. Cb and transition label keep their pre-retrieval values."""
    retrievals = [r for r in retrievals if r.value is not None]
    if not retrievals:
        return child
    res = dict(child.resolution_map)
    cues = list(child.cues)
    by_pos = {z.surface_position: z for z in u.zeros()}

    new_head: list[tuple[str, EffectiveRole]] = []
    for r in retrievals:
        res[r.position] = r.value
        for cue in r.cues:
            if cue not in cues:
                cues.append(cue)
        role = EffectiveRole.from_role(by_pos[r.position].role)
        if isinstance(r.value, str):
            members = [r.value]
        else:
            members = list(r.member_order) or sorted(r.value)
        for m in members:
            if all(m != eid for eid, _ in new_head):
                new_head.append((m, role))

    head_ids = {eid for eid, _ in new_head}
    tail = [(eid, role) for eid, role in child.cf if eid not in head_ids]
    cf: CfList = tuple(new_head) + tuple(tail)
    all_resolved = all(
        res.get(z.surface_position) is not None for z in u.zeros()
    )
    return replace(
        child,
        resolutions=tuple(sorted(res.items())),
        cues=tuple(cues),
        cf=cf,
        anomalous=False if all_resolved else child.anomalous,
        retrieval_candidates=tuple((r.position, r.candidates) for r in retrievals),
    )


def coherence_step(state: DiscourseState, u: Utterance) -> DiscourseState:
    """Advance the engine by one utterance.

    Order of play: local resolution per live hypothesis; expansion (plain and
    zero-topic readings); when the best reading is RETAIN with no promoted
    continue available, or ROUGH-SHIFT, global retrieval for each unresolved
    zero; pruning; history push of the accepted reading's Cb.
    """
    entities = state.discourse.entity_map
    config = state.config

    if not state.hypotheses:
        seed = _seed_hypothesis(u)
        hist = state.history
        if seed.cb is not None:
            hist = push_cb(hist, seed.cb, u.index, u.tense is Tense.PAST)
        trace = StepTrace(utterance=u, hypotheses=(seed,), retrievals=())
        return replace(
            state, hypotheses=(seed,), history=hist, steps=state.steps + (trace,)
        )

    outcomes = [_resolve_locally(parent, u, entities) for parent in state.hypotheses]
    children = expand_hypotheses(
        state.hypotheses, u, outcomes, zta_enabled=config.zta_enabled
    )

    # Local Coherence Check: retrieval is gated on the best available reading.
    best_label = min(
        (c.transition for c in children), key=lambda t: t.preference_rank
    )
    zta_available = any(
        c.transition is TransitionLabel.ZTA_CONTINUE for c in children
    )
    needs_global = best_label is TransitionLabel.ROUGH_SHIFT or (
        best_label is TransitionLabel.RETAIN and not zta_available
    )

    all_retrievals: list[Retrieval] = []
    if needs_global and config.global_enabled:
        prev_tense = (
            state.discourse.utterances[u.index - 1].tense if u.index > 0 else None
        )
        updated = []
        for child in children:
            unresolved = [
                z
                for z in u.zeros()
                if child.resolution_map.get(z.surface_position) is None
            ]
            if not unresolved:
                updated.append(child)
                continue
            cf_prev = child.parent.cf_ids if child.parent is not None else ()
            retrievals = []
            for zero in unresolved:
                result = global_retrieve(
                    state.history, zero, u, entities, cf_prev, prev_tense
                )
                retrievals.append(
                    Retrieval(
                        position=zero.surface_position,
                        value=result.value,
                        cues=result.cues,
                        candidates=result.candidates,
                        member_order=result.member_order,
                    )
                )
            got = [r for r in retrievals if r.value is not None]
            new_child = _apply_retrieval(child, u, retrievals) if got else child
            updated.append(new_child)
            all_retrievals.extend(got)
        children = updated

    survivors = prune_hypotheses(children, beam=config.beam)

    accepted = _accepted(survivors)
    hist = state.history
    if accepted is not None and accepted.cb is not None:
        hist = push_cb(hist, accepted.cb, u.index, u.tense is Tense.PAST)

    trace = StepTrace(
        utterance=u,
        hypotheses=tuple(survivors),
        retrievals=tuple(all_retrievals),
    )
    return replace(
        state,
        hypotheses=tuple(survivors),
        history=hist,
        steps=state.steps + (trace,),
    )


def _accepted(survivors: Sequence[CenteringHypothesis]) -> Optional[CenteringHypothesis]:
    """Current best reading; preference ties resolve to the plain (fewest
    promotions) branch for bookkeeping purposes."""
    if not survivors:
        return None
    best_key = rank_key(survivors[0])[:2]
    tied = [h for h in survivors if rank_key(h)[:2] == best_key]
    return min(tied, key=lambda h: (h.zta_count(), rank_key(h)))


def run_discourse(
    discourse: Discourse, config: Optional[EngineConfig] = None
) -> DiscourseReport:
    """Process a whole discourse and return its finalized report."""
    config = config or EngineConfig()
    state = _seed_state(discourse, config)
    for u in discourse.utterances:
        state = coherence_step(state, u)
    return finalize(state)


def finalize(state: DiscourseState) -> DiscourseReport:
    """Turn raw step traces into the final report.

    Statistical labels come from the final best hypothesis's ancestry; on a
    final preference tie (a dampened ambiguity that never resolved) the
    plain-most path wins and the tied readings are compared: utterances where
    their zero resolutions differ are flagged ambiguous.
    """
    discourse = state.discourse
    if not state.steps:
        return DiscourseReport(discourse.id, (), False, ())

    final_live = list(state.hypotheses)
    ordered = sorted(final_live, key=rank_key)
    best = ordered[0]
    best_key = rank_key(best)[:2]
    tied_ids = {id(h) for h in ordered if rank_key(h)[:2] == best_key}
    readings = [
        h
        for h in ordered
        if id(h) in tied_ids
        or (h.ambiguity_keys & best.ambiguity_keys and not h.anomalous)
    ]
    stats_path = min(readings, key=lambda h: (h.zta_count(), rank_key(h)))

    by_index: dict[int, CenteringHypothesis] = {
        h.utterance_index: h for h in stats_path.ancestry()
    }
    reading_chains = [
        {h.utterance_index: h for h in r.ancestry()} for r in readings
    ]

    ambiguous_at: set[int] = set()
    if len(readings) > 1:
        for idx in by_index:
            values = {
                chain[idx].resolutions for chain in reading_chains if idx in chain
            }
            if len(values) > 1:
                ambiguous_at.add(idx)

    reports: list[UtteranceReport] = []
    for step in state.steps:
        u = step.utterance
        chosen = by_index.get(u.index)
        if chosen is None:
            # stats path got pruned mid-way (possible under tiny beams);
            # fall back to the best hypothesis recorded at that step
            chosen = step.hypotheses[0]
        retrieval_map = {r.position: r for r in step.retrievals}
        cues = tuple(chosen.cues)
        reports.append(
            UtteranceReport(
                discourse_id=discourse.id,
                index=u.index,
                tense=u.tense.value,
                text=u.text,
                seed=chosen.seed,
                has_zero=u.has_zero,
                label=chosen.transition.display,
                cb=chosen.cb,
                cf=tuple((eid, role.display) for eid, role in chosen.cf),
                resolutions=chosen.resolutions,
                cues=cues,
                retrievals=tuple(
                    retrieval_map[p]
                    for p in sorted(retrieval_map)
                ),
                hypotheses=tuple(_view(h) for h in step.hypotheses),
                ambiguous=u.index in ambiguous_at,
            )
        )

    return DiscourseReport(
        discourse_id=discourse.id,
        utterances=tuple(reports),
        unresolved_ambiguity=bool(ambiguous_at),
        history=tuple((e.entity_id, e.index) for e in state.history.entries),
    )


def run_corpus(
    discourses: Sequence[Discourse], config: Optional[EngineConfig] = None
) -> list[DiscourseReport]:
    return [run_discourse(d, config) for d in discourses]
