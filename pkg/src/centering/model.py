"""Domain types for annotated discourse input and centering state.

Everything here is an immutable value object; the algorithmic modules
(`core`, `resolution`, `hypotheses`, `engine`) are pure functions over these
types, so instances are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterator, Mapping, Optional, Union


class GrammaticalRole(IntEnum):
    """Grammatical-role annotation on a referring expression.

    The integer value is the salience rank: lower ranks outrank higher ones
    when ordering forward-looking centers (topic > empathy > subject >
    object2 > object > others).
    """

    TOPIC = 0
    EMPATHY = 1
    SUBJECT = 2
    OBJECT2 = 3
    OBJECT = 4
    OTHERS = 5

    @property
    def rank(self) -> int:
        return int(self)

    @property
    def display(self) -> str:
        return self.name.lower()


#: Roles that can host a promotable zero. Adjunct/possessor zeros (OTHERS)
#: never become the zero topic.
ARGUMENT_ROLES = frozenset(
    {
        GrammaticalRole.TOPIC,
        GrammaticalRole.EMPATHY,
        GrammaticalRole.SUBJECT,
        GrammaticalRole.OBJECT2,
        GrammaticalRole.OBJECT,
    }
)


class EffectiveRole(IntEnum):
    """Effective salience slot of an entity in a Cf list.

    Mirrors :class:`GrammaticalRole` plus ZERO_TOP, the slot a promoted zero
    topic occupies, which outranks everything (including the grammatical
    topic).
    """

    ZERO_TOP = -1
    TOPIC = 0
    EMPATHY = 1
    SUBJECT = 2
    OBJECT2 = 3
    OBJECT = 4
    OTHERS = 5

    @classmethod
    def from_role(cls, role: GrammaticalRole) -> "EffectiveRole":
        return cls(int(role))

    @property
    def display(self) -> str:
        return self.name.lower().replace("_", "-")


class Form(Enum):
    OVERT_NP = "overt"
    ZERO = "zero"


class Tense(Enum):
    PAST = "past"
    NONPAST = "nonpast"


class TransitionLabel(Enum):
    """Four-way coherence classification, plus the zero-topic continue."""

    CONTINUE = "continue"
    ZTA_CONTINUE = "zta-continue"
    RETAIN = "retain"
    SMOOTH_SHIFT = "smooth-shift"
    ROUGH_SHIFT = "rough-shift"

    @property
    def preference_rank(self) -> int:
        """Coherence preference; lower is preferred. The zero-topic continue
        ties with the plain continue."""
        return _PREFERENCE[self]

    @property
    def display(self) -> str:
        return self.value


_PREFERENCE = {
    TransitionLabel.CONTINUE: 1,
    TransitionLabel.ZTA_CONTINUE: 1,
    TransitionLabel.RETAIN: 2,
    TransitionLabel.SMOOTH_SHIFT: 3,
    TransitionLabel.ROUGH_SHIFT: 4,
}


@dataclass(frozen=True)
class DiscourseEntity:
    """A semantic discourse entity realizable by referring expressions.

    cardinality is 1 for individuals and >1 for pluralities annotated as a
    fixed-size collection ("two authorities").
    """

    id: str
    semantic_types: frozenset[str]
    cardinality: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "semantic_types", frozenset(self.semantic_types))


#: Gold annotation for a zero: a single entity id or a set of ids.
GoldAntecedent = Union[str, frozenset[str]]


@dataclass(frozen=True)
class ResolutionConstraints:
    """Cue annotations on a zero slot.

    compatible_types is the selectional restriction of the verb slot (empty =
    unconstrained); required_cardinality encodes number-sensitive expressions
    ("both"); gold_antecedent is evaluation-only and never consulted by the
    resolver.
    """

    compatible_types: frozenset[str] = frozenset()
    required_cardinality: Optional[int] = None
    gold_antecedent: Optional[GoldAntecedent] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "compatible_types", frozenset(self.compatible_types))
        gold = self.gold_antecedent
        if gold is not None and not isinstance(gold, str):
            object.__setattr__(self, "gold_antecedent", frozenset(gold))


@dataclass(frozen=True)
class ReferringExpression:
    """One overt NP or zero slot in an utterance.

    entity_ref is the gold-annotated entity for overt NPs; for zeros it is
    None (UNRESOLVED) until the engine resolves it. wa/ga marking mirrors the
    particle annotation; the grammatical topic is the wa-marked expression.
    """

    entity_ref: Optional[str]
    form: Form
    role: GrammaticalRole
    surface_position: int
    wa_marked: bool = False
    ga_marked: bool = False
    constraints: Optional[ResolutionConstraints] = None

    @property
    def is_zero(self) -> bool:
        return self.form is Form.ZERO

    @property
    def compatible_types(self) -> frozenset[str]:
        if self.constraints is None:
            return frozenset()
        return self.constraints.compatible_types

    @property
    def required_cardinality(self) -> Optional[int]:
        if self.constraints is None:
            return None
        return self.constraints.required_cardinality


@dataclass(frozen=True)
class Utterance:
    """One pre-segmented simplex clause."""

    index: int
    expressions: tuple[ReferringExpression, ...]
    tense: Tense = Tense.NONPAST
    text: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "expressions", tuple(self.expressions))

    def zeros(self) -> tuple[ReferringExpression, ...]:
        return tuple(e for e in self.expressions if e.is_zero)

    def overt_entities(self) -> frozenset[str]:
        return frozenset(
            e.entity_ref
            for e in self.expressions
            if not e.is_zero and e.entity_ref is not None
        )

    @property
    def has_zero(self) -> bool:
        return any(e.is_zero for e in self.expressions)


@dataclass(frozen=True)
class Discourse:
    """An annotated discourse: entity declarations plus ordered utterances."""

    id: str
    entities: tuple[DiscourseEntity, ...]
    utterances: tuple[Utterance, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "utterances", tuple(self.utterances))

    @property
    def entity_map(self) -> Mapping[str, DiscourseEntity]:
        return {e.id: e for e in self.entities}


#: A Cf list: entities in salience order with their effective roles.
CfList = tuple[tuple[str, EffectiveRole], ...]

#: What a zero resolved to: an entity id, a set of ids, or None (unresolved).
Resolution = Union[str, frozenset[str], None]


@dataclass(frozen=True)
class CenteringHypothesis:
    """One (Cb, Cf, transition) reading of an utterance.

    Hypotheses form chains through `parent`; utterances may carry several in
    parallel. `resolutions` maps each zero's surface position to its
    antecedent. `eff_pref` is the preference used for ranking: normally the
    transition's preference rank, but a dampened zero-topic child takes its
    plain sibling's rank so the two tie. `ambiguity_keys` tag dampened branch
    points; preference never separates hypotheses sharing a key.
    """

    utterance_index: int
    cb: Optional[str]
    cf: CfList
    transition: TransitionLabel
    zta_applied: bool = False
    dampened: bool = False
    seed: bool = False
    anomalous: bool = False
    resolutions: tuple[tuple[int, Resolution], ...] = ()
    cues: tuple[str, ...] = ()
    retrieval_candidates: tuple[tuple[int, tuple[str, ...]], ...] = ()
    parent: Optional["CenteringHypothesis"] = None
    ambiguity_keys: frozenset[str] = frozenset()
    eff_pref: Optional[int] = None

    def __post_init__(self) -> None:
        if self.eff_pref is None:
            object.__setattr__(self, "eff_pref", _PREFERENCE[self.transition])

    @property
    def cp(self) -> Optional[str]:
        return self.cf[0][0] if self.cf else None

    @property
    def cf_ids(self) -> tuple[str, ...]:
        return tuple(eid for eid, _ in self.cf)

    @property
    def resolution_map(self) -> Mapping[int, Resolution]:
        return dict(self.resolutions)

    def ancestry(self) -> Iterator["CenteringHypothesis"]:
        """Yield self, parent, grandparent, ... up to the seed."""
        node: Optional[CenteringHypothesis] = self
        while node is not None:
            yield node
            node = node.parent

    def chain_preference(self) -> tuple[int, ...]:
        """Preference key, current utterance first, then up the parent chain."""
        return tuple(h.eff_pref for h in self.ancestry())

    def zta_count(self) -> int:
        return sum(1 for h in self.ancestry() if h.zta_applied)

    def identity_key(self) -> tuple:
        """Key for collapsing duplicate readings spawned by different parents."""
        return (
            self.utterance_index,
            self.cb,
            self.cf,
            self.transition,
            self.zta_applied,
            self.resolutions,
            self.anomalous,
        )


@dataclass(frozen=True)
class CbHistoryEntry:
    """One former backward-looking center.

    `index` is the most recent utterance at which the entity was Cb (recency
    order collapses duplicates to that occurrence); `past_tense` is sticky:
    true if the entity was Cb in any PAST-tense utterance.
    """

    entity_id: str
    index: int
    past_tense: bool = False


@dataclass(frozen=True)
class CbHistory:
    """Recency-ordered list of former Cbs, most recent first."""

    entries: tuple[CbHistoryEntry, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))

    def ids(self) -> tuple[str, ...]:
        return tuple(e.entity_id for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[CbHistoryEntry]:
        return iter(self.entries)


@dataclass(frozen=True)
class Violation:
    """One well-formedness violation found by validate_discourse."""

    code: str
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message} [{self.code}]"


def validate_discourse(discourse: Discourse) -> list[Violation]:
    """Check every structural invariant of an annotated discourse.

    Violations are data, not faults: the list is empty iff the discourse is
    well-formed.
    """
    out: list[Violation] = []
    where = f"discourse '{discourse.id}'"

    seen_ids: set[str] = set()
    for ent in discourse.entities:
        loc = f"{where}, entity '{ent.id}'"
        if ent.id in seen_ids:
            out.append(Violation("duplicate-entity-id", loc, "entity id declared twice"))
        seen_ids.add(ent.id)
        if not ent.semantic_types:
            out.append(Violation("empty-semantic-types", loc, "semantic_types must be non-empty"))
        if ent.cardinality < 1:
            out.append(Violation("bad-cardinality", loc, f"cardinality {ent.cardinality} < 1"))

    known = {e.id for e in discourse.entities}
    seen_indices: set[int] = set()
    for pos, utt in enumerate(discourse.utterances):
        uloc = f"{where}, utterance {utt.index}"
        if utt.index in seen_indices:
            out.append(Violation("duplicate-utterance-index", uloc, "utterance index repeated"))
        seen_indices.add(utt.index)
        if utt.index != pos:
            out.append(
                Violation("index-out-of-order", uloc, f"expected index {pos}, found {utt.index}")
            )

        topics = [e for e in utt.expressions if e.role is GrammaticalRole.TOPIC]
        if len(topics) > 1:
            out.append(Violation("double-topic", uloc, f"{len(topics)} TOPIC expressions"))

        last_pos: Optional[int] = None
        for expr in utt.expressions:
            eloc = f"{uloc}, expression at position {expr.surface_position}"
            if last_pos is not None and expr.surface_position <= last_pos:
                out.append(
                    Violation(
                        "position-order",
                        eloc,
                        "surface positions must be strictly increasing",
                    )
                )
            last_pos = expr.surface_position
            if expr.wa_marked and expr.ga_marked:
                out.append(Violation("wa-ga-conflict", eloc, "wa and ga marking both set"))
            if expr.role is GrammaticalRole.TOPIC and not expr.wa_marked:
                out.append(
                    Violation("topic-not-wa", eloc, "TOPIC role requires wa marking")
                )
            if not expr.is_zero:
                if expr.entity_ref is None:
                    out.append(
                        Violation("unresolved-overt", eloc, "overt NP without entity reference")
                    )
                if expr.constraints is not None:
                    out.append(
                        Violation(
                            "overt-constraints", eloc, "resolution constraints on an overt NP"
                        )
                    )
            if expr.entity_ref is not None and expr.entity_ref not in known:
                out.append(
                    Violation("unknown-entity", eloc, f"unknown entity id '{expr.entity_ref}'")
                )
            cons = expr.constraints
            if cons is not None:
                if cons.required_cardinality is not None and cons.required_cardinality < 1:
                    out.append(
                        Violation(
                            "bad-required-cardinality",
                            eloc,
                            f"required_cardinality {cons.required_cardinality} < 1",
                        )
                    )
                gold = cons.gold_antecedent
                gold_ids = (
                    [gold] if isinstance(gold, str) else sorted(gold) if gold else []
                )
                for gid in gold_ids:
                    if gid not in known:
                        out.append(
                            Violation(
                                "unknown-gold", eloc, f"gold antecedent '{gid}' not declared"
                            )
                        )
    return out
