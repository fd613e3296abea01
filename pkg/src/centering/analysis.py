"""Distribution tables, the 2x2 chi-square statistic, and gold evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .engine import CUE_AGREEMENT, CUE_LEXICAL, CUE_TENSE, DiscourseReport
from .model import Discourse, TransitionLabel

#: Column order of the distribution table; the zero-topic continue counts in
#: the CONTINUE column.
COLUMNS = ("continue", "retain", "smooth-shift", "rough-shift")

_COLUMN_OF = {
    TransitionLabel.CONTINUE.display: "continue",
    TransitionLabel.ZTA_CONTINUE.display: "continue",
    TransitionLabel.RETAIN.display: "retain",
    TransitionLabel.SMOOTH_SHIFT.display: "smooth-shift",
    TransitionLabel.ROUGH_SHIFT.display: "rough-shift",
}


@dataclass(frozen=True)
class TransitionTable:
    """2x4 distribution of transitions by zero use. Rows sum over every
    non-seed utterance report; totals are always computed from the cells,
    never taken on trust from elsewhere."""

    with_zero: tuple[int, int, int, int]
    without_zero: tuple[int, int, int, int]

    @property
    def totals(self) -> tuple[int, int, int, int]:
        return tuple(a + b for a, b in zip(self.with_zero, self.without_zero))

    @property
    def grand_total(self) -> int:
        return sum(self.totals)

    def continue_vs_rest(self) -> tuple[int, int, int, int]:
        """(a, b, c, d) for the CONTINUE-vs-others x zero 2x2 split."""
        a = self.with_zero[0]
        b = self.without_zero[0]
        c = sum(self.with_zero[1:])
        d = sum(self.without_zero[1:])
        return a, b, c, d


def tabulate_transitions(reports: Iterable[DiscourseReport]) -> TransitionTable:
    """Count per-utterance transitions split by zero use, excluding
    discourse-initial seeds."""
    rows = {"with": dict.fromkeys(COLUMNS, 0), "without": dict.fromkeys(COLUMNS, 0)}
    for rep in reports:
        for u in rep.utterances:
            if u.seed:
                continue
            col = _COLUMN_OF[u.label]
            rows["with" if u.has_zero else "without"][col] += 1
    return TransitionTable(
        with_zero=tuple(rows["with"][c] for c in COLUMNS),
        without_zero=tuple(rows["without"][c] for c in COLUMNS),
    )


def chi_square_2x2(a: int, b: int, c: int, d: int) -> Optional[float]:
    """Pearson chi-square for a 2x2 table, no continuity correction:
    N(ad-bc)^2 / ((a+b)(c+d)(a+c)(b+d)).

    Returns None (undefined) when any margin is zero.
    """
    if min(a, b, c, d) < 0:
        raise ValueError("counts must be non-negative")
    n = a + b + c + d
    if n == 0:
        raise ValueError("empty table")
    margins = (a + b, c + d, a + c, b + d)
    if 0 in margins:
        return None
    num = n * (a * d - b * c) ** 2
    den = margins[0] * margins[1] * margins[2] * margins[3]
    return num / den


def tabulate_disambiguation(reports: Iterable[DiscourseReport]) -> dict[str, int]:
    """Cue counts over rough-shift utterances with zeros resolved by former-Cb
    retrieval. One utterance may increment several cues, so the total can
    exceed the number of such utterances."""
    counts = {CUE_LEXICAL: 0, CUE_TENSE: 0, CUE_AGREEMENT: 0}
    for rep in reports:
        for u in rep.utterances:
            if u.seed or not u.has_zero:
                continue
            if _COLUMN_OF[u.label] != "rough-shift":
                continue
            for cue in set(u.cues):
                if cue in counts:
                    counts[cue] += 1
    return counts


@dataclass(frozen=True)
class ZeroOutcome:
    """Evaluation record for one zero slot."""

    discourse_id: str
    utterance_index: int
    position: int
    gold: object
    predicted: object
    status: str  # correct | incorrect | unresolved | ungolded


@dataclass(frozen=True)
class GoldSummary:
    correct: int
    incorrect: int
    unresolved: int
    ungolded: int
    by_transition: Mapping[str, tuple[int, int, int]]
    details: tuple[ZeroOutcome, ...] = field(default=(), repr=False)

    @property
    def scored(self) -> int:
        return self.correct + self.incorrect + self.unresolved

    @property
    def accuracy(self) -> Optional[float]:
        if self.scored == 0:
            return None
        return self.correct / self.scored

    @property
    def has_gold(self) -> bool:
        return self.scored > 0


def _norm(value: object) -> object:
    if value is None or isinstance(value, str):
        return value
    return frozenset(value)


def evaluate_gold(
    reports: Sequence[DiscourseReport], corpus: Sequence[Discourse]
) -> GoldSummary:
    """Compare resolved zeros against gold annotations.

    Zeros without a gold annotation are counted separately and never affect
    accuracy. Gold is read from the corpus only here; resolution never sees
    it.
    """
    by_id = {d.id: d for d in corpus}
    correct = incorrect = unresolved = ungolded = 0
    per_label: dict[str, list[int]] = {}
    details: list[ZeroOutcome] = []

    for rep in reports:
        discourse = by_id.get(rep.discourse_id)
        if discourse is None:
            continue
        utts = {u.index: u for u in discourse.utterances}
        for ur in rep.utterances:
            utt = utts.get(ur.index)
            if utt is None:
                continue
            predicted = ur.resolution_map
            for zero in utt.zeros():
                cons = zero.constraints
                gold = _norm(cons.gold_antecedent) if cons is not None else None
                value = _norm(predicted.get(zero.surface_position))
                if gold is None:
                    ungolded += 1
                    status = "ungolded"
                elif value is None:
                    unresolved += 1
                    status = "unresolved"
                elif value == gold:
                    correct += 1
                    status = "correct"
                else:
                    incorrect += 1
                    status = "incorrect"
                if status != "ungolded":
                    tally = per_label.setdefault(ur.label, [0, 0, 0])
                    tally[
                        {"correct": 0, "incorrect": 1, "unresolved": 2}[status]
                    ] += 1
                details.append(
                    ZeroOutcome(
                        discourse_id=rep.discourse_id,
                        utterance_index=ur.index,
                        position=zero.surface_position,
                        gold=gold,
                        predicted=value,
                        status=status,
                    )
                )

    return GoldSummary(
        correct=correct,
        incorrect=incorrect,
        unresolved=unresolved,
        ungolded=ungolded,
        by_transition={k: tuple(v) for k, v in sorted(per_label.items())},
        details=tuple(details),
    )
