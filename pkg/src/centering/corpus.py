"""Corpus and report serialization.

The corpus format is a JSON document: a top-level object with a "discourses"
list (a bare list of discourse objects is also accepted). Each discourse
declares its entities, then its utterances with their referring expressions.
See the README for the schema and `centering/fixtures/` for worked examples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Any, Iterable, Optional, Sequence

from .engine import DiscourseReport, HypothesisView, Retrieval, UtteranceReport
from .model import (
    Discourse,
    DiscourseEntity,
    Form,
    GrammaticalRole,
    ReferringExpression,
    ResolutionConstraints,
    Tense,
    Utterance,
)


@dataclass(frozen=True)
class Diagnostic:
    """One parse problem, with the exact location it was found at."""

    kind: str
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message} [{self.kind}]"


class CorpusFormatError(ValueError):
    """Raised when a corpus document is malformed; parsing is atomic."""

    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        head = str(self.diagnostics[0]) if self.diagnostics else "invalid corpus"
        extra = len(self.diagnostics) - 1
        super().__init__(head + (f" (+{extra} more)" if extra > 0 else ""))


_ROLES = {role.name.lower(): role for role in GrammaticalRole}
_FORMS = {"overt": Form.OVERT_NP, "overt_np": Form.OVERT_NP, "zero": Form.ZERO}
_TENSES = {"past": Tense.PAST, "nonpast": Tense.NONPAST}


def parse_corpus(text: str) -> list[Discourse]:
    """Parse a corpus document into discourse structures.

    Fails atomically: any problem raises CorpusFormatError carrying every
    diagnostic found, each naming its exact location. Whitespace-only input
    is an empty corpus.
    """
    if not text.strip():
        return []
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(
            [
                Diagnostic(
                    "malformed-json",
                    f"line {exc.lineno}, column {exc.colno}",
                    exc.msg,
                )
            ]
        ) from exc

    diags: list[Diagnostic] = []
    if isinstance(data, dict):
        items = data.get("discourses")
        if not isinstance(items, list):
            raise CorpusFormatError(
                [Diagnostic("malformed-structure", "$", "expected a 'discourses' list")]
            )
    elif isinstance(data, list):
        items = data
    else:
        raise CorpusFormatError(
            [Diagnostic("malformed-structure", "$", "expected an object or a list")]
        )

    discourses = []
    seen_ids: set[str] = set()
    for i, item in enumerate(items):
        d = _parse_discourse(item, f"discourses[{i}]", diags)
        if d is not None:
            if d.id in seen_ids:
                diags.append(
                    Diagnostic(
                        "duplicate-discourse-id",
                        f"discourses[{i}]",
                        f"discourse id '{d.id}' repeated",
                    )
                )
            seen_ids.add(d.id)
            discourses.append(d)
    if diags:
        raise CorpusFormatError(diags)
    return discourses


def _parse_discourse(item: Any, loc: str, diags: list[Diagnostic]) -> Optional[Discourse]:
    if not isinstance(item, dict):
        diags.append(Diagnostic("malformed-structure", loc, "discourse must be an object"))
        return None
    did = item.get("id")
    if not isinstance(did, str) or not did:
        diags.append(Diagnostic("malformed-structure", f"{loc}.id", "missing discourse id"))
        did = f"<anonymous {loc}>"

    entities: list[DiscourseEntity] = []
    known: set[str] = set()
    for j, ent in enumerate(item.get("entities", [])):
        eloc = f"{loc}.entities[{j}]"
        if not isinstance(ent, dict) or not isinstance(ent.get("id"), str):
            diags.append(Diagnostic("malformed-structure", eloc, "entity needs an 'id'"))
            continue
        types = ent.get("types", [])
        if not isinstance(types, list) or not all(isinstance(t, str) for t in types):
            diags.append(Diagnostic("malformed-structure", eloc, "'types' must be strings"))
            types = []
        card = ent.get("cardinality", 1)
        if not isinstance(card, int):
            diags.append(Diagnostic("malformed-structure", eloc, "'cardinality' must be an integer"))
            card = 1
        entities.append(DiscourseEntity(ent["id"], frozenset(types), card))
        known.add(ent["id"])

    utterances: list[Utterance] = []
    seen_index: set[int] = set()
    for j, utt in enumerate(item.get("utterances", [])):
        uloc = f"{loc}.utterances[{j}]"
        if not isinstance(utt, dict):
            diags.append(Diagnostic("malformed-structure", uloc, "utterance must be an object"))
            continue
        index = utt.get("index", j)
        if not isinstance(index, int):
            diags.append(Diagnostic("malformed-structure", f"{uloc}.index", "index must be an integer"))
            index = j
        if index in seen_index:
            diags.append(
                Diagnostic(
                    "duplicate-utterance-index", f"{uloc}.index", f"utterance index {index} repeated"
                )
            )
        seen_index.add(index)
        tense_raw = utt.get("tense", "nonpast")
        tense = _TENSES.get(str(tense_raw).lower())
        if tense is None:
            diags.append(
                Diagnostic("unknown-tense", f"{uloc}.tense", f"unknown tense '{tense_raw}'")
            )
            tense = Tense.NONPAST
        expressions = []
        for k, expr in enumerate(utt.get("expressions", [])):
            parsed = _parse_expression(expr, f"{uloc}.expressions[{k}]", known, diags)
            if parsed is not None:
                expressions.append(parsed)
        utterances.append(
            Utterance(
                index=index,
                expressions=tuple(expressions),
                tense=tense,
                text=utt.get("text"),
            )
        )
    return Discourse(id=did, entities=tuple(entities), utterances=tuple(utterances))


def _parse_expression(
    expr: Any, loc: str, known: set[str], diags: list[Diagnostic]
) -> Optional[ReferringExpression]:
    if not isinstance(expr, dict):
        diags.append(Diagnostic("malformed-structure", loc, "expression must be an object"))
        return None
    role_raw = str(expr.get("role", "")).lower()
    role = _ROLES.get(role_raw)
    if role is None:
        diags.append(Diagnostic("unknown-role", f"{loc}.role", f"unknown role tag '{role_raw}'"))
        return None
    form_raw = str(expr.get("form", "overt")).lower()
    form = _FORMS.get(form_raw)
    if form is None:
        diags.append(Diagnostic("unknown-form", f"{loc}.form", f"unknown form '{form_raw}'"))
        return None

    entity = expr.get("entity")
    entity_ref: Optional[str]
    if entity in (None, "?"):
        entity_ref = None
    elif isinstance(entity, str):
        entity_ref = entity
        if entity not in known:
            diags.append(
                Diagnostic("unknown-entity", f"{loc}.entity", f"unknown entity id '{entity}'")
            )
    else:
        diags.append(Diagnostic("malformed-structure", f"{loc}.entity", "entity must be a string"))
        entity_ref = None

    constraints = None
    raw_cons = expr.get("constraints")
    if raw_cons is not None:
        if not isinstance(raw_cons, dict):
            diags.append(
                Diagnostic("malformed-structure", f"{loc}.constraints", "constraints must be an object")
            )
        else:
            gold = raw_cons.get("gold")
            gold_value: Any = None
            if isinstance(gold, str):
                gold_value = gold
                if gold not in known:
                    diags.append(
                        Diagnostic(
                            "unknown-entity", f"{loc}.constraints.gold", f"unknown entity id '{gold}'"
                        )
                    )
            elif isinstance(gold, list):
                for g in gold:
                    if g not in known:
                        diags.append(
                            Diagnostic(
                                "unknown-entity",
                                f"{loc}.constraints.gold",
                                f"unknown entity id '{g}'",
                            )
                        )
                gold_value = frozenset(gold)
            constraints = ResolutionConstraints(
                compatible_types=frozenset(raw_cons.get("types", [])),
                required_cardinality=raw_cons.get("cardinality"),
                gold_antecedent=gold_value,
            )

    return ReferringExpression(
        entity_ref=entity_ref,
        form=form,
        role=role,
        surface_position=int(expr.get("pos", 0)),
        wa_marked=bool(expr.get("wa", False)),
        ga_marked=bool(expr.get("ga", False)),
        constraints=constraints,
    )


def serialize_corpus(discourses: Iterable[Discourse]) -> str:
    """Canonical JSON rendering; parse(serialize(parse(x))) == parse(x)."""
    out = {"discourses": [_dump_discourse(d) for d in discourses]}
    return json.dumps(out, indent=2, sort_keys=False) + "\n"


def _dump_discourse(d: Discourse) -> dict:
    return {
        "id": d.id,
        "entities": [
            {
                "id": e.id,
                "types": sorted(e.semantic_types),
                "cardinality": e.cardinality,
            }
            for e in d.entities
        ],
        "utterances": [
            {
                "index": u.index,
                "tense": u.tense.value,
                **({"text": u.text} if u.text is not None else {}),
                "expressions": [_dump_expression(e) for e in u.expressions],
            }
            for u in d.utterances
        ],
    }


def _dump_expression(e: ReferringExpression) -> dict:
    out: dict[str, Any] = {
        "entity": e.entity_ref if e.entity_ref is not None else "?",
        "form": e.form.value,
        "role": e.role.display,
        "pos": e.surface_position,
    }
    if e.wa_marked:
        out["wa"] = True
    if e.ga_marked:
        out["ga"] = True
    if e.constraints is not None:
        cons: dict[str, Any] = {}
        if e.constraints.compatible_types:
            cons["types"] = sorted(e.constraints.compatible_types)
        if e.constraints.required_cardinality is not None:
            cons["cardinality"] = e.constraints.required_cardinality
        gold = e.constraints.gold_antecedent
        if gold is not None:
            cons["gold"] = gold if isinstance(gold, str) else sorted(gold)
        out["constraints"] = cons
    return out


# -- reports ---------------------------------------------------------------


def serialize_reports(reports: Sequence[DiscourseReport], format: str = "text") -> str:
    """Render analysis reports.

    "machine" is line-delimited JSON that round-trips through read_reports;
    "text" is the human trace. Both are deterministic and line-stable.
    """
    if format == "machine":
        return _reports_machine(reports)
    if format == "text":
        return _reports_text(reports)
    raise ValueError(f"unknown report format '{format}'")


def _res_value(value: Any) -> Any:
    if value is None or isinstance(value, str):
        return value
    return sorted(value)


def _reports_machine(reports: Sequence[DiscourseReport]) -> str:
    lines = []
    for rep in reports:
        for u in rep.utterances:
            lines.append(
                json.dumps(
                    {
                        "record": "utterance",
                        "discourse": u.discourse_id,
                        "index": u.index,
                        "tense": u.tense,
                        "text": u.text,
                        "seed": u.seed,
                        "has_zero": u.has_zero,
                        "label": u.label,
                        "cb": u.cb,
                        "cf": [list(pair) for pair in u.cf],
                        "resolutions": [[p, _res_value(v)] for p, v in u.resolutions],
                        "cues": list(u.cues),
                        "retrievals": [
                            {
                                "pos": r.position,
                                "value": _res_value(r.value),
                                "cues": list(r.cues),
                                "candidates": list(r.candidates),
                                "order": list(r.member_order),
                            }
                            for r in u.retrievals
                        ],
                        "hypotheses": [
                            {
                                "cb": h.cb,
                                "cf": [list(pair) for pair in h.cf],
                                "transition": h.transition,
                                "zta": h.zta_applied,
                                "dampened": h.dampened,
                                "anomalous": h.anomalous,
                            }
                            for h in u.hypotheses
                        ],
                        "ambiguous": u.ambiguous,
                    },
                    sort_keys=True,
                )
            )
        lines.append(
            json.dumps(
                {
                    "record": "discourse",
                    "discourse": rep.discourse_id,
                    "unresolved_ambiguity": rep.unresolved_ambiguity,
                    "history": [list(pair) for pair in rep.history],
                },
                sort_keys=True,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def read_reports(text: str) -> list[DiscourseReport]:
    """Parse machine-format report output back into report objects."""
    pending: dict[str, list[UtteranceReport]] = {}
    out: list[DiscourseReport] = []
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(
                [Diagnostic("malformed-json", f"line {n}", exc.msg)]
            ) from exc
        if data.get("record") == "utterance":
            res = tuple(
                (
                    int(p),
                    v if v is None or isinstance(v, str) else frozenset(v),
                )
                for p, v in data.get("resolutions", [])
            )
            retrievals = tuple(
                Retrieval(
                    position=int(r["pos"]),
                    value=(
                        r["value"]
                        if r["value"] is None or isinstance(r["value"], str)
                        else frozenset(r["value"])
                    ),
                    cues=tuple(r.get("cues", [])),
                    candidates=tuple(r.get("candidates", [])),
                    member_order=tuple(r.get("order", [])),
                )
                for r in data.get("retrievals", [])
            )
            hyps = tuple(
                HypothesisView(
                    cb=h.get("cb"),
                    cf=tuple((a, b) for a, b in h.get("cf", [])),
                    transition=h["transition"],
                    zta_applied=bool(h.get("zta")),
                    dampened=bool(h.get("dampened")),
                    anomalous=bool(h.get("anomalous")),
                )
                for h in data.get("hypotheses", [])
            )
            rep = UtteranceReport(
                discourse_id=data["discourse"],
                index=int(data["index"]),
                tense=data["tense"],
                text=data.get("text"),
                seed=bool(data["seed"]),
                has_zero=bool(data["has_zero"]),
                label=data["label"],
                cb=data.get("cb"),
                cf=tuple((a, b) for a, b in data.get("cf", [])),
                resolutions=res,
                cues=tuple(data.get("cues", [])),
                retrievals=retrievals,
                hypotheses=hyps,
                ambiguous=bool(data.get("ambiguous")),
            )
            pending.setdefault(data["discourse"], []).append(rep)
        elif data.get("record") == "discourse":
            did = data["discourse"]
            out.append(
                DiscourseReport(
                    discourse_id=did,
                    utterances=tuple(pending.pop(did, [])),
                    unresolved_ambiguity=bool(data.get("unresolved_ambiguity")),
                    history=tuple((a, int(b)) for a, b in data.get("history", [])),
                )
            )
    for did, utts in pending.items():
        out.append(DiscourseReport(did, tuple(utts), False, ()))
    return out


def _fmt_cf(cf: Sequence[tuple[str, str]]) -> str:
    return "[" + ", ".join(f"{eid}/{role}" for eid, role in cf) + "]"


def _fmt_resolution(value: Any) -> str:
    if value is None:
        return "UNRESOLVED"
    if isinstance(value, str):
        return value
    return "{" + "+".join(sorted(value)) + "}"


def _reports_text(reports: Sequence[DiscourseReport]) -> str:
    lines: list[str] = ["# centering trace: cb | cf | transition | zero resolutions | cues"]
    for rep in reports:
        lines.append(f"== discourse {rep.discourse_id} ==")
        for u in rep.utterances:
            bits = [f"u{u.index}"]
            if u.seed:
                bits.append("[seed]")
            bits.append(u.tense)
            bits.append(f"cb={u.cb if u.cb is not None else '-'}")
            bits.append(f"cf={_fmt_cf(u.cf)}")
            bits.append(u.label.upper())
            if u.resolutions:
                shown = ", ".join(
                    f"{p}->{_fmt_resolution(v)}" for p, v in u.resolutions
                )
                bits.append(f"zeros: {shown}")
            if u.cues:
                bits.append("cue=" + "+".join(u.cues))
            if u.ambiguous:
                bits.append("AMBIGUOUS")
            lines.append("  " + " | ".join(bits))
            if len(u.hypotheses) > 1:
                for n, h in enumerate(u.hypotheses, start=1):
                    flags = []
                    if h.dampened:
                        flags.append("dampened")
                    if h.anomalous:
                        flags.append("anomalous")
                    suffix = f" ({', '.join(flags)})" if flags else ""
                    lines.append(
                        f"      Cf{n}: {h.transition.upper()} cb="
                        f"{h.cb if h.cb is not None else '-'} cf={_fmt_cf(h.cf)}{suffix}"
                    )
        amb = "yes" if rep.unresolved_ambiguity else "no"
        lines.append(f"  summary: utterances={len(rep.utterances)} unresolved-ambiguity={amb}")
    return "\n".join(lines) + "\n"


# -- bundled sample corpora --------------------------------------------------

FIXTURE_NAMES = (
    "classroom_exam",
    "classroom_exam_topic",
    "research_lab",
    "phone_card",
    "bank_pos",
    "transaction_insurance",
    "etching_factory",
    "factory_article",
    "cvd_device",
    "heater_factory",
    "device_lineup",
)


def fixture_text(name: str) -> str:
    """Raw text of a bundled sample corpus (see FIXTURE_NAMES)."""
    pkg = resources.files("centering") / "fixtures" / f"{name}.centering.json"
    return pkg.read_text(encoding="utf-8")


def load_fixture(name: str) -> Discourse:
    """Parse a bundled sample corpus; each bundle holds one discourse."""
    discourses = parse_corpus(fixture_text(name))
    if len(discourses) != 1:
        raise ValueError(f"fixture '{name}' holds {len(discourses)} discourses")
    return discourses[0]


def load_all_fixtures() -> list[Discourse]:
    return [load_fixture(name) for name in FIXTURE_NAMES]
