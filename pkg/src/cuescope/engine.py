"""Scope resolution and per-concept modifier assignment.

Matched cues are resolved into per-concept values in four steps:

1. Pseudo suppression: a trigger or termination match whose span overlaps
   a pseudo match of the same dimension is discarded.
2. Raw scopes: each surviving trigger casts a scope on the side(s) its
   direction points to, at most ``window`` tokens from the cue's edge and
   never past the sentence.  A bidirectional trigger casts one scope on
   each side.
3. Termination truncation: a same-dimension termination cuts every scope
   extending across it.  A forward-stopping termination T cuts forward
   scopes so they end at T's first token; a backward-stopping one cuts
   backward scopes so they start at T's last token; bidirectional
   terminations do both.  Terminations act across the whole sentence;
   their window column is ignored.
4. Assignment: per dimension, among scopes that intersect the concept and
   whose cue does not itself overlap the concept, the nearest cue wins
   (edge-to-edge token distance).  Distance ties prefer the value that
   preserves more information (possible over negated, hypothetical over
   historical), then the leftmost cue, then the lowest rule id.

Dimensions without a winning cue keep their defaults: affirmed, patient,
recent.  All functions here are pure; tokens must be lowercased by the
caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .matcher import CueMatch, RuleTrie, find_matches_naive, find_matches_trie
from .rules import CueType, Dimension, Direction, RuleSet, RuleValue


class NegationStatus(Enum):
    AFFIRMED = "affirmed"
    NEGATED = "negated"
    POSSIBLE = "possible"


class ExperiencerStatus(Enum):
    PATIENT = "patient"
    OTHER = "other"


class TemporalityStatus(Enum):
    RECENT = "recent"
    HISTORICAL = "historical"
    HYPOTHETICAL = "hypothetical"


DEFAULTS = {
    Dimension.NEGATION: NegationStatus.AFFIRMED,
    Dimension.EXPERIENCER: ExperiencerStatus.PATIENT,
    Dimension.TEMPORALITY: TemporalityStatus.RECENT,
}

#: Annotation value assigned by each rule value.
ASSIGNED_VALUE = {
    RuleValue.NEGATED: NegationStatus.NEGATED,
    RuleValue.POSSIBLE: NegationStatus.POSSIBLE,
    RuleValue.NONPATIENT: ExperiencerStatus.OTHER,
    RuleValue.HISTORICAL: TemporalityStatus.HISTORICAL,
    RuleValue.HYPOTHETICAL: TemporalityStatus.HYPOTHETICAL,
}

#: Tie-break rank within a dimension; lower wins on exact distance ties.
_VALUE_RANK = {
    NegationStatus.POSSIBLE: 0,
    NegationStatus.NEGATED: 1,
    ExperiencerStatus.OTHER: 0,
    TemporalityStatus.HYPOTHETICAL: 0,
    TemporalityStatus.HISTORICAL: 1,
}

#: Allowed annotation/gold values per dimension name, as plain strings.
DIMENSION_VALUES = {
    Dimension.NEGATION.value: {v.value for v in NegationStatus},
    Dimension.EXPERIENCER.value: {v.value for v in ExperiencerStatus},
    Dimension.TEMPORALITY.value: {v.value for v in TemporalityStatus},
}


class InvalidSpan(ValueError):
    """A concept span outside the sentence's token range."""

    def __init__(self, message: str, index: int | None = None):
        self.index = index
        where = f"record {index}: " if index is not None else ""
        super().__init__(f"{where}{message}")


@dataclass(frozen=True, slots=True)
class ConceptSpan:
    """Half-open token interval [start, end) of a concept mention."""

    start: int
    end: int


@dataclass(frozen=True, slots=True)
class Scope:
    """Token interval a surviving trigger affects, after windowing and
    truncation.  ``extends`` records which side of the cue it lies on."""

    cue: CueMatch
    dimension: Dimension
    value: NegationStatus | ExperiencerStatus | TemporalityStatus
    start: int
    end: int
    extends: Direction  # FORWARD or BACKWARD only


@dataclass(frozen=True)
class ContextAnnotation:
    """Per-concept result: one value per dimension plus the cue that set it.

    ``evidence`` holds an entry for exactly the dimensions with a
    non-default value.
    """

    negation: NegationStatus = NegationStatus.AFFIRMED
    experiencer: ExperiencerStatus = ExperiencerStatus.PATIENT
    temporality: TemporalityStatus = TemporalityStatus.RECENT
    evidence: dict[Dimension, CueMatch] = field(default_factory=dict)

    def value(self, dimension: Dimension):
        if dimension is Dimension.NEGATION:
            return self.negation
        if dimension is Dimension.EXPERIENCER:
            return self.experiencer
        return self.temporality


def _overlaps(a_start: int, a_end: int, b_start: int, b_end: int) -> bool:
    return a_start < b_end and b_start < a_end


def resolve_scopes(matches: Sequence[CueMatch], ruleset: RuleSet, sentence_len: int) -> list[Scope]:
    """Apply pseudo suppression, windowing and termination truncation.

    Returns the surviving non-empty scopes in match order (bidirectional
    triggers contribute up to two).
    """
    pseudo_spans: dict[Dimension, list[CueMatch]] = {}
    triggers: list[CueMatch] = []
    terminations: list[CueMatch] = []
    for m in matches:
        rule = ruleset[m.rule_id]
        if rule.cue_type is CueType.PSEUDO:
            pseudo_spans.setdefault(rule.dimension, []).append(m)
        elif rule.cue_type is CueType.TRIGGER:
            triggers.append(m)
        else:
            terminations.append(m)

    def suppressed(m: CueMatch, dimension: Dimension) -> bool:
        return any(
            _overlaps(m.start, m.end, p.start, p.end)
            for p in pseudo_spans.get(dimension, ())
        )

    # Terminations that survive pseudo suppression, keyed by the side they
    # stop; a bidirectional termination stops both sides.
    forward_stops: dict[Dimension, list[CueMatch]] = {}
    backward_stops: dict[Dimension, list[CueMatch]] = {}
    for m in terminations:
        rule = ruleset[m.rule_id]
        if suppressed(m, rule.dimension):
            continue
        if rule.direction in (Direction.FORWARD, Direction.BIDIRECTIONAL):
            forward_stops.setdefault(rule.dimension, []).append(m)
        if rule.direction in (Direction.BACKWARD, Direction.BIDIRECTIONAL):
            backward_stops.setdefault(rule.dimension, []).append(m)

    scopes: list[Scope] = []

    def add_forward(m: CueMatch, rule) -> None:
        start = m.end
        end = min(m.end + rule.window, sentence_len)
        # a forward-stopping termination starting inside the scope cuts it
        for t in forward_stops.get(rule.dimension, ()):
            if start < t.start < end:
                end = t.start
        if start < end:
            scopes.append(Scope(m, rule.dimension, ASSIGNED_VALUE[rule.value],
                                start, end, Direction.FORWARD))

    def add_backward(m: CueMatch, rule) -> None:
        start = max(m.start - rule.window, 0)
        end = m.start
        for t in backward_stops.get(rule.dimension, ()):
            if start < t.end < end:
                start = t.end
        if start < end:
            scopes.append(Scope(m, rule.dimension, ASSIGNED_VALUE[rule.value],
                                start, end, Direction.BACKWARD))

    for m in triggers:
        rule = ruleset[m.rule_id]
        if suppressed(m, rule.dimension):
            continue
        if rule.direction in (Direction.FORWARD, Direction.BIDIRECTIONAL):
            add_forward(m, rule)
        if rule.direction in (Direction.BACKWARD, Direction.BIDIRECTIONAL):
            add_backward(m, rule)
    return scopes


def _cue_distance(cue: CueMatch, concept: ConceptSpan) -> int:
    """Token gap between the cue's nearest edge and the concept's."""
    if cue.end <= concept.start:
        return concept.start - cue.end
    return cue.start - concept.end


def annotate(
    tokens: Sequence[str],
    concept: ConceptSpan,
    ruleset: RuleSet,
    trie: RuleTrie | None = None,
) -> ContextAnnotation:
    """Classify one concept mention within one sentence.

    Matching runs through ``trie`` when given, else through the naive
    reference matcher; the result is identical either way.  Raises
    :class:`InvalidSpan` when the concept lies outside the token range.
    """
    n = len(tokens)
    if not (0 <= concept.start < concept.end <= n):
        raise InvalidSpan(f"concept [{concept.start}, {concept.end}) outside token range of length {n}")
    if trie is not None:
        matches = find_matches_trie(trie, tokens)
    else:
        matches = find_matches_naive(ruleset, tokens)
    scopes = resolve_scopes(matches, ruleset, n)

    best: dict[Dimension, tuple[tuple, Scope]] = {}
    for scope in scopes:
        if not _overlaps(scope.start, scope.end, concept.start, concept.end):
            continue
        cue = scope.cue
        if _overlaps(cue.start, cue.end, concept.start, concept.end):
            continue  # a cue never modifies a concept it is part of
        key = (_cue_distance(cue, concept), _VALUE_RANK[scope.value], cue.start, cue.rule_id)
        current = best.get(scope.dimension)
        if current is None or key < current[0]:
            best[scope.dimension] = (key, scope)

    values = dict(DEFAULTS)
    evidence: dict[Dimension, CueMatch] = {}
    for dimension, (_, scope) in best.items():
        values[dimension] = scope.value
        evidence[dimension] = scope.cue
    return ContextAnnotation(
        negation=values[Dimension.NEGATION],
        experiencer=values[Dimension.EXPERIENCER],
        temporality=values[Dimension.TEMPORALITY],
        evidence=evidence,
    )


def annotate_batch(
    records: Iterable[tuple[Sequence[str], ConceptSpan]],
    ruleset: RuleSet,
    trie: RuleTrie | None = None,
) -> list[ContextAnnotation | InvalidSpan]:
    """Annotate records in order, reusing one trie across the batch.

    Element-wise identical to :func:`annotate`.  A record with an invalid
    concept span yields the :class:`InvalidSpan` (tagged with the record
    index) in its slot; processing continues.
    """
    results: list[ContextAnnotation | InvalidSpan] = []
    for index, (tokens, concept) in enumerate(records):
        try:
            results.append(annotate(tokens, concept, ruleset, trie))
        except InvalidSpan as err:
            results.append(InvalidSpan(str(err), index=index))
    return results
