"""Tokenization, the JSON-lines corpus format, and seeded synthetic
corpus/rule generators.

Corpus files hold one JSON object per line with keys:

* ``"tokens"`` — list of strings,
* ``"concept"`` — ``[start, end)`` token interval of the concept mention,
* ``"gold"`` — optional ``{"negation"|"experiencer"|"temporality": value}``
  with any subset of the three dimensions present.

The generators are deterministic for a given seed, and gold labels are
computed by the naive engine so generated corpora never depend on the
trie they are used to test.
"""

from __future__ import annotations

import json
import os
import random
import string
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from . import engine
from .engine import ConceptSpan
from .rules import (
    WILDCARD,
    ContextRule,
    CueType,
    Direction,
    RuleSet,
    RuleValue,
)

_PUNCT = frozenset(string.punctuation)

#: Vocabulary rule phrases are drawn from.  Disjoint from the filler
#: vocabulary below, so a corpus with injection rate 0 matches nothing;
#: wide enough that distinct rules rarely share words, keeping accidental
#: sub-phrase matches rare.
RULE_VOCAB = tuple(f"cue{i:03d}" for i in range(1000))


def _filler_vocab(size: int) -> tuple[str, ...]:
    return tuple(f"w{i:03d}" for i in range(size))


class CorpusError(ValueError):
    """A corpus line that is not structurally valid."""


class ConfigError(ValueError):
    """Generator or benchmark configuration that cannot be satisfied."""


def tokenize(text: str) -> list[str]:
    """Lowercase and split on whitespace, detaching leading/trailing
    punctuation of each chunk as separate tokens.

    >>> tokenize("No atrial septal defect is found.")
    ['no', 'atrial', 'septal', 'defect', 'is', 'found', '.']
    >>> tokenize("rule-out, MI.")
    ['rule-out', ',', 'mi', '.']
    """
    tokens: list[str] = []
    for chunk in text.split():
        word = chunk.lower()
        i, j = 0, len(word)
        while i < j and word[i] in _PUNCT:
            tokens.append(word[i])
            i += 1
        trailing: list[str] = []
        while j > i and word[j - 1] in _PUNCT:
            trailing.append(word[j - 1])
            j -= 1
        if j > i:
            tokens.append(word[i:j])
        tokens.extend(reversed(trailing))
    return tokens


@dataclass(frozen=True)
class CorpusRecord:
    """One evaluation unit: a tokenized sentence, the concept span within
    it, and optional gold modifier values (strings, keyed by dimension)."""

    tokens: list[str]
    concept: ConceptSpan
    gold: dict[str, str] | None = None

    def to_dict(self) -> dict:
        obj: dict = {"tokens": list(self.tokens), "concept": [self.concept.start, self.concept.end]}
        if self.gold is not None:
            obj["gold"] = dict(self.gold)
        return obj


def _record_from_obj(obj: object, line_no: int) -> CorpusRecord:
    if not isinstance(obj, dict):
        raise CorpusError(f"line {line_no}: expected a JSON object")
    tokens = obj.get("tokens")
    if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
        raise CorpusError(f"line {line_no}: 'tokens' must be a list of strings")
    concept = obj.get("concept")
    if (
        not isinstance(concept, list)
        or len(concept) != 2
        or not all(isinstance(x, int) and not isinstance(x, bool) for x in concept)
    ):
        raise CorpusError(f"line {line_no}: 'concept' must be [start, end]")
    gold = obj.get("gold")
    if gold is not None:
        if not isinstance(gold, dict):
            raise CorpusError(f"line {line_no}: 'gold' must be an object")
        for dim, value in gold.items():
            allowed = engine.DIMENSION_VALUES.get(dim)
            if allowed is None:
                raise CorpusError(f"line {line_no}: unknown gold dimension {dim!r}")
            if value not in allowed:
                raise CorpusError(f"line {line_no}: bad gold value {value!r} for {dim}")
        gold = dict(gold)
    return CorpusRecord(tokens=list(tokens), concept=ConceptSpan(concept[0], concept[1]), gold=gold)


def read_corpus(source: str | os.PathLike | IO | Iterable[str]) -> list[CorpusRecord]:
    """Read a JSON-lines corpus from a path, stream, or iterable of lines.

    Structure is validated here; span validity against the sentence is
    the engine's per-record concern, so files with out-of-range concepts
    still load.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            return _read_lines(fh)
    return _read_lines(source)


def _read_lines(lines: Iterable[str]) -> list[CorpusRecord]:
    records = []
    for line_no, raw in enumerate(lines, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as err:
            raise CorpusError(f"line {line_no}: invalid JSON ({err.msg})") from None
        records.append(_record_from_obj(obj, line_no))
    return records


def dumps_record(obj: dict) -> str:
    """Serialize one record dict the way corpus files are written."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_corpus(records: Iterable[CorpusRecord], stream: IO[str]) -> None:
    for record in records:
        stream.write(dumps_record(record.to_dict()))
        stream.write("\n")


def corpus_to_jsonl(records: Iterable[CorpusRecord]) -> str:
    return "".join(dumps_record(r.to_dict()) + "\n" for r in records)


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs for the synthetic corpus generator."""

    seed: int
    sentence_count: int
    vocab_size: int = 200
    min_len: int = 6
    max_len: int = 14
    cue_injection_rate: float = 0.3
    rule_count: int = 849

    def __post_init__(self) -> None:
        if self.sentence_count <= 0 or self.vocab_size <= 0 or self.rule_count <= 0:
            raise ConfigError("counts must be positive")
        if not (1 <= self.min_len <= self.max_len):
            raise ConfigError(
                f"impossible sentence length range [{self.min_len}, {self.max_len}]"
            )
        if not (0.0 <= self.cue_injection_rate <= 1.0):
            raise ConfigError("cue_injection_rate must be in [0, 1]")


def generate_rules(
    seed: int,
    count: int,
    *,
    cue_types: Sequence[CueType] = (CueType.TRIGGER, CueType.PSEUDO, CueType.TERMINATION),
    values: Sequence[RuleValue] = tuple(RuleValue),
    wildcard_rate: float = 0.05,
) -> RuleSet:
    """Deterministic synthetic rule set: phrases of 1-5 tokens over a fixed
    vocabulary, ``wildcard_rate`` of them carrying one wildcard, mixed cue
    types, directions and values.

    For a fixed configuration the generator has the prefix property: the
    first k rules are identical for any count >= k.
    """
    if count < 1:
        raise ConfigError("rule count must be >= 1")
    rng = random.Random(seed)
    type_weights = {CueType.TRIGGER: 70, CueType.PSEUDO: 10, CueType.TERMINATION: 20}
    value_weights = {
        RuleValue.NEGATED: 40, RuleValue.POSSIBLE: 15, RuleValue.NONPATIENT: 20,
        RuleValue.HISTORICAL: 15, RuleValue.HYPOTHETICAL: 10,
    }
    directions = (Direction.FORWARD, Direction.BACKWARD, Direction.BIDIRECTIONAL)
    seen: set[tuple] = set()
    rules: list[ContextRule] = []
    while len(rules) < count:
        length = rng.choices((1, 2, 3, 4, 5), weights=(25, 35, 20, 12, 8))[0]
        phrase = [rng.choice(RULE_VOCAB) for _ in range(length)]
        # wildcards never lead a phrase: a bare or leading wildcard would
        # fire on every token
        if length >= 2 and rng.random() < wildcard_rate:
            phrase[rng.randrange(1, length)] = WILDCARD
        cue_type = rng.choices(list(cue_types), weights=[type_weights[t] for t in cue_types])[0]
        value = rng.choices(list(values), weights=[value_weights[v] for v in values])[0]
        direction = rng.choices(directions, weights=(50, 30, 20))[0]
        window = rng.choice((5, 10, 15, 20, 30))
        rule = ContextRule(
            id=len(rules), phrase=tuple(phrase), direction=direction,
            cue_type=cue_type, value=value, window=window,
        )
        if rule.key() in seen:
            continue
        seen.add(rule.key())
        rules.append(rule)
    return RuleSet(rules=tuple(rules))


def generate_corpus(config: GeneratorConfig, ruleset: RuleSet) -> list[CorpusRecord]:
    """Seeded synthetic corpus: filler sentences with a designated concept
    span, a trigger phrase injected beside the concept at the configured
    rate, and gold labels computed by the naive engine.
    """
    rng = random.Random(config.seed)
    vocab = _filler_vocab(config.vocab_size)
    injectable = [
        r for r in ruleset
        if r.cue_type is CueType.TRIGGER and r.window >= 1
    ]
    records = []
    for _ in range(config.sentence_count):
        length = rng.randint(config.min_len, config.max_len)
        tokens = [rng.choice(vocab) for _ in range(length)]
        concept_len = rng.randint(1, min(3, length))
        concept_start = rng.randint(0, length - concept_len)
        concept = ConceptSpan(concept_start, concept_start + concept_len)
        if injectable and rng.random() < config.cue_injection_rate:
            rule = rng.choice(injectable)
            cue = [rng.choice(vocab) if t == WILDCARD else t for t in rule.phrase]
            gap = rng.randint(0, min(2, rule.window - 1))
            before = rule.direction is Direction.FORWARD or (
                rule.direction is Direction.BIDIRECTIONAL and rng.random() < 0.5
            )
            if before:
                at = concept.start
                tokens[at:at] = cue + [rng.choice(vocab) for _ in range(gap)]
                shift = len(cue) + gap
                concept = ConceptSpan(concept.start + shift, concept.end + shift)
            else:
                at = concept.end
                tokens[at:at] = [rng.choice(vocab) for _ in range(gap)] + cue
        annotation = engine.annotate(tokens, concept, ruleset, trie=None)
        gold = {
            "negation": annotation.negation.value,
            "experiencer": annotation.experiencer.value,
            "temporality": annotation.temporality.value,
        }
        records.append(CorpusRecord(tokens=tokens, concept=concept, gold=gold))
    return records
