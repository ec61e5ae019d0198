"""Lexical cue rules and their tab-delimited file format.

A rule file is UTF-8 text, one rule per line, five tab-separated columns::

    phrase <TAB> direction <TAB> cue_type <TAB> value <TAB> window

column     contents
---------  ----------------------------------------------------------------
phrase     space-separated words; the token ``\\w+`` matches any one token
direction  forward | backward | bidirectional ("both" accepted as an alias)
cue_type   trigger | pseudo | termination
value      negated | possible | nonpatient | historical | hypothetical
window     non-negative integer, unit = tokens

Lines starting with ``#`` and blank lines are ignored.  All columns are
case-insensitive and normalised to lowercase on load.  LF and CRLF line
endings are both accepted.
"""

from __future__ import annotations

import dataclasses
import io
import os
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable, Iterator

#: Phrase token that matches exactly one arbitrary sentence token.
WILDCARD = r"\w+"


class Direction(Enum):
    """Side of the cue its scope extends to."""

    FORWARD = "forward"
    BACKWARD = "backward"
    BIDIRECTIONAL = "bidirectional"


class CueType(Enum):
    """What a matched cue does: assign a value, suppress, or cut scopes."""

    TRIGGER = "trigger"
    PSEUDO = "pseudo"
    TERMINATION = "termination"


class RuleValue(Enum):
    """Modifier value a trigger assigns; implies its dimension."""

    NEGATED = "negated"
    POSSIBLE = "possible"
    NONPATIENT = "nonpatient"
    HISTORICAL = "historical"
    HYPOTHETICAL = "hypothetical"


class Dimension(Enum):
    NEGATION = "negation"
    EXPERIENCER = "experiencer"
    TEMPORALITY = "temporality"


#: negated/possible modify negation, nonpatient modifies experiencer,
#: historical/hypothetical modify temporality.
VALUE_DIMENSION: dict[RuleValue, Dimension] = {
    RuleValue.NEGATED: Dimension.NEGATION,
    RuleValue.POSSIBLE: Dimension.NEGATION,
    RuleValue.NONPATIENT: Dimension.EXPERIENCER,
    RuleValue.HISTORICAL: Dimension.TEMPORALITY,
    RuleValue.HYPOTHETICAL: Dimension.TEMPORALITY,
}

_DIRECTIONS = {d.value: d for d in Direction}
_DIRECTIONS["both"] = Direction.BIDIRECTIONAL
_CUE_TYPES = {c.value: c for c in CueType}
_VALUES = {v.value: v for v in RuleValue}


class MalformedRule(ValueError):
    """A rule line that cannot be parsed.

    Carries the 1-based line number (when known) and the 1-based column
    of the offending field (None when the column count itself is wrong).
    """

    def __init__(self, message: str, line_no: int | None = None, column: int | None = None):
        self.line_no = line_no
        self.column = column
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(f"{where}{message}")


class DuplicateRule(ValueError):
    """Two rules share the same (phrase, direction, cue_type, value)."""


@dataclass(frozen=True, slots=True)
class ContextRule:
    """One lexical cue.

    ``id`` is the rule's ordinal within its rule set (assigned at load).
    ``phrase`` is a non-empty tuple of lowercase, whitespace-free tokens;
    a token may be the :data:`WILDCARD` marker.
    """

    id: int
    phrase: tuple[str, ...]
    direction: Direction
    cue_type: CueType
    value: RuleValue
    window: int

    def __post_init__(self) -> None:
        if not self.phrase:
            raise ValueError("rule phrase must have at least one token")
        for tok in self.phrase:
            if not tok or any(c.isspace() for c in tok):
                raise ValueError(f"bad phrase token {tok!r}")
            if tok != tok.lower():
                raise ValueError(f"phrase token {tok!r} is not lowercase")
        if self.window < 0:
            raise ValueError(f"window must be >= 0, got {self.window}")

    @property
    def dimension(self) -> Dimension:
        return VALUE_DIMENSION[self.value]

    def key(self) -> tuple:
        """Identity quadruple used for duplicate detection."""
        return (self.phrase, self.direction, self.cue_type, self.value)


@dataclass(frozen=True, slots=True)
class RuleSet:
    """An ordered, duplicate-free collection of rules with dense ids 0..n-1."""

    rules: tuple[ContextRule, ...]
    source: str | None = None

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[ContextRule]:
        return iter(self.rules)

    def __getitem__(self, rule_id: int) -> ContextRule:
        return self.rules[rule_id]

    @classmethod
    def from_rules(cls, rules: Iterable[ContextRule], source: str | None = None) -> "RuleSet":
        """Build a RuleSet, reassigning dense ids and rejecting duplicates."""
        seen: dict[tuple, int] = {}
        out = []
        for i, rule in enumerate(rules):
            key = rule.key()
            if key in seen:
                raise DuplicateRule(
                    f"rule {i} duplicates rule {seen[key]}: "
                    f"{' '.join(rule.phrase)!r} {rule.direction.value} "
                    f"{rule.cue_type.value} {rule.value.value}"
                )
            seen[key] = i
            out.append(rule if rule.id == i else dataclasses.replace(rule, id=i))
        return cls(rules=tuple(out), source=source)


def parse_rule_line(line: str, rule_id: int = 0, line_no: int | None = None) -> ContextRule:
    """Parse one non-comment, non-blank rule line.

    Raises :class:`MalformedRule` on a wrong column count, an unknown
    direction/cue_type/value, or a non-integer or negative window.
    """
    cols = line.rstrip("\r\n").split("\t")
    if len(cols) != 5:
        raise MalformedRule(
            f"expected 5 tab-separated columns, got {len(cols)}", line_no=line_no
        )
    phrase = tuple(cols[0].strip().lower().split(" "))
    if phrase == ("",):
        raise MalformedRule("empty phrase", line_no=line_no, column=1)
    if any(not tok for tok in phrase):
        raise MalformedRule(
            f"phrase {cols[0]!r} has empty tokens (double space?)", line_no=line_no, column=1
        )
    direction = _DIRECTIONS.get(cols[1].strip().lower())
    if direction is None:
        raise MalformedRule(f"unknown direction {cols[1]!r}", line_no=line_no, column=2)
    cue_type = _CUE_TYPES.get(cols[2].strip().lower())
    if cue_type is None:
        raise MalformedRule(f"unknown cue_type {cols[2]!r}", line_no=line_no, column=3)
    value = _VALUES.get(cols[3].strip().lower())
    if value is None:
        raise MalformedRule(f"unknown value {cols[3]!r}", line_no=line_no, column=4)
    try:
        window = int(cols[4])
    except ValueError:
        raise MalformedRule(
            f"window {cols[4]!r} is not an integer", line_no=line_no, column=5
        ) from None
    if window < 0:
        raise MalformedRule(f"window {window} is negative", line_no=line_no, column=5)
    return ContextRule(
        id=rule_id, phrase=phrase, direction=direction,
        cue_type=cue_type, value=value, window=window,
    )


def load_rules(source: str | os.PathLike | IO) -> RuleSet:
    """Load a rule file from a path or an open text/binary stream.

    File order is preserved and ids are assigned ordinally.  The first
    malformed line aborts the load; duplicate rules are rejected.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            return _load_lines(fh, source=os.fspath(source))
    if isinstance(source, io.TextIOBase):
        return _load_lines(source, source=getattr(source, "name", None))
    # binary stream
    text = source.read()
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return _load_lines(io.StringIO(text), source=getattr(source, "name", None))


def _load_lines(lines: Iterable[str], source: str | None) -> RuleSet:
    rules: list[ContextRule] = []
    seen: dict[tuple, int] = {}
    for line_no, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        rule = parse_rule_line(raw, rule_id=len(rules), line_no=line_no)
        key = rule.key()
        if key in seen:
            raise DuplicateRule(
                f"line {line_no} duplicates line {seen[key]}: {stripped!r}"
            )
        seen[key] = line_no
        rules.append(rule)
    return RuleSet(rules=tuple(rules), source=source)


def serialize_rules(ruleset: RuleSet) -> str:
    """Render a rule set back to its file format.

    ``load_rules(serialize_rules(rs))`` is field-identical to ``rs``;
    the "both" direction alias canonicalises to "bidirectional".
    """
    lines = []
    for rule in ruleset:
        lines.append(
            "\t".join((
                " ".join(rule.phrase),
                rule.direction.value,
                rule.cue_type.value,
                rule.value.value,
                str(rule.window),
            ))
        )
    return "".join(line + "\n" for line in lines)
