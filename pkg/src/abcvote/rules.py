"""Committee scoring rules with exact rational parameters.

Three parameterizations are supported: a general scoring table s(x, y) over
(intersection size, ballot size), Thiele scoring vectors s(0..k) that ignore
the ballot size, and ballot-size weights alpha(1..m) whose score is additive
over elected candidates.  Winning committees are the exact argmax over the
full committee enumeration; scores are never rounded, so ties that hinge on
identities like harmonic sums come out exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil

from .profiles import (
    ChoiceSet,
    Committee,
    Profile,
    ProfileVector,
    enumerate_committees,
    index_ballot,
)

# Guards runaway winner enumerations; desk-scale inputs stay far below it.
DEFAULT_M_CAP = 24

NAMED_RULES = ("av", "pav", "ccav", "sav", "msav", "triv")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def active_range(k: int, m: int, y: int) -> range:
    """Intersection sizes that a size-y ballot can realize against a size-k committee."""
    return range(max(0, k + y - m), min(k, y) + 1)


@dataclass(frozen=True)
class ThieleScore:
    """Non-decreasing scores s(0..k) with s(0) = 0; ballot size is ignored."""

    k: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.k + 1:
            raise ValueError(f"need {self.k + 1} values for k={self.k}")
        if self.values[0] != 0:
            raise ValueError("Thiele scores must have s(0) = 0")
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("Thiele scores must be non-decreasing")

    def score(self, x: int, y: int) -> Fraction:
        return self.values[x]


@dataclass(frozen=True)
class BswavWeights:
    """Ballot-size weights alpha(1..m); score is alpha_{|A|} * |A ∩ W|.

    alpha[y-1] weights ballots of size y.  The weight for full ballots
    (y = m) is semantically inert: such ballots add the same constant to
    every committee's score.
    """

    m: int
    alpha: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.alpha) != self.m:
            raise ValueError(f"need {self.m} weights for m={self.m}")
        if any(a < 0 for a in self.alpha):
            raise ValueError("weights must be non-negative")

    def score(self, x: int, y: int) -> Fraction:
        return self.alpha[y - 1] * x


@dataclass(frozen=True)
class AbcScoringTable:
    """General scoring table; values[x][y-1] is s(x, y).

    Monotonicity in x is required only on the active range of each ballot
    size; entries outside it are stored but never read when scoring.
    """

    k: int
    m: int
    values: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.values) != self.k + 1 or any(len(row) != self.m for row in self.values):
            raise ValueError(f"table must be ({self.k + 1}) x ({self.m})")
        for y in range(1, self.m + 1):
            active = list(active_range(self.k, self.m, y))
            for x1, x2 in zip(active, active[1:]):
                if self.values[x2][y - 1] < self.values[x1][y - 1]:
                    raise ValueError(f"s(x, {y}) must be non-decreasing on the active range")

    def score(self, x: int, y: int) -> Fraction:
        return self.values[x][y - 1]


Scoring = ThieleScore | BswavWeights | AbcScoringTable


@dataclass(frozen=True)
class Rule:
    """A scoring rule bundled with its display name and committee size."""

    name: str
    k: int
    scoring: Scoring

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("committee size must be at least 1")
        if isinstance(self.scoring, (ThieleScore, AbcScoringTable)) and self.scoring.k != self.k:
            raise ValueError("rule k does not match its scoring parameters")
        if isinstance(self.scoring, (BswavWeights, AbcScoringTable)) and self.k > self.scoring.m - 1:
            raise ValueError("committee size must be at most m-1")

    def score(self, x: int, y: int) -> Fraction:
        return self.scoring.score(x, y)


def thiele_rule(name: str, values) -> Rule:
    values = tuple(Fraction(v) for v in values)
    return Rule(name, len(values) - 1, ThieleScore(len(values) - 1, values))


def bswav_rule(name: str, k: int, alpha) -> Rule:
    alpha = tuple(Fraction(a) for a in alpha)
    return Rule(name, k, BswavWeights(len(alpha), alpha))


def named_rule(name: str, k: int, m: int) -> Rule:
    """Construct one of the library rules for committee size k over m candidates."""
    name = name.lower()
    if name == "av":
        return thiele_rule("av", [Fraction(x) for x in range(k + 1)])
    if name == "pav":
        values = [Fraction(0)]
        for x in range(1, k + 1):
            values.append(values[-1] + Fraction(1, x))
        return thiele_rule("pav", values)
    if name == "ccav":
        return thiele_rule("ccav", [Fraction(0)] + [Fraction(1)] * k)
    if name == "triv":
        return thiele_rule("triv", [Fraction(0)] * (k + 1))
    if name == "sav":
        return bswav_rule("sav", k, [Fraction(1, x) for x in range(1, m + 1)])
    if name == "msav":
        return bswav_rule("msav", k, [max(Fraction(1, x), Fraction(1, k)) for x in range(1, m + 1)])
    raise ValueError(f"unknown rule {name!r}; expected one of {', '.join(NAMED_RULES)}")


def parse_rule_spec(spec: str, k: int, m: int) -> Rule:
    """Parse the inline rule syntax.

    Accepts a library rule name, `thiele:<r0>,...,<rk>`, or
    `bswav:<r1>,...,<rm>`, where each value is an integer or `p/q`.
    """
    spec = spec.strip()
    if spec.lower() in NAMED_RULES:
        return named_rule(spec, k, m)
    if spec.startswith("thiele:"):
        values = [parse_rational(tok) for tok in spec[len("thiele:"):].split(",")]
        if len(values) != k + 1:
            raise ValueError(f"thiele rule for k={k} needs {k + 1} values, got {len(values)}")
        return thiele_rule(spec, values)
    if spec.startswith("bswav:"):
        alpha = [parse_rational(tok) for tok in spec[len("bswav:"):].split(",")]
        if len(alpha) != m:
            raise ValueError(f"bswav rule for m={m} needs {m} weights, got {len(alpha)}")
        return bswav_rule(spec, k, alpha)
    raise ValueError(f"cannot parse rule spec {spec!r}")


@lru_cache(maxsize=None)
def _committees(m: int, k: int) -> tuple[Committee, ...]:
    return tuple(enumerate_committees(m, k))


@lru_cache(maxsize=None)
def _committee_sets(m: int, k: int) -> tuple[frozenset[int], ...]:
    return tuple(frozenset(w) for w in _committees(m, k))


def _check_dimensions(rule: Rule, m: int) -> None:
    if isinstance(rule.scoring, (BswavWeights, AbcScoringTable)) and rule.scoring.m != m:
        raise ValueError(f"rule is parameterized for m={rule.scoring.m}, profile has m={m}")
    if rule.k > m - 1:
        raise ValueError(f"committee size {rule.k} too large for m={m}")


def committee_score(rule: Rule, profile: Profile, committee: Committee | frozenset[int]) -> Fraction:
    """Exact total score of one committee: sum over voters of s(|A_i ∩ W|, |A_i|)."""
    _check_dimensions(rule, profile.m)
    members = frozenset(committee)
    if len(members) != rule.k:
        raise ValueError(f"committee size {len(members)} does not match rule k={rule.k}")
    score = rule.score
    total = Fraction(0)
    for _, ballot in profile.ballots:
        total += score(len(ballot & members), len(ballot))
    return total


def committee_scores(rule: Rule, profile: Profile) -> list[tuple[Committee, Fraction]]:
    """Scores of all committees, in enumeration order."""
    _check_dimensions(rule, profile.m)
    score = rule.score
    ballots = [(ballot, len(ballot)) for _, ballot in profile.ballots]
    out = []
    for committee, members in zip(_committees(profile.m, rule.k), _committee_sets(profile.m, rule.k)):
        total = Fraction(0)
        for ballot, size in ballots:
            total += score(len(ballot & members), size)
        out.append((committee, total))
    return out


def _argmax(scored: list[tuple[Committee, Fraction]]) -> ChoiceSet:
    best = max(score for _, score in scored)
    return frozenset(w for w, score in scored if score == best)


def winners(rule: Rule, profile: Profile, m_cap: int = DEFAULT_M_CAP) -> ChoiceSet:
    """The full argmax set of committees; never empty, no tie-breaking."""
    if profile.m > m_cap:
        raise ValueError(f"m={profile.m} exceeds the enumeration cap {m_cap}")
    return _argmax(committee_scores(rule, profile))


def vector_scores(rule: Rule, vector: ProfileVector, k: int) -> list[tuple[Committee, Fraction]]:
    """Scores against a rational profile vector: sum of v_l * s(|B(l) ∩ W|, |B(l)|)."""
    _check_dimensions(rule, vector.m)
    if k != rule.k:
        raise ValueError(f"requested k={k} does not match rule k={rule.k}")
    score = rule.score
    entries = [(index_ballot(idx, vector.m), value) for idx, value in vector.entries]
    out = []
    for committee, members in zip(_committees(vector.m, k), _committee_sets(vector.m, k)):
        total = Fraction(0)
        for ballot, value in entries:
            total += value * score(len(ballot & members), len(ballot))
        out.append((committee, total))
    return out


def winners_from_vector(rule: Rule, vector: ProfileVector, k: int, m_cap: int = DEFAULT_M_CAP) -> ChoiceSet:
    """Argmax over committees for a rational (possibly negative) profile vector.

    For the vector of an actual profile this agrees exactly with
    :func:`winners` on that profile.
    """
    if vector.m > m_cap:
        raise ValueError(f"m={vector.m} exceeds the enumeration cap {m_cap}")
    if not vector.entries:
        # the zero vector scores every committee 0
        return frozenset(_committees(vector.m, k))
    return _argmax(vector_scores(rule, vector, k))


def continuity_lambda_bound(rule: Rule, a: Profile, b: Profile) -> int:
    """A sound (not necessarily minimal) lambda* for the continuity property.

    For every lambda >= lambda*, winners(rule, lambda*a + b) is a subset of
    winners(rule, a): scaling a's smallest winner/non-winner gap past b's
    largest score spread makes a's losers stay losers.
    """
    if a.m != b.m:
        raise ValueError("profiles must share the candidate count")
    scored_a = committee_scores(rule, a)
    best_a = max(score for _, score in scored_a)
    loser_scores = [score for _, score in scored_a if score != best_a]
    if not loser_scores:
        return 1
    gap_a = best_a - max(loser_scores)
    scores_b = [score for _, score in committee_scores(rule, b)]
    spread_b = max(scores_b) - min(scores_b)
    return 1 + ceil(spread_b / gap_a)


def scaled_pair_winners(rule: Rule, a: Profile, b: Profile, lam: int) -> ChoiceSet:
    """winners(rule, lam*a + b) computed from the two score vectors.

    Committee scores are additive over voters, so the scaled profile never
    needs to be materialized; results are bit-identical to the direct path.
    """
    scored_a = committee_scores(rule, a)
    scored_b = committee_scores(rule, b)
    combined = [(w, lam * sa + sb) for (w, sa), (_, sb) in zip(scored_a, scored_b)]
    return _argmax(combined)
