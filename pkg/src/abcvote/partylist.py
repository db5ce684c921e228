"""Party-list profiles and the axioms that single out AV, PAV, and SAV.

A profile is party-list when its distinct ballots are pairwise disjoint;
the parties are those ballots, with candidates nobody approves grouped into
singleton parties of count zero so that the parties always partition the
candidates.  The three checkers below decide, for a concrete rule and
profile, the excellence criterion, party-proportionality, and aversion to
unanimous committees, plus the relaxed unanimity threshold that singles out
modified SAV.  The generators build the exact profile families from which
the separating instances for wrong scoring parameters are drawn.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .axioms import REPLAYERS, AxiomVerdict, as_choice_fn, _fail
from .profiles import Profile


class NotPartyListError(ValueError):
    pass


@dataclass(frozen=True)
class PartyListStructure:
    """Disjoint parties covering all candidates, with per-party supporter counts."""

    parties: tuple[tuple[int, ...], ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.parties) != len(self.counts):
            raise ValueError("need one count per party")
        seen: set[int] = set()
        for party in self.parties:
            if not party:
                raise ValueError("parties must be non-empty")
            if seen & set(party):
                raise ValueError("parties must be disjoint")
            seen |= set(party)

    def ratio(self, index: int) -> Fraction:
        """Average voters represented per member: n_j / |P_j|."""
        return Fraction(self.counts[index], len(self.parties[index]))

    def singleton_indices(self) -> list[int]:
        return [i for i, party in enumerate(self.parties) if len(party) == 1]


def detect_party_structure(profile: Profile) -> PartyListStructure | None:
    """The party structure of a profile, or None if two distinct ballots overlap.

    Supported parties are exactly the distinct ballots; unapproved candidates
    are completed into singleton parties with count zero, so the parties
    partition the candidate set.
    """
    counts: dict[frozenset[int], int] = {}
    for _, ballot in profile.ballots:
        counts[ballot] = counts.get(ballot, 0) + 1
    distinct = sorted(counts, key=sorted)
    for i, a in enumerate(distinct):
        for b in distinct[i + 1:]:
            if a & b:
                return None
    covered = frozenset().union(*distinct)
    parties = [tuple(sorted(b)) for b in distinct]
    parties += [(c,) for c in range(profile.m) if c not in covered]
    tallies = [counts.get(frozenset(p), 0) for p in parties]
    order = sorted(range(len(parties)), key=lambda i: parties[i])
    return PartyListStructure(
        tuple(parties[i] for i in order), tuple(tallies[i] for i in order)
    )


def require_party_structure(profile: Profile) -> PartyListStructure:
    structure = detect_party_structure(profile)
    if structure is None:
        raise NotPartyListError("profile is not party-list: two distinct ballots overlap")
    return structure


def format_with_parties(profile: Profile) -> str:
    """Core text format with the party structure appended as comment lines."""
    from .profiles import format_profile

    structure = require_party_structure(profile)
    text = format_profile(profile)
    for party, count in zip(structure.parties, structure.counts):
        text += f"# party {' '.join(str(c) for c in party)} n={count}\n"
    return text


def check_excellence(rule, profile: Profile) -> AxiomVerdict:
    """A fully elected party may not have strictly fewer supporters than a
    party that is not fully elected."""
    structure = require_party_structure(profile)
    choose = as_choice_fn(rule)
    base = choose(profile)
    checked = 0
    for committee in sorted(base):
        members = set(committee)
        for i, low in enumerate(structure.parties):
            if not set(low) <= members:
                continue
            for j, high in enumerate(structure.parties):
                if structure.counts[i] >= structure.counts[j]:
                    continue
                checked += 1
                if not set(high) <= members:
                    witness = {
                        "profile": profile,
                        "committee": committee,
                        "contained_party": low,
                        "better_party": high,
                    }
                    return _fail("excellence", witness, choose, checked)
    return AxiomVerdict("excellence", True, None, checked)


def check_party_proportionality(rule, profile: Profile) -> AxiomVerdict:
    """Like excellence, but parties compare by voters represented per member."""
    structure = require_party_structure(profile)
    choose = as_choice_fn(rule)
    base = choose(profile)
    checked = 0
    for committee in sorted(base):
        members = set(committee)
        for i, low in enumerate(structure.parties):
            if not set(low) <= members:
                continue
            for j, high in enumerate(structure.parties):
                if structure.ratio(i) >= structure.ratio(j):
                    continue
                checked += 1
                if not set(high) <= members:
                    witness = {
                        "profile": profile,
                        "committee": committee,
                        "contained_party": low,
                        "better_party": high,
                    }
                    return _fail("party-proportionality", witness, choose, checked)
    return AxiomVerdict("party-proportionality", True, None, checked)


def check_aversion_unanimous(rule, profile: Profile) -> AxiomVerdict:
    """If one party holds every winning committee, each of its members must
    represent strictly more voters than any other singleton party has."""
    structure = require_party_structure(profile)
    choose = as_choice_fn(rule)
    base = choose(profile)
    checked = 0
    for i, party in enumerate(structure.parties):
        if not all(set(w) <= set(party) for w in base):
            continue
        for j in structure.singleton_indices():
            if j == i:
                continue
            checked += 1
            if structure.ratio(i) <= structure.counts[j]:
                witness = {
                    "profile": profile,
                    "unanimous_party": party,
                    "singleton_party": structure.parties[j],
                }
                return _fail("aversion-unanimous", witness, choose, checked)
    return AxiomVerdict("aversion-unanimous", True, None, checked)


def check_msav_threshold(rule, profile: Profile, k: int) -> AxiomVerdict:
    """The relaxed unanimity threshold: one party holds every winning
    committee exactly when each elected member would represent more voters
    than any singleton party has (n_j < n_i/k for all singletons).

    Decidable only on its natural domain: one party large enough to fill the
    committee, all rivals singletons.  Other profiles pass vacuously.
    """
    structure = require_party_structure(profile)
    choose = as_choice_fn(rule)
    large = [i for i, p in enumerate(structure.parties) if len(p) >= 2]
    if len(large) != 1 or len(structure.parties[large[0]]) < k:
        return AxiomVerdict("msav-threshold", True, None, 0)
    i = large[0]
    base = choose(profile)
    unanimous = all(set(w) <= set(structure.parties[i]) for w in base)
    threshold = all(
        structure.counts[j] < Fraction(structure.counts[i], k)
        for j in structure.singleton_indices()
        if j != i
    )
    if unanimous == threshold:
        return AxiomVerdict("msav-threshold", True, None, 1)
    witness = {
        "profile": profile,
        "party": structure.parties[i],
        "unanimous": unanimous,
        "threshold": threshold,
        "k": k,
    }
    return _fail("msav-threshold", witness, choose, 1)


# --- witness replay --------------------------------------------------------


def _replay_excellence(w, choose):
    structure = detect_party_structure(w["profile"])
    if structure is None:
        return False
    members = set(w["committee"])
    i = structure.parties.index(w["contained_party"])
    j = structure.parties.index(w["better_party"])
    return (
        w["committee"] in choose(w["profile"])
        and structure.counts[i] < structure.counts[j]
        and set(w["contained_party"]) <= members
        and not set(w["better_party"]) <= members
    )


def _replay_party_proportionality(w, choose):
    structure = detect_party_structure(w["profile"])
    if structure is None:
        return False
    members = set(w["committee"])
    i = structure.parties.index(w["contained_party"])
    j = structure.parties.index(w["better_party"])
    return (
        w["committee"] in choose(w["profile"])
        and structure.ratio(i) < structure.ratio(j)
        and set(w["contained_party"]) <= members
        and not set(w["better_party"]) <= members
    )


def _replay_aversion(w, choose):
    structure = detect_party_structure(w["profile"])
    if structure is None:
        return False
    i = structure.parties.index(w["unanimous_party"])
    j = structure.parties.index(w["singleton_party"])
    if len(structure.parties[j]) != 1:
        return False
    base = choose(w["profile"])
    return (
        all(set(committee) <= set(w["unanimous_party"]) for committee in base)
        and structure.ratio(i) <= structure.counts[j]
    )


def _replay_msav_threshold(w, choose):
    structure = detect_party_structure(w["profile"])
    if structure is None:
        return False
    i = structure.parties.index(w["party"])
    base = choose(w["profile"])
    unanimous = all(set(committee) <= set(w["party"]) for committee in base)
    threshold = all(
        structure.counts[j] < Fraction(structure.counts[i], w["k"])
        for j in structure.singleton_indices()
        if j != i
    )
    return unanimous != threshold


REPLAYERS["excellence"] = _replay_excellence
REPLAYERS["party-proportionality"] = _replay_party_proportionality
REPLAYERS["aversion-unanimous"] = _replay_aversion
REPLAYERS["msav-threshold"] = _replay_msav_threshold


# --- proof-construction profile generators ---------------------------------


def _party_list_profile(m: int, party_size: int, party_ballots: int, singleton_count: int) -> Profile:
    party = frozenset(range(party_size))
    ballots = [party] * party_ballots
    for c in range(party_size, m):
        ballots.extend([frozenset({c})] * singleton_count)
    return Profile.from_ballots(m, ballots)


def gen_excellence_witness_profile(l: int, t: int, k: int, m: int, case: str) -> Profile:
    """t voters approve the party {0..l-1}; every other candidate is uniquely
    approved by t+1 (high) or t-1 (low) voters.  Any Thiele rule with
    s(l) != l*s(1) elects either the whole party or never the whole party on
    one of the two cases, breaking the excellence criterion."""
    if not 2 <= l <= k:
        raise ValueError("need 2 <= l <= k")
    if t < 2:
        raise ValueError("need t >= 2")
    if m <= k:
        raise ValueError("need m > k")
    if case not in ("high", "low"):
        raise ValueError("case must be 'high' or 'low'")
    return _party_list_profile(m, l, t, t + 1 if case == "high" else t - 1)


def gen_pav_witness_profile(l: int, t: int, k: int, m: int, case: str) -> Profile:
    """l*t voters approve the party {0..l-1}; singleton parties get t+1 (high)
    or t-1 (low) voters.  Falsifies party-proportionality for any Thiele rule
    whose s(l) is not the l-th harmonic number (given t*l*delta > 1)."""
    if not 2 <= l <= k:
        raise ValueError("need 2 <= l <= k")
    if t < 2:
        raise ValueError("need t >= 2")
    if m <= k:
        raise ValueError("need m > k")
    if case not in ("high", "low"):
        raise ValueError("case must be 'high' or 'low'")
    return _party_list_profile(m, l, l * t, t + 1 if case == "high" else t - 1)


def gen_sav_witness_profile(l: int, t: int, k: int, m: int, case: str) -> Profile:
    """l*t voters approve the party {0..l-1}; each outside candidate gets t+1
    (high) or t-1 (low) voters.  Falsifies party-proportionality or aversion
    to unanimous committees for any ballot-size weighting with alpha_l != 1/l."""
    if not 2 <= l <= m - 1:
        raise ValueError("need 2 <= l <= m-1")
    if t < 2:
        raise ValueError("need t >= 2")
    if case not in ("high", "low"):
        raise ValueError("case must be 'high' or 'low'")
    return _party_list_profile(m, l, l * t, t + 1 if case == "high" else t - 1)
