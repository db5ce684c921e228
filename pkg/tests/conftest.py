"""Shared test helpers: tiny independent enumerations used as oracles."""

import itertools

from abcvote.profiles import Profile


def all_subsets_nonempty(m):
    out = []
    for size in range(1, m + 1):
        out.extend(frozenset(c) for c in itertools.combinations(range(m), size))
    return out


def raw_profiles(m, n):
    """Every multiset of n non-empty ballots over m candidates, independently enumerated."""
    pool = sorted(all_subsets_nonempty(m), key=lambda b: (len(b), sorted(b)))
    for combo in itertools.combinations_with_replacement(pool, n):
        yield Profile.from_ballots(m, combo)
