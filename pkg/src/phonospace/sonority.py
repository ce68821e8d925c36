"""Orders on the four phonetic dimensions and the diphthongal constraint.

Manner and openClose are total chains (closure lowest, vowel/open
highest). frontBack is a tent with central on top and the two sides
mutually incomparable; place is two chains joined at uvular, leaving
velar and palatAlveoLabial incomparable. The composite sonority
comparison is lexicographic over (manner, place, openClose, frontBack),
collapsing any incomparability met before a decision into equivalence.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import Sequence

from .alphabet import FrontBack, Manner, Marker, OpenClose, Place


class PartialOrdering(Enum):
    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


class SonorityRelation(Enum):
    LESS = "less"
    GREATER = "greater"
    EQUIVALENT = "equivalent"


_MANNER_RANK = {
    Manner.CLOSURE: 0, Manner.PLOSIVE: 1, Manner.FRICATIVE: 2,
    Manner.NASAL: 3, Manner.APPROXIMANT: 4, Manner.VOWEL: 5,
}

_OC_RANK = {
    OpenClose.CLOSE: 0, OpenClose.CLOSE_LIKE: 1, OpenClose.CLOSE_MID: 2,
    OpenClose.MID: 3, OpenClose.OPEN_MID: 4, OpenClose.OPEN_LIKE: 5,
    OpenClose.OPEN: 6,
}

# tent: side marker ('f'/'b'/None for the shared top) and height
_FB_POS = {
    FrontBack.FRONT: ("f", 0), FrontBack.FRONT_LIKE: ("f", 1),
    FrontBack.CENTRAL: (None, 2),
    FrontBack.BACK_LIKE: ("b", 1), FrontBack.BACK: ("b", 0),
}

# two chains sharing everything from uvular up
_PLACE_POS = {
    Place.VELAR: ("v", 0), Place.PAL: ("p", 0),
    Place.UVULAR: (None, 1), Place.PHARYNGEAL: (None, 2),
    Place.EPIGLOTTAL: (None, 3), Place.GLOTTAL: (None, 4),
}


def _from_ranks(a: int, b: int) -> PartialOrdering:
    if a < b:
        return PartialOrdering.LESS
    if a > b:
        return PartialOrdering.GREATER
    return PartialOrdering.EQUAL


def cmp_manner(a: Manner, b: Manner) -> PartialOrdering:
    return _from_ranks(_MANNER_RANK[a], _MANNER_RANK[b])


def cmp_open_close(a: OpenClose, b: OpenClose) -> PartialOrdering:
    return _from_ranks(_OC_RANK[a], _OC_RANK[b])


def cmp_front_back(a: FrontBack, b: FrontBack) -> PartialOrdering:
    side_a, h_a = _FB_POS[a]
    side_b, h_b = _FB_POS[b]
    if side_a is not None and side_b is not None and side_a != side_b:
        return PartialOrdering.INCOMPARABLE
    return _from_ranks(h_a, h_b)


def cmp_place(a: Place, b: Place) -> PartialOrdering:
    side_a, h_a = _PLACE_POS[a]
    side_b, h_b = _PLACE_POS[b]
    if side_a is not None and side_b is not None and side_a != side_b:
        return PartialOrdering.INCOMPARABLE
    return _from_ranks(h_a, h_b)


@lru_cache(maxsize=None)
def cmp_sonority(a: Marker, b: Marker) -> SonorityRelation:
    """Composite comparison driving syllabification.

    Lexicographic over (manner, place, openClose, frontBack); the first
    strict result decides, and an incomparable result met before any
    decision collapses the pair into equivalence.
    """
    for rel in (
        cmp_manner(a.manner, b.manner),
        cmp_place(a.place, b.place),
        cmp_open_close(a.open_close, b.open_close),
        cmp_front_back(a.front_back, b.front_back),
    ):
        if rel is PartialOrdering.LESS:
            return SonorityRelation.LESS
        if rel is PartialOrdering.GREATER:
            return SonorityRelation.GREATER
        if rel is PartialOrdering.INCOMPARABLE:
            return SonorityRelation.EQUIVALENT
    return SonorityRelation.EQUIVALENT


_DOWN = (PartialOrdering.LESS, PartialOrdering.EQUAL)
_DOWN_OR_SIDEWAYS = (PartialOrdering.LESS, PartialOrdering.EQUAL, PartialOrdering.INCOMPARABLE)


@lru_cache(maxsize=None)
def is_diphthongal_step(a: Marker, b: Marker) -> bool:
    """True iff a -> b is one admissible step away from the nucleus.

    Moving in the rhyme direction no dimension may increase and at least
    one must strictly decrease; the incomparable sides of frontBack and
    place count as not-increasing but never as the strict decrease.
    """
    m = cmp_manner(b.manner, a.manner)
    if m not in _DOWN:
        return False
    o = cmp_open_close(b.open_close, a.open_close)
    if o not in _DOWN:
        return False
    p = cmp_place(b.place, a.place)
    if p not in _DOWN_OR_SIDEWAYS:
        return False
    f = cmp_front_back(b.front_back, a.front_back)
    if f not in _DOWN_OR_SIDEWAYS:
        return False
    return PartialOrdering.LESS in (m, o, p, f)


def check_diphthongal_syllable(onset: Sequence[Marker], rhyme: Sequence[Marker]) -> bool:
    """Check a whole syllable against the generalized-diphthong constraint.

    ``onset`` runs up to and including the nucleus, ``rhyme`` from the
    nucleus onward; both must be nonempty and agree on the nucleus.
    Onset pairs are checked under time reversal.
    """
    if not onset or not rhyme:
        raise ValueError("onset and rhyme must be nonempty")
    if onset[-1] != rhyme[0]:
        raise ValueError("onset and rhyme must share the nucleus marker")
    for earlier, later in zip(onset, onset[1:]):
        if not is_diphthongal_step(later, earlier):
            return False
    for earlier, later in zip(rhyme, rhyme[1:]):
        if not is_diphthongal_step(earlier, later):
            return False
    return True
