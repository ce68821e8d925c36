#!/usr/bin/env python3
"""Sonority orders and the generalized-diphthong constraint.

Shows the four dimension orders (two of them partial), the composite
comparison that drives syllabification, and which adjacent phone pairs
count as admissible steps away from a nucleus.
"""

from phonospace import (
    FrontBack,
    Marker,
    Place,
    cmp_front_back,
    cmp_place,
    cmp_sonority,
    default_alphabet,
    is_diphthongal_step,
)

mk = Marker.from_ascii

# frontBack is a tent: both sides rise to central, the sides don't compare
print("frontBack relations:")
for a, b in [(FrontBack.FRONT, FrontBack.CENTRAL),
             (FrontBack.BACK, FrontBack.BACK_LIKE),
             (FrontBack.FRONT, FrontBack.BACK)]:
    print(f"  {a.value:10s} vs {b.value:10s} -> {cmp_front_back(a, b).value}")

# place: two chains meet at uvular; velar and palatAlveoLabial never compare
print("\nplace relations:")
for a, b in [(Place.VELAR, Place.GLOTTAL), (Place.PAL, Place.PHARYNGEAL),
             (Place.VELAR, Place.PAL)]:
    print(f"  {a.value:18s} vs {b.value:18s} -> {cmp_place(a, b).value}")

# composite comparison: manner first, incomparability collapses to equivalence
pairs = [
    ("plosive:back:close:palatAlveoLabial", "vowel:front:close:glottal"),
    ("fricative:central:close:velar", "fricative:central:close:palatAlveoLabial"),
]
print("\ncomposite sonority:")
for a, b in pairs:
    print(f"  {a}\n  {b}\n  -> {cmp_sonority(mk(a), mk(b)).value}\n")

# the classic verdicts: a step away from the nucleus may not rise anywhere
verdicts = [
    ("approximant:front:close:palatAlveoLabial", "plosive:back:close:palatAlveoLabial"),
    ("fricative:backLike:close:palatAlveoLabial", "approximant:backLike:mid:palatAlveoLabial"),
    ("approximant:backLike:mid:palatAlveoLabial", "fricative:backLike:close:palatAlveoLabial"),
    ("fricative:frontLike:open:glottal", "plosive:front:close:velar"),
]
print("diphthongal steps (moving away from the nucleus):")
for a, b in verdicts:
    ok = is_diphthongal_step(mk(a), mk(b))
    print(f"  {a.split(':')[0]:12s}-> {b.split(':')[0]:12s} {'yes' if ok else 'no'}")

# count how constrained the space is
alphabet = default_alphabet()
cells = list(alphabet)
steps = sum(is_diphthongal_step(a, b) for a in cells for b in cells)
print(f"\n{steps} admissible ordered steps out of {len(cells)**2} marker pairs "
      f"({100 * steps / len(cells)**2:.1f}%)")
