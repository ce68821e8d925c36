#!/usr/bin/env python3
"""The language-neutral model: admissible sets, joining mass, scoring.

With joining mass 0 only diphthongal steps carry probability; a small
joining mass restores every transition so onsets and rhymes can meet.
"""

import math

from phonospace import (
    CondKey,
    Marker,
    Phone,
    ProsodicVector,
    StressClass,
    Unit,
    admissible_targets,
    default_alphabet,
    generic_model,
    score,
)

mk = Marker.from_ascii
alphabet = default_alphabet()

i = mk("vowel:front:close:glottal")
key = CondKey(Unit.RHYME, StressClass.STRESSED, (i,))
adm = admissible_targets(alphabet, key)
print(f"targets admissible one rhyme step after the close front vowel: "
      f"{len(adm)} of {len(alphabet)} cells")

for eps in (0.0, 0.05, 0.2):
    m = generic_model(alphabet, epsilon=eps)
    d = m.dist(key)
    p_adm = (1 - eps) / (len(adm) + 1)
    excluded = len(alphabet) - len(adm)
    print(f"  epsilon={eps:4.2f}: admissible targets get {p_adm:.6f}, "
          f"excluded get {eps / excluded if excluded else 0:.6f}, "
          f"null gets {d.prob(None):.6f}")

c = mk("closure:central:close:palatAlveoLabial")
p = mk("plosive:back:close:palatAlveoLabial")
n = mk("nasal:central:close:palatAlveoLabial")
pin = [Phone(x, ProsodicVector()) for x in (c, p, i, n, c)]

print("\nscoring the same string under different joining masses:")
for eps in (0.01, 0.05, 0.2):
    m = generic_model(alphabet, epsilon=eps)
    print(f"  epsilon={eps:4.2f}: log-probability {score(m, pin):.4f}")

# a string that needs the joining mass: o -> i inside one rhyme rises in
# openClose, so with epsilon=0 its probability is exactly zero
o = mk("vowel:back:closeMid:glottal")
rise = [Phone(x, ProsodicVector()) for x in (c, o, i, c)]
print("\na rhyme that rises (o then i):")
for eps in (0.0, 0.05):
    m = generic_model(alphabet, epsilon=eps)
    lp = score(m, rise)
    print(f"  epsilon={eps:4.2f}: {'-inf' if math.isinf(lp) else f'{lp:.4f}'}")
