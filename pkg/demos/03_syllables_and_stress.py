#!/usr/bin/env python3
"""Syllable parsing, stress ranking and dependency plans.

Builds the "pinball"-shaped string, parses it at sonority minima, ranks
the two syllables by stress, and prints the conditional factors each
syllable contributes. Note the factor for the nasal: it conditions on
the nucleus to its left, never on the plosive that follows it.
"""

from phonospace import Marker, Phone, ProsodicVector, default_alphabet, parse_and_plan

mk = Marker.from_ascii
alphabet = default_alphabet()

c = mk("closure:central:close:palatAlveoLabial")
p = mk("plosive:back:close:palatAlveoLabial")
i = mk("vowel:front:close:glottal")
n = mk("nasal:central:close:palatAlveoLabial")
o = mk("vowel:back:closeMid:glottal")
l = mk("approximant:backLike:mid:palatAlveoLabial")

loud = ProsodicVector(L=8)
flat = ProsodicVector()
pinball = [Phone(c, flat), Phone(p, flat), Phone(i, loud), Phone(n, flat),
           Phone(p, flat), Phone(o, flat), Phone(l, flat), Phone(c, flat)]

s, parse, scores, classes, plan = parse_and_plan(pinball, alphabet)

glyphs = [alphabet.symbol_of(ph.marker) for ph in s.phones]
print("phones: ", " ".join(f"{k}:{g}" for k, g in enumerate(glyphs)))
print()
for syl, sc, cls in zip(parse.syllables, scores, classes):
    span = "".join(glyphs[syl.start:syl.end + 1])
    print(f"syllable {span!r}: phones {syl.start}..{syl.end}, "
          f"nucleus {glyphs[syl.nucleus]!r} at {syl.nucleus}, "
          f"stress score {sc}, class {cls.value}")

print("\nshared minimum: both syllables meet at phone",
      parse.syllables[0].end, f"({glyphs[parse.syllables[0].end]!r})")

print("\ndependency factors (target <- context):")
for f in plan.factors:
    ctx = ", ".join("null" if ci is None else f"{ci}:{glyphs[ci]}" for ci in f.context)
    print(f"  syl{f.syllable}  {f.target}:{glyphs[f.target]} <- {ctx}"
          f"   [{f.unit.value}/{f.stress.value}]")

# stress is a ranking, not a magnitude: any monotone rescoring classifies alike
from phonospace import classify_stress

print("\nclasses from the raw scores:      ",
      [cl.value for cl in classify_stress(parse.syllables, scores)])
print("classes after cubing every score: ",
      [cl.value for cl in classify_stress(parse.syllables, [x ** 3 for x in scores])])
