#!/usr/bin/env python3
"""Tour of the phonetic alphabet and prosodic quantization.

Loads the packaged table, walks a few cells, shows glyph round trips,
the ASCII notation, and how raw measurements become quantized units.
"""

from phonospace import (
    Manner,
    Marker,
    Place,
    default_alphabet,
    parse_symbol,
    quantize,
    render_symbol,
)

alphabet = default_alphabet()
print(f"alphabet {alphabet.version}: {len(alphabet)} populated cells\n")

# the four dimensions of a marker
i = Marker.from_ascii("vowel:front:close:glottal")
print("the close front vowel:")
print("  marker:", i.to_ascii())
print("  glyph :", render_symbol(alphabet, i))

# closures subscript the corresponding fricative (vowel, for glottals)
a_closure = Marker.from_ascii("closure:frontLike:open:glottal")
print("\nglottal closure at the open frontLike cell:")
print("  glyph :", render_symbol(alphabet, a_closure))

# every glyph parses back to its cell, and the ASCII form always works
for text in ("i", "p", "vowel:back:closeMid:glottal"):
    print(f"\nparse_symbol({text!r}) ->", parse_symbol(alphabet, text).to_ascii())

# how many cells each place contributes
print("\ncells per place:")
for place in Place:
    n = sum(1 for m in alphabet if m.place is place)
    print(f"  {place.value:18s} {n}")

print("\nvowels live only at the glottal place:")
print("  ", "".join(render_symbol(alphabet, m) for m in alphabet
                    if m.manner is Manner.VOWEL))

# prosodic quantization: log units relative to configurable references
print("\nquantization (defaults: 4 units/octave D, 12/octave T, 10/decade L):")
print("  0.1 s   -> D =", quantize(0.1, "D"))
print("  0.2 s   -> D =", quantize(0.2, "D"))
print("  100 Hz  -> T =", quantize(100.0, "T"))
print("  200 Hz  -> T =", quantize(200.0, "T"))
print("  2x loud -> L =", quantize(2.0, "L"))
print("  vocal tract shortening (dlnVTL=-0.1) -> R =", quantize(-0.1, "R"))
