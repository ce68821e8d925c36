"""Phonetic and prosodic value spaces.

The phonetic subspace is the 4-dimensional product manner x frontBack x
openClose x place; a :class:`Marker` is one point in it, and an
:class:`Alphabet` is the set of populated cells shipped as a versioned
data file plus the two inverse maps between markers and display symbols.
The prosodic subspace holds six directly measurable values (R, N, V, T,
D, L); the scalar ones live in quantized logarithmic units produced by
:func:`quantize`.

Symbols have a canonical machine form, the colon-joined attribute names
``manner:frontBack:openClose:place``, accepted everywhere a glyph is;
the Unicode glyphs in the data file are a presentation layer (base glyph
plus at most one superscript plus at most one subscript-o for closures).
"""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Iterator, NamedTuple, Optional


class Manner(Enum):
    __hash__ = object.__hash__  # members are singletons; skip the per-call name hash

    CLOSURE = "closure"
    PLOSIVE = "plosive"
    FRICATIVE = "fricative"
    NASAL = "nasal"
    APPROXIMANT = "approximant"
    VOWEL = "vowel"


class FrontBack(Enum):
    __hash__ = object.__hash__

    FRONT = "front"
    FRONT_LIKE = "frontLike"
    CENTRAL = "central"
    BACK_LIKE = "backLike"
    BACK = "back"


class OpenClose(Enum):
    __hash__ = object.__hash__

    CLOSE = "close"
    CLOSE_LIKE = "closeLike"
    CLOSE_MID = "closeMid"
    MID = "mid"
    OPEN_MID = "openMid"
    OPEN_LIKE = "openLike"
    OPEN = "open"


class Place(Enum):
    __hash__ = object.__hash__

    PAL = "palatAlveoLabial"
    VELAR = "velar"
    UVULAR = "uvular"
    PHARYNGEAL = "pharyngeal"
    EPIGLOTTAL = "epiglottal"
    GLOTTAL = "glottal"


_MANNER_INDEX = {m: i for i, m in enumerate(Manner)}
_FB_INDEX = {f: i for i, f in enumerate(FrontBack)}
_OC_INDEX = {o: i for i, o in enumerate(OpenClose)}
_PLACE_INDEX = {p: i for i, p in enumerate(Place)}

_BY_VALUE = {
    "manner": {m.value: m for m in Manner},
    "frontBack": {f.value: f for f in FrontBack},
    "openClose": {o.value: o for o in OpenClose},
    "place": {p.value: p for p in Place},
}


class Marker(NamedTuple):
    """A point in the phonetic subspace."""

    manner: Manner
    front_back: FrontBack
    open_close: OpenClose
    place: Place

    def to_ascii(self) -> str:
        return ":".join(
            (self.manner.value, self.front_back.value,
             self.open_close.value, self.place.value)
        )

    @classmethod
    def from_ascii(cls, text: str) -> "Marker":
        parts = text.split(":")
        if len(parts) != 4:
            raise UnknownSymbolError(f"malformed marker notation: {text!r}")
        try:
            return cls(
                _BY_VALUE["manner"][parts[0]],
                _BY_VALUE["frontBack"][parts[1]],
                _BY_VALUE["openClose"][parts[2]],
                _BY_VALUE["place"][parts[3]],
            )
        except KeyError as exc:
            raise UnknownSymbolError(f"unknown attribute name {exc.args[0]!r} in {text!r}") from None

    def sort_key(self) -> tuple:
        return (
            _MANNER_INDEX[self.manner], _FB_INDEX[self.front_back],
            _OC_INDEX[self.open_close], _PLACE_INDEX[self.place],
        )

    def __repr__(self) -> str:  # compact, round-trippable through from_ascii
        return f"Marker({self.to_ascii()})"


MAX_ABS_UNITS = 64


@dataclass(frozen=True)
class ProsodicVector:
    """Six quantized prosodic values.

    R: signed log change of effective vocal tract length (positive =
    fronting); N / V: nasal / first formant on-off bits; T, D, L:
    quantized log pitch, duration and loudness.
    """

    R: int = 0
    N: int = 0
    V: int = 0
    T: int = 0
    D: int = 0
    L: int = 0

    def __post_init__(self):
        if self.N not in (0, 1) or self.V not in (0, 1):
            raise ValueError("N and V are binary")
        for name in ("R", "T", "D", "L"):
            if abs(getattr(self, name)) > MAX_ABS_UNITS:
                raise ValueError(f"{name} outside quantization range [-{MAX_ABS_UNITS}, {MAX_ABS_UNITS}]")


@dataclass(frozen=True)
class Phone:
    """A marker with prosody and optional onset time, or the null phone."""

    marker: Optional[Marker]
    prosody: Optional[ProsodicVector] = None
    t0: Optional[float] = None

    def __post_init__(self):
        if self.marker is None and (self.prosody is not None or self.t0 is not None):
            raise ValueError("the null phone carries no prosody or time")
        if self.marker is not None and self.prosody is None:
            object.__setattr__(self, "prosody", ProsodicVector())

    @property
    def is_null(self) -> bool:
        return self.marker is None


NULL_PHONE = Phone(None)


class AlphabetError(ValueError):
    """Malformed alphabet document."""


class UnknownSymbolError(KeyError):
    """Symbol text that maps to no alphabet cell."""


class InvalidMarkerError(KeyError):
    """Marker that is not a populated cell of the alphabet."""


@dataclass(frozen=True, eq=False)  # identity hash: used as a cache key
class Alphabet:
    version: str
    cells: frozenset
    _symbol_of: dict = field(repr=False)
    _marker_of: dict = field(repr=False)
    notes: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, marker: Marker) -> bool:
        return marker in self.cells

    def __iter__(self) -> Iterator[Marker]:
        return iter(sorted(self.cells, key=Marker.sort_key))

    def symbol_of(self, marker: Marker) -> str:
        try:
            return self._symbol_of[marker]
        except KeyError:
            raise InvalidMarkerError(f"not an alphabet cell: {marker!r}") from None

    def marker_of(self, symbol: str) -> Marker:
        try:
            return self._marker_of[unicodedata.normalize("NFC", symbol)]
        except KeyError:
            raise UnknownSymbolError(f"unknown symbol: {symbol!r}") from None


def is_valid_marker(alphabet: Alphabet, marker: Marker) -> bool:
    """True iff the marker is a populated cell."""
    return marker in alphabet.cells


def render_symbol(alphabet: Alphabet, marker: Marker) -> str:
    """Display glyph for a valid marker (closure cells carry the o subscript)."""
    return alphabet.symbol_of(marker)


def parse_symbol(alphabet: Alphabet, text: str) -> Marker:
    """Inverse of render_symbol; also accepts the colon ASCII notation."""
    if ":" in text:
        marker = Marker.from_ascii(text)
        if marker not in alphabet.cells:
            raise UnknownSymbolError(f"marker {text!r} is not a populated cell")
        return marker
    return alphabet.marker_of(text)


def load_alphabet(table_data: str) -> Alphabet:
    """Build an Alphabet from the tab-separated cell listing.

    One record per populated cell: place, manner, frontBack, openClose,
    symbol, optional note. Lines starting with ``#`` are comments; a
    ``version<TAB>...`` line names the table revision. Duplicate markers
    or symbols, unknown attribute names, and vowel cells outside the
    glottal place are rejected.
    """
    version = ""
    symbol_of: dict = {}
    marker_of: dict = {}
    notes: dict = {}
    for lineno, raw in enumerate(table_data.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if fields[0] == "version":
            if len(fields) < 2 or not fields[1].strip():
                raise AlphabetError(f"line {lineno}: empty version")
            version = fields[1].strip()
            continue
        if len(fields) < 5:
            raise AlphabetError(f"line {lineno}: expected 5+ tab-separated fields")
        place_s, manner_s, fb_s, oc_s, symbol = (f.strip() for f in fields[:5])
        note = fields[5].strip() if len(fields) > 5 else ""
        try:
            marker = Marker(
                _BY_VALUE["manner"][manner_s],
                _BY_VALUE["frontBack"][fb_s],
                _BY_VALUE["openClose"][oc_s],
                _BY_VALUE["place"][place_s],
            )
        except KeyError as exc:
            raise AlphabetError(f"line {lineno}: unknown attribute name {exc.args[0]!r}") from None
        if marker.manner is Manner.VOWEL and marker.place is not Place.GLOTTAL:
            raise AlphabetError(f"line {lineno}: vowel entry with non-glottal place")
        symbol = unicodedata.normalize("NFC", symbol)
        if not symbol:
            raise AlphabetError(f"line {lineno}: empty symbol")
        if marker in symbol_of:
            raise AlphabetError(f"line {lineno}: duplicate cell {marker!r}")
        if symbol in marker_of:
            raise AlphabetError(f"line {lineno}: duplicate symbol {symbol!r}")
        symbol_of[marker] = symbol
        marker_of[symbol] = marker
        if note:
            notes[marker] = note
    return Alphabet(
        version=version, cells=frozenset(symbol_of),
        _symbol_of=symbol_of, _marker_of=marker_of, notes=notes,
    )


def load_alphabet_path(path) -> Alphabet:
    with open(path, "r", encoding="utf-8") as fh:
        return load_alphabet(fh.read())


@lru_cache(maxsize=None)
def default_alphabet() -> Alphabet:
    """The packaged core table."""
    text = resources.files("phonospace.data").joinpath("alphabet.tsv").read_text("utf-8")
    return load_alphabet(text)


# ---------------------------------------------------------------------------
# prosodic quantization


@dataclass(frozen=True)
class QuantizationConfig:
    """References and per-octave/decade/nat unit counts for R, T, D, L.

    The defaults give semitone-like pitch units, quarter-octave duration
    units, decibel-like loudness units and deci-nat rounding units.
    """

    reference_duration_sec: float = 0.100
    reference_pitch_hz: float = 100.0
    reference_loudness: float = 1.0
    units_per_octave_d: int = 4
    units_per_octave_t: int = 12
    units_per_decade_l: int = 10
    units_per_nat_r: int = 10
    max_abs_units: int = MAX_ABS_UNITS

    def __post_init__(self):
        for name in ("reference_duration_sec", "reference_pitch_hz", "reference_loudness"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_QUANTIZATION = QuantizationConfig()

_DIMENSIONS = ("D", "T", "L", "R")


def _round_half_away(x: float) -> int:
    # fixed rounding mode for bit-exact cross-platform output
    return int(math.floor(abs(x) + 0.5)) * (1 if x >= 0 else -1)


def quantize(value: float, dimension: str, cfg: QuantizationConfig = DEFAULT_QUANTIZATION) -> int:
    """Map a linear measurement into signed quantized log units.

    D/T take a positive duration (s) / pitch (Hz), L a positive loudness;
    R takes the (signed) change in log vocal tract length and negates it
    so that positive means fronting. Results clamp into
    ``[-max_abs_units, max_abs_units]``.
    """
    if dimension not in _DIMENSIONS:
        raise ValueError(f"dimension must be one of {_DIMENSIONS}, got {dimension!r}")
    if dimension == "R":
        raw = -cfg.units_per_nat_r * value
    else:
        if value <= 0:
            raise ValueError(f"{dimension} requires a strictly positive value")
        if dimension == "D":
            raw = cfg.units_per_octave_d * math.log2(value / cfg.reference_duration_sec)
        elif dimension == "T":
            raw = cfg.units_per_octave_t * math.log2(value / cfg.reference_pitch_hz)
        else:
            raw = cfg.units_per_decade_l * math.log10(value / cfg.reference_loudness)
    units = _round_half_away(raw)
    return max(-cfg.max_abs_units, min(cfg.max_abs_units, units))


def dequantize(units: int, dimension: str, cfg: QuantizationConfig = DEFAULT_QUANTIZATION) -> float:
    """Linear value at the center of a quantized unit (inverse of quantize)."""
    if dimension not in _DIMENSIONS:
        raise ValueError(f"dimension must be one of {_DIMENSIONS}, got {dimension!r}")
    if dimension == "D":
        return cfg.reference_duration_sec * 2.0 ** (units / cfg.units_per_octave_d)
    if dimension == "T":
        return cfg.reference_pitch_hz * 2.0 ** (units / cfg.units_per_octave_t)
    if dimension == "L":
        return cfg.reference_loudness * 10.0 ** (units / cfg.units_per_decade_l)
    return -units / cfg.units_per_nat_r
