"""JSONL corpus format: one phone per line, blank line between strings.

A record carries the marker attributes (m, fb, oc, pl), the six
prosodic integers and an optional onset time t0. Lines starting with
``#`` are comments. Null-phone records ({"null": true}) belong to model
files only and are rejected in transcriptions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, List, Optional, Sequence, Union

from .alphabet import Marker, Phone, ProsodicVector


class CorpusFormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


@dataclass
class CorpusString:
    line: int  # 1-based line of the record's first phone
    phones: List[Phone]


def phone_to_record(phone: Phone) -> dict:
    if phone.is_null:
        return {"null": True}
    m = phone.marker
    pv = phone.prosody
    rec = {
        "m": m.manner.value, "fb": m.front_back.value,
        "oc": m.open_close.value, "pl": m.place.value,
        "R": pv.R, "N": pv.N, "V": pv.V, "T": pv.T, "D": pv.D, "L": pv.L,
    }
    if phone.t0 is not None:
        rec["t0"] = phone.t0
    return rec


def phone_from_record(rec: dict, line: Optional[int] = None) -> Phone:
    if not isinstance(rec, dict):
        raise CorpusFormatError("phone record must be a JSON object", line)
    if rec.get("null"):
        raise CorpusFormatError("null phones do not occur in transcriptions", line)
    try:
        marker = Marker.from_ascii(f"{rec['m']}:{rec['fb']}:{rec['oc']}:{rec['pl']}")
        prosody = ProsodicVector(
            R=int(rec["R"]), N=int(rec["N"]), V=int(rec["V"]),
            T=int(rec["T"]), D=int(rec["D"]), L=int(rec["L"]),
        )
    except KeyError as exc:
        raise CorpusFormatError(f"phone record missing field {exc}", line) from None
    except (TypeError, ValueError) as exc:
        raise CorpusFormatError(str(exc), line) from None
    t0 = rec.get("t0")
    if t0 is not None:
        t0 = float(t0)
    return Phone(marker, prosody, t0)


def read_corpus(source: Union[str, IO]) -> Iterator[CorpusString]:
    """Stream the phone strings of a corpus file or file object."""
    if hasattr(source, "read"):
        yield from _read_lines(source)
    else:
        with open(source, "r", encoding="utf-8") as fh:
            yield from _read_lines(fh)


def _read_lines(fh: IO) -> Iterator[CorpusString]:
    phones: List[Phone] = []
    start_line = 0
    for lineno, raw in enumerate(fh, start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if phones:
                yield CorpusString(start_line, phones)
                phones = []
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"malformed JSON ({exc.msg})", lineno) from None
        if not phones:
            start_line = lineno
        phones.append(phone_from_record(rec, lineno))
    if phones:
        yield CorpusString(start_line, phones)


def write_corpus(strings: Iterable[Sequence[Phone]], destination: Union[str, IO],
                 header_lines: Sequence[str] = ()) -> None:
    """Write strings as JSONL with blank-line separators; deterministic bytes."""
    def _write(fh: IO):
        for h in header_lines:
            fh.write(f"# {h}\n")
        first = True
        for s in strings:
            if not first:
                fh.write("\n")
            first = False
            for phone in s:
                fh.write(json.dumps(phone_to_record(phone), separators=(",", ":")) + "\n")

    if hasattr(destination, "write"):
        _write(destination)
    else:
        with open(destination, "w", encoding="utf-8") as fh:
            _write(fh)
