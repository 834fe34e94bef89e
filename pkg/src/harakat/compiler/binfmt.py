"""Versioned binary layout for compiled dictionaries.

All integers are little-endian.  ``varint`` is LEB128 (7 bits per byte, high
bit set on all but the last byte).

    magic        4 bytes  b"OTDL"
    version      u32      currently 1
    mode         u8       0 = suffix tags, 1 = Semitic tags
    entries      u32      number of dictionary entries compiled
    inf_count    u32
    states       u32
    transitions  u32
    alphabet     u32      number of distinct transition labels
    labels       alphabet x (varint byte length, UTF-8 bytes), sorted
    inf table    inf_count x (varint byte length, UTF-8 bytes)
    states       for each state, in topological order (root first):
                   varint (transition count << 1 | is_final)
                   if final: varint k, then k INF indices, first one
                             absolute and the rest as gaps
                   per transition, sorted by label:
                             varint label index, varint (target - source)
    crc32        u32      over every preceding byte
"""

from __future__ import annotations

import hashlib
import struct
import zlib
from pathlib import Path

from .compact import TagMode
from .madfa import CompiledDictionary, Madfa

MAGIC = b"OTDL"
VERSION = 1
_HEADER = struct.Struct("<4sIBIIIII")
_MODES = {TagMode.SUFFIX: 0, TagMode.SEMITIC: 1}


class BinaryFormatError(ValueError):
    pass


class BadMagic(BinaryFormatError):
    pass


class VersionMismatch(BinaryFormatError):
    pass


class Truncated(BinaryFormatError):
    pass


class ChecksumMismatch(BinaryFormatError):
    pass


def _varint(value: int, out: bytearray) -> None:
    while value >= 0x80:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    out.append(value)


def _string(text: str, out: bytearray) -> None:
    data = text.encode("utf-8")
    _varint(len(data), out)
    out += data


def to_bytes(cd: CompiledDictionary) -> bytes:
    madfa = cd.madfa
    labels = sorted({c for t in madfa.trans for c in t})
    label_index = {c: i for i, c in enumerate(labels)}
    out = bytearray(
        _HEADER.pack(
            MAGIC,
            VERSION,
            _MODES[cd.mode],
            cd.entry_count,
            len(cd.inf),
            madfa.n_states,
            madfa.n_transitions,
            len(labels),
        )
    )
    for c in labels:
        _string(c, out)
    for tag in cd.inf:
        _string(tag, out)
    for src, (edges, final) in enumerate(zip(madfa.trans, madfa.finals)):
        _varint(len(edges) << 1 | (final is not None), out)
        if final is not None:
            _varint(len(final), out)
            prev = 0
            for idx in final:
                _varint(idx - prev, out)
                prev = idx
        for c in sorted(edges):
            _varint(label_index[c], out)
            _varint(edges[c] - src, out)
    out += struct.pack("<I", zlib.crc32(out))
    return bytes(out)


class _Reader:
    def __init__(self, data: bytes, pos: int):
        self.data = data
        self.pos = pos
        self.end = len(data) - 4

    def varint(self) -> int:
        data, pos, end = self.data, self.pos, self.end
        shift = result = 0
        while True:
            if pos >= end:
                raise Truncated("unexpected end of data")
            byte = data[pos]
            pos += 1
            result |= (byte & 0x7F) << shift
            if byte < 0x80:
                self.pos = pos
                return result
            shift += 7

    def string(self) -> str:
        n = self.varint()
        if self.pos + n > self.end:
            raise Truncated("string runs past end of data")
        text = self.data[self.pos:self.pos + n].decode("utf-8")
        self.pos += n
        return text


def from_bytes(data: bytes) -> CompiledDictionary:
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagic("not a compiled dictionary (bad magic)")
    if len(data) < _HEADER.size + 4:
        raise Truncated("header is incomplete")
    _, version, mode, entries, inf_count, n_states, n_trans, n_labels = _HEADER.unpack_from(data)
    if version != VERSION:
        raise VersionMismatch(f"format version {version}, expected {VERSION}")
    tag_mode = {v: k for k, v in _MODES.items()}.get(mode)
    if tag_mode is None:
        raise BinaryFormatError(f"unknown mode {mode}")
    r = _Reader(data, _HEADER.size)
    labels = [r.string() for _ in range(n_labels)]
    inf = [r.string() for _ in range(inf_count)]
    trans: list[dict[str, int]] = []
    finals: list[tuple[int, ...] | None] = []
    varint = r.varint
    for src in range(n_states):
        head = varint()
        if head & 1:
            k = varint()
            idx = 0
            out = []
            for _ in range(k):
                idx += varint()
                out.append(idx)
            finals.append(tuple(out))
        else:
            finals.append(None)
        edges = {}
        for _ in range(head >> 1):
            label = labels[varint()]
            edges[label] = src + varint()
        trans.append(edges)
    if r.pos != r.end:
        raise BinaryFormatError("trailing bytes after state table")
    (crc,) = struct.unpack_from("<I", data, len(data) - 4)
    if zlib.crc32(data[:-4]) != crc:
        raise ChecksumMismatch("checksum does not match; the file is damaged")
    cd = CompiledDictionary(Madfa(trans, finals), inf, tag_mode, entries)
    if cd.n_transitions != n_trans:
        raise BinaryFormatError("transition count does not match header")
    return cd


def serialize(cd: CompiledDictionary, path: str | Path) -> int:
    """Write ``cd`` to ``path`` and return the number of bytes written."""
    data = to_bytes(cd)
    Path(path).write_bytes(data)
    return len(data)


def deserialize(path: str | Path) -> CompiledDictionary:
    return from_bytes(Path(path).read_bytes())


def digest(cd: CompiledDictionary) -> str:
    return hashlib.sha256(to_bytes(cd)).hexdigest()


def stats(cd: CompiledDictionary) -> dict[str, int]:
    return {
        "entries": cd.entry_count,
        "inf": len(cd.inf),
        "states": cd.n_states,
        "transitions": cd.n_transitions,
        "bytes": len(to_bytes(cd)),
    }
