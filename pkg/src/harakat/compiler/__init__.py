"""Dictionary compilation: compact tags, minimal automaton, binary files."""

from .binfmt import (
    BadMagic,
    BinaryFormatError,
    ChecksumMismatch,
    Truncated,
    VersionMismatch,
    deserialize,
    digest,
    from_bytes,
    serialize,
    stats,
    to_bytes,
)
from .compact import (
    CompactTag,
    IndexOutOfRange,
    TagMode,
    compute_compact_tag,
    expand_compact_tag,
    parse_compact_tag,
)
from .madfa import CompiledDictionary, Madfa, build, build_madfa

__all__ = [
    "BadMagic",
    "BinaryFormatError",
    "ChecksumMismatch",
    "CompactTag",
    "CompiledDictionary",
    "IndexOutOfRange",
    "Madfa",
    "TagMode",
    "Truncated",
    "VersionMismatch",
    "build",
    "build_madfa",
    "compute_compact_tag",
    "deserialize",
    "digest",
    "expand_compact_tag",
    "from_bytes",
    "parse_compact_tag",
    "serialize",
    "stats",
    "to_bytes",
]
