"""Binary sieve cache files.

Layout, all little endian:

    magic   4 bytes  b"MFL1"
    label   1 byte   0 mobius, 1 liouville, 2 squarefree, 3 custom
    start   u64      first index covered (1-based)
    length  u64      number of values
    values  2 bits each, packed 4 per byte, low bits first;
            codes: 00 -> 0, 01 -> +1, 11 -> -1 (10 is invalid);
            the final byte is padded with zero bits
    crc32   u32      zlib CRC-32 of every preceding byte

The trailing checksum is not part of the 21-byte header on purpose: a reader
that only understands the header prefix can still locate and decode the
values, while verify-aware readers use the CRC to reject corruption.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from .errors import CacheChecksumError, CacheFormatError
from .sieve import SignSeq

MAGIC = b"MFL1"
_HEADER = struct.Struct("<4sBQQ")

LABEL_CODES = {"mobius": 0, "liouville": 1, "squarefree": 2, "custom": 3}
_CODE_LABELS = {v: k for k, v in LABEL_CODES.items()}

# value -> 2-bit code is (value & 3) on the int8 view; code -> value uses
# this table, with the entry for the invalid code 2 as a sentinel.
_DECODE = np.array([0, 1, 127, -1], dtype=np.int8)


def pack_signs(values: np.ndarray) -> bytes:
    codes = (values.astype(np.int8).view(np.uint8) & 3).astype(np.uint8)
    pad = (-len(codes)) % 4
    if pad:
        codes = np.concatenate([codes, np.zeros(pad, dtype=np.uint8)])
    quads = codes.reshape(-1, 4)
    packed = quads[:, 0] | quads[:, 1] << 2 | quads[:, 2] << 4 | quads[:, 3] << 6
    return packed.astype(np.uint8).tobytes()


def unpack_signs(payload: bytes, length: int) -> np.ndarray:
    raw = np.frombuffer(payload, dtype=np.uint8)
    codes = np.empty((len(raw), 4), dtype=np.uint8)
    for j in range(4):
        codes[:, j] = (raw >> (2 * j)) & 3
    flat = codes.reshape(-1)
    if np.any(flat[length:]):
        raise CacheFormatError("nonzero padding bits after the declared length")
    flat = flat[:length]
    if np.any(flat == 2):
        raise CacheFormatError("invalid 2-bit code 10 in payload")
    return _DECODE[flat]


def write_cache(path: str | Path, seq: SignSeq) -> None:
    """Write a SignSeq to a cache file, including the trailing CRC."""
    code = LABEL_CODES.get(seq.label)
    if code is None:
        raise CacheFormatError(f"label {seq.label!r} has no cache code")
    body = _HEADER.pack(MAGIC, code, seq.start, len(seq.values)) + pack_signs(seq.values)
    crc = zlib.crc32(body) & 0xFFFFFFFF
    Path(path).write_bytes(body + struct.pack("<I", crc))


def read_cache(path: str | Path) -> SignSeq:
    """Read and fully validate a cache file.

    Raises:
        CacheFormatError: malformed header, length mismatch, or bad codes.
        CacheChecksumError: CRC mismatch (any flipped byte trips this).
    """
    blob = Path(path).read_bytes()
    if len(blob) < _HEADER.size + 4:
        raise CacheFormatError(f"file too short ({len(blob)} bytes)")
    magic, code, start, length = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise CacheFormatError(f"bad magic {magic!r}")
    if code not in _CODE_LABELS:
        raise CacheFormatError(f"unknown label code {code}")
    if start < 1:
        raise CacheFormatError(f"start index {start} below 1")
    expected = _HEADER.size + (length + 3) // 4 + 4
    if len(blob) != expected:
        raise CacheFormatError(f"file is {len(blob)} bytes, header implies {expected}")
    body, tail = blob[:-4], blob[-4:]
    crc = struct.unpack("<I", tail)[0]
    if zlib.crc32(body) & 0xFFFFFFFF != crc:
        raise CacheChecksumError(f"checksum mismatch in {path}")
    values = unpack_signs(body[_HEADER.size :], length)
    return SignSeq(_CODE_LABELS[code], start, values)


def cache_verify(path: str | Path) -> bool:
    """True when header, declared length, payload codes and CRC all validate."""
    try:
        read_cache(path)
    except (CacheFormatError, CacheChecksumError, OSError):
        return False
    return True
