"""Binary on-disk format for stranger artifacts.

Layout, all little-endian::

    magic      4s   b"TPA1"
    version    u32
    n          u64
    c          f64
    epsilon    f64
    T          u32
    graph fp   u64
    scores     n * f64
    crc32      u32   over every preceding byte
"""
from __future__ import annotations

import os
import struct
import zlib
from pathlib import Path

import numpy as np

from .tpa import StrangerArtifact

MAGIC = b"TPA1"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIQddIQ")
_CRC = struct.Struct("<I")


class ArtifactFormatError(ValueError):
    pass


def artifact_size(n: int) -> int:
    return _HEADER.size + 8 * n + _CRC.size


def encode_artifact(a: StrangerArtifact) -> bytes:
    scores = np.ascontiguousarray(a.stranger_scores, dtype="<f8")
    body = _HEADER.pack(MAGIC, FORMAT_VERSION, scores.size, a.restart_prob, a.tolerance,
                        a.stranger_start, a.graph_fingerprint) + scores.tobytes()
    return body + _CRC.pack(zlib.crc32(body))


def decode_artifact(data: bytes) -> StrangerArtifact:
    if len(data) < _HEADER.size + _CRC.size:
        raise ArtifactFormatError(f"file too short ({len(data)} bytes) for an artifact header")
    magic, version, n, c, eps, t, fp = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ArtifactFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise ArtifactFormatError(f"unsupported format version {version}")
    if len(data) != artifact_size(n):
        raise ArtifactFormatError(f"length {len(data)} does not match n={n} "
                                  f"(expected {artifact_size(n)} bytes)")
    (stored,) = _CRC.unpack_from(data, len(data) - _CRC.size)
    if zlib.crc32(data[:-_CRC.size]) != stored:
        raise ArtifactFormatError("CRC32 mismatch; artifact is corrupted")
    scores = np.frombuffer(data, dtype="<f8", count=n, offset=_HEADER.size).astype(np.float64)
    scores.setflags(write=False)
    return StrangerArtifact(scores, fp, c, eps, t)


def save_artifact(a: StrangerArtifact, path) -> int:
    """Write atomically; returns the number of bytes written."""
    path = Path(path)
    data = encode_artifact(a)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)
    return len(data)


def load_artifact(path) -> StrangerArtifact:
    with open(path, "rb") as fh:
        return decode_artifact(fh.read())
