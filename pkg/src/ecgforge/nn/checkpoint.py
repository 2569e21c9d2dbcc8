"""Versioned binary model checkpoints.

Layout (all little-endian):

* header: magic ``ECGW``, u16 version (1), u16 metadata entry count,
  u32 block count
* metadata entries: u16 key length, key bytes (utf-8), u16 value length,
  value bytes
* block manifest: per block u16 name length, name bytes, u8 ndim,
  u32 per dimension
* raw data: float32 blocks, C order, concatenated in manifest order

Save then load round-trips bit-exactly.
"""
from __future__ import annotations

import os
import struct

import numpy as np

CHECKPOINT_MAGIC = b"ECGW"
CHECKPOINT_VERSION = 1


def save_checkpoint(path, params: dict[str, np.ndarray],
                    meta: dict[str, str] | None = None) -> None:
    """Write named float32 parameter blocks atomically (temp then rename)."""
    meta = meta or {}
    for name, arr in params.items():
        if arr.dtype != np.float32:
            raise TypeError(f"checkpoint blocks must be float32; {name!r} is {arr.dtype}")
    chunks = [struct.pack("<4sHHI", CHECKPOINT_MAGIC, CHECKPOINT_VERSION,
                          len(meta), len(params))]
    for key, value in meta.items():
        kb = key.encode("utf-8")
        vb = str(value).encode("utf-8")
        chunks.append(struct.pack("<H", len(kb)) + kb)
        chunks.append(struct.pack("<H", len(vb)) + vb)
    for name, arr in params.items():
        nb = name.encode("utf-8")
        chunks.append(struct.pack("<HB", len(nb), arr.ndim) + nb)
        chunks.append(struct.pack(f"<{arr.ndim}I", *arr.shape))
    for arr in params.values():
        chunks.append(np.ascontiguousarray(arr, dtype="<f4").tobytes())
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as f:
        f.write(b"".join(chunks))
    os.replace(tmp, path)


def load_checkpoint(path) -> tuple[dict[str, np.ndarray], dict[str, str]]:
    """Read a checkpoint; raises ValueError on bad magic, version or size."""
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < 12:
        raise ValueError(f"{path}: truncated checkpoint header")
    magic, version, n_meta, n_blocks = struct.unpack_from("<4sHHI", raw)
    if magic != CHECKPOINT_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}, expected {CHECKPOINT_MAGIC!r}")
    if version != CHECKPOINT_VERSION:
        raise ValueError(f"{path}: unsupported checkpoint version {version}")
    offset = 12
    meta: dict[str, str] = {}
    try:
        for _ in range(n_meta):
            (klen,) = struct.unpack_from("<H", raw, offset)
            offset += 2
            key = raw[offset:offset + klen].decode("utf-8")
            offset += klen
            (vlen,) = struct.unpack_from("<H", raw, offset)
            offset += 2
            meta[key] = raw[offset:offset + vlen].decode("utf-8")
            offset += vlen
        manifest: list[tuple[str, tuple[int, ...]]] = []
        for _ in range(n_blocks):
            nlen, ndim = struct.unpack_from("<HB", raw, offset)
            offset += 3
            name = raw[offset:offset + nlen].decode("utf-8")
            offset += nlen
            shape = struct.unpack_from(f"<{ndim}I", raw, offset)
            offset += 4 * ndim
            manifest.append((name, shape))
    except struct.error as exc:
        raise ValueError(f"{path}: truncated checkpoint manifest") from exc
    params: dict[str, np.ndarray] = {}
    for name, shape in manifest:
        count = int(np.prod(shape, dtype=np.int64)) if shape else 1
        end = offset + 4 * count
        if end > len(raw):
            raise ValueError(f"{path}: truncated data for block {name!r}")
        params[name] = np.frombuffer(raw[offset:end], dtype="<f4").reshape(shape).copy()
        offset = end
    if offset != len(raw):
        raise ValueError(f"{path}: {len(raw) - offset} trailing bytes after last block")
    return params, meta
