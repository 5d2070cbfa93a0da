"""Minimal PBM (P4) and PGM (P5) codecs for masks and amplitude images."""

from __future__ import annotations

import numpy as np


def write_pbm(mask: np.ndarray, path) -> None:
    """Binary PBM; True -> 1 (black). Rows are top-to-bottom as stored."""
    mask = np.asarray(mask, dtype=bool)
    ny, nx = mask.shape
    packed = np.packbits(mask, axis=1)
    with open(path, "wb") as fh:
        fh.write(f"P4\n{nx} {ny}\n".encode())
        fh.write(packed.tobytes())


def read_pbm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P4"):
        raise ValueError(f"{path}: not a binary PBM file")
    fields, pos = [], 2
    while len(fields) < 2:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while data[pos:pos + 1] not in (b"\n", b""):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(int(data[start:pos]))
    pos += 1  # single whitespace after the header
    nx, ny = fields
    row_bytes = (nx + 7) // 8
    raw = np.frombuffer(data[pos:pos + ny * row_bytes], dtype=np.uint8)
    bits = np.unpackbits(raw.reshape(ny, row_bytes), axis=1)[:, :nx]
    return bits.astype(bool)


def write_pgm(image: np.ndarray, path) -> None:
    """8-bit binary PGM."""
    image = np.asarray(image, dtype=np.uint8)
    ny, nx = image.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{nx} {ny}\n255\n".encode())
        fh.write(image.tobytes())
