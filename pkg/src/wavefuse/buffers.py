"""Sample buffers and their on-disk formats.

Buffers are plain one-dimensional numpy arrays.  Serialization is
byte-exact: raw little-endian IEEE-754 float32, or WAV with format tag 3
(IEEE float), mono.  No dithering, no normalization.
"""

from __future__ import annotations

import struct

import numpy as np

WAVE_FORMAT_IEEE_FLOAT = 3


def alloc_samples(n: int, dtype=np.float32) -> np.ndarray:
    """Allocate an output buffer.  Render drivers allocate only through
    this hook so tests can count allocations."""
    return np.empty(n, dtype=dtype)


def as_float32(samples) -> np.ndarray:
    return np.ascontiguousarray(samples, dtype="<f4")


def write_raw_f32(path, samples) -> None:
    """Raw little-endian float32, no header."""
    as_float32(samples).tofile(path)


def read_raw_f32(path) -> np.ndarray:
    return np.fromfile(path, dtype="<f4")


def write_wav_f32(path, samples, sample_rate: int = 44100) -> None:
    """Mono WAV, format tag 3 (IEEE float), 32 bits per sample.

    Includes the fact chunk that the spec for non-PCM formats asks for.
    """
    data = as_float32(samples).tobytes()
    n_frames = len(data) // 4
    byte_rate = sample_rate * 4
    fmt = struct.pack(
        "<HHIIHH", WAVE_FORMAT_IEEE_FLOAT, 1, sample_rate, byte_rate, 4, 32
    )
    fact = struct.pack("<I", n_frames)
    payload = (
        b"WAVE"
        + b"fmt " + struct.pack("<I", len(fmt)) + fmt
        + b"fact" + struct.pack("<I", len(fact)) + fact
        + b"data" + struct.pack("<I", len(data)) + data
    )
    if len(data) % 2:
        payload += b"\x00"
    with open(path, "wb") as fh:
        fh.write(b"RIFF" + struct.pack("<I", len(payload)) + payload)
