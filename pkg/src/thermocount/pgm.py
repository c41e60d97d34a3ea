"""Minimal PGM (portable graymap) reader and writer.

Supports P2 (ASCII) and P5 (binary) with maxval 255 or 65535, which is all
the thermal pipeline needs. 16-bit samples are big-endian per the netpbm
convention. Color formats (P3/P6) and other maxvals are rejected.
"""

from __future__ import annotations

import numpy as np

from .errors import FormatError, ParameterError

SUPPORTED_MAXVALS = (255, 65535)


def _header_tokens(data: bytes):
    """Yield whitespace-separated header tokens, skipping '#' comments."""
    pos = 0
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c in b" \t\r\n":
            pos += 1
            continue
        if c == b"#":
            end = data.find(b"\n", pos)
            pos = n if end < 0 else end + 1
            continue
        start = pos
        while pos < n and data[pos : pos + 1] not in b" \t\r\n":
            pos += 1
        yield data[start:pos], pos
    return


def read_pgm(path) -> tuple[np.ndarray, int]:
    """Read a PGM file.

    Returns (samples, maxval) where samples is a (height, width) uint16 array
    of raw sample values.
    """
    with open(path, "rb") as fh:
        data = fh.read()

    magic = data[:2]
    if magic in (b"P3", b"P6"):
        raise FormatError(f"{path}: unsupported pixel format {magic.decode()}")
    if magic not in (b"P2", b"P5"):
        raise FormatError(f"{path}: not a PGM file")

    tokens = _header_tokens(data)
    fields = []
    body_pos = None
    try:
        next(tokens)  # magic
        for _ in range(3):
            tok, pos = next(tokens)
            fields.append(int(tok))
            body_pos = pos
    except (StopIteration, ValueError) as exc:
        raise FormatError(f"{path}: malformed PGM header") from exc

    width, height, maxval = fields
    if width < 1 or height < 1:
        raise FormatError(f"{path}: bad dimensions {width}x{height}")
    if maxval not in SUPPORTED_MAXVALS:
        raise FormatError(f"{path}: unsupported maxval {maxval}")

    count = width * height
    if magic == b"P2":
        values = []
        for tok, _ in tokens:
            try:
                values.append(int(tok))
            except ValueError as exc:
                raise FormatError(f"{path}: bad ASCII sample {tok!r}") from exc
            if len(values) == count:
                break
        if len(values) < count:
            raise FormatError(f"{path}: truncated data")
        samples = np.array(values, dtype=np.uint32)
    else:
        # single whitespace byte separates the header from the raster
        raster = data[body_pos + 1 :]
        bytes_per = 1 if maxval < 256 else 2
        need = count * bytes_per
        if len(raster) < need:
            raise FormatError(f"{path}: truncated data")
        raw = np.frombuffer(raster[:need], dtype=np.uint8)
        if bytes_per == 1:
            samples = raw.astype(np.uint32)
        else:
            samples = (raw[0::2].astype(np.uint32) << 8) | raw[1::2]

    if samples.max(initial=0) > maxval:
        raise FormatError(f"{path}: sample exceeds maxval {maxval}")
    return samples.reshape(height, width).astype(np.uint16), maxval


def write_pgm(path, samples: np.ndarray, maxval: int, ascii_format: bool = False) -> None:
    """Write a (height, width) array of sample values as P5 (or P2) PGM."""
    if maxval not in SUPPORTED_MAXVALS:
        raise ParameterError(f"maxval must be one of {SUPPORTED_MAXVALS}, got {maxval}")
    samples = np.asarray(samples)
    if samples.ndim != 2:
        raise FormatError("samples must be a 2-D array")
    if samples.min(initial=0) < 0 or samples.max(initial=0) > maxval:
        raise FormatError("sample values outside [0, maxval]")

    height, width = samples.shape
    if ascii_format:
        lines = [f"P2\n{width} {height}\n{maxval}\n"]
        for row in samples:
            lines.append(" ".join(str(int(v)) for v in row) + "\n")
        payload = "".join(lines).encode("ascii")
    else:
        header = f"P5\n{width} {height}\n{maxval}\n".encode("ascii")
        if maxval < 256:
            body = samples.astype(np.uint8).tobytes()
        else:
            body = samples.astype(">u2").tobytes()
        payload = header + body
    with open(path, "wb") as fh:
        fh.write(payload)
