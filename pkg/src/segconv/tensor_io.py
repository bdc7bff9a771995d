"""File formats: binary PPM (P6) input images and the SCT1 raw tensor format.

SCT1 layout: magic bytes ``SCT1``, then channels/height/width as
little-endian uint32, then channels*height*width little-endian float32
values in channel-major row-major order. Round-trips are bitwise exact.

The PPM loader accepts binary P6 with maxval 255 only and does no
resizing; images must already have the wanted dimensions.
"""

from __future__ import annotations

import struct

import numpy as np

from .tensors import require_channel_tensor

SCT_MAGIC = b"SCT1"
_PPM_WHITESPACE = b" \t\r\n\x0b\x0c"


class FormatError(ValueError):
    """A file's bytes do not match the declared format."""


def parse_ppm(data: bytes) -> np.ndarray:
    """Decode binary P6 bytes into a (3, height, width) float32 tensor in [0, 1]."""
    magic, pos = _ppm_token(data, 0)
    if magic != b"P6":
        raise FormatError(f"unsupported PPM magic {magic!r}, only binary P6 is handled")
    fields = []
    for name in ("width", "height", "maxval"):
        token, pos = _ppm_token(data, pos)
        try:
            fields.append(int(token))
        except ValueError:
            raise FormatError(f"malformed PPM header: non-numeric {name} {token!r}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise FormatError(f"malformed PPM header: size {width}x{height}")
    if maxval != 255:
        raise FormatError(f"unsupported PPM maxval {maxval}, expected 255")
    if pos >= len(data) or data[pos] not in _PPM_WHITESPACE:
        raise FormatError("malformed PPM header: missing whitespace before pixel data")
    pos += 1
    expected = width * height * 3
    payload = data[pos:pos + expected]
    if len(payload) < expected:
        raise FormatError(f"truncated PPM pixel data: expected {expected} bytes, "
                          f"got {len(payload)}")
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    return (pixels.transpose(2, 0, 1).astype(np.float32) / np.float32(255.0))


def load_ppm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return parse_ppm(fh.read())


def tensor_to_sct_bytes(tensor: np.ndarray) -> bytes:
    """Serialize a channel tensor to SCT1 bytes."""
    t = require_channel_tensor(tensor)
    channels, height, width = t.shape
    header = SCT_MAGIC + struct.pack("<III", channels, height, width)
    return header + np.ascontiguousarray(t, dtype="<f4").tobytes()


def sct_bytes_to_tensor(data: bytes) -> np.ndarray:
    """Parse SCT1 bytes back into a (channels, height, width) float32 tensor."""
    if len(data) < 16:
        raise FormatError(f"SCT1 data too short for header: {len(data)} bytes")
    if data[:4] != SCT_MAGIC:
        raise FormatError(f"bad magic {data[:4]!r}, expected {SCT_MAGIC!r}")
    channels, height, width = struct.unpack("<III", data[4:16])
    if channels < 1 or height < 1 or width < 1:
        raise FormatError(f"invalid SCT1 dims {channels}x{height}x{width}")
    expected = channels * height * width * 4
    payload = data[16:]
    if len(payload) != expected:
        raise FormatError(f"SCT1 payload size mismatch: header implies {expected} bytes, "
                          f"got {len(payload)}")
    values = np.frombuffer(payload, dtype="<f4").astype(np.float32)
    return values.reshape(channels, height, width)


def save_raw_tensor(tensor: np.ndarray, path) -> None:
    with open(path, "wb") as fh:
        fh.write(tensor_to_sct_bytes(tensor))


def load_raw_tensor(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return sct_bytes_to_tensor(fh.read())


def _ppm_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # Skip whitespace and '#' comments, then collect one token.
    while pos < len(data):
        byte = data[pos]
        if byte in _PPM_WHITESPACE:
            pos += 1
        elif byte == ord("#"):
            while pos < len(data) and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    if pos >= len(data):
        raise FormatError("malformed PPM header: unexpected end of data")
    start = pos
    while pos < len(data) and data[pos] not in _PPM_WHITESPACE:
        pos += 1
    return data[start:pos], pos
