"""Binary wire protocol: length-prefixed frames, little-endian u64 fields.

Frame layout: magic "SPIR" (4 bytes), version (1 byte), message type
(1 byte), payload length (u64), payload.

Message types:
  1 QUERY    params (n,k,t,m,q,s as 6 u64), V fingerprint (32 bytes),
             server id (u64), alpha (u64), then alpha sub-queries of
             alpha'*m*s symbols (u64 each).
  2 FETCH    session id (u64), column count (u64), column indices (u64).
  3 RESPONSE session id (u64), column count (u64), then s symbols per
             column (u64). A zero-column RESPONSE acknowledges a QUERY
             and carries the server-assigned session id.
  4 ERROR    code (u64), UTF-8 message.
"""

from __future__ import annotations

import struct
from typing import List, Sequence, Tuple

from .errors import MalformedFrame
from .params import SchemeParams

MAGIC = b"SPIR"
VERSION = 1

MSG_QUERY = 1
MSG_FETCH = 2
MSG_RESPONSE = 3
MSG_ERROR = 4

ERR_HANDSHAKE = 1
ERR_BAD_SESSION = 2
ERR_COLUMN = 3
ERR_MALFORMED = 4

_U64 = struct.Struct("<Q")
_HEADER = struct.Struct("<4sBBQ")


def pack_frame(msg_type: int, payload: bytes) -> bytes:
    return _HEADER.pack(MAGIC, VERSION, msg_type, len(payload)) + payload


def read_frame(readable) -> Tuple[int, bytes]:
    """Read one frame from a file-like object with .read(n)."""
    header = _read_exact(readable, _HEADER.size)
    magic, version, msg_type, length = _HEADER.unpack(header)
    if magic != MAGIC:
        raise MalformedFrame(f"bad magic {magic!r}")
    if version != VERSION:
        raise MalformedFrame(f"unsupported version {version}")
    return msg_type, _read_exact(readable, length)


def _read_exact(readable, n: int) -> bytes:
    chunks = []
    remaining = n
    while remaining:
        chunk = readable.read(remaining)
        if not chunk:
            raise MalformedFrame("connection closed mid-frame")
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def _pack_u64s(values: Sequence[int]) -> bytes:
    return struct.pack(f"<{len(values)}Q", *values)


def _unpack_u64s(data: bytes, count: int, offset: int = 0) -> Tuple[tuple, int]:
    end = offset + 8 * count
    if end > len(data):
        raise MalformedFrame("payload truncated")
    return struct.unpack_from(f"<{count}Q", data, offset), end


def encode_query(
    params: SchemeParams, fingerprint: bytes, server_id: int, subqueries
) -> bytes:
    if len(fingerprint) != 32:
        raise ValueError("fingerprint must be 32 bytes")
    head = _pack_u64s([params.n, params.k, params.t, params.m, params.q, params.s])
    body = [head, fingerprint, _pack_u64s([server_id, params.alpha])]
    per = params.alpha_prime * params.m * params.s
    for sub in subqueries:
        if len(sub) != per:
            raise ValueError(f"sub-query must have {per} symbols")
        body.append(_pack_u64s(sub))
    return pack_frame(MSG_QUERY, b"".join(body))


def decode_query(payload: bytes):
    (n, k, t, m, q, s), off = _unpack_u64s(payload, 6)
    if off + 32 > len(payload):
        raise MalformedFrame("missing fingerprint")
    fingerprint = payload[off : off + 32]
    off += 32
    (server_id, alpha), off = _unpack_u64s(payload, 2, off)
    params = SchemeParams(n=n, k=k, t=t, m=m, q=q, s=s)
    if alpha != params.alpha:
        raise MalformedFrame(f"alpha mismatch: {alpha} vs {params.alpha}")
    per = params.alpha_prime * params.m * params.s
    subqueries = []
    for _ in range(alpha):
        vals, off = _unpack_u64s(payload, per, off)
        if any(v >= q for v in vals):
            raise MalformedFrame("symbol value >= q")
        subqueries.append(list(vals))
    if off != len(payload):
        raise MalformedFrame("trailing bytes in QUERY")
    return params, fingerprint, server_id, subqueries


def encode_fetch(session_id: int, columns: Sequence[int]) -> bytes:
    return pack_frame(
        MSG_FETCH, _pack_u64s([session_id, len(columns)] + list(columns))
    )


def decode_fetch(payload: bytes) -> Tuple[int, List[int]]:
    (session_id, count), off = _unpack_u64s(payload, 2)
    cols, off = _unpack_u64s(payload, count, off)
    if off != len(payload):
        raise MalformedFrame("trailing bytes in FETCH")
    return session_id, list(cols)


def encode_response(session_id: int, columns: Sequence[Sequence[int]]) -> bytes:
    flat = [session_id, len(columns)]
    for col in columns:
        flat.extend(col)
    return pack_frame(MSG_RESPONSE, _pack_u64s(flat))


def decode_response(payload: bytes, s: int) -> Tuple[int, List[tuple]]:
    (session_id, count), off = _unpack_u64s(payload, 2)
    columns = []
    for _ in range(count):
        vals, off = _unpack_u64s(payload, s, off)
        columns.append(vals)
    if off != len(payload):
        raise MalformedFrame("trailing bytes in RESPONSE")
    return session_id, columns


def encode_error(code: int, message: str) -> bytes:
    return pack_frame(MSG_ERROR, _pack_u64s([code]) + message.encode("utf-8"))


def decode_error(payload: bytes) -> Tuple[int, str]:
    (code,), off = _unpack_u64s(payload, 1)
    return code, payload[off:].decode("utf-8", errors="replace")
