"""Byte <-> field-symbol packing and directory ingestion.

For q >= 257 a byte maps to one symbol. For smaller fields bytes are
split into the widest b-bit chunks with 2^b <= q, MSB first. A manifest
records original lengths and the packing mode so decoded files can be
restored byte-identically.
"""

from __future__ import annotations

import json
import math
import os
from typing import Dict, List, Sequence, Tuple

from .params import SchemeParams
from .protocol import Database


def bits_per_symbol(q: int) -> int:
    """Widest chunk width b (<= 8) with all chunk values below q."""
    b = 1
    while b < 8 and (1 << (b + 1)) <= q:
        b += 1
    if (1 << b) > q:
        raise ValueError(f"q={q} too small to pack even 1-bit chunks")
    return b


def pack_bytes(data: bytes, q: int) -> List[int]:
    b = bits_per_symbol(q)
    if b == 8:
        return list(data)
    symbols = []
    acc = 0
    nbits = 0
    for byte in data:
        acc = (acc << 8) | byte
        nbits += 8
        while nbits >= b:
            nbits -= b
            symbols.append((acc >> nbits) & ((1 << b) - 1))
    if nbits:
        symbols.append((acc << (b - nbits)) & ((1 << b) - 1))
    return symbols


def unpack_symbols(symbols: Sequence[int], q: int, orig_len: int) -> bytes:
    b = bits_per_symbol(q)
    if b == 8:
        return bytes(symbols[:orig_len])
    acc = 0
    nbits = 0
    out = bytearray()
    for sym in symbols:
        acc = (acc << b) | sym
        nbits += b
        while nbits >= 8:
            nbits -= 8
            out.append((acc >> nbits) & 0xFF)
    return bytes(out[:orig_len])


def symbols_needed(byte_len: int, q: int) -> int:
    b = bits_per_symbol(q)
    return math.ceil(byte_len * 8 / b)


def ingest_files(
    named_contents: Sequence[Tuple[str, bytes]],
    n: int,
    k: int,
    t: int,
    q: int,
    s: int = None,
) -> Tuple[SchemeParams, Database, Dict]:
    """Pack files into a database, padding with zero symbols.

    Every file becomes alpha' * s symbols; s defaults to the smallest
    batch width that fits the largest file.
    """
    m = len(named_contents)
    if m < 1:
        raise ValueError("need at least one file")
    packed = [(name, pack_bytes(data, q), len(data)) for name, data in named_contents]
    probe = SchemeParams(n=n, k=k, t=t, m=m, q=q, s=1)
    alpha_prime = probe.alpha_prime
    max_symbols = max(len(sym) for _, sym, _ in packed)
    if s is None:
        s = max(1, math.ceil(max_symbols / alpha_prime))
    params = SchemeParams(n=n, k=k, t=t, m=m, q=q, s=s)
    target = params.file_symbols
    if max_symbols > target:
        raise ValueError(f"batch width s={s} too small for {max_symbols} symbols")
    files = [sym + [0] * (target - len(sym)) for _, sym, _ in packed]
    db = Database.from_files(params, files)
    manifest = {
        "n": n,
        "k": k,
        "t": t,
        "m": m,
        "q": q,
        "s": s,
        "bits_per_symbol": bits_per_symbol(q),
        "files": [
            {"name": name, "orig_len": orig, "symbols": len(sym)}
            for name, sym, orig in packed
        ],
    }
    return params, db, manifest


def ingest_dir(path: str, n: int, k: int, t: int, q: int, s: int = None):
    names = sorted(
        f for f in os.listdir(path) if os.path.isfile(os.path.join(path, f))
    )
    contents = []
    for name in names:
        with open(os.path.join(path, name), "rb") as fh:
            contents.append((name, fh.read()))
    return ingest_files(contents, n, k, t, q, s)


def restore_file(symbols: Sequence[int], manifest: Dict, i: int) -> bytes:
    """Rebuild file i (1-based, manifest order) from decoded symbols."""
    entry = manifest["files"][i - 1]
    return unpack_symbols(symbols, manifest["q"], entry["orig_len"])


def params_from_manifest(manifest: Dict) -> SchemeParams:
    return SchemeParams(
        n=manifest["n"], k=manifest["k"], t=manifest["t"],
        m=manifest["m"], q=manifest["q"], s=manifest["s"],
    )


def write_manifest(path: str, manifest: Dict) -> None:
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)


def read_manifest(path: str) -> Dict:
    with open(path) as fh:
        return json.load(fh)
