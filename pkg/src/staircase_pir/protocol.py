"""User/server protocol layer: queries, responses, download plans, decoding
and the capacity accounting the scheme is measured against."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from . import staircase
from .errors import (
    ColumnOutOfRange,
    FieldTooSmall,
    FileIndexOutOfRange,
    InsufficientResponders,
    InvalidThreshold,
    MissingResponse,
)
from .field import Matrix, vandermonde
from .params import SchemeParams


def default_encoding_matrix(params: SchemeParams) -> Matrix:
    """The n x n Vandermonde matrix on points 1..n over GF(q); needs q > n."""
    if params.q <= params.n:
        raise FieldTooSmall(
            f"q={params.q} too small for {params.n} distinct nonzero points"
        )
    return vandermonde(params.field, list(range(1, params.n + 1)), params.n)


def matrix_fingerprint(params: SchemeParams, V: Matrix) -> bytes:
    """32-byte digest identifying (q, V); used in handshakes."""
    h = hashlib.sha256()
    h.update(f"q={params.q};".encode())
    for row in V.rows:
        h.update((",".join(map(str, row)) + ";").encode())
    return h.digest()


class Database:
    """m equal-length files flattened into the data vector x.

    Part c of file i occupies the s-symbol slab ((c-1)*m + i-1); this is
    exactly the layout the part selectors index into.
    """

    def __init__(self, params: SchemeParams, x: Sequence[int]):
        if len(x) != params.x_length:
            raise ValueError(f"x must have {params.x_length} symbols, got {len(x)}")
        self.params = params
        self.x = [v % params.q for v in x]

    @classmethod
    def from_files(cls, params: SchemeParams, files: Sequence[Sequence[int]]) -> "Database":
        if len(files) != params.m:
            raise ValueError(f"need {params.m} files, got {len(files)}")
        x = [0] * params.x_length
        for i, content in enumerate(files, start=1):
            if len(content) != params.file_symbols:
                raise ValueError(
                    f"file {i} must have {params.file_symbols} symbols, got {len(content)}"
                )
            for c in range(params.alpha_prime):
                base = params.slab_index(c + 1, i) * params.s
                for off in range(params.s):
                    x[base + off] = content[c * params.s + off] % params.q
        return cls(params, x)

    def file_content(self, i: int) -> List[int]:
        if not 1 <= i <= self.params.m:
            raise FileIndexOutOfRange(f"file index {i} outside [1, {self.params.m}]")
        out = []
        for c in range(self.params.alpha_prime):
            base = self.params.slab_index(c + 1, i) * self.params.s
            out.extend(self.x[base : base + self.params.s])
        return out

    def project(self, qvec: Sequence[int]) -> Tuple[int, ...]:
        """Slab-wise projection of x on one sub-query: s symbols."""
        p = self.params
        q = p.q
        out = [0] * p.s
        for slab in range(p.alpha_prime * p.m):
            base = slab * p.s
            for off in range(p.s):
                coef = qvec[base + off]
                if coef:
                    out[off] = (out[off] + coef * self.x[base + off]) % q
        return tuple(out)


@dataclass
class Query:
    """One server's query: alpha sub-queries plus the scheme fingerprint."""

    server_id: int
    subqueries: list
    fingerprint: bytes


def make_queries(
    params: SchemeParams,
    V: Matrix,
    i: int,
    seed=None,
    row_order: str = staircase.DEFAULT_ROW_ORDER,
) -> List[Query]:
    randomness = staircase.generate_randomness(params, seed)
    grid = staircase.build_message_grid(params, i, randomness, row_order)
    shares = staircase.encode_shares(params, V, grid)
    fp = matrix_fingerprint(params, V)
    return [
        Query(server_id=l + 1, subqueries=shares.rows[l], fingerprint=fp)
        for l in range(params.n)
    ]


def server_respond(
    db: Database, query: Query, columns: Iterable[int]
) -> Dict[int, Tuple[int, ...]]:
    """Project the data on the requested sub-query columns (0-based)."""
    out = {}
    for c in columns:
        if not 0 <= c < db.params.alpha:
            raise ColumnOutOfRange(f"column {c} outside [0, {db.params.alpha})")
        out[c] = db.project(query.subqueries[c])
    return out


@dataclass(frozen=True)
class DownloadPlan:
    """Which prefix to fetch from a responder set, and its exact cost."""

    params: SchemeParams
    responders: tuple
    level: int
    prefix_cols: int

    @property
    def mu(self) -> int:
        return len(self.responders)

    @property
    def total_symbols(self) -> int:
        return self.mu * self.prefix_cols * self.params.s

    @property
    def rate(self) -> Fraction:
        return Fraction(self.params.file_symbols, self.total_symbols)


def plan_download(params: SchemeParams, responders: Sequence[int]) -> DownloadPlan:
    mu = len(set(responders))
    if mu < params.k:
        raise InsufficientResponders(f"{mu} responders < k={params.k}")
    j = params.level_for(mu)
    return DownloadPlan(
        params=params,
        responders=tuple(sorted(set(responders))),
        level=j,
        prefix_cols=params.prefix_cols(mu),
    )


def decode_file(
    params: SchemeParams,
    V: Matrix,
    plan: DownloadPlan,
    responses: Dict[int, Dict[int, Tuple[int, ...]]],
    row_order: str = staircase.DEFAULT_ROW_ORDER,
) -> List[int]:
    """Decode the requested file from the plan's prefix responses.

    responses: server id -> {column -> s-symbol slab}.
    """
    projections = {}
    for sid in plan.responders:
        if sid not in responses:
            raise MissingResponse(f"no responses from server {sid}")
        cols = []
        for c in range(plan.prefix_cols):
            if c not in responses[sid]:
                raise MissingResponse(f"server {sid} missing column {c}")
            cols.append(tuple(responses[sid][c]))
        projections[sid] = cols
    parts = staircase.peel_decode(
        params, V, list(plan.responders), projections, width=params.s, row_order=row_order
    )
    out: List[int] = []
    for part in parts:
        out.extend(part)
    return out


def capacity_finite(m: int, t: int, k: int) -> Fraction:
    """Exact PIR capacity for m files: (1 - t/k) / (1 - (t/k)^m)."""
    if not 1 <= t < k:
        raise InvalidThreshold(f"need 1 <= t < k, got t={t}, k={k}")
    if m < 1:
        raise ValueError("m must be >= 1")
    r = Fraction(t, k)
    return (1 - r) / (1 - r**m) if m > 1 else Fraction(1)


def capacity_asymptotic(t: int, k: int) -> Fraction:
    """Asymptotic PIR capacity 1 - t/k."""
    if not 1 <= t < k:
        raise InvalidThreshold(f"need 1 <= t < k, got t={t}, k={k}")
    return 1 - Fraction(t, k)


def rate_achieved(plan: DownloadPlan, file_symbols: int = None) -> Fraction:
    """Downloaded-symbol rate of a plan; equals 1 - t/mu for this scheme."""
    if file_symbols is None:
        file_symbols = plan.params.file_symbols
    return Fraction(file_symbols, plan.total_symbols)
