"""Staircase grid construction, share/query encoding and peeling decoder.

The encoder arranges alpha' payload vectors and t*alpha randomness
vectors into an n x alpha grid of blocks. Block 1 stacks the payload
matrix over fresh randomness; block j >= 2 stacks replicas of row
mu_{j-1} of the earlier blocks (the staircase step) over fresh
randomness and zero padding. Multiplying the grid by an n x n encoding
matrix V yields one row of alpha sub-queries (or sub-shares) per server.

Every grid cell is tracked symbolically as a coefficient vector over the
basis (payload_1..payload_alpha', r_1..r_{t*alpha}); concrete vectors
are produced by expanding that basis. The decoder only needs the layout
(which is a pure function of the parameters), never the randomness.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    BadEncodingMatrix,
    DimensionMismatch,
    FileIndexOutOfRange,
    InsufficientResponders,
    OutOfRange,
)
from .field import Matrix, prefix_invertible
from .params import SchemeParams

# Vertical order of payload vs randomness rows inside each block. The
# construction works with either; both encoder and decoder must agree.
PAYLOAD_FIRST = "payload_first"
RANDOMNESS_FIRST = "randomness_first"
DEFAULT_ROW_ORDER = PAYLOAD_FIRST

Cell = Tuple[int, int]  # (row, global column), 0-based


@dataclass(frozen=True)
class GridLayout:
    """Structural bookkeeping of the staircase grid.

    cell_kind maps every nonzero cell to one of
      ("payload", c)      -- payload vector index c in [0, alpha')
      ("rand", u)         -- randomness vector index u in [0, t*alpha)
      ("replica", cell)   -- copy of an earlier cell (staircase step)
    Cells absent from the map are zero.
    """

    params: SchemeParams
    row_order: str
    block_cols: tuple
    cell_kind: dict
    payload_pos: tuple  # payload index c -> its cell in block 1

    def col_range(self, block: int) -> range:
        """Global column indices of 1-based block `block`."""
        start = sum(self.block_cols[: block - 1])
        return range(start, start + self.block_cols[block - 1])

    def resolve(self, cell: Cell) -> Cell:
        """Follow replica links back to the original cell."""
        kind = self.cell_kind.get(cell)
        while kind is not None and kind[0] == "replica":
            cell = kind[1]
            kind = self.cell_kind.get(cell)
        return cell

    def symbolic(self, cell: Cell) -> tuple:
        """Coefficient vector of a cell over (payloads, randomness)."""
        p = self.params
        coeffs = [0] * (p.alpha_prime + p.randomness_count)
        kind = self.cell_kind.get(self.resolve(cell))
        if kind is None:
            return tuple(coeffs)
        if kind[0] == "payload":
            coeffs[kind[1]] = 1
        else:
            coeffs[p.alpha_prime + kind[1]] = 1
        return tuple(coeffs)


def _build_layout(params: SchemeParams, row_order: str) -> GridLayout:
    if row_order not in (PAYLOAD_FIRST, RANDOMNESS_FIRST):
        raise ValueError(f"unknown row order {row_order!r}")
    cols = params.block_cols
    cell_kind: Dict[Cell, tuple] = {}
    payload_pos: List[Cell] = [None] * params.alpha_prime
    rand_next = 0
    col_base = 0
    for j in range(1, params.h + 1):
        a_j = params.alpha_j(j)
        if row_order == PAYLOAD_FIRST:
            payload_rows = list(range(a_j))
            rand_rows = list(range(a_j, a_j + params.t))
        else:
            rand_rows = list(range(params.t))
            payload_rows = list(range(params.t, params.t + a_j))
        if j == 1:
            # Payload vectors fill the a_1 x (alpha'/a_1) matrix column-major.
            for cc in range(cols[0]):
                for rr in range(a_j):
                    c = cc * a_j + rr
                    cell = (payload_rows[rr], col_base + cc)
                    cell_kind[cell] = ("payload", c)
                    payload_pos[c] = cell
        else:
            # Staircase step: replicate row mu_{j-1} of blocks 1..j-1,
            # read left to right, wrapped column-major into a_j rows.
            src_row = params.mu(j - 1) - 1
            sources = [(src_row, c) for c in range(col_base)]
            for cc in range(cols[j - 1]):
                for rr in range(a_j):
                    src = sources[cc * a_j + rr]
                    cell_kind[(payload_rows[rr], col_base + cc)] = ("replica", src)
        # Fresh randomness rows, filled column-major.
        for cc in range(cols[j - 1]):
            for rr_pos in rand_rows:
                cell_kind[(rr_pos, col_base + cc)] = ("rand", rand_next)
                rand_next += 1
        col_base += cols[j - 1]
    assert rand_next == params.randomness_count
    return GridLayout(params, row_order, cols, cell_kind, tuple(payload_pos))


@lru_cache(maxsize=None)
def grid_layout(params: SchemeParams, row_order: str = DEFAULT_ROW_ORDER) -> GridLayout:
    return _build_layout(params, row_order)


def generate_randomness(
    params: SchemeParams, seed, width: Optional[int] = None
) -> List[List[int]]:
    """t*alpha vectors with entries uniform over GF(q); deterministic in seed."""
    width = params.x_length if width is None else width
    rng = random.Random(seed)
    q = params.q
    return [
        [rng.randrange(q) for _ in range(width)]
        for _ in range(params.randomness_count)
    ]


def expand_unit(params: SchemeParams, part: int, i: int) -> List[int]:
    """Concrete selector vector for part `part` (1-based) of file i.

    Picks out the s-symbol slab of that part: ones across the slab so the
    slab-wise projection returns the part's s symbols.
    """
    if not 1 <= i <= params.m:
        raise FileIndexOutOfRange(f"file index {i} outside [1, {params.m}]")
    vec = [0] * params.x_length
    base = params.slab_index(part, i) * params.s
    for off in range(params.s):
        vec[base + off] = 1
    return vec


class MessageGrid:
    """The n x alpha staircase grid with its payload and randomness."""

    def __init__(
        self,
        params: SchemeParams,
        payload: Sequence[Sequence[int]],
        randomness: Sequence[Sequence[int]],
        row_order: str = DEFAULT_ROW_ORDER,
        file_index: Optional[int] = None,
    ):
        if len(payload) != params.alpha_prime:
            raise ValueError(
                f"need {params.alpha_prime} payload vectors, got {len(payload)}"
            )
        if len(randomness) != params.randomness_count:
            raise ValueError(
                f"need {params.randomness_count} randomness vectors, got {len(randomness)}"
            )
        widths = {len(v) for v in list(payload) + list(randomness)}
        if len(widths) != 1:
            raise ValueError("payload and randomness vectors must share one length")
        self.params = params
        self.layout = grid_layout(params, row_order)
        self.payload = [list(v) for v in payload]
        self.randomness = [list(v) for v in randomness]
        self.width = widths.pop()
        self.file_index = file_index

    def symbolic(self, row: int, col: int) -> tuple:
        return self.layout.symbolic((row, col))

    def concrete(self, row: int, col: int) -> List[int]:
        return self.expand(self.symbolic(row, col))

    def expand(self, coeffs: Sequence[int]) -> List[int]:
        """Turn a coefficient vector into a concrete vector over GF(q)."""
        p = self.params
        q = p.q
        out = [0] * self.width
        for c, coef in enumerate(coeffs[: p.alpha_prime]):
            if coef:
                for pos, v in enumerate(self.payload[c]):
                    if v:
                        out[pos] = (out[pos] + coef * v) % q
        for u, coef in enumerate(coeffs[p.alpha_prime :]):
            if coef:
                vec = self.randomness[u]
                for pos in range(self.width):
                    out[pos] = (out[pos] + coef * vec[pos]) % q
        return out


def build_message_grid(
    params: SchemeParams,
    file_index: int,
    randomness: Sequence[Sequence[int]],
    row_order: str = DEFAULT_ROW_ORDER,
) -> MessageGrid:
    """PIR grid: payload = the alpha' part selectors of file `file_index`."""
    payload = [
        expand_unit(params, c, file_index) for c in range(1, params.alpha_prime + 1)
    ]
    return MessageGrid(params, payload, randomness, row_order, file_index=file_index)


class ShareSet:
    """Rows of Q = V * M: per server, alpha sub-queries (or sub-shares)."""

    def __init__(self, params: SchemeParams, V: Matrix, grid: MessageGrid):
        self.params = params
        self.V = V
        self.row_order = grid.layout.row_order
        q = params.q
        basis = params.alpha_prime + params.randomness_count
        sym_cells = [
            [grid.symbolic(r, c) for c in range(params.alpha)] for r in range(params.n)
        ]
        self.sym_rows = []
        self.rows = []
        for l in range(params.n):
            vrow = V.rows[l]
            srow = []
            crow = []
            for c in range(params.alpha):
                acc = [0] * basis
                for r in range(params.n):
                    coef = vrow[r]
                    if coef:
                        cell = sym_cells[r][c]
                        for b, v in enumerate(cell):
                            if v:
                                acc[b] = (acc[b] + coef * v) % q
                sym = tuple(acc)
                srow.append(sym)
                crow.append(grid.expand(sym))
            self.sym_rows.append(srow)
            self.rows.append(crow)


def validate_encoding_matrix(V: Matrix, params: SchemeParams) -> bool:
    """True iff every decoder system (any mu_j rows x first mu_j columns)
    of V is invertible, for every level j."""
    if V.nrows != params.n or V.ncols != params.n:
        raise DimensionMismatch(
            f"V must be {params.n}x{params.n}, got {V.nrows}x{V.ncols}"
        )
    sizes = [params.mu(j) for j in range(1, params.h + 1)]
    return prefix_invertible(V, sizes)


def encode_shares(
    params: SchemeParams, V: Matrix, grid: MessageGrid
) -> ShareSet:
    if not validate_encoding_matrix(V, params):
        raise BadEncodingMatrix("encoding matrix fails prefix invertibility")
    return ShareSet(params, V, grid)


def prefix_columns(params: SchemeParams, mu: int) -> range:
    """Global column indices to download when mu servers respond."""
    return range(params.prefix_cols(mu))


def peel_decode(
    params: SchemeParams,
    V: Matrix,
    responders: Sequence[int],
    projections,
    width: int = 1,
    row_order: str = DEFAULT_ROW_ORDER,
) -> List[tuple]:
    """Level-by-level decoder.

    responders: 1-based server ids, exactly mu of them.
    projections: mapping server id -> list of prefix_cols(mu) values, each
    a length-`width` tuple of symbols (projections for PIR, sub-share
    vectors for secret sharing).

    Returns the alpha' payload values in order.
    """
    mu = len(responders)
    if mu < params.k:
        raise InsufficientResponders(f"got {mu} responders, need >= {params.k}")
    if mu > params.n:
        raise OutOfRange(f"got {mu} responders for n={params.n}")
    j = params.level_for(mu)
    layout = grid_layout(params, row_order)
    mu_j = mu
    field = params.field
    q = params.q
    prefix = params.prefix_cols(mu)
    for sid in responders:
        if len(projections[sid]) < prefix:
            raise OutOfRange(
                f"server {sid} supplied {len(projections[sid])} columns, need {prefix}"
            )

    # One system matrix per level: responder rows x first mu_j columns of V.
    A = V.submatrix([sid - 1 for sid in responders], range(mu_j))
    A_inv = A.inverse()

    known: Dict[Cell, tuple] = {}
    for b in range(j, 0, -1):
        mu_b = params.mu(b)
        cols = list(layout.col_range(b))
        # RHS: per column, per responder, projection minus the contribution
        # of rows already known through the staircase replicas.
        rhs_rows = []
        for idx, sid in enumerate(responders):
            vrow = V.rows[sid - 1]
            rhs_row = []
            for c in cols:
                val = list(projections[sid][c])
                for rr in range(mu_j, mu_b):
                    coef = vrow[rr]
                    if coef:
                        kn = known[layout.resolve((rr, c))]
                        for pos in range(width):
                            val[pos] = (val[pos] - coef * kn[pos]) % q
                rhs_row.extend(val)
            rhs_rows.append(rhs_row)
        solved = A_inv.mul(Matrix(field, rhs_rows))
        for rr in range(mu_j):
            srow = solved.rows[rr]
            for ci, c in enumerate(cols):
                value = tuple(srow[ci * width : (ci + 1) * width])
                known[layout.resolve((rr, c))] = value
    return [known[layout.resolve(layout.payload_pos[c])] for c in range(params.alpha_prime)]


# --- communication-efficient secret sharing view ---------------------------


def ss_share(
    params: SchemeParams,
    V: Matrix,
    secret: Sequence[Sequence[int]],
    seed=None,
    randomness: Optional[Sequence[Sequence[int]]] = None,
    row_order: str = DEFAULT_ROW_ORDER,
) -> ShareSet:
    """Share alpha' secret vectors; same grid machinery with the secret as payload."""
    if len(secret) != params.alpha_prime:
        raise ValueError(f"secret must have {params.alpha_prime} vectors")
    width = len(secret[0])
    if randomness is None:
        randomness = generate_randomness(params, seed, width=width)
    grid = MessageGrid(params, secret, randomness, row_order)
    return encode_shares(params, V, grid)


def ss_reconstruct(
    params: SchemeParams,
    V: Matrix,
    share_prefixes,
    row_order: str = DEFAULT_ROW_ORDER,
) -> List[List[int]]:
    """Reconstruct the secret from prefix sub-shares of any d in [k, n] servers.

    share_prefixes: mapping server id -> list of sub-share vectors (the
    first alpha'/alpha_j sub-shares of that server's share).
    """
    responders = sorted(share_prefixes)
    widths = {len(v) for subs in share_prefixes.values() for v in subs}
    if len(widths) != 1:
        raise ValueError("sub-shares must share one length")
    width = widths.pop()
    proj = {sid: [tuple(v) for v in subs] for sid, subs in share_prefixes.items()}
    decoded = peel_decode(params, V, responders, proj, width=width, row_order=row_order)
    return [list(v) for v in decoded]
