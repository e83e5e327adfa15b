"""Linear secret sharing schemes and the PIR-from-secret-sharing bridge.

A query for file i is simply a sharing of that file's part selectors.
Any linear (n, k, t) secret sharing therefore yields a robust PIR scheme
at rate (k-t)/k, and a communication-efficient one yields a universally
robust PIR at rate (mu-t)/mu for every responder count mu in [k, n].
"""

from __future__ import annotations

import itertools
import random
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import staircase
from .errors import (
    FileIndexOutOfRange,
    InsufficientResponders,
    NotEnoughShares,
    OutOfRange,
)
from .field import Matrix, vandermonde
from .params import SchemeParams


class LinearSecretSharingScheme(ABC):
    """Interface shared by the ramp baseline and the staircase codec.

    A secret is `secret_width` vectors over GF(q), all of one length; a
    share is `subshare_count` vectors of that same length. Linearity in
    (secret, randomness) is part of the contract and is what makes
    shares-of-selectors commute with projection onto the data.
    """

    params: SchemeParams

    @property
    @abstractmethod
    def secret_width(self) -> int:
        """Number of payload vectors per secret."""

    @property
    @abstractmethod
    def subshare_count(self) -> int:
        """Vectors per share."""

    @property
    @abstractmethod
    def randomness_count(self) -> int:
        """Randomness vectors consumed per sharing."""

    @abstractmethod
    def share(self, secret, randomness) -> List[List[List[int]]]:
        """Encode `secret` into n shares using explicit `randomness`."""

    @abstractmethod
    def reconstruct(self, shares: Dict[int, Sequence[Sequence[int]]]):
        """Recover the secret from any >= k full shares (keyed by server id)."""

    # Communication-efficient extension; the ramp baseline does not have it.
    supports_efficient = False

    def prefix_len(self, d: int) -> int:
        """Sub-shares needed per server when d servers respond."""
        raise NotImplementedError

    def efficient_reconstruct(self, prefixes: Dict[int, Sequence[Sequence[int]]]):
        raise NotImplementedError

    def generate_randomness(self, seed, width: int) -> List[List[int]]:
        rng = random.Random(seed)
        q = self.params.q
        return [
            [rng.randrange(q) for _ in range(width)]
            for _ in range(self.randomness_count)
        ]

    def share_with_seed(self, secret, seed):
        return self.share(secret, self.generate_randomness(seed, len(secret[0])))


class RampScheme(LinearSecretSharingScheme):
    """(n, k, t) ramp scheme: shares = V_{n x k} [secret; randomness].

    V is the power-form Vandermonde on points 1..n. Construction asserts
    both defining properties instead of assuming them: every k-row
    submatrix is invertible (reconstruction) and every t-row submatrix of
    the last t columns is invertible (secrecy).
    """

    def __init__(self, params: SchemeParams):
        self.params = params
        if params.q <= params.n:
            raise OutOfRange(f"ramp scheme needs q > n, got q={params.q}")
        self.V = vandermonde(params.field, list(range(1, params.n + 1)), params.k)
        n, k, t = params.n, params.k, params.t
        for rows in itertools.combinations(range(n), k):
            assert self.V.submatrix(rows, range(k)).rank() == k, "MDS violated"
        for rows in itertools.combinations(range(n), t):
            sub = self.V.submatrix(rows, range(k - t, k))
            assert sub.rank() == t, "secrecy submatrix singular"

    @property
    def secret_width(self) -> int:
        return self.params.k - self.params.t

    @property
    def subshare_count(self) -> int:
        return 1

    @property
    def randomness_count(self) -> int:
        return self.params.t

    def share(self, secret, randomness):
        if len(secret) != self.secret_width:
            raise ValueError(f"secret must have {self.secret_width} vectors")
        if len(randomness) != self.params.t:
            raise ValueError(f"need {self.params.t} randomness vectors")
        q = self.params.q
        msg = [list(v) for v in secret] + [list(v) for v in randomness]
        width = len(msg[0])
        shares = []
        for l in range(self.params.n):
            vrow = self.V.rows[l]
            acc = [0] * width
            for coef, vec in zip(vrow, msg):
                if coef:
                    for pos in range(width):
                        acc[pos] = (acc[pos] + coef * vec[pos]) % q
            shares.append([acc])
        return shares

    def reconstruct(self, shares):
        k = self.params.k
        if len(shares) < k:
            raise NotEnoughShares(f"got {len(shares)} shares, need {k}")
        sids = sorted(shares)[:k]
        A = self.V.submatrix([sid - 1 for sid in sids], range(k))
        rhs = Matrix(self.params.field, [list(shares[sid][0]) for sid in sids])
        msg = A.solve(rhs)
        return [row[:] for row in msg.rows[: self.secret_width]]


class StaircaseScheme(LinearSecretSharingScheme):
    """The staircase codec exposed through the generic interface."""

    supports_efficient = True

    def __init__(self, params: SchemeParams, V: Optional[Matrix] = None,
                 row_order: str = staircase.DEFAULT_ROW_ORDER):
        self.params = params
        if V is None:
            from .protocol import default_encoding_matrix

            V = default_encoding_matrix(params)
        self.V = V
        self.row_order = row_order

    @property
    def secret_width(self) -> int:
        return self.params.alpha_prime

    @property
    def subshare_count(self) -> int:
        return self.params.alpha

    @property
    def randomness_count(self) -> int:
        return self.params.randomness_count

    def share(self, secret, randomness):
        shares = staircase.ss_share(
            self.params, self.V, secret, randomness=randomness,
            row_order=self.row_order,
        )
        return shares.rows

    def reconstruct(self, shares):
        if len(shares) < self.params.k:
            raise NotEnoughShares(f"got {len(shares)} shares, need {self.params.k}")
        d = len(shares)
        if d > self.params.n:
            raise OutOfRange("more shares than servers")
        return self.efficient_reconstruct(
            {sid: subs[: self.prefix_len(d)] for sid, subs in shares.items()}
        )

    def prefix_len(self, d: int) -> int:
        return self.params.prefix_cols(d)

    def efficient_reconstruct(self, prefixes):
        return staircase.ss_reconstruct(
            self.params, self.V, prefixes, row_order=self.row_order
        )


class FlatData:
    """Replicated data seen by the generic adapter.

    m files of `parts` parts each, every part an s-symbol slab; part c of
    file i sits in slab (c-1)*m + i - 1, matching the selector layout.
    """

    def __init__(self, q: int, m: int, parts: int, s: int, x: Sequence[int]):
        if len(x) != parts * m * s:
            raise ValueError(f"x must have {parts * m * s} symbols")
        self.q = q
        self.m = m
        self.parts = parts
        self.s = s
        self.x = [v % q for v in x]

    @classmethod
    def from_files(cls, q, m, parts, s, files):
        x = [0] * (parts * m * s)
        for i, content in enumerate(files, start=1):
            for c in range(parts):
                base = (c * m + i - 1) * s
                for off in range(s):
                    x[base + off] = content[c * s + off] % q
        return cls(q, m, parts, s, x)

    def selector(self, part: int, i: int) -> List[int]:
        vec = [0] * len(self.x)
        base = ((part - 1) * self.m + i - 1) * self.s
        for off in range(self.s):
            vec[base + off] = 1
        return vec

    def file_content(self, i: int) -> List[int]:
        out = []
        for c in range(self.parts):
            base = (c * self.m + i - 1) * self.s
            out.extend(self.x[base : base + self.s])
        return out

    def project(self, qvec: Sequence[int]) -> Tuple[int, ...]:
        out = [0] * self.s
        for slab in range(self.parts * self.m):
            base = slab * self.s
            for off in range(self.s):
                coef = qvec[base + off]
                if coef:
                    out[off] = (out[off] + coef * self.x[base + off]) % self.q
        return tuple(out)


class SSPIRAdapter:
    """PIR on top of any linear secret sharing scheme.

    The file is split into `scheme.secret_width` parts and the query to
    server l is share l of the secret formed by that file's selectors.
    """

    def __init__(self, scheme: LinearSecretSharingScheme, data: FlatData):
        if data.parts != scheme.secret_width:
            raise ValueError(
                f"data has {data.parts} parts per file, scheme secret width is "
                f"{scheme.secret_width}"
            )
        self.scheme = scheme
        self.data = data

    def queries(self, i: int, seed=None):
        if not 1 <= i <= self.data.m:
            raise FileIndexOutOfRange(f"file index {i} outside [1, {self.data.m}]")
        secret = [
            self.data.selector(c, i) for c in range(1, self.scheme.secret_width + 1)
        ]
        return self.scheme.share_with_seed(secret, seed)


def sspir_retrieve(adapter: SSPIRAdapter, i: int, responders: Sequence[int], seed=None):
    """Worst-case retrieval: full shares from exactly k responders.

    Returns (file symbols, downloaded symbol count).
    """
    k = adapter.scheme.params.k
    if len(responders) < k:
        raise InsufficientResponders(f"{len(responders)} responders < k={k}")
    used = sorted(responders)[:k]
    shares = adapter.queries(i, seed)
    responses = {
        sid: [adapter.data.project(sub) for sub in shares[sid - 1]] for sid in used
    }
    parts = adapter.scheme.reconstruct(responses)
    file_symbols = [sym for part in parts for sym in part]
    downloaded = k * adapter.scheme.subshare_count * adapter.data.s
    return file_symbols, downloaded


def nonuniversality_demo(adapter: SSPIRAdapter, i: int, mu: int, seed=None) -> Fraction:
    """Rate of a worst-case scheme forced to hear from mu responders.

    Every responder's full share is downloaded, yet only k-share-worth of
    information is useful, so the rate degrades to (k-t)/mu instead of
    tracking the capacity 1 - t/mu.
    """
    params = adapter.scheme.params
    if not params.k <= mu <= params.n:
        raise OutOfRange(f"mu={mu} outside [{params.k}, {params.n}]")
    responders = list(range(1, mu + 1))
    shares = adapter.queries(i, seed)
    responses = {
        sid: [adapter.data.project(sub) for sub in shares[sid - 1]]
        for sid in responders
    }
    parts = adapter.scheme.reconstruct(
        {sid: responses[sid] for sid in responders[: params.k]}
    )
    expected = adapter.data.file_content(i)
    got = [sym for part in parts for sym in part]
    assert got == expected, "ramp decode failed"
    downloaded = mu * adapter.scheme.subshare_count * adapter.data.s
    return Fraction(len(expected), downloaded)


def sspir_universal_retrieve(
    adapter: SSPIRAdapter, i: int, responders: Sequence[int], seed=None
):
    """Capacity-tracking retrieval through a communication-efficient scheme.

    Returns (file symbols, downloaded symbol count, rate).
    """
    scheme = adapter.scheme
    if not scheme.supports_efficient:
        raise NotImplementedError("scheme has no efficient reconstruction")
    k = scheme.params.k
    if len(responders) < k:
        raise InsufficientResponders(f"{len(responders)} responders < k={k}")
    d = len(responders)
    prefix = scheme.prefix_len(d)
    shares = adapter.queries(i, seed)
    prefixes = {
        sid: [adapter.data.project(sub) for sub in shares[sid - 1][:prefix]]
        for sid in responders
    }
    parts = scheme.efficient_reconstruct(prefixes)
    file_symbols = [sym for part in parts for sym in part]
    downloaded = d * prefix * adapter.data.s
    return file_symbols, downloaded, Fraction(len(file_symbols), downloaded)
