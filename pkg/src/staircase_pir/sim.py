"""Event-driven straggler simulation of an n-server retrieval.

Latency is modeled per whole server response: once a server answers, all
of its prefix columns are fetchable. The simulated clock is integer
microseconds and events are ordered by (time, server id), so runs are
fully deterministic under a fixed seed.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from . import protocol
from .field import Matrix
from .params import SchemeParams

UNRESPONSIVE = math.inf


@dataclass(frozen=True)
class LatencyModel:
    """Per-server response latency distribution, in milliseconds."""

    kind: str  # "deterministic" | "exponential" | "unresponsive"
    value: float = 0.0  # delay for deterministic, mean for exponential, p for unresponsive
    fallback: Optional["LatencyModel"] = None

    @classmethod
    def deterministic(cls, delay_ms: float) -> "LatencyModel":
        if delay_ms <= 0:
            raise ValueError("delay must be > 0")
        return cls("deterministic", delay_ms)

    @classmethod
    def exponential(cls, mean_ms: float) -> "LatencyModel":
        if mean_ms <= 0:
            raise ValueError("mean must be > 0")
        return cls("exponential", mean_ms)

    @classmethod
    def unresponsive(cls, p: float, fallback: "LatencyModel") -> "LatencyModel":
        if not 0 <= p <= 1:
            raise ValueError("p must be in [0, 1]")
        return cls("unresponsive", p, fallback)

    def sample_us(self, rng: random.Random) -> float:
        """Latency in integer microseconds (or inf if never responding)."""
        if self.kind == "deterministic":
            return int(round(self.value * 1000))
        if self.kind == "exponential":
            return max(1, int(round(rng.expovariate(1.0 / self.value) * 1000)))
        if self.kind == "unresponsive":
            if rng.random() < self.value:
                return UNRESPONSIVE
            return self.fallback.sample_us(rng)
        raise ValueError(f"unknown latency kind {self.kind}")


@dataclass(frozen=True)
class SimConfig:
    params: SchemeParams
    latencies: tuple  # one LatencyModel per server
    strategy: str  # "wait_for" | "deadline"
    wait_for: Optional[int] = None  # responder count for wait_for
    deadline_ms: Optional[float] = None  # cutoff for deadline
    seed: int = 0
    repetitions: int = 1
    file_index: int = 1

    def __post_init__(self):
        if len(self.latencies) != self.params.n:
            raise ValueError("need one latency model per server")
        if self.strategy == "wait_for":
            if self.wait_for is None or not self.params.k <= self.wait_for <= self.params.n:
                raise ValueError("wait_for must be in [k, n]")
        elif self.strategy == "deadline":
            if self.deadline_ms is None or self.deadline_ms <= 0:
                raise ValueError("deadline_ms must be > 0")
        else:
            raise ValueError(f"unknown strategy {self.strategy}")


@dataclass
class SimMetrics:
    realized_mu: int
    wait_us: float
    symbols: int
    rate: Optional[Fraction]
    capacity: Optional[Fraction]
    success: bool
    decode_ok: bool = False


def run_simulation(config: SimConfig, V: Optional[Matrix] = None) -> List[SimMetrics]:
    params = config.params
    if V is None:
        V = protocol.default_encoding_matrix(params)
    rng = random.Random(config.seed)
    results = []
    for rep in range(config.repetitions):
        arrivals = sorted(
            (model.sample_us(rng), sid)
            for sid, model in zip(range(1, params.n + 1), config.latencies)
        )
        if config.strategy == "wait_for":
            mu = config.wait_for
            chosen = arrivals[:mu]
            wait = chosen[-1][0]
            if math.isinf(wait):
                finite = [a for a in arrivals if not math.isinf(a[0])]
                results.append(
                    SimMetrics(len(finite), UNRESPONSIVE, 0, None, None, False)
                )
                continue
        else:
            cutoff = config.deadline_ms * 1000
            chosen = [a for a in arrivals if a[0] <= cutoff]
            if len(chosen) < params.k:
                results.append(
                    SimMetrics(len(chosen), cutoff, 0, None, None, False)
                )
                continue
            wait = cutoff
            mu = len(chosen)
        responders = sorted(sid for _, sid in chosen)
        assert mu >= params.k
        plan = protocol.plan_download(params, responders)

        x = [rng.randrange(params.q) for _ in range(params.x_length)]
        db = protocol.Database(params, x)
        queries = protocol.make_queries(params, V, config.file_index, seed=rng.random())
        responses = {
            sid: protocol.server_respond(db, queries[sid - 1], range(plan.prefix_cols))
            for sid in responders
        }
        decoded = protocol.decode_file(params, V, plan, responses)
        ok = decoded == db.file_content(config.file_index)
        results.append(
            SimMetrics(
                realized_mu=mu,
                wait_us=wait,
                symbols=plan.total_symbols,
                rate=protocol.rate_achieved(plan),
                capacity=protocol.capacity_asymptotic(params.t, mu),
                success=ok,
                decode_ok=ok,
            )
        )
    return results


SWEEP_HEADER = (
    "config_id",
    "strategy",
    "target",
    "repetitions",
    "mean_wait_ms",
    "mean_symbols",
    "rate",
    "success_fraction",
)


def sweep(configs: Sequence[SimConfig], V: Optional[Matrix] = None) -> List[tuple]:
    """One summary row per config; deterministic under fixed seeds."""
    rows = [SWEEP_HEADER]
    for idx, config in enumerate(configs):
        metrics = run_simulation(config, V)
        ok = [m for m in metrics if m.success]
        target = config.wait_for if config.strategy == "wait_for" else config.deadline_ms
        mean_wait = sum(m.wait_us for m in ok) / len(ok) / 1000 if ok else math.nan
        mean_symbols = sum(m.symbols for m in ok) / len(ok) if ok else 0
        rates = {m.rate for m in ok}
        rate = str(rates.pop()) if len(rates) == 1 else "mixed"
        rows.append(
            (
                idx,
                config.strategy,
                target,
                config.repetitions,
                round(mean_wait, 3),
                mean_symbols,
                rate,
                len(ok) / len(metrics) if metrics else 0.0,
            )
        )
    return rows


def rows_to_csv(rows: Sequence[tuple]) -> str:
    buf = io.StringIO()
    csv.writer(buf).writerows(rows)
    return buf.getvalue()
