"""Network realization samplers.

Dense path: every unordered pair gets an independent Bernoulli(pi_i pi_j)
trial, vectorized over the flattened upper triangle. Sparse path: weights
are sorted descending and pairs are visited by geometric skipping under a
per-row probability bound, then thinned by the exact acceptance ratio;
this preserves the exact Bernoulli law at expected cost O(n + E_n).

Seeding is counter-based: each replicate derives its stream from
SeedSequence([master_seed, replicate_id]), so any parallel schedule
produces the same multiset of samples as sequential execution.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Union

import numpy as np

from .errors import DomainError, MemoryBudgetError
from .weights import (
    BoundedParetoModel,
    EnvelopeModel,
    PointMassModel,
    PowerLawModel,
    ScalingMap,
    SmoothDensityModel,
    WeightVector,
    apply_scaling,
    materialize_power_law,
    sample_bounded_pareto,
    sample_from_density,
)

THREADS_ENV_VAR = "DEGREENET_THREADS"

# Refuse to materialize edge lists beyond this many expected edges.
EDGE_STORE_CAP = 50_000_000

_triu_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _triu_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _triu_cache:
        if len(_triu_cache) > 4:
            _triu_cache.clear()
        iu = np.triu_indices(n, 1)
        _triu_cache[n] = (iu[0].astype(np.int32), iu[1].astype(np.int32))
    return _triu_cache[n]


@dataclass(frozen=True)
class GraphSample:
    """Degrees (and optionally edges) of one realized network."""

    degrees: np.ndarray
    edge_count: int
    seed: int
    replicate_id: int
    edges: Optional[np.ndarray] = None  # (m, 2) int array with i < j

    def __post_init__(self):
        degrees = np.asarray(self.degrees)
        if int(degrees.sum()) != 2 * self.edge_count:
            raise DomainError("handshake violated: sum of degrees != 2 * edges")


def _replicate_rng(seed: int, replicate_id: int) -> np.random.Generator:
    ss = np.random.SeedSequence([int(seed), int(replicate_id)])
    return np.random.Generator(np.random.Philox(ss))


def sample_graph(
    pi: WeightVector,
    seed: int,
    replicate_id: int = 0,
    store_edges: bool = False,
) -> GraphSample:
    """One network draw: each pair (i < j) independently Bernoulli(pi_i pi_j)."""
    n = pi.n
    expected_edges = (pi.norm1() ** 2 - pi.norm2_sq()) / 2.0
    if store_edges and expected_edges > EDGE_STORE_CAP:
        raise MemoryBudgetError(
            f"expected {expected_edges:.3g} edges exceeds the storage cap"
        )
    rng = _replicate_rng(seed, replicate_id)
    rows, cols = _triu_indices(n)
    p_flat = pi.values[rows] * pi.values[cols]
    mask = rng.random(p_flat.size) < p_flat
    ei = rows[mask]
    ej = cols[mask]
    degrees = np.bincount(ei, minlength=n) + np.bincount(ej, minlength=n)
    edges = np.column_stack([ei, ej]) if store_edges else None
    return GraphSample(degrees=degrees, edge_count=int(ei.size), seed=seed,
                       replicate_id=replicate_id, edges=edges)


def sample_graph_sparse(
    pi: WeightVector,
    seed: int,
    replicate_id: int = 0,
    store_edges: bool = False,
) -> GraphSample:
    """Same distribution as sample_graph, at expected cost O(n + E_n).

    Weights are sorted descending internally; the permutation is inverted
    on output so degrees line up with the input ordering.
    """
    n = pi.n
    order = np.argsort(-pi.values, kind="stable")
    w = pi.values[order]
    rng = _replicate_rng(seed, replicate_id)
    degrees = np.zeros(n, dtype=np.int64)
    edge_i: list[int] = []
    edge_j: list[int] = []
    store = store_edges
    if store and (pi.norm1() ** 2 - pi.norm2_sq()) / 2.0 > EDGE_STORE_CAP:
        raise MemoryBudgetError("expected edge count exceeds the storage cap")

    # Uniform variates are consumed from a buffered stream so the inner
    # loop stays cheap.
    buf = np.empty(0)
    pos = 0

    def next_u() -> float:
        nonlocal buf, pos
        if pos >= buf.size:
            buf = rng.random(65536)
            pos = 0
        u = buf[pos]
        pos += 1
        return float(u)

    wl = w.tolist()
    edge_count = 0
    for i in range(n - 1):
        wi = wl[i]
        if wi <= 0.0:
            break
        bound = wi * wl[i + 1]
        if bound <= 0.0:
            continue
        log_q = math.log1p(-bound) if bound < 1.0 else None
        j = i
        while True:
            if log_q is None:
                j += 1
            else:
                u = next_u()
                j += 1 + int(math.log(u) / log_q)
            if j > n - 1:
                break
            # exact thinning: accept with p_ij / bound = w_j / w_{i+1}
            if wl[j] >= wl[i + 1] or next_u() * wl[i + 1] < wl[j]:
                degrees[i] += 1
                degrees[j] += 1
                edge_count += 1
                if store:
                    edge_i.append(i)
                    edge_j.append(j)
    inv = np.empty(n, dtype=np.int64)
    inv[order] = np.arange(n)
    out_degrees = degrees[inv]
    edges = None
    if store:
        a = order[np.array(edge_i, dtype=np.int64)]
        b = order[np.array(edge_j, dtype=np.int64)]
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        edges = np.column_stack([lo, hi])
    return GraphSample(degrees=out_degrees, edge_count=edge_count, seed=seed,
                       replicate_id=replicate_id, edges=edges)


GenerativeModel = Union[
    PowerLawModel, EnvelopeModel, BoundedParetoModel, SmoothDensityModel,
    PointMassModel, WeightVector,
]


def draw_weights(
    model: GenerativeModel,
    n: int,
    seed: int,
    scaling: Optional[ScalingMap] = None,
) -> WeightVector:
    """Materialize or sample the weight vector for one replicate."""
    if isinstance(model, WeightVector):
        pi = model
    elif isinstance(model, (PowerLawModel, EnvelopeModel)):
        pi = materialize_power_law(model, n)
    elif isinstance(model, BoundedParetoModel):
        pi = sample_bounded_pareto(model, n, seed)
    elif isinstance(model, (SmoothDensityModel, PointMassModel)):
        pi = sample_from_density(model, n, seed)
    else:
        raise DomainError(f"unsupported generative model {type(model)!r}")
    if scaling is not None:
        pi = apply_scaling(pi, scaling, n)
    return pi


def _weight_seed(master_seed: int, replicate_id: int) -> int:
    # Independent of the graph stream: derived from a distinct child spawn.
    ss = np.random.SeedSequence([int(master_seed), int(replicate_id), 1])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _one_replicate(
    model: GenerativeModel,
    scaling: Optional[ScalingMap],
    n: int,
    master_seed: int,
    replicate_id: int,
    sparse: bool,
    store_edges: bool,
) -> GraphSample:
    pi = draw_weights(model, n, _weight_seed(master_seed, replicate_id), scaling)
    sampler = sample_graph_sparse if sparse else sample_graph
    return sampler(pi, master_seed, replicate_id, store_edges=store_edges)


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV_VAR, "")
    if raw.strip():
        return max(1, int(raw))
    return os.cpu_count() or 1


def sample_population(
    model: GenerativeModel,
    scaling: Optional[ScalingMap],
    n: int,
    replicates: int,
    master_seed: int,
    sparse: bool = False,
    store_edges: bool = False,
) -> Iterator[GraphSample]:
    """Stream of replicate samples; fresh weights per replicate when the
    model is random. Output order (and content) is independent of the
    thread count."""
    if replicates < 1:
        raise DomainError("replicates must be >= 1")
    workers = thread_count()
    if workers <= 1 or replicates == 1:
        for r in range(replicates):
            yield _one_replicate(model, scaling, n, master_seed, r, sparse, store_edges)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_one_replicate, model, scaling, n, master_seed, r,
                        sparse, store_edges)
            for r in range(replicates)
        ]
        for fut in futures:  # deterministic merge order keyed by replicate_id
            yield fut.result()


def pooled_degree_histogram(samples: Iterator[GraphSample], n: int) -> np.ndarray:
    """Aggregate degree counts over replicates; index k = 0..n-1."""
    hist = np.zeros(n, dtype=np.int64)
    for s in samples:
        hist += np.bincount(s.degrees, minlength=n)[:n]
    return hist
