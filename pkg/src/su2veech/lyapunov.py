"""Monte Carlo Lyapunov spectra of random matrix products.

Periodic QR reorthonormalization: the walk accumulates log |diag R| of the QR
factors, whose step averages converge to the Lyapunov exponents in descending
order.  Randomness comes from numpy's PCG64 streams spawned per replica from
one seed, so reports are bit-reproducible for a fixed spec, and replicas are
independent whether run batched or separately.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class RandomWalkSpec:
    matrices: tuple[np.ndarray, ...]
    labels: tuple[str, ...]
    weights: tuple[float, ...]
    steps: int
    reorth_every: int = 10
    seed: int = 0

    def __post_init__(self):
        if len(self.matrices) != len(self.weights) or \
                len(self.matrices) != len(self.labels):
            raise ValueError("matrices, labels and weights must align")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        d = self.matrices[0].shape[0]
        for m in self.matrices:
            if m.shape != (d, d):
                raise ValueError("all matrices must be square of equal size")
            if abs(np.linalg.det(m)) < 1e-12:
                raise ValueError("generators must be invertible")
        if self.steps < 1 or self.reorth_every < 1:
            raise ValueError("steps and reorth_every must be >= 1")

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]

    @staticmethod
    def uniform(matrices, labels, steps, seed=0, reorth_every=10) -> "RandomWalkSpec":
        k = len(matrices)
        return RandomWalkSpec(tuple(np.asarray(m, dtype=float) for m in matrices),
                              tuple(labels), tuple([1.0 / k] * k),
                              steps, reorth_every, seed)


@dataclass
class LyapunovReport:
    spectrum: np.ndarray            # mean over replicas, descending
    per_replica: np.ndarray         # (replicas, dim)
    standard_errors: np.ndarray
    symmetry_defect: float
    positive_count: int
    threshold: float
    steps: int
    seed: int
    runtime_seconds: float

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "spectrum": [float(x) for x in self.spectrum],
            "per_replica": [[float(x) for x in row] for row in self.per_replica],
            "standard_errors": [float(x) for x in self.standard_errors],
            "symmetry_defect": float(self.symmetry_defect),
            "positive_count": self.positive_count,
            "threshold": self.threshold,
            "steps": self.steps,
            "seed": self.seed,
            "runtime_seconds": self.runtime_seconds,
        }


def _replica_exponents(spec: RandomWalkSpec, replicas: int) -> np.ndarray:
    """Batched QR-accumulation walk; row r is replica r's spectrum."""
    d = spec.dim
    mats = np.stack(spec.matrices)
    weights = np.asarray(spec.weights)
    streams = np.random.SeedSequence(spec.seed).spawn(replicas)
    rngs = [np.random.Generator(np.random.PCG64(s)) for s in streams]

    q = np.broadcast_to(np.eye(d), (replicas, d, d)).copy()
    sums = np.zeros((replicas, d))
    chunk = 4096
    done = 0
    while done < spec.steps:
        todo = min(chunk, spec.steps - done)
        idx = np.stack([rng.choice(len(mats), size=todo, p=weights)
                        for rng in rngs])
        for t in range(todo):
            q = mats[idx[:, t]] @ q
            step = done + t + 1
            if step % spec.reorth_every == 0 or step == spec.steps:
                q, r = np.linalg.qr(q)
                diag = np.abs(np.einsum("rii->ri", r))
                if not np.all(np.isfinite(diag)) or np.any(diag == 0):
                    raise FloatingPointError(
                        "singular accumulation; reduce reorth_every")
                sums += np.log(diag)
        done += todo
    exps = sums / spec.steps
    return -np.sort(-exps, axis=1)


def spectrum(spec: RandomWalkSpec, replicas: int = 1,
             threshold: float = 0.05) -> LyapunovReport:
    t0 = time.perf_counter()
    per = _replica_exponents(spec, replicas)
    mean = per.mean(axis=0)
    se = per.std(axis=0, ddof=1) / np.sqrt(replicas) if replicas > 1 \
        else np.zeros_like(mean)
    defect = symmetry_defect(mean)
    count = int(np.sum(mean > threshold))
    return LyapunovReport(mean, per, se, defect, count, threshold,
                          spec.steps, spec.seed, time.perf_counter() - t0)


def symmetry_defect(spectrum_values: np.ndarray) -> float:
    v = np.asarray(spectrum_values)
    return float(np.max(np.abs(v + v[::-1])))


def symmetry_check(report: LyapunovReport, tol: float = 1e-2) -> tuple[bool, float]:
    if len(report.spectrum) % 2:
        raise ValueError("symmetry check needs even dimension")
    d = symmetry_defect(report.spectrum)
    return d < tol, d


def unit_sample_vectors(dim: int, count: int, seed: int) -> np.ndarray:
    """Deterministic quasi-uniform unit vectors: signed basis vectors, then
    seeded Gaussian directions."""
    vecs = []
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = 1.0
        vecs.append(e)
        vecs.append(-e)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    while len(vecs) < count:
        v = rng.normal(size=dim)
        vecs.append(v / np.linalg.norm(v))
    return np.stack(vecs[:count])


@dataclass
class ExpansionProbe:
    c_hat: float
    minimizing_vector: np.ndarray
    n0: int
    sample_count: int
    draws: int

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "c_hat": float(self.c_hat),
            "minimizing_vector": [float(x) for x in self.minimizing_vector],
            "n0": self.n0,
            "sample_count": self.sample_count,
            "draws": self.draws,
            "note": "empirical estimate, not a proof",
        }


def uniform_expansion_probe(spec: RandomWalkSpec, n0: int, sample_count: int,
                            draws: int = 200) -> ExpansionProbe:
    """min over sampled unit vectors v of (1/n0) E log ||g v|| for g drawn
    from the n0-fold convolution of the step distribution.  Empirical only."""
    if n0 < 1:
        raise ValueError("n0 must be >= 1")
    mats = np.stack(spec.matrices)
    weights = np.asarray(spec.weights)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed)))
    products = []
    for _ in range(draws):
        idx = rng.choice(len(mats), size=n0, p=weights)
        g = np.eye(spec.dim)
        for k in idx:
            g = mats[k] @ g
        products.append(g)
    products = np.stack(products)
    vectors = unit_sample_vectors(spec.dim, sample_count, spec.seed + 1)
    images = np.einsum("gij,vj->vgi", products, vectors)
    norms = np.linalg.norm(images, axis=2)
    means = np.log(norms).mean(axis=1) / n0
    k = int(np.argmin(means))
    return ExpansionProbe(float(means[k]), vectors[k], n0, sample_count, draws)


def exact_to_float(matrix) -> np.ndarray:
    """Convert an exact rational matrix to float64."""
    return np.array([[float(matrix[i, j]) for j in range(matrix.cols)]
                     for i in range(matrix.rows)])
