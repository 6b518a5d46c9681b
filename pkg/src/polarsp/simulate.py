"""Seeded Monte Carlo frame-error-rate estimation.

Randomness comes from the counter-based Philox generator; trial batches are
partitioned across logical workers, each drawing from an independently
spawned stream, and merged by summation.  For a fixed seed and worker count
the result is bit-reproducible across platforms.
"""

from __future__ import annotations

import math

import numpy as np

from .codec import sc_decode, sc_encode
from .construction import CodeSpec

RNG_NAME = "philox"

__all__ = ["RNG_NAME", "worker_rng", "sample_channel", "wilson_interval",
           "fer_simulation"]


def worker_rng(seed: int, worker: int) -> np.random.Generator:
    """Independent stream for one worker, derived from the experiment seed."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(worker,))
    return np.random.Generator(np.random.Philox(ss))


def sample_channel(rng: np.random.Generator, codewords: np.ndarray,
                   family: str, param: float) -> np.ndarray:
    """Pass a batch of codewords through the channel; returns output indices."""
    if family == "bsc":
        flips = rng.random(codewords.shape) < param
        return (codewords ^ flips).astype(np.int64)
    if family == "bec":
        erased = rng.random(codewords.shape) < param
        return np.where(erased, 2, codewords).astype(np.int64)
    raise ValueError(f"cannot sample channel family {family!r}")


def wilson_interval(errors: int, trials: int, z: float = 1.959963984540054):
    """Wilson 95% score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = errors / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials
                         + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def fer_simulation(spec: CodeSpec, trials: int, seed: int,
                   workers: int = 1, method: str = "exact") -> dict:
    """Encode/transmit/decode ``trials`` random frames; returns summary stats."""
    if trials < 1:
        raise ValueError("need at least one trial")
    if workers < 1:
        raise ValueError("need at least one worker")
    k = len(spec.info)
    per = [trials // workers + (1 if w < trials % workers else 0)
           for w in range(workers)]
    errors = 0
    for w, n_w in enumerate(per):
        if n_w == 0:
            continue
        rng = worker_rng(seed, w)
        data = rng.integers(0, 2, size=(n_w, k), dtype=np.uint8)
        cw = sc_encode(data, spec)
        y = sample_channel(rng, cw, spec.channel, spec.param)
        _, decoded = sc_decode(y, spec, method=method)
        errors += int((decoded != data).any(axis=-1).sum())
    fer = errors / trials
    lo, hi = wilson_interval(errors, trials)
    return {"trials": trials, "errors": errors, "fer": fer,
            "ci_low": lo, "ci_high": hi, "seed": seed, "workers": workers}
