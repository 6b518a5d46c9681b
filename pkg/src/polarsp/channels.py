"""Binary-input memoryless channels, input distributions, and joint distributions.

The central object is :class:`JointDist`, a probability table P(x; y) over a
binary input x and a finite output alphabet.  Output symbols are opaque
integer indices 0..m-1; any human-readable labels (including an erasure mark)
belong to the :class:`BMChannel` that produced the distribution.  Everything
is stored linearly in float64 and is immutable after construction, so values
can be shared freely across workers.

Three scalar figures of merit are defined on joint distributions:

* ``bhattacharyya`` -- Z, in [0, 1], zero iff the input is determined by
  every positive-mass output;
* ``total_variation`` -- K, in [0, 1], zero iff the two input rows coincide;
* ``cond_entropy`` -- H, bits, in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASS_TOL = 1e-12

__all__ = [
    "MASS_TOL",
    "InputDist",
    "BMChannel",
    "JointDist",
    "make_bsc",
    "make_bec",
    "make_uninformative",
    "joint_from",
    "bhattacharyya",
    "total_variation",
    "cond_entropy",
]


@dataclass(frozen=True)
class InputDist:
    """Distribution of one input bit; ``p0`` is the probability of 0."""

    p0: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p0 <= 1.0:
            raise ValueError(f"p0 must lie in [0, 1], got {self.p0}")

    @property
    def p1(self) -> float:
        return 1.0 - self.p0


UNIFORM = InputDist(0.5)


@dataclass(frozen=True, eq=False)
class BMChannel:
    """Binary-input memoryless channel W(y|x) over a finite output alphabet.

    Parameters
    ----------
    outputs : tuple
        Symbol labels, one per output.  Labels are only used at the I/O
        boundary (e.g. mapping a received ``'?'`` to an alphabet index).
    w : ndarray, shape (2, len(outputs))
        Transition probabilities; each row sums to one.
    """

    outputs: tuple
    w: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.w, dtype=np.float64)
        if w.shape != (2, len(self.outputs)):
            raise ValueError(f"transition table shape {w.shape} does not match "
                             f"{len(self.outputs)} outputs")
        if (w < 0.0).any():
            raise ValueError("negative transition probability")
        if np.abs(w.sum(axis=1) - 1.0).max() > MASS_TOL:
            raise ValueError("channel rows must each sum to 1")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def num_outputs(self) -> int:
        return len(self.outputs)


@dataclass(frozen=True, eq=False)
class JointDist:
    """Joint distribution P(x; y) of a bit x and an output index y.

    ``mass`` has shape (2, m) with all entries nonnegative and total mass one
    (tolerance ``MASS_TOL``).  ``tag`` is a cheap marker used by the
    distribution algebra; ``"generic"`` is always safe.
    """

    mass: np.ndarray
    tag: str = "generic"

    def __post_init__(self) -> None:
        mass = np.asarray(self.mass, dtype=np.float64)
        if mass.ndim != 2 or mass.shape[0] != 2 or mass.shape[1] < 1:
            raise ValueError(f"mass must have shape (2, m), got {mass.shape}")
        if mass.min() < -MASS_TOL:
            raise ValueError("negative probability mass")
        total = mass.sum()
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"total mass {total!r} is not 1")
        mass.setflags(write=False)
        object.__setattr__(self, "mass", mass)

    @property
    def num_outputs(self) -> int:
        return self.mass.shape[1]

    @property
    def input_marginal(self) -> np.ndarray:
        return self.mass.sum(axis=1)


def make_bsc(p: float) -> BMChannel:
    """Binary symmetric channel with crossover probability ``p`` in [0, 1/2]."""
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"BSC crossover must lie in [0, 1/2], got {p}")
    return BMChannel(outputs=(0, 1), w=np.array([[1.0 - p, p], [p, 1.0 - p]]))


def make_bec(eps: float) -> BMChannel:
    """Binary erasure channel with erasure probability ``eps`` in [0, 1].

    Outputs are (0, 1, '?'); the erasure mark is an ordinary alphabet member.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"BEC erasure probability must lie in [0, 1], got {eps}")
    w = np.array([[1.0 - eps, 0.0, eps], [0.0, 1.0 - eps, eps]])
    return BMChannel(outputs=(0, 1, "?"), w=w)


def make_uninformative() -> BMChannel:
    """Channel whose single output reveals nothing about the input."""
    return BMChannel(outputs=("?",), w=np.array([[1.0], [1.0]]))


def joint_from(p: InputDist, channel: BMChannel) -> JointDist:
    """Couple an input distribution with a channel: P(x; y) = p(x) W(y|x)."""
    mass = np.array([p.p0, p.p1])[:, None] * channel.w
    return JointDist(mass)


def bhattacharyya(a: JointDist) -> float:
    """Conditional Bhattacharyya parameter Z = 2 * sum_y sqrt(P(0;y) P(1;y))."""
    return float(2.0 * np.sqrt(a.mass[0] * a.mass[1]).sum())


def total_variation(a: JointDist) -> float:
    """Total variation distance K = sum_y |P(0;y) - P(1;y)|."""
    return float(np.abs(a.mass[0] - a.mass[1]).sum())


def cond_entropy(a: JointDist) -> float:
    """Conditional entropy H(X|Y) in bits, with 0*log(0) = 0."""
    py = a.mass.sum(axis=0)
    nz = a.mass > 0.0
    plogp = np.zeros_like(a.mass)
    # P(x;y) * log2(P(x;y) / P(y)); P(y) > 0 wherever P(x;y) > 0
    plogp[nz] = a.mass[nz] * np.log2(a.mass[nz] / np.broadcast_to(py, a.mass.shape)[nz])
    return float(-plogp.sum() + 0.0)
