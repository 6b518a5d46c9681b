"""Degradation / input-permutation relations and machine-checkable chains.

A joint distribution A is *inferior* to B when a finite chain of two kinds of
step leads from B to A:

* degradation: A(x; y0) = sum_y1 B(x; y1) Q(y0|y1) for a column-stochastic Q;
* input permutation: A(x; y) = B(x xor f(y); y) for some f: outputs -> bits.

``RelationWitness`` records such a chain explicitly (steps plus the
intermediate distributions) so it can be verified numerically rather than
trusted.  The ``witness_*`` constructors build the chains that certify the
ordering facts this package relies on: every distribution sits between the
pitiful and superb ones, both combining operations preserve the relation, and
each special cell of the simplification table is a genuine equivalence.

Only single degradation steps are *decided* here (``check_degraded``, a small
linear-feasibility problem).  General chains are verified, never searched
for.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .algebra import GENERIC, PITIFUL, SUPERB, op_minus, op_plus, special_pitiful, special_superb
from .channels import JointDist

DEGRADATION = "degradation"
PERMUTATION = "permutation"

CHAIN_TOL = 1e-10
FEASIBILITY_TOL = 1e-9

__all__ = [
    "DEGRADATION",
    "PERMUTATION",
    "RelationStep",
    "RelationWitness",
    "apply_permutation",
    "apply_degradation",
    "verify_degradation",
    "degradation_residual",
    "verify_chain",
    "chain_residual",
    "check_degraded",
    "witness_pitiful",
    "witness_superb",
    "witness_preserve",
    "witness_table_entry",
]


@dataclass(frozen=True)
class RelationStep:
    """One link of a chain: a stochastic table Q or a permutation table f."""

    kind: str
    payload: np.ndarray

    def __post_init__(self) -> None:
        if self.kind not in (DEGRADATION, PERMUTATION):
            raise ValueError(f"unknown step kind {self.kind!r}")
        payload = np.asarray(self.payload)
        if self.kind == DEGRADATION:
            payload = payload.astype(np.float64)
            if payload.ndim != 2:
                raise ValueError("degradation payload must be a 2-D table")
            if payload.min() < -1e-12:
                raise ValueError("degradation payload has negative entries")
            if np.abs(payload.sum(axis=0) - 1.0).max() > FEASIBILITY_TOL:
                raise ValueError("degradation payload columns must sum to 1")
        else:
            payload = payload.astype(np.int64)
            if payload.ndim != 1 or not np.isin(payload, (0, 1)).all():
                raise ValueError("permutation payload must be a flat 0/1 table")
        payload.setflags(write=False)
        object.__setattr__(self, "payload", payload)


@dataclass(frozen=True)
class RelationWitness:
    """Chain A <= C1 <= ... <= C_{t-1} <= B; step k maps element k+1 down to k."""

    steps: tuple
    intermediates: tuple = ()


def apply_permutation(a: JointDist, f: np.ndarray) -> JointDist:
    """Flip the input wherever f marks the output: A'(x; y) = A(x xor f(y); y)."""
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (a.num_outputs,):
        raise ValueError(f"permutation table covers {f.shape[0]} outputs, "
                         f"distribution has {a.num_outputs}")
    flip = f == 1
    mass = a.mass.copy()
    mass[:, flip] = mass[::-1, flip]
    return JointDist(mass)


def apply_degradation(a: JointDist, q: np.ndarray) -> JointDist:
    """Push the output through the channel Q: A'(x; y') = sum_y A(x; y) Q(y'|y)."""
    q = np.asarray(q, dtype=np.float64)
    if q.ndim != 2 or q.shape[1] != a.num_outputs:
        raise ValueError(f"degradation table shape {q.shape} does not match "
                         f"{a.num_outputs} outputs")
    return JointDist(a.mass @ q.T)


def degradation_residual(a: JointDist, b: JointDist, q: np.ndarray) -> float:
    """Largest entrywise violation of A = B pushed through Q."""
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (a.num_outputs, b.num_outputs):
        raise ValueError(f"expected table shape {(a.num_outputs, b.num_outputs)}, "
                         f"got {q.shape}")
    return float(np.abs(b.mass @ q.T - a.mass).max())


def verify_degradation(a: JointDist, b: JointDist, q: np.ndarray,
                       tol: float = CHAIN_TOL) -> bool:
    """Check that ``a`` is the degradation of ``b`` through ``q``."""
    q = np.asarray(q, dtype=np.float64)
    if q.min() < -1e-12 or np.abs(q.sum(axis=0) - 1.0).max() > FEASIBILITY_TOL:
        return False
    return degradation_residual(a, b, q) <= tol


def chain_residual(a: JointDist, b: JointDist, witness: RelationWitness) -> float:
    """Largest per-link violation over the whole chain."""
    seq = (a, *witness.intermediates, b)
    if len(witness.steps) != len(seq) - 1:
        raise ValueError(f"{len(witness.steps)} steps cannot link "
                         f"{len(seq)} distributions")
    worst = float(np.abs(a.mass - b.mass).max()) if not witness.steps else 0.0
    for k, step in enumerate(witness.steps):
        lower, upper = seq[k], seq[k + 1]
        if step.kind == DEGRADATION:
            r = degradation_residual(lower, upper, step.payload)
        else:
            r = float(np.abs(apply_permutation(upper, step.payload).mass
                             - lower.mass).max())
        worst = max(worst, r)
    return worst


def verify_chain(a: JointDist, b: JointDist, witness: RelationWitness,
                 tol: float = CHAIN_TOL) -> bool:
    """True iff every link of the witness chain holds within ``tol``."""
    return chain_residual(a, b, witness) <= tol


def check_degraded(a: JointDist, b: JointDist):
    """Search for Q making ``a`` a single-step degradation of ``b``.

    Solved as a linear program minimizing the worst entrywise residual over
    column-stochastic Q; feasible within ``FEASIBILITY_TOL`` returns Q,
    otherwise None.  Any returned table passes ``verify_degradation``.
    """
    ma, mb = a.num_outputs, b.num_outputs
    if ma == mb and np.array_equal(a.mass, b.mass):
        return np.eye(ma)
    nq = ma * mb
    # variables: Q flattened row-major, then the residual bound eps
    c = np.zeros(nq + 1)
    c[-1] = 1.0
    a_eq = np.zeros((mb, nq + 1))
    for y1 in range(mb):
        a_eq[y1, y1:nq:mb] = 1.0
    b_eq = np.ones(mb)
    rows = []
    rhs = []
    for x in range(2):
        for y0 in range(ma):
            coeff = np.zeros(nq + 1)
            coeff[y0 * mb:(y0 + 1) * mb] = b.mass[x]
            coeff[-1] = -1.0
            rows.append(coeff.copy())
            rhs.append(a.mass[x, y0])
            coeff[:nq] *= -1.0
            rows.append(coeff)
            rhs.append(-a.mass[x, y0])
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs),
                  A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0.0, 1.0)] * nq + [(0.0, None)],
                  method="highs")
    if not res.success or res.x[-1] > FEASIBILITY_TOL:
        return None
    q = res.x[:nq].reshape(ma, mb)
    # clean solver noise so the witness verifies at the strict tolerance
    q = np.clip(q, 0.0, None)
    q /= q.sum(axis=0, keepdims=True)
    if not verify_degradation(a, b, q):
        return None
    return q


# --------------------------------------------------------------------------
# explicit witness constructions
# --------------------------------------------------------------------------

def witness_pitiful(a: JointDist) -> RelationWitness:
    """Chain proving the pitiful distribution inferior to ``a``.

    Duplicates the output with a fair coin, xors the coin into the input
    (which uniformizes it), then collapses the output.
    """
    m = a.num_outputs
    # C2 over (y0, x1), flat y0-major: half of A per coin value
    c2 = JointDist(np.repeat(a.mass, 2, axis=1) * 0.5)
    q2 = np.zeros((2 * m, m))
    for y0 in range(m):
        q2[2 * y0, y0] = 0.5
        q2[2 * y0 + 1, y0] = 0.5
    f1 = np.tile([0, 1], m)
    c1 = apply_permutation(c2, f1)
    q0 = np.ones((1, 2 * m))
    steps = (RelationStep(DEGRADATION, q0),
             RelationStep(PERMUTATION, f1),
             RelationStep(DEGRADATION, q2))
    return RelationWitness(steps=steps, intermediates=(c1, c2))


def witness_superb(a: JointDist) -> RelationWitness:
    """Chain proving ``a`` inferior to the superb distribution.

    The superb output is replaced by a sample (x0, y0) drawn from ``a``
    itself, the known-zero input is xored with x0, and the extra coordinate
    is then discarded.
    """
    m = a.num_outputs
    # D2 over (x0, y0), flat x0-major: all mass on input 0
    d2_mass = np.zeros((2, 2 * m))
    d2_mass[0] = a.mass.ravel()
    d2 = JointDist(d2_mass)
    qd2 = a.mass.ravel()[:, None]          # column over (x0, y0), sums to 1
    g = np.repeat([0, 1], m)
    d1 = apply_permutation(d2, g)
    qa = np.hstack([np.eye(m), np.eye(m)])  # keep y0, drop x0
    steps = (RelationStep(DEGRADATION, qa),
             RelationStep(PERMUTATION, g),
             RelationStep(DEGRADATION, qd2))
    return RelationWitness(steps=steps, intermediates=(d1, d2))


def _det_degradation(n_rows: int, col_to_row: np.ndarray) -> np.ndarray:
    q = np.zeros((n_rows, col_to_row.size))
    q[col_to_row, np.arange(col_to_row.size)] = 1.0
    return q


def witness_preserve(case: int, a: JointDist, b: JointDist,
                     step: RelationStep) -> RelationWitness:
    """Witness that a one-step-lowered operand lowers the combined result.

    Cases 1-4 lower the left operand (degradation/permutation under each of
    the two operations), cases 5-8 the right one.  The returned chain links
    op(lowered, other) up to op(a, b).
    """
    ma, mb = a.num_outputs, b.num_outputs
    d_cases = {1, 2, 5, 6}
    if (step.kind == DEGRADATION) != (case in d_cases):
        raise ValueError(f"case {case} does not take a {step.kind} step")
    if case in (1, 2, 3, 4):
        if step.kind == DEGRADATION and step.payload.shape[1] != ma:
            raise ValueError("step table does not match the left operand")
        if step.kind == PERMUTATION and step.payload.size != ma:
            raise ValueError("step table does not match the left operand")
    else:
        if step.kind == DEGRADATION and step.payload.shape[1] != mb:
            raise ValueError("step table does not match the right operand")
        if step.kind == PERMUTATION and step.payload.size != mb:
            raise ValueError("step table does not match the right operand")

    if case == 1:    # degraded left operand, minus: block-diagonal lift of Q
        q = np.kron(step.payload, np.eye(mb))
        return RelationWitness((RelationStep(DEGRADATION, q),))
    if case == 2:    # degraded left operand, plus
        q = np.kron(np.eye(2), np.kron(step.payload, np.eye(mb)))
        return RelationWitness((RelationStep(DEGRADATION, q),))
    if case == 3:    # permuted left operand, minus: g(y0, y1) = f(y0)
        g = np.repeat(step.payload, mb)
        return RelationWitness((RelationStep(PERMUTATION, g),))
    if case == 4:    # permuted left operand, plus: deterministic relabeling
        f = step.payload
        u0, y0, y1 = np.unravel_index(np.arange(2 * ma * mb), (2, ma, mb))
        rows = np.ravel_multi_index(((u0 ^ f[y0]), y0, y1), (2, ma, mb))
        q = _det_degradation(2 * ma * mb, rows)
        return RelationWitness((RelationStep(DEGRADATION, q),))
    if case == 5:    # degraded right operand, minus
        q = np.kron(np.eye(ma), step.payload)
        return RelationWitness((RelationStep(DEGRADATION, q),))
    if case == 6:    # degraded right operand, plus
        q = np.kron(np.eye(2 * ma), step.payload)
        return RelationWitness((RelationStep(DEGRADATION, q),))
    if case == 7:    # permuted right operand, minus: g(y0, y1) = f(y1)
        g = np.tile(step.payload, ma)
        return RelationWitness((RelationStep(PERMUTATION, g),))
    if case == 8:    # permuted right operand, plus: permute then relabel
        f = step.payload
        rhs = op_plus(a, b)
        fprime = np.tile(np.tile(f, ma), 2)
        c = apply_permutation(rhs, fprime)
        u0, y0, y1 = np.unravel_index(np.arange(2 * ma * mb), (2, ma, mb))
        rows = np.ravel_multi_index(((u0 ^ f[y1]), y0, y1), (2, ma, mb))
        q = _det_degradation(2 * ma * mb, rows)
        steps = (RelationStep(DEGRADATION, q), RelationStep(PERMUTATION, fprime))
        return RelationWitness(steps=steps, intermediates=(c,))
    raise ValueError(f"case must be 1..8, got {case}")


def _operand(kind: str, generic: JointDist) -> JointDist:
    if kind == GENERIC:
        return generic
    if kind == SUPERB:
        return special_superb()
    if kind == PITIFUL:
        return special_pitiful()
    raise ValueError(f"unknown operand kind {kind!r}")


def witness_table_entry(op: str, row: str, col: str, a: JointDist,
                        b: JointDist):
    """Witness pair certifying one special cell of the simplification table.

    Returns (forward, backward) chains proving mutual inferiority between the
    explicitly computed combination and the table's claimed value.  ``row``
    and ``col`` name the operand kinds; at least one must be special.
    """
    if row == GENERIC and col == GENERIC:
        raise ValueError("at least one operand must be superb or pitiful")
    left = _operand(row, a)
    right = _operand(col, b)
    m_left, m_right = left.num_outputs, right.num_outputs

    if op == "minus":
        if col == SUPERB:
            # computed result carries the left operand's table verbatim
            eye = np.eye(m_left)
            return (RelationWitness((RelationStep(DEGRADATION, eye),)),
                    RelationWitness((RelationStep(DEGRADATION, eye),)))
        if col == PITIFUL:
            lhs = op_minus(left, right)
            q = left.mass.sum(axis=0)[:, None]
            fwd = RelationWitness((RelationStep(DEGRADATION, q),))
            return fwd, witness_pitiful(lhs)
        if row == SUPERB:
            eye = np.eye(m_right)
            return (RelationWitness((RelationStep(DEGRADATION, eye),)),
                    RelationWitness((RelationStep(DEGRADATION, eye),)))
        if row == PITIFUL:
            lhs = op_minus(left, right)
            q = right.mass.sum(axis=0)[:, None]
            fwd = RelationWitness((RelationStep(DEGRADATION, q),))
            return fwd, witness_pitiful(lhs)
        raise ValueError(f"unsupported cell ({row}, {col}) for minus")

    if op == "plus":
        if col == SUPERB:
            lhs = op_plus(left, right)
            fwd = witness_superb(lhs)
            bwd = RelationWitness((RelationStep(DEGRADATION,
                                                np.ones((1, 2 * m_left))),))
            return fwd, bwd
        if col == PITIFUL:
            lhs = op_plus(left, right)
            f = np.repeat([0, 1], m_left)
            c1 = apply_permutation(lhs, f)   # equals half of `left` per u0 copy
            q_down = 0.5 * np.vstack([np.eye(m_left), np.eye(m_left)])
            fwd = RelationWitness(
                steps=(RelationStep(PERMUTATION, f),
                       RelationStep(DEGRADATION, q_down)),
                intermediates=(c1,))
            c2 = apply_permutation(lhs, f)
            q_up = np.hstack([np.eye(m_left), np.eye(m_left)])
            bwd = RelationWitness(
                steps=(RelationStep(DEGRADATION, q_up),
                       RelationStep(PERMUTATION, f)),
                intermediates=(c2,))
            return fwd, bwd
        if row == SUPERB:
            lhs = op_plus(left, right)
            fwd = witness_superb(lhs)
            f = np.repeat([0, 1], m_right)
            c3 = apply_permutation(lhs, f)
            bwd = RelationWitness(
                steps=(RelationStep(DEGRADATION, np.ones((1, 2 * m_right))),
                       RelationStep(PERMUTATION, f)),
                intermediates=(c3,))
            return fwd, bwd
        if row == PITIFUL:
            q_down = 0.5 * np.vstack([np.eye(m_right), np.eye(m_right)])
            fwd = RelationWitness((RelationStep(DEGRADATION, q_down),))
            q_up = np.hstack([np.eye(m_right), np.eye(m_right)])
            bwd = RelationWitness((RelationStep(DEGRADATION, q_up),))
            return fwd, bwd
        raise ValueError(f"unsupported cell ({row}, {col}) for plus")

    raise ValueError(f"unknown operation {op!r}")
