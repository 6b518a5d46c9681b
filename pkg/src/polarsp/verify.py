"""Randomized verification suites for the ordering and equivalence machinery.

Each suite draws seeded random distributions, builds the corresponding
explicit witnesses, and verifies every link numerically.  They back both the
``verify`` CLI command and the test suite.  ``fault`` hooks deliberately
corrupt one checked claim so that a failing suite is distinguishable from a
vacuous one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import algebra, relations
from .algebra import GENERIC, PITIFUL, SUPERB, op_minus, op_plus, special_pitiful, special_superb, table_simplify
from .channels import JointDist, bhattacharyya, cond_entropy, total_variation

__all__ = [
    "SuiteResult",
    "random_joint",
    "random_degradation",
    "random_permutation",
    "random_step",
    "suite_lemma3",
    "suite_lemma2",
    "suite_table",
    "suite_degradation",
    "ALL_SUITES",
    "run_suites",
]

ORDER_TOL = 1e-9


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    messages: list = field(default_factory=list)

    def record(self, ok: bool, message: str) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            self.messages.append(message)

    @property
    def ok(self) -> bool:
        return self.failed == 0


def random_joint(rng: np.random.Generator, max_outputs: int = 5,
                 min_outputs: int = 1) -> JointDist:
    m = int(rng.integers(min_outputs, max_outputs + 1))
    mass = rng.random((2, m)) + 1e-6
    return JointDist(mass / mass.sum())


def random_degradation(rng: np.random.Generator, m_from: int,
                       max_outputs: int = 4) -> np.ndarray:
    m_to = int(rng.integers(1, max_outputs + 1))
    q = rng.random((m_to, m_from)) + 1e-6
    return q / q.sum(axis=0, keepdims=True)


def random_permutation(rng: np.random.Generator, m: int) -> np.ndarray:
    return rng.integers(0, 2, size=m)


def random_step(rng: np.random.Generator, operand: JointDist) -> relations.RelationStep:
    if rng.random() < 0.5:
        return relations.RelationStep(
            relations.DEGRADATION, random_degradation(rng, operand.num_outputs))
    return relations.RelationStep(
        relations.PERMUTATION, random_permutation(rng, operand.num_outputs))


def _ordering_ok(lower: JointDist, upper: JointDist) -> bool:
    return (bhattacharyya(lower) >= bhattacharyya(upper) - ORDER_TOL
            and total_variation(lower) <= total_variation(upper) + ORDER_TOL
            and cond_entropy(lower) >= cond_entropy(upper) - ORDER_TOL)


def suite_lemma3(trials: int, rng: np.random.Generator, fault=None) -> SuiteResult:
    """Every distribution sits between the pitiful and superb ones."""
    res = SuiteResult("lemma3")
    pit = special_pitiful()
    sup = special_superb()
    for k in range(trials):
        a = random_joint(rng)
        wp = relations.witness_pitiful(a)
        ok_p = relations.verify_chain(pit, a, wp) and _ordering_ok(pit, a)
        res.record(ok_p, f"pitiful witness failed on draw {k}")
        ws = relations.witness_superb(a)
        ok_s = relations.verify_chain(a, sup, ws) and _ordering_ok(a, sup)
        res.record(ok_s, f"superb witness failed on draw {k}")
    return res


def suite_lemma2(trials: int, rng: np.random.Generator, fault=None) -> SuiteResult:
    """Lowering one operand lowers both combined results, in all 8 cases."""
    res = SuiteResult("lemma2")
    for case in range(1, 9):
        left_side = case <= 4
        wants_deg = case in (1, 2, 5, 6)
        use_plus = case in (2, 4, 6, 8)
        for k in range(trials):
            a = random_joint(rng, max_outputs=4)
            b = random_joint(rng, max_outputs=4)
            operand = a if left_side else b
            if wants_deg:
                step = relations.RelationStep(
                    relations.DEGRADATION,
                    random_degradation(rng, operand.num_outputs))
                lowered = relations.apply_degradation(operand, step.payload)
            else:
                step = relations.RelationStep(
                    relations.PERMUTATION,
                    random_permutation(rng, operand.num_outputs))
                lowered = relations.apply_permutation(operand, step.payload)
            op = op_plus if use_plus else op_minus
            lhs = op(lowered, b) if left_side else op(a, lowered)
            rhs = op(a, b)
            try:
                w = relations.witness_preserve(case, a, b, step)
                ok = relations.verify_chain(lhs, rhs, w) and _ordering_ok(lhs, rhs)
            except ValueError:
                ok = False
            res.record(ok, f"case {case} failed on draw {k}")
    return res


_TABLE_CELLS = tuple(
    (op, row, col)
    for op in ("minus", "plus")
    for row in (GENERIC, SUPERB, PITIFUL)
    for col in (GENERIC, SUPERB, PITIFUL)
    if not (row == GENERIC and col == GENERIC)
)


def _cell_name(op: str, row: str, col: str) -> str:
    row_s = {GENERIC: "A", SUPERB: "S", PITIFUL: "P"}[row]
    col_s = {GENERIC: "B", SUPERB: "S", PITIFUL: "P"}[col]
    return f"{op}:{row_s}:{col_s}"


def suite_table(trials: int, rng: np.random.Generator, fault=None) -> SuiteResult:
    """All 16 special cells of the simplification table are equivalences.

    ``fault`` may name a cell (e.g. ``"minus:S:B"``, with B an alias for the
    generic column); that cell's claimed value is corrupted and must fail.
    """
    res = SuiteResult("lemma4")
    for op, row, col in _TABLE_CELLS:
        name = _cell_name(op, row, col)
        faulted = fault == name
        for k in range(trials):
            a = random_joint(rng, max_outputs=4)
            b = random_joint(rng, max_outputs=4)
            left = a if row == GENERIC else (special_superb() if row == SUPERB
                                             else special_pitiful())
            right = b if col == GENERIC else (special_superb() if col == SUPERB
                                              else special_pitiful())
            lhs = (op_minus if op == "minus" else op_plus)(left, right)
            claimed = table_simplify(op, left, right)
            if faulted:
                claimed = special_pitiful() if claimed.tag != PITIFUL \
                    else special_superb()
            try:
                fwd, bwd = relations.witness_table_entry(op, row, col, a, b)
                ok = (relations.verify_chain(lhs, claimed, fwd)
                      and relations.verify_chain(claimed, lhs, bwd))
            except ValueError:
                ok = False
            res.record(ok, f"cell {name} failed on draw {k}")
    return res


def suite_degradation(trials: int, rng: np.random.Generator, fault=None) -> SuiteResult:
    """The single-step degradation decision agrees with explicit verification."""
    res = SuiteResult("degradation")
    for k in range(trials):
        b = random_joint(rng, max_outputs=4)
        q = random_degradation(rng, b.num_outputs)
        a = relations.apply_degradation(b, q)
        found = relations.check_degraded(a, b)
        ok = found is not None and relations.verify_degradation(a, b, found)
        res.record(ok, f"feasible instance rejected on draw {k}")

        # a non-degraded pair: check both the decision and the brute screen
        c = random_joint(rng, max_outputs=3)
        d = random_joint(rng, max_outputs=3)
        found = relations.check_degraded(c, d)
        if found is None:
            ok = not _any_deterministic_q(c, d)
        else:
            ok = relations.verify_degradation(c, d, found)
        res.record(ok, f"decision inconsistent on draw {k}")
    return res


def _any_deterministic_q(a: JointDist, b: JointDist) -> bool:
    """Brute screen: does any deterministic output map realize the degradation?"""
    ma, mb = a.num_outputs, b.num_outputs
    if ma ** mb > 4096:
        return False
    for assign in range(ma ** mb):
        q = np.zeros((ma, mb))
        v = assign
        for y1 in range(mb):
            q[v % ma, y1] = 1.0
            v //= ma
        if relations.verify_degradation(a, b, q):
            return True
    return False


ALL_SUITES = {
    "lemma3": suite_lemma3,
    "lemma2": suite_lemma2,
    "lemma4": suite_table,
    "degradation": suite_degradation,
}


def run_suites(names=None, trials: int = 100, seed: int = 2024,
               fault=None) -> list:
    """Run the named suites (all by default) with one seeded stream each."""
    results = []
    for idx, (name, fn) in enumerate(ALL_SUITES.items()):
        if names and name not in names:
            continue
        rng = np.random.Generator(np.random.Philox(
            np.random.SeedSequence(entropy=seed, spawn_key=(idx,))))
        results.append(fn(trials, rng, fault=fault))
    return results
