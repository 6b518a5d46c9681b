"""Code construction by evolving joint distributions along the transform.

The mother block of length N is described by a vector of N joint
distributions: the channel-input joint W at transmitted positions, the superb
distribution at shortened positions, the pitiful one at punctured positions.
Running the transform recursion with the two combining operations in place of
the bit operations yields one leaf distribution per transformed index; its
Z/K/H values drive frozen-set selection.

Engines:

* ``evolve`` -- generic recursion over an arbitrary distribution vector;
  exact when ``mu`` is None, alphabet-capped otherwise.
* ``periodic_fast_path`` -- exploits the periodic structure of the pattern
  (period ``2**t`` when M = a * 2**(n-t) with odd a) to evolve only the
  distinct branch distributions; equal to the generic engine up to merge
  ordering.
* ``bec_closed_form`` -- exact erasure-probability recursion, valid for
  erasure channels with uniform input; an independent oracle for Z profiles.
* ``brute_force_profile`` -- definitional oracle for tiny M: enumerates all
  inputs and output tuples and measures Z/K/H of each transformed index
  directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import GENERIC, PITIFUL, SUPERB, canonicalize, degrade_merge, special_pitiful, special_superb, table_simplify
from .channels import BMChannel, InputDist, JointDist, bhattacharyya, cond_entropy, joint_from, make_bec, make_bsc, make_uninformative, total_variation
from .transform import Pattern, bit_reverse, puncture_pattern, shorten_pattern

__all__ = [
    "CodeSpec",
    "make_channel",
    "build_dist_vector",
    "evolve",
    "evolve_profile",
    "periodic_fast_path",
    "periodic_profile_sweep",
    "period_branch_dists",
    "bec_closed_form",
    "brute_force_profile",
    "construct_code",
    "save_codespec",
    "load_codespec",
]

MODES = ("shortened", "punctured")

_CHANNELS = {
    "bsc": make_bsc,
    "bec": make_bec,
}


def make_channel(family: str, param: float = 0.0) -> BMChannel:
    """Instantiate a channel from its CLI/file descriptor."""
    if family == "uninformative":
        return make_uninformative()
    try:
        return _CHANNELS[family](param)
    except KeyError:
        raise ValueError(f"unknown channel family {family!r}") from None


def _pattern(M: int, mode: str) -> Pattern:
    if mode == "shortened":
        return shorten_pattern(M)
    if mode == "punctured":
        return puncture_pattern(M)
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def build_dist_vector(M: int, w: JointDist, mode: str) -> list:
    """Length-N vector: W at transmitted positions, superb/pitiful at the rest."""
    pattern = _pattern(M, mode)
    special = special_superb if mode == "shortened" else special_pitiful
    vec = [w] * pattern.N
    for i in pattern.indices:
        vec[i] = special()
    return vec


def _pipe(op: str, a: JointDist, b: JointDist, mu) -> JointDist:
    r = table_simplify(op, a, b)
    if r is a or r is b or r.tag != GENERIC:
        return r
    r = canonicalize(r)
    if mu is not None and r.num_outputs > mu:
        r = degrade_merge(r, mu)
    return r


def evolve(vec, mu=None) -> list:
    """All N leaf distributions of the transform recursion, in index order.

    Each combining step is simplified through the special-distribution table,
    canonicalized, and (when ``mu`` is given) merged down to at most ``mu``
    outputs.  Leaf i corresponds to transformed index i.
    """
    vec = list(vec)
    n_len = len(vec)
    if n_len & (n_len - 1):
        raise ValueError(f"vector length {n_len} is not a power of two")

    def rec(v):
        if len(v) == 1:
            return v
        minus = [_pipe("minus", v[i], v[i + 1], mu) for i in range(0, len(v), 2)]
        plus = [_pipe("plus", v[i], v[i + 1], mu) for i in range(0, len(v), 2)]
        return rec(minus) + rec(plus)

    return rec(vec)


def _metrics(dists) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    cache: dict[int, tuple[float, float, float]] = {}
    z = np.empty(len(dists))
    k = np.empty(len(dists))
    h = np.empty(len(dists))
    for i, d in enumerate(dists):
        key = id(d)
        if key not in cache:
            cache[key] = (bhattacharyya(d), total_variation(d), cond_entropy(d))
        z[i], k[i], h[i] = cache[key]
    return z, k, h


def _restrict(arrs, M: int, mode: str):
    n_len = arrs[0].shape[0]
    if mode == "shortened":
        return tuple(a[:M] for a in arrs)
    return tuple(a[n_len - M:] for a in arrs)


def evolve_profile(M: int, w: JointDist, mode: str, mu=None):
    """(Z, K, H) arrays over the M code indices via the generic engine."""
    leaves = evolve(build_dist_vector(M, w, mode), mu=mu)
    return _restrict(_metrics(leaves), M, mode)


# --------------------------------------------------------------------------
# periodic fast path
# --------------------------------------------------------------------------

def _period_split(M: int) -> tuple[int, int]:
    """Write M = a * 2**(n-t) with a odd; returns (a, t)."""
    a = M
    while a % 2 == 0:
        a //= 2
    t = max(0, (a - 1).bit_length())
    if not (a == 1 and t == 0) and not ((1 << (t - 1)) < a <= (1 << t)):
        raise ValueError(f"length {M} does not split periodically")
    return a, t


def period_branch_dists(M: int, w: JointDist, mode: str, mu=None) -> list:
    """The 2**t distinct branch distributions after the first t stages."""
    a, t = _period_split(M)
    period = 1 << t
    if mode == "shortened":
        entries = [special_superb() if bit_reverse(j, t) >= a else w
                   for j in range(period)]
    elif mode == "punctured":
        entries = [special_pitiful() if bit_reverse(j, t) < period - a else w
                   for j in range(period)]
    else:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    branches = [entries]
    for _ in range(t):
        nxt = []
        for v in branches:
            nxt.append([_pipe("minus", v[i], v[i + 1], mu)
                        for i in range(0, len(v), 2)])
            nxt.append([_pipe("plus", v[i], v[i + 1], mu)
                        for i in range(0, len(v), 2)])
        branches = nxt
    return [v[0] for v in branches]


def periodic_profile_sweep(M_list, w: JointDist, mode: str, mu=None) -> dict:
    """Profiles for several lengths sharing one branch tree per odd part.

    Lengths with the same odd factor reuse the same branch distributions and
    tree levels, so a sweep over n costs little more than its largest member.
    Returns {M: (Z, K, H)}.
    """
    out: dict[int, tuple] = {}
    by_split: dict[tuple[int, int], list[int]] = {}
    for M in M_list:
        by_split.setdefault(_period_split(M), []).append(M)
    for (a, t), group in by_split.items():
        depths = {M: (M // a).bit_length() - 1 for M in group}
        max_depth = max(depths.values())
        # per-branch metric arrays per level
        omegas = period_branch_dists(group[0], w, mode, mu=mu)
        level_metrics = [[_metrics([om]) for om in omegas]]
        current = [[om] for om in omegas]
        for _ in range(max_depth):
            nxt = []
            for nodes in current:
                children = []
                for v in nodes:
                    children.append(_pipe("minus", v, v, mu))
                    children.append(_pipe("plus", v, v, mu))
                nxt.append(children)
            current = nxt
            level_metrics.append([_metrics(nodes) for nodes in current])
        for M in group:
            d = depths[M]
            per_branch = level_metrics[d]
            full = tuple(np.concatenate([pb[j] for pb in per_branch])
                         for j in range(3))
            out[M] = _restrict(full, M, mode)
    return out


def periodic_fast_path(M: int, w: JointDist, mode: str, mu=None):
    """(Z, K, H) arrays over the M code indices via the periodic engine."""
    return periodic_profile_sweep([M], w, mode, mu=mu)[M]


# --------------------------------------------------------------------------
# oracles
# --------------------------------------------------------------------------

def bec_closed_form(M: int, eps: float, mode: str) -> np.ndarray:
    """Exact Z profile for an erasure channel with uniform input.

    Evolution stays inside the erasure family: the minus operation maps
    erasure rates (e0, e1) to e0 + e1 - e0*e1, the plus operation to e0*e1;
    a shortened position enters as rate 0, a punctured one as rate 1.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {eps}")
    pattern = _pattern(M, mode)
    rates = np.full(pattern.N, eps)
    fill = 0.0 if mode == "shortened" else 1.0
    rates[list(pattern.indices)] = fill

    def rec(v):
        if v.size == 1:
            return v
        e0, e1 = v[0::2], v[1::2]
        return np.concatenate([rec(e0 + e1 - e0 * e1), rec(e0 * e1)])

    leaves = rec(rates)
    return _restrict((leaves,), M, mode)[0]


def brute_force_profile(M: int, w: JointDist, mode: str,
                        max_cells: int = 50_000_000):
    """Definitional (Z, K, H) profile by full enumeration, for desk-size M.

    Builds the explicit joint distribution of (U_i; U_0..U_{i-1}, Y-vector)
    by enumerating all 2**M inputs and all output tuples, transforming each
    input, and grouping mass by the conditioning prefix.
    """
    from .transform import puncture_transform, shorten_transform

    m_out = w.num_outputs
    if (1 << M) * m_out ** M * M > max_cells:
        raise ValueError(f"enumeration size exceeds limit for M={M}, "
                         f"|Y|={m_out}")
    n_inputs = 1 << M
    xs = ((np.arange(n_inputs)[:, None] >> np.arange(M)[None, :]) & 1).astype(np.uint8)
    if mode == "shortened":
        us = shorten_transform(xs)
    elif mode == "punctured":
        us = puncture_transform(xs)
    else:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")

    n_tuples = m_out ** M
    big = np.ones((n_inputs, n_tuples))
    digits = np.arange(n_tuples)
    for j in range(M):
        yj = (digits // m_out ** (M - 1 - j)) % m_out
        big *= w.mass[xs[:, j][:, None], yj[None, :]]

    z = np.empty(M)
    k = np.empty(M)
    h = np.empty(M)
    for i in range(M):
        prefix = np.zeros(n_inputs, dtype=np.int64)
        for j in range(i):
            prefix = (prefix << 1) | us[:, j]
        acc = np.zeros((1 << i, 2, n_tuples))
        np.add.at(acc, (prefix, us[:, i].astype(np.int64)), big)
        p0 = acc[:, 0, :]
        p1 = acc[:, 1, :]
        z[i] = 2.0 * np.sqrt(p0 * p1).sum()
        k[i] = np.abs(p0 - p1).sum()
        tot = p0 + p1
        ent = 0.0
        for p in (p0, p1):
            nz = p > 0.0
            ent -= (p[nz] * np.log2(p[nz] / tot[nz])).sum()
        h[i] = ent
    return z, k, h


# --------------------------------------------------------------------------
# code specification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CodeSpec:
    """A constructed code: pattern, reliability profile, and frozen set."""

    M: int
    N: int
    mode: str
    channel: str
    param: float
    p0: float
    mu: object                      # int budget or None for exact
    z: np.ndarray
    k: np.ndarray
    h: np.ndarray
    frozen: tuple

    def __post_init__(self) -> None:
        for name in ("z", "k", "h"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != (self.M,):
                raise ValueError(f"profile {name} must have length {self.M}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if any(not 0 <= i < self.M for i in self.frozen):
            raise ValueError("frozen indices out of range")

    @property
    def info(self) -> tuple:
        fz = set(self.frozen)
        return tuple(i for i in range(self.M) if i not in fz)

    @property
    def pattern(self) -> Pattern:
        return _pattern(self.M, self.mode)


def construct_code(M: int, channel: str, param: float, mode: str, count: int,
                   mu=128, p0: float = 0.5, method: str = "auto") -> CodeSpec:
    """Construct a code carrying ``count`` information bits.

    The M - count indices with the largest Z are frozen (ties resolved toward
    the lower index).  ``method`` picks the evolution engine: "auto"/"fast"
    use the periodic path, "generic" the plain recursion.
    """
    if not 0 <= count <= M:
        raise ValueError(f"information count {count} out of range for M={M}")
    w = joint_from(InputDist(p0), make_channel(channel, param))
    if method in ("auto", "fast"):
        z, k, h = periodic_fast_path(M, w, mode, mu=mu)
    elif method == "generic":
        z, k, h = evolve_profile(M, w, mode, mu=mu)
    else:
        raise ValueError(f"unknown construction method {method!r}")
    order = np.lexsort((np.arange(M), -z))
    frozen = tuple(sorted(int(i) for i in order[: M - count]))
    return CodeSpec(M=M, N=_pattern(M, mode).N, mode=mode, channel=channel,
                    param=param, p0=p0, mu=mu, z=z, k=k, h=h, frozen=frozen)


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def save_codespec(spec: CodeSpec, path) -> None:
    """Write the plain-text code description (header plus one line per index)."""
    frozen = set(spec.frozen)
    lines = [
        "# polarsp codespec v1",
        f"# M {spec.M}",
        f"# N {spec.N}",
        f"# mode {spec.mode}",
        f"# channel {spec.channel} {_fmt(spec.param)}",
        f"# p0 {_fmt(spec.p0)}",
        f"# mu {'exact' if spec.mu is None else spec.mu}",
        "# columns: index Z K H frozen",
    ]
    for i in range(spec.M):
        lines.append(f"{i} {_fmt(spec.z[i])} {_fmt(spec.k[i])} "
                     f"{_fmt(spec.h[i])} {1 if i in frozen else 0}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_codespec(path) -> CodeSpec:
    """Read a code description written by :func:`save_codespec`."""
    header: dict[str, str] = {}
    rows = []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) >= 2:
                    header[parts[0]] = " ".join(parts[1:])
                continue
            rows.append(line.split())
    M = int(header["M"])
    if len(rows) != M:
        raise ValueError(f"expected {M} profile rows, found {len(rows)}")
    fam, param = header["channel"].split()
    mu_field = header["mu"]
    z = np.array([float(r[1]) for r in rows])
    k = np.array([float(r[2]) for r in rows])
    h = np.array([float(r[3]) for r in rows])
    frozen = tuple(int(r[0]) for r in rows if r[4] == "1")
    return CodeSpec(M=M, N=int(header["N"]), mode=header["mode"],
                    channel=fam, param=float(param), p0=float(header["p0"]),
                    mu=None if mu_field == "exact" else int(mu_field),
                    z=z, k=k, h=h, frozen=frozen)
