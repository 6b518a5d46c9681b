"""Successive cancellation encoder/decoder for shortened and punctured codes.

Both operate on the length-N mother block.  The encoder places data and
frozen values in the transformed domain (the adapted positions are pinned to
zero there), inverts the transform, and drops the untransmitted positions.
The decoder rebuilds a length-N LLR vector -- certainty (+inf) at shortened
positions, ignorance (0) at punctured ones -- and runs the standard SC
recursion with exact (tanh-rule) combining by default.

Infinite LLRs are ordinary IEEE infinities and are treated symbolically: the
combining rules absorb them without ever producing NaN; a contradiction
between two certain beliefs (which can only follow an earlier wrong guess)
collapses to "no information".
"""

from __future__ import annotations

import math

import numpy as np

from .construction import CodeSpec
from .transform import inverse_transform

__all__ = [
    "f_llr",
    "g_llr",
    "channel_llrs",
    "sc_encode",
    "sc_decode",
    "sc_guess_count",
    "exhaustive_bec_failure",
]


def f_llr(a, b, exact: bool = True) -> np.ndarray:
    """LLR of the xor of two bits with independent LLRs ``a`` and ``b``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if exact:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 2.0 * np.arctanh(np.tanh(a / 2.0) * np.tanh(b / 2.0))
            # pin the absorbing cases exactly: an infinite belief passes the
            # other operand through (with its sign)
            inf_b = np.isinf(b)
            if inf_b.any():
                out = np.where(inf_b, np.sign(b) * a, out)
            inf_a = np.isinf(a)
            if inf_a.any():
                out = np.where(inf_a, np.sign(a) * b, out)
        return out
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def g_llr(a, b, s) -> np.ndarray:
    """LLR of the second bit once the xor ``s`` of the pair is known."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    t = np.where(np.asarray(s) == 1, -a, a)
    out = b + t
    # opposing certainties cancel to zero information
    if np.isinf(a).any() and np.isinf(b).any():
        out = np.where(np.isnan(out), 0.0, out)
    return out


def channel_llrs(spec: CodeSpec) -> np.ndarray:
    """Per-output-symbol LLR table for the code's channel (uniform input only)."""
    if spec.p0 != 0.5:
        raise ValueError("decoding requires a uniform input distribution")
    if spec.channel == "bsc":
        p = spec.param
        if p == 0.0:
            return np.array([math.inf, -math.inf])
        return np.array([math.log((1.0 - p) / p), math.log(p / (1.0 - p))])
    if spec.channel == "bec":
        return np.array([math.inf, -math.inf, 0.0])
    raise ValueError(f"no LLR map for channel {spec.channel!r}")


def _extended_frozen(spec: CodeSpec) -> tuple[np.ndarray, np.ndarray]:
    """Frozen mask and values over the length-N transformed block."""
    mask = np.zeros(spec.N, dtype=bool)
    vals = np.zeros(spec.N, dtype=np.uint8)
    offset = 0 if spec.mode == "shortened" else spec.N - spec.M
    if spec.mode == "shortened":
        mask[spec.M:] = True
    else:
        mask[: spec.N - spec.M] = True
    for i in spec.frozen:
        mask[offset + i] = True
    return mask, vals


def sc_encode(data, spec: CodeSpec, frozen_values=None) -> np.ndarray:
    """Map information bits to an M-bit codeword.

    ``data`` may carry a leading batch axis.  ``frozen_values`` defaults to
    all zeros.  In shortened mode the dropped mother-block positions are
    provably zero; this is asserted.
    """
    data = np.asarray(data, dtype=np.uint8)
    info = list(spec.info)
    if data.shape[-1] != len(info):
        raise ValueError(f"expected {len(info)} information bits, "
                         f"got {data.shape[-1]}")
    batch = data.shape[:-1]
    u_code = np.zeros(batch + (spec.M,), dtype=np.uint8)
    u_code[..., info] = data
    if spec.frozen:
        if frozen_values is None:
            frozen_values = 0
        u_code[..., list(spec.frozen)] = frozen_values
    u_ext = np.zeros(batch + (spec.N,), dtype=np.uint8)
    if spec.mode == "shortened":
        u_ext[..., : spec.M] = u_code
    else:
        u_ext[..., spec.N - spec.M:] = u_code
    x = inverse_transform(u_ext)
    pattern = spec.pattern
    if spec.mode == "shortened":
        dropped = x[..., list(pattern.indices)]
        if dropped.any():
            raise AssertionError("shortened positions of the mother codeword "
                                 "are not zero")
    return x[..., pattern.kept]


def _sc_rec(llr: np.ndarray, base: int, uhat: np.ndarray,
            mask: np.ndarray, vals: np.ndarray, exact: bool) -> np.ndarray:
    width = llr.shape[-1]
    if width == 1:
        if mask[base]:
            u = np.full(llr.shape[:-1], vals[base], dtype=np.uint8)
        else:
            u = (llr[..., 0] < 0).astype(np.uint8)   # tie resolves to 0
        uhat[..., base] = u
        return u[..., None]
    a = llr[..., 0::2]
    b = llr[..., 1::2]
    s_min = _sc_rec(f_llr(a, b, exact), base, uhat, mask, vals, exact)
    s_plus = _sc_rec(g_llr(a, b, s_min), base + width // 2, uhat, mask, vals, exact)
    x = np.empty(llr.shape[:-1] + (width,), dtype=np.uint8)
    x[..., 0::2] = s_min ^ s_plus
    x[..., 1::2] = s_plus
    return x


def _decode_llr(llr_ext: np.ndarray, spec: CodeSpec, exact: bool) -> np.ndarray:
    mask, vals = _extended_frozen(spec)
    uhat = np.zeros(llr_ext.shape[:-1] + (spec.N,), dtype=np.uint8)
    _sc_rec(llr_ext, 0, uhat, mask, vals, exact)
    return uhat


def _extend_llrs(y_llr: np.ndarray, spec: CodeSpec) -> np.ndarray:
    pattern = spec.pattern
    llr_ext = np.zeros(y_llr.shape[:-1] + (spec.N,))
    if spec.mode == "shortened":
        llr_ext[..., list(pattern.indices)] = math.inf
    llr_ext[..., pattern.kept] = y_llr
    return llr_ext


def sc_decode(y, spec: CodeSpec, method: str = "exact"):
    """Decode M received symbols; returns (u_hat, data).

    ``y`` holds channel output indices (for the BEC, index 2 is the erasure).
    ``u_hat`` is the length-M transformed-domain estimate, ``data`` the
    information bits.  ``method`` is "exact" or "minsum".
    """
    if method not in ("exact", "minsum"):
        raise ValueError(f"unknown decoding method {method!r}")
    y = np.asarray(y, dtype=np.int64)
    if y.shape[-1] != spec.M:
        raise ValueError(f"expected {spec.M} received symbols, got {y.shape[-1]}")
    table = channel_llrs(spec)
    uhat_ext = _decode_llr(_extend_llrs(table[y], spec), spec,
                           exact=method == "exact")
    offset = 0 if spec.mode == "shortened" else spec.N - spec.M
    u_hat = uhat_ext[..., offset: offset + spec.M]
    data = u_hat[..., list(spec.info)]
    return u_hat, data


# --------------------------------------------------------------------------
# erasure-channel failure analysis (independent of the decoder code paths)
# --------------------------------------------------------------------------

def sc_guess_count(erased_ext: np.ndarray, frozen_mask: np.ndarray) -> int:
    """Number of unresolvable information decisions for an erasure pattern.

    Pure boolean calculus on the SC recursion: a xor-side value is erased
    when either half is, a refine-side value only when both are (the partial
    sum being known).  Counts non-frozen leaves that end up erased, i.e. the
    guesses a correct-past decoder is forced to make.
    """

    def rec(e: np.ndarray, base: int) -> int:
        if e.shape[0] == 1:
            if frozen_mask[base]:
                return 0
            return int(e[0])
        half = e.shape[0] // 2
        return rec(e[0::2] | e[1::2], base) + rec(e[0::2] & e[1::2], base + half)

    return rec(np.asarray(erased_ext, dtype=bool), 0)


def exhaustive_bec_failure(spec: CodeSpec, eps: float) -> float:
    """Exact SC frame-error probability on an erasure channel.

    Enumerates every erasure pattern of the M transmitted symbols; a pattern
    forcing g guesses fails with probability 1 - 2**-g over uniform data.
    """
    if spec.M > 20:
        raise ValueError("pattern enumeration is limited to M <= 20")
    mask, _ = _extended_frozen(spec)
    pattern = spec.pattern
    kept = pattern.kept
    total = 0.0
    for bits in range(1 << spec.M):
        erased_ext = np.zeros(spec.N, dtype=bool)
        if spec.mode == "punctured":
            erased_ext[list(pattern.indices)] = True
        n_erased = 0
        for j in range(spec.M):
            if (bits >> j) & 1:
                erased_ext[kept[j]] = True
                n_erased += 1
        g = sc_guess_count(erased_ext, mask)
        if g:
            prob = eps ** n_erased * (1.0 - eps) ** (spec.M - n_erased)
            total += prob * (1.0 - 0.5 ** g)
    return total
