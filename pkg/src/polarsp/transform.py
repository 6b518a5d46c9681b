"""Length-adapting polar transforms over the symbol set {0, 1, s, p}.

``s`` marks a position pinned to zero and never transmitted (shortening);
``p`` marks a position deleted from the codeword (puncturing).  The pairwise
combining rules extend xor and "select second" to these symbols; some
combinations are undefined and can never occur for the pattern sets built
here -- hitting one raises ``ValueError``.

Vectors of symbols are encoded as uint8 arrays (0, 1, 2 = s, 3 = p).  All
transform functions accept a batch: the last axis is the block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SHORT = "s"
PUNCT = "p"

SHORT_CODE = 2
PUNCT_CODE = 3

_SYMBOLS = (0, 1, SHORT, PUNCT)
_CODE_OF = {0: 0, 1: 1, SHORT: SHORT_CODE, PUNCT: PUNCT_CODE}

_UNDEF = -1

# Row = left operand, column = right operand.
_XOR_TABLE = np.array(
    [
        [0, 1, 0, _UNDEF],
        [1, 0, 1, _UNDEF],
        [_UNDEF, _UNDEF, 2, _UNDEF],
        [3, 3, 3, 3],
    ],
    dtype=np.int8,
)

_SEL_TABLE = np.array(
    [
        [0, 1, 2, _UNDEF],
        [0, 1, 2, _UNDEF],
        [_UNDEF, _UNDEF, 2, _UNDEF],
        [0, 1, 2, 3],
    ],
    dtype=np.int8,
)

__all__ = [
    "SHORT",
    "PUNCT",
    "Pattern",
    "bit_reverse",
    "ext_xor",
    "ext_select",
    "ext_encode",
    "ext_decode",
    "polar_transform_ext",
    "inverse_transform",
    "shorten_pattern",
    "puncture_pattern",
    "shorten_transform",
    "puncture_transform",
]


def bit_reverse(i: int, n: int) -> int:
    """Reverse the n-bit binary representation of ``i``."""
    if not 0 <= i < (1 << n):
        raise ValueError(f"index {i} out of range for {n} bits")
    out = 0
    for _ in range(n):
        out = (out << 1) | (i & 1)
        i >>= 1
    return out


def _code(sym) -> int:
    try:
        return _CODE_OF[sym]
    except (KeyError, TypeError):
        raise ValueError(f"not an extended bit: {sym!r}") from None


def ext_xor(a, b):
    """Extended xor of two symbols from {0, 1, 's', 'p'}."""
    r = _XOR_TABLE[_code(a), _code(b)]
    if r == _UNDEF:
        raise ValueError(f"undefined combination {a!r} (+) {b!r}")
    return _SYMBOLS[r]


def ext_select(a, b):
    """Extended select-second of two symbols from {0, 1, 's', 'p'}."""
    r = _SEL_TABLE[_code(a), _code(b)]
    if r == _UNDEF:
        raise ValueError(f"undefined combination {a!r} (>) {b!r}")
    return _SYMBOLS[r]


def ext_encode(seq) -> np.ndarray:
    """Encode a sequence of symbols as a uint8 code array."""
    return np.array([_code(s) for s in seq], dtype=np.uint8)


def ext_decode(codes: np.ndarray) -> list:
    """Decode a uint8 code array back to symbols."""
    return [_SYMBOLS[int(c)] for c in np.asarray(codes).ravel()]


def _pairwise(table: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = table[x[..., 0::2], x[..., 1::2]]
    if (out == _UNDEF).any():
        raise ValueError("undefined symbol combination reached; "
                         "invalid shortening/puncturing placement")
    return out.astype(np.uint8)


def polar_transform_ext(x: np.ndarray) -> np.ndarray:
    """Transform a (batch of) symbol-code vector(s) of power-of-two length.

    Entry i of the result is the recursive combination selected by the bits
    of i, most significant first: 0 picks the pairwise extended xor of the
    current vector, 1 picks the pairwise select.
    """
    x = np.asarray(x, dtype=np.uint8)
    n_len = x.shape[-1]
    if n_len & (n_len - 1):
        raise ValueError(f"length {n_len} is not a power of two")
    if n_len == 1:
        return x.copy()
    lo = polar_transform_ext(_pairwise(_XOR_TABLE, x))
    hi = polar_transform_ext(_pairwise(_SEL_TABLE, x))
    return np.concatenate([lo, hi], axis=-1)


def inverse_transform(u: np.ndarray) -> np.ndarray:
    """Invert the transform on binary vectors: ``polar_transform_ext`` of the
    result reproduces ``u``."""
    u = np.asarray(u, dtype=np.uint8)
    n_len = u.shape[-1]
    if n_len & (n_len - 1):
        raise ValueError(f"length {n_len} is not a power of two")
    if (u > 1).any():
        raise ValueError("inverse transform is defined on binary vectors")
    return _inverse_bits(u)


def _inverse_bits(u: np.ndarray) -> np.ndarray:
    n_len = u.shape[-1]
    if n_len == 1:
        return u.copy()
    half = n_len // 2
    a = _inverse_bits(u[..., :half])   # pairwise xors of x
    b = _inverse_bits(u[..., half:])   # odd entries of x
    x = np.empty_like(u)
    x[..., 0::2] = a ^ b
    x[..., 1::2] = b
    return x


@dataclass(frozen=True)
class Pattern:
    """Index set dropped from a length-N mother block to reach length M."""

    M: int
    N: int
    n: int
    mode: str                 # "shortened" or "punctured"
    indices: tuple            # sorted, subset of [0, N), size N - M

    @property
    def kept(self) -> np.ndarray:
        """Transmitted positions of the mother block, in order."""
        mask = np.ones(self.N, dtype=bool)
        mask[list(self.indices)] = False
        return np.flatnonzero(mask)


def _block_size(M: int) -> tuple[int, int]:
    if M < 1:
        raise ValueError(f"block length must be positive, got {M}")
    n = max(0, (M - 1).bit_length())
    return 1 << n, n


def shorten_pattern(M: int) -> Pattern:
    """Positions pinned to zero: bit-reversals of the last N - M indices."""
    N, n = _block_size(M)
    idx = tuple(sorted(bit_reverse(j, n) for j in range(M, N)))
    return Pattern(M=M, N=N, n=n, mode="shortened", indices=idx)


def puncture_pattern(M: int) -> Pattern:
    """Positions deleted from the codeword: bit-reversals of the first N - M."""
    N, n = _block_size(M)
    idx = tuple(sorted(bit_reverse(j, n) for j in range(N - M)))
    return Pattern(M=M, N=N, n=n, mode="punctured", indices=idx)


def _extend(x: np.ndarray, pattern: Pattern, fill_code: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint8)
    if x.shape[-1] != pattern.M:
        raise ValueError(f"expected block length {pattern.M}, got {x.shape[-1]}")
    if (x > 1).any():
        raise ValueError("data vector must be binary")
    ext = np.full(x.shape[:-1] + (pattern.N,), fill_code, dtype=np.uint8)
    ext[..., pattern.kept] = x
    return ext


def shorten_transform(x: np.ndarray) -> np.ndarray:
    """Transform M bits through the shortened length-N block.

    The block is extended with 's' at the pattern positions; the transformed
    tail beyond M is all 's' and is dropped.
    """
    x = np.asarray(x, dtype=np.uint8)
    pattern = shorten_pattern(x.shape[-1])
    u_ext = polar_transform_ext(_extend(x, pattern, SHORT_CODE))
    if (u_ext[..., pattern.M:] != SHORT_CODE).any():
        raise AssertionError("shortened tail is not all 's'")
    return u_ext[..., : pattern.M]


def puncture_transform(x: np.ndarray) -> np.ndarray:
    """Transform M bits through the punctured length-N block.

    The block is extended with 'p' at the pattern positions; the first N - M
    transformed entries are dropped, leaving a fill-invariant binary suffix.
    """
    x = np.asarray(x, dtype=np.uint8)
    pattern = puncture_pattern(x.shape[-1])
    u_ext = polar_transform_ext(_extend(x, pattern, PUNCT_CODE))
    out = u_ext[..., pattern.N - pattern.M:]
    if (out > 1).any():
        raise AssertionError("punctured suffix is not binary")
    return out
