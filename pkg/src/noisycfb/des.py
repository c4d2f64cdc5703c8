"""DES block cipher (FIPS 46-3) on 64-bit integer blocks.

Blocks and keys are plain Python ints in [0, 2^64). Bit 1 in the FIPS
numbering is the most significant bit of the integer. The per-byte
gather tables below replace the bit-by-bit initial/final/expansion
permutations with eight (or four) table lookups, and the S-boxes are
fused with the P permutation; a single block encryption costs ~220
table lookups, which keeps large Monte Carlo runs tractable.
"""

from __future__ import annotations

from typing import Sequence

BLOCK_BITS = 64
MASK64 = (1 << 64) - 1

# FIPS 46-3 tables (1-based bit positions, MSB first).
_IP = (
    58, 50, 42, 34, 26, 18, 10, 2, 60, 52, 44, 36, 28, 20, 12, 4,
    62, 54, 46, 38, 30, 22, 14, 6, 64, 56, 48, 40, 32, 24, 16, 8,
    57, 49, 41, 33, 25, 17, 9, 1, 59, 51, 43, 35, 27, 19, 11, 3,
    61, 53, 45, 37, 29, 21, 13, 5, 63, 55, 47, 39, 31, 23, 15, 7,
)
_FP = (
    40, 8, 48, 16, 56, 24, 64, 32, 39, 7, 47, 15, 55, 23, 63, 31,
    38, 6, 46, 14, 54, 22, 62, 30, 37, 5, 45, 13, 53, 21, 61, 29,
    36, 4, 44, 12, 52, 20, 60, 28, 35, 3, 43, 11, 51, 19, 59, 27,
    34, 2, 42, 10, 50, 18, 58, 26, 33, 1, 41, 9, 49, 17, 57, 25,
)
_E = (
    32, 1, 2, 3, 4, 5, 4, 5, 6, 7, 8, 9, 8, 9, 10, 11,
    12, 13, 12, 13, 14, 15, 16, 17, 16, 17, 18, 19, 20, 21, 20, 21,
    22, 23, 24, 25, 24, 25, 26, 27, 28, 29, 28, 29, 30, 31, 32, 1,
)
_P = (
    16, 7, 20, 21, 29, 12, 28, 17, 1, 15, 23, 26, 5, 18, 31, 10,
    2, 8, 24, 14, 32, 27, 3, 9, 19, 13, 30, 6, 22, 11, 4, 25,
)
_PC1 = (
    57, 49, 41, 33, 25, 17, 9, 1, 58, 50, 42, 34, 26, 18,
    10, 2, 59, 51, 43, 35, 27, 19, 11, 3, 60, 52, 44, 36,
    63, 55, 47, 39, 31, 23, 15, 7, 62, 54, 46, 38, 30, 22,
    14, 6, 61, 53, 45, 37, 29, 21, 13, 5, 28, 20, 12, 4,
)
_PC2 = (
    14, 17, 11, 24, 1, 5, 3, 28, 15, 6, 21, 10,
    23, 19, 12, 4, 26, 8, 16, 7, 27, 20, 13, 2,
    41, 52, 31, 37, 47, 55, 30, 40, 51, 45, 33, 48,
    44, 49, 39, 56, 34, 53, 46, 42, 50, 36, 29, 32,
)
_SHIFTS = (1, 1, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 1)
_SBOXES = (
    ((14, 4, 13, 1, 2, 15, 11, 8, 3, 10, 6, 12, 5, 9, 0, 7),
     (0, 15, 7, 4, 14, 2, 13, 1, 10, 6, 12, 11, 9, 5, 3, 8),
     (4, 1, 14, 8, 13, 6, 2, 11, 15, 12, 9, 7, 3, 10, 5, 0),
     (15, 12, 8, 2, 4, 9, 1, 7, 5, 11, 3, 14, 10, 0, 6, 13)),
    ((15, 1, 8, 14, 6, 11, 3, 4, 9, 7, 2, 13, 12, 0, 5, 10),
     (3, 13, 4, 7, 15, 2, 8, 14, 12, 0, 1, 10, 6, 9, 11, 5),
     (0, 14, 7, 11, 10, 4, 13, 1, 5, 8, 12, 6, 9, 3, 2, 15),
     (13, 8, 10, 1, 3, 15, 4, 2, 11, 6, 7, 12, 0, 5, 14, 9)),
    ((10, 0, 9, 14, 6, 3, 15, 5, 1, 13, 12, 7, 11, 4, 2, 8),
     (13, 7, 0, 9, 3, 4, 6, 10, 2, 8, 5, 14, 12, 11, 15, 1),
     (13, 6, 4, 9, 8, 15, 3, 0, 11, 1, 2, 12, 5, 10, 14, 7),
     (1, 10, 13, 0, 6, 9, 8, 7, 4, 15, 14, 3, 11, 5, 2, 12)),
    ((7, 13, 14, 3, 0, 6, 9, 10, 1, 2, 8, 5, 11, 12, 4, 15),
     (13, 8, 11, 5, 6, 15, 0, 3, 4, 7, 2, 12, 1, 10, 14, 9),
     (10, 6, 9, 0, 12, 11, 7, 13, 15, 1, 3, 14, 5, 2, 8, 4),
     (3, 15, 0, 6, 10, 1, 13, 8, 9, 4, 5, 11, 12, 7, 2, 14)),
    ((2, 12, 4, 1, 7, 10, 11, 6, 8, 5, 3, 15, 13, 0, 14, 9),
     (14, 11, 2, 12, 4, 7, 13, 1, 5, 0, 15, 10, 3, 9, 8, 6),
     (4, 2, 1, 11, 10, 13, 7, 8, 15, 9, 12, 5, 6, 3, 0, 14),
     (11, 8, 12, 7, 1, 14, 2, 13, 6, 15, 0, 9, 10, 4, 5, 3)),
    ((12, 1, 10, 15, 9, 2, 6, 8, 0, 13, 3, 4, 14, 7, 5, 11),
     (10, 15, 4, 2, 7, 12, 9, 5, 6, 1, 13, 14, 0, 11, 3, 8),
     (9, 14, 15, 5, 2, 8, 12, 3, 7, 0, 4, 10, 1, 13, 11, 6),
     (4, 3, 2, 12, 9, 5, 15, 10, 11, 14, 1, 7, 6, 0, 8, 13)),
    ((4, 11, 2, 14, 15, 0, 8, 13, 3, 12, 9, 7, 5, 10, 6, 1),
     (13, 0, 11, 7, 4, 9, 1, 10, 14, 3, 5, 12, 2, 15, 8, 6),
     (1, 4, 11, 13, 12, 3, 7, 14, 10, 15, 6, 8, 0, 5, 9, 2),
     (6, 11, 13, 8, 1, 4, 10, 7, 9, 5, 0, 15, 14, 2, 3, 12)),
    ((13, 2, 8, 4, 6, 15, 11, 1, 10, 9, 3, 14, 5, 0, 12, 7),
     (1, 15, 13, 8, 10, 3, 7, 4, 12, 5, 6, 11, 0, 14, 9, 2),
     (7, 11, 4, 1, 9, 12, 14, 2, 0, 6, 10, 13, 15, 3, 5, 8),
     (2, 1, 14, 7, 4, 10, 8, 13, 15, 12, 9, 0, 3, 5, 6, 11)),
)

# 1-based positions of the parity bits in a 64-bit key; PC-1 drops them.
PARITY_BIT_POSITIONS = tuple(range(8, 65, 8))
# The 56 positions that actually enter the key schedule.
EFFECTIVE_KEY_BIT_POSITIONS = tuple(
    p for p in range(1, 65) if p not in PARITY_BIT_POSITIONS
)


def permute(value: int, table: Sequence[int], in_width: int) -> int:
    """Bit permutation: output bit j is input bit table[j] (1-based, MSB first)."""
    out = 0
    for pos in table:
        out = (out << 1) | ((value >> (in_width - pos)) & 1)
    return out


def _byte_tables(table: Sequence[int], in_width: int) -> tuple[tuple[int, ...], ...]:
    # tabs[b][v] = permutation of (v placed in input byte b); OR over bytes
    # reproduces the full permutation.
    nbytes = in_width // 8
    tabs = []
    for b in range(nbytes):
        shift = in_width - 8 * (b + 1)
        tabs.append(tuple(permute(v << shift, table, in_width) for v in range(256)))
    return tuple(tabs)


_IP_T = _byte_tables(_IP, 64)
_FP_T = _byte_tables(_FP, 64)
_E_T = _byte_tables(_E, 32)


def _sp_tables() -> tuple[tuple[int, ...], ...]:
    # S-box output routed through P, per 6-bit input chunk.
    tabs = []
    for i, box in enumerate(_SBOXES):
        tab = []
        for six in range(64):
            row = ((six & 0b100000) >> 4) | (six & 1)
            col = (six >> 1) & 0xF
            tab.append(permute(box[row][col] << (4 * (7 - i)), _P, 32))
        tabs.append(tuple(tab))
    return tuple(tabs)


_SP = _sp_tables()


def round_keys(key64: int) -> tuple[int, ...]:
    """The 16 48-bit round keys for a 64-bit key (parity bits ignored)."""
    k56 = permute(key64, _PC1, 64)
    c, d = k56 >> 28, k56 & 0xFFFFFFF
    rks = []
    for s in _SHIFTS:
        c = ((c << s) | (c >> (28 - s))) & 0xFFFFFFF
        d = ((d << s) | (d >> (28 - s))) & 0xFFFFFFF
        rks.append(permute((c << 28) | d, _PC2, 56))
    return tuple(rks)


def _crypt(rks: Sequence[int], block: int) -> int:
    t0, t1, t2, t3, t4, t5, t6, t7 = _IP_T
    x = (t0[block >> 56] | t1[(block >> 48) & 255] | t2[(block >> 40) & 255]
         | t3[(block >> 32) & 255] | t4[(block >> 24) & 255]
         | t5[(block >> 16) & 255] | t6[(block >> 8) & 255] | t7[block & 255])
    left, right = x >> 32, x & 0xFFFFFFFF
    e0, e1, e2, e3 = _E_T
    s0, s1, s2, s3, s4, s5, s6, s7 = _SP
    for k in rks:
        er = (e0[right >> 24] | e1[(right >> 16) & 255]
              | e2[(right >> 8) & 255] | e3[right & 255]) ^ k
        f = (s0[er >> 42] | s1[(er >> 36) & 63] | s2[(er >> 30) & 63]
             | s3[(er >> 24) & 63] | s4[(er >> 18) & 63] | s5[(er >> 12) & 63]
             | s6[(er >> 6) & 63] | s7[er & 63])
        left, right = right, left ^ f
    y = (right << 32) | left
    f0, f1, f2, f3, f4, f5, f6, f7 = _FP_T
    return (f0[y >> 56] | f1[(y >> 48) & 255] | f2[(y >> 40) & 255]
            | f3[(y >> 32) & 255] | f4[(y >> 24) & 255] | f5[(y >> 16) & 255]
            | f6[(y >> 8) & 255] | f7[y & 255])


class DesKey:
    """A DES key with precomputed round keys.

    Stored as the conventional 64-bit form; the 8 parity bits are ignored,
    so two keys compare equal iff their 56 effective bits agree.
    """

    __slots__ = ("key64", "_effective", "_round_keys", "_reverse_keys")

    def __init__(self, key64: int):
        if not 0 <= key64 <= MASK64:
            raise ValueError("DES key must fit in 64 bits")
        self.key64 = key64
        self._effective = permute(key64, _PC1, 64)
        self._round_keys = round_keys(key64)
        self._reverse_keys = tuple(reversed(self._round_keys))

    @classmethod
    def from_bytes(cls, data: bytes) -> "DesKey":
        if len(data) != 8:
            raise ValueError("DES key must be 8 bytes")
        return cls(int.from_bytes(data, "big"))

    def to_bytes(self) -> bytes:
        return self.key64.to_bytes(8, "big")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DesKey):
            return NotImplemented
        return self._effective == other._effective

    def __hash__(self) -> int:
        return hash(self._effective)

    def __repr__(self) -> str:
        return f"DesKey(0x{self.key64:016x})"


def des_encrypt_block(key: DesKey, block: int) -> int:
    """Forward DES permutation of one 64-bit block."""
    return _crypt(key._round_keys, block)


def des_decrypt_block(key: DesKey, block: int) -> int:
    """Inverse DES permutation of one 64-bit block."""
    return _crypt(key._reverse_keys, block)


def hamming_weight(block: int) -> int:
    return block.bit_count()


def set_effective_bits(key64: int, value: int, n_bits: int) -> int:
    """Overwrite the n_bits lowest-index effective (non-parity) key bits.

    Bit j of ``value`` lands in effective position j (FIPS numbering),
    leaving parity positions untouched. Used to enumerate reduced key
    subspaces of exactly n_bits of entropy.
    """
    if not 0 <= n_bits <= 56:
        raise ValueError("n_bits must be in [0, 56]")
    if value >> n_bits:
        raise ValueError("value does not fit in n_bits")
    out = key64
    for j in range(n_bits):
        pos = EFFECTIVE_KEY_BIT_POSITIONS[j]
        mask = 1 << (64 - pos)
        if (value >> j) & 1:
            out |= mask
        else:
            out &= ~mask
    return out & MASK64
