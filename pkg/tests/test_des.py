"""DES primitive against standard vectors, an independent reference
implementation, and its structural properties."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisycfb.des import (
    BLOCK_BITS,
    EFFECTIVE_KEY_BIT_POSITIONS,
    PARITY_BIT_POSITIONS,
    DesKey,
    des_decrypt_block,
    des_encrypt_block,
    hamming_weight,
    set_effective_bits,
)

# classic single-block known answers (key, plaintext, ciphertext)
KNOWN_ANSWERS = [
    (0x0000000000000000, 0x0000000000000000, 0x8CA64DE9C1B123A7),
    (0xFFFFFFFFFFFFFFFF, 0xFFFFFFFFFFFFFFFF, 0x7359B2163E4EDC58),
    (0x0123456789ABCDEF, 0x4E6F772069732074, 0x3FA40E8A984D4815),
    (0x133457799BBCDFF1, 0x0123456789ABCDEF, 0x85E813540F0AB405),
]


@pytest.mark.parametrize("key,plain,cipher", KNOWN_ANSWERS)
def test_known_answers(key, plain, cipher):
    k = DesKey(key)
    assert des_encrypt_block(k, plain) == cipher
    assert des_decrypt_block(k, cipher) == plain


def _reference_encrypt(key64: int, block64: int) -> int:
    # independent implementation: OpenSSL via the cryptography package
    # (two-key-equal TripleDES degenerates to single DES)
    from cryptography.hazmat.decrepit.ciphers.algorithms import TripleDES
    from cryptography.hazmat.primitives.ciphers import Cipher, modes

    kb = key64.to_bytes(8, "big")
    enc = Cipher(TripleDES(kb * 3), modes.ECB()).encryptor()
    out = enc.update(block64.to_bytes(8, "big")) + enc.finalize()
    return int.from_bytes(out, "big")


def test_matches_independent_reference():
    rng = np.random.default_rng(123)
    for _ in range(50):
        key = int(rng.integers(0, 2**64, dtype=np.uint64))
        block = int(rng.integers(0, 2**64, dtype=np.uint64))
        assert des_encrypt_block(DesKey(key), block) == _reference_encrypt(key, block)


@settings(max_examples=60, deadline=None)
@given(key=st.integers(0, 2**64 - 1), block=st.integers(0, 2**64 - 1))
def test_decrypt_inverts_encrypt(key, block):
    k = DesKey(key)
    assert des_decrypt_block(k, des_encrypt_block(k, block)) == block


def test_key_bit_flip_avalanche():
    # flipping one effective key bit flips about half the output bits
    rng = np.random.default_rng(7)
    total = 0
    trials = 400
    for _ in range(trials):
        key = int(rng.integers(0, 2**64, dtype=np.uint64))
        block = int(rng.integers(0, 2**64, dtype=np.uint64))
        pos = EFFECTIVE_KEY_BIT_POSITIONS[int(rng.integers(0, 56))]
        flipped = key ^ (1 << (64 - pos))
        total += hamming_weight(
            des_encrypt_block(DesKey(key), block)
            ^ des_encrypt_block(DesKey(flipped), block)
        )
    mean = total / trials
    assert 29.0 < mean < 35.0  # ~32 of 64


def test_parity_bits_ignored_for_equality_and_output():
    base = 0x0123456789ABCDEF
    k1 = DesKey(base)
    parity_mask = 0
    for pos in PARITY_BIT_POSITIONS:
        parity_mask |= 1 << (64 - pos)
    k2 = DesKey(base ^ parity_mask)
    assert k1 == k2
    assert hash(k1) == hash(k2)
    assert des_encrypt_block(k1, 42) == des_encrypt_block(k2, 42)
    # one effective bit makes them distinct
    k3 = DesKey(base ^ (1 << (64 - EFFECTIVE_KEY_BIT_POSITIONS[0])))
    assert k1 != k3
    assert des_encrypt_block(k1, 42) != des_encrypt_block(k3, 42)


def test_key_validation():
    with pytest.raises(ValueError):
        DesKey(-1)
    with pytest.raises(ValueError):
        DesKey(2**64)
    with pytest.raises(ValueError):
        DesKey.from_bytes(b"short")
    assert DesKey.from_bytes(bytes(8)).key64 == 0
    assert DesKey(0x12345678_9ABCDEF0).to_bytes().hex() == "123456789abcdef0"


def test_set_effective_bits_gives_distinct_keys():
    base = 0xFEDCBA9876543210
    keys = {DesKey(set_effective_bits(base, v, 10)) for v in range(2**10)}
    assert len(keys) == 2**10
    # parity positions untouched
    for v in (0, 517, 1023):
        out = set_effective_bits(base, v, 10)
        for pos in PARITY_BIT_POSITIONS:
            mask = 1 << (64 - pos)
            assert (out & mask) == (base & mask)


def test_set_effective_bits_validation():
    with pytest.raises(ValueError):
        set_effective_bits(0, 4, 2)
    with pytest.raises(ValueError):
        set_effective_bits(0, 0, 57)
