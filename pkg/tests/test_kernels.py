"""Backend equivalence: compiled kernels must match the pure-Python twins."""

import random

import pytest

from rainbowcc import _kernels_py as pure
from rainbowcc import kernels

try:
    from rainbowcc import _kernels as compiled
except ImportError:
    compiled = None


def slow_mul(a, b):
    """Shift-and-reduce reference multiply, no tables."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= 0x11D
    return r


def test_pure_mul_matches_shift_reference_everywhere():
    for a in range(256):
        for b in range(256):
            assert pure.gf256_mul(a, b) == slow_mul(a, b)


@pytest.mark.skipif(compiled is None, reason="extension not built")
def test_compiled_mul_matches_shift_reference_everywhere():
    for a in range(256):
        for b in range(256):
            assert compiled.gf256_mul(a, b) == slow_mul(a, b)


@pytest.mark.parametrize("size", [0, 1, 7, 64, 1024])
def test_backends_agree_on_packets(size):
    rng = random.Random(42)
    a = bytes(rng.randrange(256) for _ in range(size))
    b = bytes(rng.randrange(256) for _ in range(size))
    impls = [pure] + ([compiled] if compiled is not None else [])
    xor_results = {impl.xor_bytes(a, b) for impl in impls}
    assert len(xor_results) == 1
    for k in (0, 1, 2, 77, 255):
        scale_results = {impl.gf256_scale(a, k) for impl in impls}
        assert len(scale_results) == 1
        for impl in impls:
            acc = bytearray(b)
            impl.gf256_axpy(acc, a, k)
            assert bytes(acc) == impl.xor_bytes(b, impl.gf256_scale(a, k))


def test_xor_roundtrip_and_length_guard():
    a, b = b"\x01\x02\x03", b"\xff\x00\x10"
    assert kernels.xor_bytes(kernels.xor_bytes(a, b), b) == a
    with pytest.raises(ValueError):
        kernels.xor_bytes(a, b"\x00")


def test_scale_by_zero_and_one():
    v = bytes(range(10))
    assert kernels.gf256_scale(v, 0) == bytes(10)
    assert kernels.gf256_scale(v, 1) == v


def test_backend_reports_a_name():
    assert kernels.backend() in ("cython", "python")
