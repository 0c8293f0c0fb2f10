# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled packet kernels: XOR and GF(2^8) scale/accumulate.

Same call surface as the pure-Python twin; selected by rainbowcc.kernels
when the extension built successfully.
"""

BACKEND = "cython"

cdef int _POLY = 0x11D

cdef unsigned char _EXP[510]
cdef unsigned char _LOG[256]
cdef unsigned char _MUL[65536]


cdef void _build_tables():
    cdef int i, x, a, b
    x = 1
    for i in range(255):
        _EXP[i] = <unsigned char> x
        _LOG[x] = <unsigned char> i
        x <<= 1
        if x & 0x100:
            x ^= _POLY
    for i in range(255, 510):
        _EXP[i] = _EXP[i - 255]
    for a in range(256):
        _MUL[a] = 0            # a * 0
        _MUL[a << 8] = 0       # 0 * a
    for a in range(1, 256):
        for b in range(1, 256):
            _MUL[(a << 8) | b] = _EXP[_LOG[a] + _LOG[b]]


_build_tables()


def gf256_mul(int a, int b):
    """Product of two field elements in GF(2^8), polynomial 0x11D."""
    if not (0 <= a < 256 and 0 <= b < 256):
        raise ValueError("operands outside GF(2^8)")
    return _MUL[(a << 8) | b]


def xor_bytes(const unsigned char[::1] a, const unsigned char[::1] b):
    """XOR of two equal-length byte strings."""
    cdef Py_ssize_t n = a.shape[0]
    if b.shape[0] != n:
        raise ValueError("xor_bytes operands differ in length")
    out = bytearray(n)
    cdef unsigned char[::1] o = out
    cdef Py_ssize_t i
    for i in range(n):
        o[i] = a[i] ^ b[i]
    return bytes(out)


def xor_into(unsigned char[::1] acc, const unsigned char[::1] v):
    """In-place acc ^= v for a bytearray acc."""
    cdef Py_ssize_t n = acc.shape[0]
    if v.shape[0] != n:
        raise ValueError("xor_into operands differ in length")
    cdef Py_ssize_t i
    for i in range(n):
        acc[i] ^= v[i]


def gf256_scale(const unsigned char[::1] v, int k):
    """Bytewise field multiply of packet v by scalar k."""
    if not 0 <= k < 256:
        raise ValueError("scalar outside GF(2^8)")
    cdef Py_ssize_t n = v.shape[0]
    out = bytearray(n)
    cdef unsigned char[::1] o = out
    cdef Py_ssize_t i
    cdef int base = k << 8
    if k == 0:
        return bytes(out)
    for i in range(n):
        o[i] = _MUL[base | v[i]]
    return bytes(out)


def gf256_axpy(unsigned char[::1] acc, const unsigned char[::1] v, int k):
    """In-place acc ^= k*v over GF(2^8) for a bytearray acc."""
    if not 0 <= k < 256:
        raise ValueError("scalar outside GF(2^8)")
    if k == 0:
        return
    cdef Py_ssize_t n = acc.shape[0]
    if v.shape[0] != n:
        raise ValueError("gf256_axpy operands differ in length")
    cdef Py_ssize_t i
    cdef int base = k << 8
    for i in range(n):
        acc[i] ^= _MUL[base | v[i]]
