"""Pure-Python packet kernels: XOR and GF(2^8) scale/accumulate.

Fallback twin of the compiled extension module with the same call surface.
Kept dependency-free: XOR goes through big-int conversion, scaling through
bytes.translate with per-scalar lookup tables.
"""

BACKEND = "python"

_POLY = 0x11D  # x^8 + x^4 + x^3 + x^2 + 1


def _build_tables():
    exp = [0] * 510
    log = [0] * 256
    x = 1
    for i in range(255):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & 0x100:
            x ^= _POLY
    for i in range(255, 510):
        exp[i] = exp[i - 255]
    return exp, log


_EXP, _LOG = _build_tables()


def gf256_mul(a, b):
    """Product of two field elements in GF(2^8), polynomial 0x11D."""
    if a == 0 or b == 0:
        return 0
    return _EXP[_LOG[a] + _LOG[b]]


_scale_tables = {}


def _scale_table(k):
    table = _scale_tables.get(k)
    if table is None:
        table = bytes(gf256_mul(k, v) for v in range(256))
        _scale_tables[k] = table
    return table


def xor_bytes(a, b):
    """XOR of two equal-length byte strings."""
    if len(a) != len(b):
        raise ValueError("xor_bytes operands differ in length")
    n = len(a)
    return (int.from_bytes(a, "big") ^ int.from_bytes(b, "big")).to_bytes(n, "big")


def xor_into(acc, v):
    """In-place acc ^= v for a bytearray acc."""
    if len(acc) != len(v):
        raise ValueError("xor_into operands differ in length")
    acc[:] = xor_bytes(bytes(acc), bytes(v))


def gf256_scale(v, k):
    """Bytewise field multiply of packet v by scalar k."""
    if k == 0:
        return bytes(len(v))
    if k == 1:
        return bytes(v)
    return bytes(v).translate(_scale_table(k))


def gf256_axpy(acc, v, k):
    """In-place acc ^= k*v over GF(2^8) for a bytearray acc."""
    if k == 0:
        return
    xor_into(acc, gf256_scale(v, k))
