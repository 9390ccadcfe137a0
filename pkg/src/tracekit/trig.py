"""Bit-reproducible sine and cosine.

Platform libm implementations of sin/cos differ by an ULP or two across
OS/CPU combinations, which is enough to break bit-exact replay of any
physics that uses them. These versions use only IEEE-754 binary64
add/subtract/multiply/divide (correctly rounded everywhere), so the same
input yields the same output bits on every platform.

Method: Cody-Waite range reduction to r in [-pi/4, pi/4] with a two-part
representation of pi/2, then fixed-degree minimax polynomials (the
classic degree-13 sine / degree-14 cosine kernels). Absolute accuracy is
a couple of ULP for |x| up to ~1e5 and degrades slowly beyond; exactness
is not the contract, reproducibility is.
"""

from __future__ import annotations

_INV_PIO2 = 6.36619772367581382433e-01  # 2/pi
_PIO2_HI = 1.57079632673412561417e+00  # first 33 bits of pi/2
_PIO2_LO = 6.07710050650619224932e-11  # pi/2 - _PIO2_HI
_QUARTER_PI = 0.7853981633974483

_S1 = -1.66666666666666324348e-01
_S2 = 8.33333333332248946124e-03
_S3 = -1.98412698298579493134e-04
_S4 = 2.75573137070700676789e-06
_S5 = -2.50507602534068634195e-08
_S6 = 1.58969099521155010221e-10

_C1 = 4.16666666666666019037e-02
_C2 = -1.38888888888741095749e-03
_C3 = 2.48015872894767294178e-05
_C4 = -2.75573143513906633035e-07
_C5 = 2.08757232129817482790e-09
_C6 = -1.13596475577881948265e-11


def _sin_kernel(r: float) -> float:
    z = r * r
    return r + r * z * (_S1 + z * (_S2 + z * (_S3 + z * (_S4 + z * (_S5 + z * _S6)))))


def _cos_kernel(r: float) -> float:
    z = r * r
    return 1.0 - 0.5 * z + z * z * (_C1 + z * (_C2 + z * (_C3 + z * (_C4 + z * (_C5 + z * _C6)))))


def _reduce(x: float) -> tuple[int, float]:
    """Return (quadrant, r) with x ~ quadrant*(pi/2) + r, |r| <= pi/4."""
    n = int(x * _INV_PIO2 + (0.5 if x >= 0.0 else -0.5))
    fn = float(n)
    r = (x - fn * _PIO2_HI) - fn * _PIO2_LO
    return n & 3, r


def sin(x: float) -> float:
    if -_QUARTER_PI <= x <= _QUARTER_PI:
        return _sin_kernel(x)
    quadrant, r = _reduce(x)
    if quadrant == 0:
        return _sin_kernel(r)
    if quadrant == 1:
        return _cos_kernel(r)
    if quadrant == 2:
        return -_sin_kernel(r)
    return -_cos_kernel(r)


def cos(x: float) -> float:
    if -_QUARTER_PI <= x <= _QUARTER_PI:
        return _cos_kernel(x)
    quadrant, r = _reduce(x)
    if quadrant == 0:
        return _cos_kernel(r)
    if quadrant == 1:
        return -_sin_kernel(r)
    if quadrant == 2:
        return -_cos_kernel(r)
    return _sin_kernel(r)
