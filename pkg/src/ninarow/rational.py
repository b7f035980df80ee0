"""Exact rational parameters and integer-exact power ceilings.

Game parameters epsilon and alpha are rationals; thresholds like
ceil(epsilon*n) must not wobble with float rounding (0.1 * 100 rounds
above 10, flipping the ceiling).  Floats are therefore interpreted by
their shortest decimal representation: as_fraction(0.1) == 1/10.
"""

import math
from fractions import Fraction


def as_fraction(value):
    """Coerce a parameter to an exact Fraction.

    Floats go through their shortest repr, so 0.1 means one tenth, not
    the nearest binary float.  Strings accept '1/3' and '0.25' alike.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite parameter {value!r}")
        return Fraction(str(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def ceil_mul(scale, value):
    """ceil(scale * value) computed exactly through Fractions."""
    return math.ceil(as_fraction(scale) * as_fraction(value))


def floor_mul(scale, value):
    """floor(scale * value) computed exactly through Fractions."""
    return math.floor(as_fraction(scale) * as_fraction(value))


def pow_ceil(t, alpha, scale=1):
    """Smallest integer k with k >= scale * t**alpha, exactly.

    t is a non-negative rational, alpha a positive rational, scale a
    positive rational.  Exactness matters at integer boundaries, e.g.
    t=1024, alpha=1/2 must give 32, never 33.
    """
    t = as_fraction(t)
    alpha = as_fraction(alpha)
    scale = as_fraction(scale)
    if t < 0:
        raise ValueError("t must be non-negative")
    if alpha <= 0 or scale <= 0:
        raise ValueError("alpha and scale must be positive")
    if t == 0:
        return 0
    p, q = alpha.numerator, alpha.denominator
    u, v = scale.numerator, scale.denominator
    tn, td = t.numerator, t.denominator
    # k >= (u/v) * (tn/td)^(p/q)  <=>  (k*v)^q * td^p >= u^q * tn^p.
    target = u**q * tn**p
    tdp = td**p
    k = int(round(float(u) * float(t) ** (p / q) / float(v)))
    if k < 0:
        k = 0
    while k > 0 and (k * v) ** q * tdp >= target:
        k -= 1
    while (k * v) ** q * tdp < target:
        k += 1
    return k
