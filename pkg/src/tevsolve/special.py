"""Bessel and Hankel functions of integer order for real and complex argument.

Scalar kernel shared by the disk determinant and the boundary-integral path.
Backed by the compiled Amos routines in :mod:`scipy.special`; this module adds
the supported-range checks, integer-order conventions, and error mapping the
rest of the package relies on.  All functions accept scalars or numpy arrays
and are pure and reentrant.

Supported range: ``|z| <= 1e4`` and order ``|m| <= 60``, which comfortably
covers every wavenumber the solvers visit (``k <= 10``, ``k*sqrt(n) <= 20``).
Within ``|z| <= 50`` values are accurate to better than 1e-12 relative.
"""

from __future__ import annotations

import numpy as np
import scipy.special as _sp

from .errors import RangeError, SingularityError

MAX_ORDER = 60
MAX_ABS_Z = 1.0e4
HANKEL_MIN_ABS_Z = 1.0e-8


def _check_argument(z, name: str = "z"):
    z = np.asarray(z)
    if not np.all(np.isfinite(z)):
        raise RangeError(f"{name} must be finite")
    if np.any(np.abs(z) > MAX_ABS_Z):
        raise RangeError(f"|{name}| exceeds supported range {MAX_ABS_Z:g}")
    return z


def _check_order(m: int, max_order: int = MAX_ORDER) -> int:
    if m != int(m):
        raise RangeError(f"order must be an integer, got {m!r}")
    m = int(m)
    if abs(m) > max_order:
        raise RangeError(f"order |m| = {abs(m)} exceeds supported range {max_order}")
    return m


def _finite_or_raise(value, what: str):
    if not np.all(np.isfinite(np.asarray(value))):
        raise RangeError(f"{what} overflowed or lost significance")
    return value


def bessel_j(m: int, z):
    """Bessel function of the first kind J_m(z), integer order.

    Negative orders use J_{-m}(z) = (-1)^m J_m(z).  Real input stays on the
    real path (the result dtype matches the input), so ``im(J_m(x)) == 0``
    exactly for real x.
    """
    m = _check_order(m)
    z = _check_argument(z)
    sign = 1.0
    if m < 0:
        m, sign = -m, (-1.0) ** m
    return _finite_or_raise(sign * _sp.jv(m, z), f"J_{m}")


def bessel_j_prime(m: int, z):
    """First derivative J'_m(z), via (J_{m-1} - J_{m+1})/2 (and -J_1 for m=0)."""
    m = _check_order(m)
    z = _check_argument(z)
    sign = 1.0
    if m < 0:
        m, sign = -m, (-1.0) ** m
    return _finite_or_raise(sign * _sp.jvp(m, z), f"J'_{m}")


def bessel_j_second(m: int, z):
    """Second derivative J''_m(z), via (J_{m-2} - 2 J_m + J_{m+2})/4."""
    m = _check_order(m)
    z = _check_argument(z)
    sign = 1.0
    if m < 0:
        m, sign = -m, (-1.0) ** m
    return _finite_or_raise(sign * _sp.jvp(m, z, n=2), f"J''_{m}")


def hankel1(m: int, z):
    """Hankel function of the first kind H^(1)_m(z) for m in {0, 1}.

    Requires ``re(z) > 0`` (away from the branch cut) and ``|z| >= 1e-8``;
    closer to the origin the logarithmic singularity must be handled by the
    caller's kernel splitting.
    """
    if m not in (0, 1):
        raise RangeError(f"hankel1 supports orders 0 and 1 only, got {m}")
    z = _check_argument(z)
    za = np.abs(z)
    if np.any(za < HANKEL_MIN_ABS_Z):
        raise SingularityError(
            f"|z| < {HANKEL_MIN_ABS_Z:g}: too close to the logarithmic singularity"
        )
    if np.any(np.real(z) <= 0):
        raise RangeError("hankel1 requires re(z) > 0")
    return _finite_or_raise(_sp.hankel1(m, z), f"H1_{m}")


def bessel_j_positive_root(m: int, index: int) -> float:
    """index-th positive root j_{m,index} of J_m, with |J_m(root)| <= 1e-12."""
    m = _check_order(m, max_order=10)
    if m < 0:
        raise RangeError("positive roots are tabulated for m >= 0 only")
    if not 1 <= index <= 20:
        raise RangeError(f"root index must be in 1..20, got {index}")
    return float(_sp.jn_zeros(m, index)[-1])
