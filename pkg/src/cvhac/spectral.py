"""DFT, inverse DFT, periodogram and leave-one-out frequency surgery.

Conventions: the forward transform is normalized by ``1/n``, so
``J[j] = (1/n) sum_t V_t exp(-i w_j t)`` with ``w_j = 2 pi j / n``, and the
inverse is the plain sum ``V_t = sum_j J[j] exp(i w_j t)``. Arrays are
``(n, k)`` with time or frequency along axis 0.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, NumericalError

STANDARD = "standard"
DEMEANED = "demeaned"


def fourier_frequencies(n: int) -> np.ndarray:
    return 2 * np.pi * np.arange(n) / n


def dft(V) -> np.ndarray:
    V = np.asarray(V)
    if V.shape[0] < 2:
        raise ConfigError("DFT needs at least two observations")
    return np.fft.fft(V, axis=0) / V.shape[0]


def idft(J) -> np.ndarray:
    """Inverse of :func:`dft`. Returns complex values; see :func:`idft_real`."""
    J = np.asarray(J)
    return np.fft.ifft(J, axis=0) * J.shape[0]


def idft_real(J, tol: float = 1e-10) -> np.ndarray:
    """Inverse DFT of a conjugate-symmetric sequence, checked to be real."""
    x = idft(J)
    scale = max(1.0, float(np.max(np.abs(x.real), initial=0.0)))
    if np.max(np.abs(x.imag), initial=0.0) > tol * scale:
        raise NumericalError("inverse DFT is not real; input is not conjugate symmetric")
    return x.real


def periodogram(J) -> np.ndarray:
    """``I[j] = (n / 2 pi) J[j] J[j]^*`` as an ``(n, k, k)`` array."""
    J = np.asarray(J)
    if J.ndim == 1:
        J = J[:, None]
    n = J.shape[0]
    return n / (2 * np.pi) * J[:, :, None] * J[:, None, :].conj()


def leave_one_out(J, j: int, variant: str = STANDARD) -> np.ndarray:
    """Replace the DFT at ``w_j`` (and its mirror ``w_{n-j}``) by neighbour averages.

    ``standard``: position ``j`` becomes ``(J[j-1] + J[j+1]) / 2`` with
    ``J[n] := J[0]``; position ``n-j`` gets the conjugate-symmetric counterpart
    ``(J[n-j-1] + J[n-j+1]) / 2`` so a real series stays real.

    ``demeaned``: as ``standard`` except for ``j in {1, n-1}``, where position 1
    takes ``J[2]`` and position ``n-1`` takes ``J[n-2]``, so the frequency-zero
    term never leaks into the replacement.
    """
    J = np.asarray(J)
    n = J.shape[0]
    if not 1 <= j <= n - 1:
        raise ConfigError(f"leave-one-out index must satisfy 1 <= j <= n-1, got j={j} (n={n})")
    if variant not in (STANDARD, DEMEANED):
        raise ConfigError(f"unknown leave-one-out variant {variant!r}")
    out = J.copy()
    if variant == DEMEANED and j in (1, n - 1):
        out[1] = J[2 % n]
        out[n - 1] = J[(n - 2) % n]
        return out
    mirror = n - j
    out[j] = (J[j - 1] + J[(j + 1) % n]) / 2
    if mirror != j:
        out[mirror] = (J[mirror - 1] + J[(mirror + 1) % n]) / 2
    return out


def leave_one_out_series(J, j: int, variant: str = STANDARD) -> np.ndarray:
    """The real series recovered from ``leave_one_out(J, j)``."""
    return idft_real(leave_one_out(J, j, variant))
