"""Chirp (Bluestein) discrete Fourier transform for arbitrary, in particular
prime, lengths.

The length-``n`` transform is rewritten as a linear convolution with the
chirp ``exp(-sign * pi i m^2 / n)`` using ``t*d = (t^2 + d^2 - (t-d)^2) / 2``,
and the convolution is evaluated with power-of-two FFTs.
"""

import numpy as np

__all__ = ["chirp_dft", "naive_dft"]


def _chirp(n, sign):
    # m^2 is reduced mod 2n in exact integer arithmetic before scaling, so
    # the phase stays accurate for large m.
    m = np.arange(n, dtype=np.int64)
    return np.exp(sign * 1j * np.pi * ((m * m) % (2 * n)) / n)


def chirp_dft(x, sign=-1):
    """Return ``X[t] = sum_d x[d] * exp(sign * 2 pi i t d / n)``.

    Parameters
    ----------
    x : array_like
        Input sequence of length ``n``.
    sign : {-1, +1}
        Sign of the exponent.  ``-1`` matches :func:`numpy.fft.fft`.
    """
    x = np.asarray(x, dtype=complex)
    if x.ndim != 1:
        raise ValueError("chirp_dft expects a one-dimensional sequence")
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    n = x.size
    if n == 0:
        return x.copy()
    w = _chirp(n, sign)
    nfft = 1 << int(2 * n - 1).bit_length()
    a = np.zeros(nfft, dtype=complex)
    a[:n] = x * w
    b = np.zeros(nfft, dtype=complex)
    b[:n] = np.conj(w)
    b[nfft - n + 1:] = np.conj(w[1:][::-1])
    conv = np.fft.ifft(np.fft.fft(a) * np.fft.fft(b))
    return w * conv[:n]


def naive_dft(x, sign=-1):
    """Direct O(n^2) transform with the same convention as :func:`chirp_dft`."""
    x = np.asarray(x, dtype=complex)
    n = x.size
    idx = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(sign * 2j * np.pi * idx / n) @ x
