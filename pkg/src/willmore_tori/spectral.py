"""Periodic grids: trigonometric differentiation, interpolation, quadrature.

All routines assume samples on the uniform grid ``t_j = j * period / N``.
"""
from __future__ import annotations

import numpy as np

# 8th-order central stencils (offsets 1..4) for first and second derivatives.
_FD8_D1 = np.array([4 / 5, -1 / 5, 4 / 105, -1 / 280])
_FD8_D2 = np.array([8 / 5, -1 / 5, 8 / 315, -1 / 560])
_FD8_D2_CENTER = -205 / 72


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def grid(period: float, n: int) -> np.ndarray:
    return period * np.arange(n) / n


def wavenumbers(n: int, period: float) -> np.ndarray:
    return 2 * np.pi * np.fft.fftfreq(n, d=period / n)


def fourier_derivative(f, period, order=1, axis=0):
    """Spectral derivative of real periodic samples along ``axis``.

    For even ``N`` the Nyquist mode is dropped for odd ``order`` so that the
    result stays real and matches the derivative of the real interpolant.
    """
    f = np.asarray(f, dtype=float)
    if order == 0:
        return f.copy()
    n = f.shape[axis]
    k = wavenumbers(n, period)
    mult = (1j * k) ** order
    if n % 2 == 0 and order % 2 == 1:
        mult[n // 2] = 0.0
    shape = [1] * f.ndim
    shape[axis] = n
    spec = np.fft.fft(f, axis=axis) * mult.reshape(shape)
    return np.fft.ifft(spec, axis=axis).real


def _fd8_once(f, h, which, axis):
    out = np.zeros_like(f)
    if which == 1:
        for m, c in enumerate(_FD8_D1, start=1):
            out += c * (np.roll(f, -m, axis=axis) - np.roll(f, m, axis=axis))
        return out / h
    out += _FD8_D2_CENTER * f
    for m, c in enumerate(_FD8_D2, start=1):
        out += c * (np.roll(f, -m, axis=axis) + np.roll(f, m, axis=axis))
    return out / h**2


def fd8_derivative(f, period, order=1, axis=0):
    """Periodic 8th-order central finite differences (orders composed from 1 and 2)."""
    f = np.asarray(f, dtype=float)
    h = period / f.shape[axis]
    out = f
    remaining = order
    while remaining >= 2:
        out = _fd8_once(out, h, 2, axis)
        remaining -= 2
    if remaining:
        out = _fd8_once(out, h, 1, axis)
    return out if order else f.copy()


def derivative(f, period, order=1, axis=0, method="auto"):
    """Dispatch between spectral (power-of-two grids) and FD8 (anything else)."""
    n = np.shape(f)[axis]
    if method == "auto":
        method = "spectral" if is_power_of_two(n) else "fd8"
    if method == "spectral":
        return fourier_derivative(f, period, order, axis)
    if method == "fd8":
        return fd8_derivative(f, period, order, axis)
    raise ValueError(f"unknown differentiation method {method!r}")


def trapezoid(f, period, axis=0):
    """Periodic trapezoid rule; spectrally accurate for smooth periodic integrands."""
    f = np.asarray(f, dtype=float)
    return f.mean(axis=axis) * period


class FourierSeries:
    """Real trigonometric interpolant of periodic samples.

    Evaluates the interpolant, its derivatives, or (with ``antiderivative``)
    the primitive of the zero-mean part plus ``mean * t``.
    """

    def __init__(self, samples, period):
        samples = np.asarray(samples, dtype=float)
        self.period = float(period)
        self.n = samples.shape[0]
        coef = np.fft.fft(samples, axis=0) / self.n
        if self.n % 2 == 0:
            # split the Nyquist term symmetrically so the interpolant is real
            nyq = coef[self.n // 2] / 2
            coef = np.concatenate([coef[: self.n // 2], nyq[None], coef[self.n // 2 + 1 :], nyq[None]])
            freqs = np.concatenate(
                [np.arange(self.n // 2), [self.n // 2], np.arange(-self.n // 2 + 1, 0), [-self.n // 2]]
            )
        else:
            freqs = np.fft.fftfreq(self.n, d=1.0 / self.n).astype(int)
        self.coef = coef
        self.omega = 2 * np.pi * freqs / self.period

    @property
    def mean(self):
        return self.coef[0].real

    def __call__(self, t, order=0):
        t = np.asarray(t, dtype=float)
        phase = np.exp(1j * np.multiply.outer(t, self.omega))
        mult = (1j * self.omega) ** order
        c = self.coef * mult.reshape((-1,) + (1,) * (self.coef.ndim - 1))
        return np.tensordot(phase, c, axes=(-1, 0)).real

    def antiderivative(self, t):
        t = np.asarray(t, dtype=float)
        om = self.omega.copy()
        inv = np.zeros_like(om, dtype=complex)
        nz = om != 0
        inv[nz] = 1.0 / (1j * om[nz])
        c = self.coef * inv.reshape((-1,) + (1,) * (self.coef.ndim - 1))
        phase = np.exp(1j * np.multiply.outer(t, om))
        base = np.tensordot(phase, c, axes=(-1, 0)).real
        base0 = np.tensordot(np.ones_like(om), c, axes=(-1, 0)).real
        return base - base0 + np.multiply.outer(t, self.coef[0].real)


def denoise(f, rel=1e-11, axis=0):
    """Zero Fourier coefficients below ``rel`` times the largest one.

    Curvatures obtained from high derivatives carry rounding noise spread
    over all modes; repeated spectral differentiation amplifies it by
    ``k^p``.  Coefficients at this level carry no resolved signal.
    """
    f = np.asarray(f, dtype=float)
    spec = np.fft.fft(f, axis=axis)
    mag = np.abs(spec)
    spec[mag < rel * mag.max()] = 0.0
    return np.fft.ifft(spec, axis=axis).real
