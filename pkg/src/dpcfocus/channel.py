"""Polarized line-of-sight channel between crossed TX dipoles and an RX dipole.

The complex gain from one transmit dipole to the receive dipole is a product
of four factors: the free-space amplitude and delay phase, the field patterns
of the transmitting and receiving dipoles, and the projection of the impinging
electric field onto the receive dipole. All four vary across a large aperture
at short range, so every antenna gets its own evaluation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .geometry import ANTENNA_ORDERING, X_HAT, Y_HAT, ArrayLayout, RxPose

SIN_THETA_FLOOR = 1e-9
"Below this sin(theta) the dipole pattern is pinned to its axial-null limit 0."

TRANSVERSE_FLOOR = 1e-12
"Below this transverse norm the impinging-field direction is degenerate."


def unpolarized_gain(p_vec, wavelength: float) -> complex:
    """Free-space gain over the TX-to-RX displacement ``p_vec``.

    The magnitude falls off as wavelength/(4*pi*r) and the phase carries the
    propagation delay, -2*pi*r/wavelength.

    Raises
    ------
    ValueError
        If ``p_vec`` has zero length (co-located TX and RX).
    """
    r = float(np.linalg.norm(p_vec))
    if r == 0.0:
        raise ValueError("TX and RX are co-located; the path gain is undefined")
    return (wavelength / (4.0 * math.pi * r)) * cmath.exp(-2j * math.pi * r / wavelength)


def dipole_pattern(theta, length_over_wavelength: float = 0.5):
    """Normalized dipole field pattern at polar angle ``theta`` off the axis.

    Accepts scalars or arrays (radians). The axial direction (sin(theta)
    below ``SIN_THETA_FLOOR``) returns 0, the analytic limit for the
    half-wave dipole.
    """
    theta = np.asarray(theta, dtype=float)
    out = _pattern(np.cos(theta), np.sin(theta), length_over_wavelength)
    if out.ndim == 0:
        return float(out)
    return out


def _pattern(cos_theta, sin_theta, length_over_wavelength):
    # (cos(pi*L*cos(theta)) - cos(pi*L)) / sin(theta), L in wavelengths
    k = math.pi * length_over_wavelength
    num = np.cos(k * np.asarray(cos_theta))
    num -= math.cos(k)
    sin_theta = np.asarray(sin_theta)
    return np.divide(
        num,
        sin_theta,
        out=np.zeros_like(num),
        where=sin_theta >= SIN_THETA_FLOOR,
    )


def impinging_field_dir(u_hat, p_hat) -> np.ndarray:
    """Unit direction of the electric field arriving along ``p_hat`` from a
    dipole oriented along ``u_hat``.

    This is the transverse part of the dipole direction, p x (u x p),
    normalized. When ``u_hat`` and ``p_hat`` are (anti)parallel the
    transverse part vanishes and the zero vector is returned to mark the
    degeneracy; the dipole does not radiate along its own axis, so the
    channel term is zero there regardless.
    """
    u = np.asarray(u_hat, dtype=float)
    p = np.asarray(p_hat, dtype=float)
    w = np.cross(p, np.cross(u, p))
    n = np.linalg.norm(w)
    if n < TRANSVERSE_FLOOR:
        return np.zeros(3)
    return w / n


def polarized_gain(u_hat, v_hat, p_vec, wavelength: float, dipole_length: float) -> complex:
    """Complex gain from one TX dipole (along ``u_hat``) into the RX dipole
    (along ``v_hat``) over the displacement ``p_vec``.

    Composes the free-space term with the two field patterns and the
    polarization projection. The TX pattern is evaluated at the angle
    between the dipole and the departing ray; the RX pattern at the angle
    between the receive dipole and the arriving ray (the reversed
    direction).
    """
    p_vec = np.asarray(p_vec, dtype=float)
    u = np.asarray(u_hat, dtype=float)
    v = np.asarray(v_hat, dtype=float)
    h_up = unpolarized_gain(p_vec, wavelength)
    p_hat = p_vec / np.linalg.norm(p_vec)
    ratio = dipole_length / wavelength
    theta_tx = math.acos(float(np.clip(np.dot(u, p_hat), -1.0, 1.0)))
    theta_rx = math.pi - math.acos(float(np.clip(np.dot(v, p_hat), -1.0, 1.0)))
    g_tx = dipole_pattern(theta_tx, ratio)
    g_rx = dipole_pattern(theta_rx, ratio)
    beta = float(np.dot(v, impinging_field_dir(u, p_hat)))
    return h_up * (g_tx * g_rx * beta)


@dataclass
class PolarizedChannel:
    """Complex channel vectors for the x- and y-oriented TX dipole sets.

    Entries follow the antenna ordering named by ``layout_ref``.
    """

    h_x: np.ndarray
    h_y: np.ndarray
    layout_ref: str = ANTENNA_ORDERING

    def __post_init__(self):
        self.h_x = np.asarray(self.h_x, dtype=complex)
        self.h_y = np.asarray(self.h_y, dtype=complex)
        if self.h_x.ndim != 1 or self.h_x.shape != self.h_y.shape:
            raise ValueError("h_x and h_y must be 1-D arrays of equal length")

    @property
    def n_tx(self) -> int:
        return self.h_x.shape[0]


class ChannelGeometry:
    """Position-dependent channel factors, reusable across RX orientations.

    Precomputes everything that depends only on the array and the RX center:
    per-antenna displacement directions, free-space gains, TX patterns for
    both dipole orientations, and impinging-field directions. The remaining
    orientation-dependent factors are added by :meth:`channel_for`, which is
    the cheap part of an orientation sweep.
    """

    def __init__(self, layout: ArrayLayout, rx_center):
        rx = np.asarray(rx_center, dtype=float)
        disp = rx[None, :] - layout.positions
        dist = np.linalg.norm(disp, axis=1)
        if np.any(dist == 0.0):
            raise ValueError("RX is co-located with a TX element")
        wavelength = layout.wavelength
        self.layout = layout
        self.rx_center = rx
        self.distances = dist
        self.p_hat = disp / dist[:, None]
        self.pattern_ratio = layout.dipole_length / wavelength
        self.h_up = (wavelength / (4.0 * math.pi) / dist) * np.exp(
            (-2j * math.pi / wavelength) * dist
        )
        cos_tx_x = self.p_hat[:, 0]
        cos_tx_y = self.p_hat[:, 1]
        self.g_tx_x = _pattern(cos_tx_x, _sin_from_cos(cos_tx_x), self.pattern_ratio)
        self.g_tx_y = _pattern(cos_tx_y, _sin_from_cos(cos_tx_y), self.pattern_ratio)
        self.e_x = _transverse_unit(X_HAT, self.p_hat, cos_tx_x)
        self.e_y = _transverse_unit(Y_HAT, self.p_hat, cos_tx_y)

    def channel_for(self, v_hat) -> PolarizedChannel:
        "Channel vectors for a receive dipole along the unit vector ``v_hat``."
        v = np.asarray(v_hat, dtype=float)
        cos_vp = self.p_hat @ v
        # theta_rx = pi - arccos(v . p_hat): cosine flips sign, sine unchanged
        g_rx = _pattern(-cos_vp, _sin_from_cos(cos_vp), self.pattern_ratio)
        real_x = self.g_tx_x * g_rx
        real_x *= self.e_x @ v
        real_y = self.g_tx_y * g_rx
        real_y *= self.e_y @ v
        return PolarizedChannel(h_x=self.h_up * real_x, h_y=self.h_up * real_y)


def _sin_from_cos(cos_theta):
    s = 1.0 - np.square(cos_theta)
    np.maximum(s, 0.0, out=s)
    return np.sqrt(s, out=s)


def _transverse_unit(u, p_hat, cos_up):
    # u - (u . p) p, normalized per row; zero rows mark the axial degeneracy
    w = u[None, :] - cos_up[:, None] * p_hat
    n = np.linalg.norm(w, axis=1)
    out = np.zeros_like(w)
    ok = n >= TRANSVERSE_FLOOR
    out[ok] = w[ok] / n[ok, None]
    return out


def assemble_channel(layout: ArrayLayout, pose: RxPose) -> PolarizedChannel:
    """Channel vectors h_x, h_y from every TX element to the posed receiver.

    Entry k uses the displacement from the k-th element to the RX center;
    h_x takes the TX dipole along x, h_y the one along y.
    """
    return ChannelGeometry(layout, pose.position).channel_for(pose.v_hat)
