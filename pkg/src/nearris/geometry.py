"""Coordinate bookkeeping for BS, RIS, MU and scatterer positions.

All positions are length-3 float arrays (x, y, z) in meters in a shared
right-handed Cartesian frame. The RIS lies in the y-z plane and the BS
array in the x-z plane; element grids are uniformly spaced and centered
on the declared array center.
"""

from dataclasses import dataclass

import numpy as np

C = 299_792_458.0  # m/s, exact


def wavelength(f_hz):
    """Carrier wavelength c/f in meters."""
    if f_hz <= 0:
        raise ValueError(f"carrier frequency must be positive, got {f_hz}")
    return C / f_hz


def far_field_distance(aperture_m, lambda_m):
    """Fraunhofer distance 2*D^2/lambda separating near and far field."""
    if aperture_m <= 0:
        raise ValueError(f"aperture must be positive, got {aperture_m}")
    if lambda_m <= 0:
        raise ValueError(f"wavelength must be positive, got {lambda_m}")
    return 2.0 * aperture_m**2 / lambda_m


def _centered_offsets(count, spacing):
    return (np.arange(count) - (count - 1) / 2.0) * spacing


def _validate_grid(n_a, n_b, d_a, d_b):
    if n_a < 1 or n_b < 1:
        raise ValueError(f"element counts must be >= 1, got ({n_a}, {n_b})")
    if d_a <= 0 or d_b <= 0:
        raise ValueError(f"spacings must be positive, got ({d_a}, {d_b})")


@dataclass(frozen=True)
class RisGeometry:
    """Planar RIS in the y-z plane.

    Parameters
    ----------
    center : array-like of 3 floats
        Surface center position (meters).
    q_y, q_z : int
        Element counts along y and z.
    d_y, d_z : float
        Inter-element spacings (meters).

    Element order is row-major in (q_y, q_z): flat index n = q_y*q_z_count + q_z.
    Every phase vector in the package uses this order.
    """

    center: np.ndarray
    q_y: int
    q_z: int
    d_y: float
    d_z: float

    def __post_init__(self):
        _validate_grid(self.q_y, self.q_z, self.d_y, self.d_z)
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))

    @property
    def q(self):
        return self.q_y * self.q_z

    @property
    def aperture(self):
        """(L_y, L_z) edge-to-edge grid span counting one cell per element."""
        return self.q_y * self.d_y, self.q_z * self.d_z

    def element_positions(self):
        """All Q element positions, shape (Q, 3), canonical order."""
        oy = _centered_offsets(self.q_y, self.d_y)
        oz = _centered_offsets(self.q_z, self.d_z)
        yy, zz = np.meshgrid(oy, oz, indexing="ij")
        out = np.tile(self.center, (self.q, 1))
        out[:, 1] += yy.ravel()
        out[:, 2] += zz.ravel()
        return out


def ris_from_aperture(center, size_y_m, size_z_m, d_y, d_z):
    """RIS grid fitting a physical aperture: Q per axis = floor(size/spacing)."""
    q_y = int(np.floor(size_y_m / d_y))
    q_z = int(np.floor(size_z_m / d_z))
    return RisGeometry(center=center, q_y=q_y, q_z=q_z, d_y=d_y, d_z=d_z)


@dataclass(frozen=True)
class PlanarArrayGeometry:
    """Antenna array in the x-z plane (BS side), same grid conventions as the RIS."""

    center: np.ndarray
    n_x: int
    n_z: int
    d_x: float
    d_z: float

    def __post_init__(self):
        _validate_grid(self.n_x, self.n_z, self.d_x, self.d_z)
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))

    @property
    def n(self):
        return self.n_x * self.n_z

    def element_positions(self):
        """All N element positions, shape (N, 3), row-major in (n_x, n_z)."""
        ox = _centered_offsets(self.n_x, self.d_x)
        oz = _centered_offsets(self.n_z, self.d_z)
        xx, zz = np.meshgrid(ox, oz, indexing="ij")
        out = np.tile(self.center, (self.n, 1))
        out[:, 0] += xx.ravel()
        out[:, 2] += zz.ravel()
        return out
