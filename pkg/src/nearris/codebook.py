"""RIS phase-shift codewords: point focusing, wide illumination, hierarchy.

A codeword is a length-Q vector of phases (radians) in the canonical RIS
element order. The generalized reflection coefficient (GRCS) aggregates
the per-element contributions between a source point and an observation
point; focusing codewords make every summand real-positive at the target,
wide-illumination codewords spread the reflected energy over one cell of
a rectangular blockage area.
"""

import warnings
from dataclasses import dataclass

import numpy as np

_TWO_PI = 2.0 * np.pi


def unit_cell_factor(geom, lambda_m):
    """Per-element reflection gain g = 4*pi*d_y*d_z/lambda^2 (pi at half-wavelength spacing)."""
    return 4.0 * np.pi * geom.d_y * geom.d_z / lambda_m**2


@dataclass(frozen=True)
class BlockageArea:
    """Rectangle centered at p_b, extents r_x by r_y, at the fixed height p_b[2]."""

    center: np.ndarray
    r_x: float
    r_y: float

    def __post_init__(self):
        if self.r_x <= 0 or self.r_y <= 0:
            raise ValueError("blockage extents must be positive")
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))


def grcs(p_i, p_r, omega, geom, lambda_m):
    """Complex aggregate reflection coefficient between p_i and p_r.

    g * sum_n exp(+j*k*(|p_i - p_n| + |p_r - p_n|)) * exp(j*omega_n);
    its magnitude is bounded by g*Q for any phase vector.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (geom.q,):
        raise ValueError(f"omega must have length Q={geom.q}, got shape {omega.shape}")
    pn = geom.element_positions()
    k = _TWO_PI / lambda_m
    d = np.linalg.norm(np.asarray(p_i, dtype=float) - pn, axis=1)
    d += np.linalg.norm(np.asarray(p_r, dtype=float) - pn, axis=1)
    g = unit_cell_factor(geom, lambda_m)
    return g * np.sum(np.exp(1j * (k * d + omega)))


def focusing_phases(p_i, p_target, geom, lambda_m):
    """Phase profile that maximizes |grcs(p_i, p_target)|, attaining g*Q.

    omega_n = -k*(|p_i - p_n| + |p_target - p_n|): each summand of the
    reflection sum becomes real-positive at the target point.
    """
    pn = geom.element_positions()
    k = _TWO_PI / lambda_m
    d = np.linalg.norm(np.asarray(p_i, dtype=float) - pn, axis=1)
    d += np.linalg.norm(np.asarray(p_target, dtype=float) - pn, axis=1)
    return -k * d


def mapping(p_n, area, geom, w_x, w_y, big_w_x, big_w_y, alpha):
    """Map RIS element position(s) to target point(s) in the blockage plane.

    Cell (w_x, w_y) of a big_w_x by big_w_y partition is anchored at its
    center, offset t_w = (w + 1/2)*R/W - R/2 from the area center; the
    element's in-plane coordinates (y, z), taken relative to the RIS
    center, are scaled by Delta_t = alpha*R_t/W_t over the aperture so one
    cell is painted by the whole surface. alpha = 0 collapses the image to
    the cell center; the single cell of a 1x1 partition maps onto the area
    center itself.

    Accepts a single (3,) position or an (n, 3) batch.
    """
    if not (0 <= w_x < big_w_x and 0 <= w_y < big_w_y):
        raise ValueError(f"cell index ({w_x}, {w_y}) out of range for ({big_w_x}, {big_w_y})")
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    p = np.asarray(p_n, dtype=float)
    single = p.ndim == 1
    p = np.atleast_2d(p)

    l_y, l_z = geom.aperture
    t_x = (w_x + 0.5) * area.r_x / big_w_x - area.r_x / 2.0
    t_y = (w_y + 0.5) * area.r_y / big_w_y - area.r_y / 2.0
    delta_x = alpha * area.r_x / big_w_x
    delta_y = alpha * area.r_y / big_w_y

    rel_y = p[:, 1] - geom.center[1]
    rel_z = p[:, 2] - geom.center[2]
    out = np.tile(area.center, (p.shape[0], 1))
    out[:, 0] += delta_x / l_z * rel_z + t_x
    out[:, 1] += delta_y / l_y * rel_y + t_y
    return out[0] if single else out


def wide_illumination_phases(p_i, area, geom, lambda_m, w_x, w_y, big_w_x, big_w_y, alpha):
    """Codeword spreading the reflection over cell (w_x, w_y) of the area.

    omega_n = -k*(|M(p_n) - p_n| - |M(p_n) - p_ris| + |p_i - p_n|), with M
    the per-element mapping above. Each element focuses on its own image
    point; the -|M - p_ris| term keeps the profile phase-continuous across
    the aperture.
    """
    pn = geom.element_positions()
    m = mapping(pn, area, geom, w_x, w_y, big_w_x, big_w_y, alpha)
    k = _TWO_PI / lambda_m
    d = np.linalg.norm(m - pn, axis=1)
    d -= np.linalg.norm(m - geom.center[None, :], axis=1)
    d += np.linalg.norm(np.asarray(p_i, dtype=float) - pn, axis=1)
    return -k * d


@dataclass(frozen=True)
class CodebookLevel:
    """One resolution level: big_w_x*big_w_y codewords indexed by cell."""

    big_w_x: int
    big_w_y: int
    alpha: float
    codewords: dict  # (w_x, w_y) -> phase vector, canonical element order

    @property
    def size(self):
        return self.big_w_x * self.big_w_y

    def indices(self):
        """All cell indices in deterministic (row-major) order."""
        return [(wx, wy) for wx in range(self.big_w_x) for wy in range(self.big_w_y)]


@dataclass(frozen=True)
class HierarchicalCodebook:
    levels: tuple
    area: BlockageArea
    geom: object
    p_i: np.ndarray
    lambda_m: float

    @property
    def depth(self):
        return len(self.levels)


def children(parent_shape, child_shape, parent_index):
    """Child-level cell indices geometrically tiling one parent cell.

    Requires integer refinement ratios r_t = child_W_t / parent_W_t; the
    returned set has r_x*r_y indices and, over all parents, partitions the
    child grid.
    """
    pwx, pwy = parent_shape
    cwx, cwy = child_shape
    if cwx % pwx or cwy % pwy:
        raise ValueError(f"child shape {child_shape} does not refine parent {parent_shape}")
    r_x, r_y = cwx // pwx, cwy // pwy
    wx, wy = parent_index
    if not (0 <= wx < pwx and 0 <= wy < pwy):
        raise ValueError(f"parent index {parent_index} out of range for {parent_shape}")
    return {(wx * r_x + a, wy * r_y + b) for a in range(r_x) for b in range(r_y)}


def build_hierarchy(level_shapes, alpha, area, geom, p_i, lambda_m):
    """Materialize all codewords for a list of (big_w_x, big_w_y) level shapes.

    Shapes must be componentwise non-decreasing with strictly increasing
    products, so every level refines the previous one by integer ratios.
    """
    if not level_shapes:
        raise ValueError("need at least one level")
    if not 0 < alpha <= 1.5:
        raise ValueError(f"alpha must be in (0, 1.5], got {alpha}")
    if alpha > 1.0:
        warnings.warn(f"alpha={alpha} > 1 overlaps neighboring cells beyond their edges")
    for (ax, ay), (bx, by) in zip(level_shapes, level_shapes[1:]):
        if bx < ax or by < ay or bx * by <= ax * ay:
            raise ValueError(f"level shapes must refine monotonically, got {level_shapes}")
        if bx % ax or by % ay:
            raise ValueError(f"level ({bx},{by}) does not refine ({ax},{ay}) by integer ratios")

    p_i = np.asarray(p_i, dtype=float)
    levels = []
    for wx_count, wy_count in level_shapes:
        words = {}
        for wx in range(wx_count):
            for wy in range(wy_count):
                words[(wx, wy)] = wide_illumination_phases(
                    p_i, area, geom, lambda_m, wx, wy, wx_count, wy_count, alpha
                )
        levels.append(
            CodebookLevel(big_w_x=wx_count, big_w_y=wy_count, alpha=alpha, codewords=words)
        )
    return HierarchicalCodebook(
        levels=tuple(levels), area=area, geom=geom, p_i=p_i, lambda_m=lambda_m
    )
