"""Synthetic seabeds and lawnmower survey plans.

The heightfield plays the role of the surveyed ground truth that a
multibeam system would normally provide: a regular grid of seabed
elevations (z <= 0, z-up) with bilinear interpolation in the interior.
Cell (row, col) stores the elevation at the cell center
(x0 + (col + 0.5) * cell_size, y0 + (row + 0.5) * cell_size).

Generators are pure functions of (parameters, seed) so every scene is
reproducible from its manifest.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ssbathy import geom, gridfile
from ssbathy.errors import ParameterError

log = logging.getLogger(__name__)


@dataclass
class Heightfield:
    """Regular elevation grid; values are seabed z in meters (negative)."""

    origin: tuple  # (x0, y0)
    cell_size: float
    values: np.ndarray  # (n_rows, n_cols)
    nodata: float = gridfile.NODATA

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.cell_size <= 0:
            raise ParameterError(f"cell_size must be > 0, got {self.cell_size}")
        if self.values.ndim != 2:
            raise ParameterError("heightfield values must be a 2-D grid")

    @property
    def n_rows(self):
        return self.values.shape[0]

    @property
    def n_cols(self):
        return self.values.shape[1]

    def cell_centers(self):
        """(xs, ys) 1-D arrays of column / row center coordinates."""
        x0, y0 = self.origin
        xs = x0 + (np.arange(self.n_cols) + 0.5) * self.cell_size
        ys = y0 + (np.arange(self.n_rows) + 0.5) * self.cell_size
        return xs, ys

    def interior_bounds(self):
        """(xmin, xmax, ymin, ymax) where bilinear interpolation is defined."""
        x0, y0 = self.origin
        h = 0.5 * self.cell_size
        return (
            x0 + h,
            x0 + (self.n_cols - 0.5) * self.cell_size,
            y0 + h,
            y0 + (self.n_rows - 0.5) * self.cell_size,
        )

    def save(self, path):
        gridfile.write_grid(
            path,
            self.values,
            x0=self.origin[0],
            y0=self.origin[1],
            cell_size=self.cell_size,
            nodata=self.nodata,
        )

    @classmethod
    def load(cls, path):
        values, header = gridfile.read_grid(path)
        return cls(
            origin=(header.get("x0", 0.0), header.get("y0", 0.0)),
            cell_size=header["cell_size"],
            values=values,
            nodata=header.get("nodata", gridfile.NODATA),
        )


@dataclass(frozen=True)
class SpectrumParams:
    """Random-wave spectrum for the base seabed.

    The field is a sum of n_waves cosine waves with random direction and
    phase; wavelengths are log-spaced in [wavelength_min, wavelength_max]
    and amplitudes decay as wavelength**decay, so long waves dominate and
    the surface stays smooth.  With amplitude 0 the field is the constant
    `offset`; otherwise it is rescaled to span `depth_band` exactly.
    """

    n_waves: int = 30
    amplitude: float = 1.0
    wavelength_min: float = 8.0
    wavelength_max: float = 120.0
    decay: float = 1.0
    offset: float = -12.0
    depth_band: tuple = (-21.0, -9.0)


@dataclass
class SurveyLine:
    """One straight pass: ordered ping poses plus timing metadata."""

    line_id: int
    poses: list
    ping_rate: float
    speed: float

    def __post_init__(self):
        if len(self.poses) < 2:
            raise ParameterError("a survey line needs at least 2 pings")

    @property
    def n_pings(self):
        return len(self.poses)

    @property
    def ping_spacing(self):
        return self.speed / self.ping_rate


def generate_heightfield(region, cell_size, spectrum=None, seed=0):
    """Random smooth seabed over `region` = (x0, y0, width, height), meters.

    Deterministic in (region, cell_size, spectrum, seed).
    """
    spectrum = spectrum or SpectrumParams()
    x0, y0, width, height = region
    if width <= 0 or height <= 0:
        raise ParameterError(f"region must have positive area, got {region}")
    if cell_size <= 0:
        raise ParameterError(f"cell_size must be > 0, got {cell_size}")
    n_cols = int(round(width / cell_size))
    n_rows = int(round(height / cell_size))
    if n_cols < 2 or n_rows < 2:
        raise ParameterError("region too small for the requested cell size")

    xs = x0 + (np.arange(n_cols) + 0.5) * cell_size
    ys = y0 + (np.arange(n_rows) + 0.5) * cell_size
    gx, gy = np.meshgrid(xs, ys)

    rng = np.random.default_rng(seed)
    raw = np.zeros((n_rows, n_cols))
    # Always draw the same number of variates so the field depends on the
    # seed alone, not on short-circuit paths.
    directions = rng.uniform(0.0, 2.0 * math.pi, spectrum.n_waves)
    log_wl = rng.uniform(
        math.log(spectrum.wavelength_min),
        math.log(spectrum.wavelength_max),
        spectrum.n_waves,
    )
    phases = rng.uniform(0.0, 2.0 * math.pi, spectrum.n_waves)
    for theta, lwl, phase in zip(directions, log_wl, phases):
        wavelength = math.exp(lwl)
        k = 2.0 * math.pi / wavelength
        amp = (wavelength / spectrum.wavelength_max) ** spectrum.decay
        raw += amp * np.cos(k * (gx * math.cos(theta) + gy * math.sin(theta)) + phase)

    if spectrum.amplitude == 0.0 or np.ptp(raw) < 1e-12:
        values = np.full((n_rows, n_cols), float(spectrum.offset))
    else:
        lo, hi = spectrum.depth_band
        if not -200.0 <= lo < hi <= 0.0:
            raise ParameterError(f"depth_band must satisfy -200 <= lo < hi <= 0, got {spectrum.depth_band}")
        span = raw.max() - raw.min()
        values = lo + (raw - raw.min()) * (hi - lo) / span
    return Heightfield(origin=(x0, y0), cell_size=cell_size, values=values)


def _feature_bump(kind, dist, radius, height, wavelength):
    """Closed-form radial bump profile; dist may be an array."""
    t = np.clip(dist / radius, 0.0, 1.0)
    if kind == "hill":
        return height * 0.5 * (1.0 + np.cos(math.pi * t)) * (dist <= radius)
    if kind == "boulder":
        return height * np.sqrt(np.clip(1.0 - t * t, 0.0, None)) * (dist <= radius)
    if kind == "ripple":
        taper = 0.5 * (1.0 + np.cos(math.pi * t))
        return height * np.cos(2.0 * math.pi * dist / wavelength) * taper * (dist <= radius)
    raise ParameterError(f"unknown feature kind {kind!r}")


def add_features(hf, features, seed=0):
    """Superimpose hills / boulders / ripples onto a heightfield.

    Each feature is a dict with keys kind (hill|boulder|ripple), center
    (x, y), radius, height and, for ripples, an optional wavelength
    (default radius / 4).  A feature without a center is placed uniformly
    at random inside the grid (that is the only use of `seed`).  Features
    add pointwise; anything poking above the surface is clipped to z = 0
    with a warning.  Returns a new Heightfield.
    """
    rng = np.random.default_rng(seed)
    xs, ys = hf.cell_centers()
    gx, gy = np.meshgrid(xs, ys)
    values = hf.values.copy()
    xmin, xmax, ymin, ymax = hf.interior_bounds()
    for feat in features:
        kind = feat["kind"]
        radius = float(feat["radius"])
        height = float(feat["height"])
        if radius <= 0:
            raise ParameterError(f"feature radius must be > 0, got {radius}")
        if "center" in feat:
            cx, cy = feat["center"]
        else:
            cx = rng.uniform(xmin + radius, xmax - radius)
            cy = rng.uniform(ymin + radius, ymax - radius)
        if not (xmin - radius <= cx <= xmax + radius and ymin - radius <= cy <= ymax + radius):
            raise ParameterError(f"feature center ({cx}, {cy}) outside grid bounds")
        wavelength = float(feat.get("wavelength", radius / 4.0))
        dist = np.hypot(gx - cx, gy - cy)
        values += _feature_bump(kind, dist, radius, height, wavelength)
    if (values > 0).any():
        log.warning("clipping %d cells above the sea surface", int((values > 0).sum()))
        values = np.minimum(values, 0.0)
    return Heightfield(origin=hf.origin, cell_size=hf.cell_size, values=values)


def sample_depth(hf, x, y):
    """Bilinear seabed z at (x, y); returns hf.nodata outside the interior."""
    z, ok = sample_depth_many(hf, np.asarray([x], dtype=float), np.asarray([y], dtype=float))
    return float(z[0]) if ok[0] else hf.nodata


def sample_depth_many(hf, xs, ys):
    """Vectorized bilinear interpolation.

    Returns (values, valid) where valid is False outside the interpolation
    interior; invalid entries hold hf.nodata.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    x0, y0 = hf.origin
    # fractional cell coordinates relative to cell-center registration
    fx = (xs - x0) / hf.cell_size - 0.5
    fy = (ys - y0) / hf.cell_size - 0.5
    valid = (fx >= 0) & (fx <= hf.n_cols - 1) & (fy >= 0) & (fy <= hf.n_rows - 1)
    fxc = np.clip(fx, 0, hf.n_cols - 1)
    fyc = np.clip(fy, 0, hf.n_rows - 1)
    c0 = np.clip(np.floor(fxc).astype(int), 0, hf.n_cols - 2)
    r0 = np.clip(np.floor(fyc).astype(int), 0, hf.n_rows - 2)
    tx = fxc - c0
    ty = fyc - r0
    v = hf.values
    z = (
        v[r0, c0] * (1 - tx) * (1 - ty)
        + v[r0, c0 + 1] * tx * (1 - ty)
        + v[r0 + 1, c0] * (1 - tx) * ty
        + v[r0 + 1, c0 + 1] * tx * ty
    )
    z = np.where(valid, z, hf.nodata)
    return z, valid


def plan_lawnmower(
    region,
    line_spacing,
    sensor_depth,
    speed,
    ping_rate,
    hf,
    orientation="x",
    first_line_id=0,
):
    """Parallel survey lines with alternating direction over `region`.

    region: (x0, y0, width, height).  Lines run along `orientation` ("x" or
    "y"; use the other value for an orthogonal validation/test set) and are
    spaced `line_spacing` meters apart, starting on the region edge.  The
    sensor travels at z = -sensor_depth; each ping's altitude is the sensor
    height above the interpolated seabed at nadir, which must stay positive.
    """
    if line_spacing <= 0:
        raise ParameterError(f"line_spacing must be > 0, got {line_spacing}")
    if speed <= 0 or ping_rate <= 0:
        raise ParameterError("speed and ping_rate must be > 0")
    x0, y0, width, height = region
    across_extent = height if orientation == "x" else width
    along_extent = width if orientation == "x" else height
    if orientation not in ("x", "y"):
        raise ParameterError(f"orientation must be 'x' or 'y', got {orientation!r}")
    if along_extent <= 0 or across_extent < 0:
        raise ParameterError(f"region too small for a survey line: {region}")

    n_lines = int(math.floor(across_extent / line_spacing)) + 1
    spacing = speed / ping_rate
    n_pings = int(math.floor(along_extent / spacing)) + 1
    if n_pings < 2:
        raise ParameterError("region shorter than one ping spacing")

    sensor_z = -float(sensor_depth)
    lines = []
    for j in range(n_lines):
        reverse = j % 2 == 1
        along = np.arange(n_pings) * spacing
        if reverse:
            along = along[::-1]
        if orientation == "x":
            px = x0 + along
            py = np.full(n_pings, y0 + j * line_spacing)
            heading = math.pi if reverse else 0.0
        else:
            px = np.full(n_pings, x0 + j * line_spacing)
            py = y0 + along
            heading = 3 * math.pi / 2 if reverse else math.pi / 2
        seabed, ok = sample_depth_many(hf, px, py)
        if not ok.all():
            raise ParameterError(
                f"line {first_line_id + j} leaves the heightfield interior"
            )
        altitudes = sensor_z - seabed
        if (altitudes <= 0).any():
            raise ParameterError(
                f"seabed reaches the sensor depth on line {first_line_id + j}"
            )
        poses = [
            geom.SonarPose(
                position=(float(px[i]), float(py[i]), sensor_z),
                heading=heading,
                altitude=float(altitudes[i]),
            )
            for i in range(n_pings)
        ]
        lines.append(
            SurveyLine(
                line_id=first_line_id + j,
                poses=poses,
                ping_rate=ping_rate,
                speed=speed,
            )
        )
    return lines
