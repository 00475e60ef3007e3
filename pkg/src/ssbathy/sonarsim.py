"""Forward sidescan model: per-ping intensity vectors over a heightfield.

The swath of one ping is handled entirely in the across-track vertical
plane (the collapsed-arc convention of the geometry module): the seabed is
sampled as a profile z(g) along the across-track direction, iso-range
circles around the sensor are intersected with that profile, and a
horizon scan provides the occlusion (shadow) test.

Returned intensities follow a configurable Lambert-like law,
reflectivity * cos(incidence)**exponent, with exponent 2 by default to
keep slope contrast visible at small scene scales; the true scattering
law of a real bottom is unknown anyway, which is the premise for learning
depth from intensities rather than inverting them.
"""

from dataclasses import dataclass, field

import numpy as np

from ssbathy import geom, terrain
from ssbathy.errors import ParameterError

FLAG_VALID = 0
FLAG_NADIR = 1
FLAG_MISSING = 2

_SIDE_CODE = {geom.PORT: 0, geom.STARBOARD: 1}
_ALTIMETER_CHANNEL = 2

# Unit-mean, unit-std normalization constants of the Rayleigh(1) draw used
# for speckle: mean sqrt(pi/2), std sqrt(2 - pi/2).
_RAYLEIGH_MEAN = float(np.sqrt(np.pi / 2.0))
_RAYLEIGH_STD = float(np.sqrt(2.0 - np.pi / 2.0))


def _rng_key(noise_seed, channel, ping_index):
    """Flat non-negative seed key: (survey seed..., channel, ping)."""
    key = list(noise_seed) if isinstance(noise_seed, (list, tuple)) else [noise_seed]
    return [int(v) for v in key] + [int(channel), int(ping_index)]


@dataclass(frozen=True)
class SimConfig:
    """Scattering and noise knobs for the forward model."""

    reflectivity: float = 0.9
    lambert_exponent: float = 2.0
    speckle_sigma: float = 0.25
    profile_step: float = 0.25  # across-track sampling step, m
    altimeter_noise_std: float = 0.0
    altimeter_bias: float = 0.0


@dataclass
class WaterfallImage:
    """Stack of pings (rows) by range bins (columns) for one line side."""

    line_id: int
    side: str
    intensities: np.ndarray  # (n_pings, n_bins) in [0, 1]
    flags: np.ndarray  # (n_pings, n_bins) uint8, FLAG_* codes
    poses: list
    params: geom.SonarParams

    def __post_init__(self):
        if self.intensities.shape != self.flags.shape:
            raise ParameterError("intensity and flag grids must share a shape")
        if self.intensities.shape[0] != len(self.poses):
            raise ParameterError("one pose per ping is required")

    @property
    def n_pings(self):
        return self.intensities.shape[0]

    @property
    def n_bins(self):
        return self.intensities.shape[1]


@dataclass
class AltimeterTrack:
    """Nadir altitude readings along one line, with the sensor positions."""

    line_id: int
    sensor_positions: np.ndarray  # (n, 3)
    altitudes: np.ndarray  # (n,) measured sensor height above seabed

    def seabed_points(self):
        """3D points directly below the sensor implied by the readings."""
        pts = self.sensor_positions.copy()
        pts[:, 2] = self.sensor_positions[:, 2] - self.altitudes
        return pts


def across_track_profile(hf, pose, side, max_range, step):
    """Seabed elevation along the across-track ray of one ping side.

    Returns (g, z): ground-range offsets from the sensor (starting at 0)
    and interpolated seabed z.  The profile stops at the heightfield
    interior boundary or at max_range, whichever comes first.
    """
    u = geom.across_track_unit(pose.heading, side)
    n = int(np.floor(max_range / step)) + 1
    g = np.arange(n) * step
    xs = pose.position[0] + g * u[0]
    ys = pose.position[1] + g * u[1]
    z, ok = terrain.sample_depth_many(hf, xs, ys)
    if not ok[0]:
        raise ParameterError("ping nadir lies outside the heightfield interior")
    if ok.all():
        return g, z
    cut = int(np.argmin(ok))  # first invalid sample
    return g[:cut], z[:cut]


def iso_range_crossings(g, z, sensor_z, ranges):
    """First intersection of each iso-range circle with the profile.

    g, z: across-track profile.  ranges: slant ranges to solve, shape (m,).
    Returns (g_hit, z_hit, seg, found): interpolated crossing coordinates,
    the index of the profile segment containing each crossing, and a
    boolean mask of ranges that do intersect the profile.
    """
    rho = np.hypot(g, sensor_z - z)
    r = np.asarray(ranges, dtype=float)
    m = r.size
    g_hit = np.zeros(m)
    z_hit = np.zeros(m)
    if g.size < 2:
        return g_hit, z_hit, np.zeros(m, dtype=int), np.zeros(m, dtype=bool)
    d = rho[None, :-1] - r[:, None]  # (m, n-1)
    e = rho[None, 1:] - r[:, None]
    bracket = (d * e <= 0) & (d != e)
    found = bracket.any(axis=1)
    seg = np.argmax(bracket, axis=1)
    j = seg[found]
    t = d[found, j] / (d[found, j] - e[found, j])
    g_hit[found] = g[j] + t * (g[j + 1] - g[j])
    z_hit[found] = z[j] + t * (z[j + 1] - z[j])
    return g_hit, z_hit, seg, found


def _horizon_angles(g, z, sensor_z):
    """Polar angle from straight-down of each profile sample, and its
    running maximum (the local horizon used for the shadow test)."""
    gamma = np.arctan2(g, sensor_z - z)
    return gamma, np.maximum.accumulate(gamma)


def simulate_ping(hf, pose, params, side, noise_seed=0, config=None, ping_index=0):
    """One ping side: intensity vector and FLAG_* codes per range bin.

    Bins inside the water column (bin range below the nadir altitude) are
    zero with FLAG_NADIR; bins whose iso-range circle misses the profile
    are zero with FLAG_MISSING; shadowed bins are zero but remain
    FLAG_VALID since the geometry still exists.  Noise is multiplicative
    unit-mean speckle derived from a Rayleigh draw, seeded per
    (noise_seed, side, ping_index) so parallel ping evaluation is
    bit-for-bit identical to serial.
    """
    config = config or SimConfig()
    if pose.altitude <= 0:
        raise ParameterError("pose altitude must be > 0")
    n_bins = params.n_bins
    intensity = np.zeros(n_bins)
    flags = np.full(n_bins, FLAG_MISSING, dtype=np.uint8)

    g, z = across_track_profile(hf, pose, side, params.max_range, config.profile_step)
    sensor_z = pose.z
    ranges = (np.arange(n_bins) + 0.5) * params.bin_width

    nadir = ranges < pose.altitude
    flags[nadir] = FLAG_NADIR

    g_hit, z_hit, seg, found = iso_range_crossings(g, z, sensor_z, ranges)
    solve = found & ~nadir
    flags[solve] = FLAG_VALID

    if solve.any():
        gamma, horizon = _horizon_angles(g, z, sensor_z)
        slope = np.gradient(z, g) if g.size > 1 else np.zeros_like(g)
        j = seg[solve]
        gs = g_hit[solve]
        zs = z_hit[solve]
        rs = ranges[solve]
        # local slope at the crossing, linearly interpolated
        t = np.where(g[j + 1] > g[j], (gs - g[j]) / (g[j + 1] - g[j]), 0.0)
        sl = slope[j] + t * (slope[j + 1] - slope[j])
        # shadow test: the crossing must see over every nearer sample
        gam = np.arctan2(gs, sensor_z - zs)
        visible = gam >= horizon[j] - 1e-9
        # incidence: angle between the incoming ray and the surface normal
        norm = np.sqrt(1.0 + sl * sl)
        cos_inc = (gs * sl + (sensor_z - zs)) / (rs * norm)
        cos_inc = np.clip(cos_inc, 0.0, 1.0)
        level = config.reflectivity * cos_inc**config.lambert_exponent
        intensity[solve] = np.where(visible, level, 0.0)

    if config.speckle_sigma > 0:
        rng = np.random.default_rng(_rng_key(noise_seed, _SIDE_CODE[side], ping_index))
        rayleigh = rng.rayleigh(scale=1.0, size=n_bins)
        speckle = 1.0 + config.speckle_sigma * (rayleigh - _RAYLEIGH_MEAN) / _RAYLEIGH_STD
        intensity = intensity * speckle
    intensity[flags != FLAG_VALID] = 0.0
    return np.clip(intensity, 0.0, 1.0), flags


def altimeter(hf, pose, noise_std=0.0, bias=0.0, noise_seed=0, ping_index=0):
    """Nadir altitude reading: sensor z minus the seabed below, plus
    optional Gaussian noise and a constant bias (for corrupted-input
    experiments)."""
    z = terrain.sample_depth(hf, pose.position[0], pose.position[1])
    if z == hf.nodata:
        raise ParameterError("altimeter nadir outside the heightfield interior")
    reading = pose.z - z + bias
    if noise_std > 0:
        rng = np.random.default_rng(_rng_key(noise_seed, _ALTIMETER_CHANNEL, ping_index))
        reading += rng.normal(0.0, noise_std)
    return reading


def simulate_line(hf, line, params, seed=0, config=None):
    """Simulate every ping of a line.

    Returns (port WaterfallImage, starboard WaterfallImage, AltimeterTrack).
    Deterministic given (line, seed); pings are seeded independently so the
    same arrays would come out of a parallel schedule.
    """
    config = config or SimConfig()
    noise_seed = [int(seed), int(line.line_id)]
    images = {}
    for side in geom.SIDES:
        intensities = np.zeros((line.n_pings, params.n_bins))
        flags = np.zeros((line.n_pings, params.n_bins), dtype=np.uint8)
        for k, pose in enumerate(line.poses):
            intensities[k], flags[k] = simulate_ping(
                hf, pose, params, side,
                noise_seed=noise_seed, config=config, ping_index=k,
            )
        images[side] = WaterfallImage(
            line_id=line.line_id,
            side=side,
            intensities=intensities,
            flags=flags,
            poses=list(line.poses),
            params=params,
        )
    positions = np.array([pose.position for pose in line.poses], dtype=float)
    alts = np.array(
        [
            altimeter(
                hf, pose,
                noise_std=config.altimeter_noise_std,
                bias=config.altimeter_bias,
                noise_seed=noise_seed, ping_index=k,
            )
            for k, pose in enumerate(line.poses)
        ]
    )
    track = AltimeterTrack(line_id=line.line_id, sensor_positions=positions, altitudes=alts)
    return images[geom.PORT], images[geom.STARBOARD], track
