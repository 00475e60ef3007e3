"""Closed-form sidescan sensor geometry.

World frame is z-up with the sea surface at z = 0 (x east, y north);
"depth" in displayed products is -z.  The sonar has no across-track
angular resolution, so a return at a given range is localized on an
iso-range arc in the vertical plane perpendicular to the heading; the
horizontal beamwidth is small enough that the arc collapses to a point
once the vertical offset between sensor and seabed is known.

Attitude is reduced to heading only (roll = pitch = 0, surface-mounted
sensor): the range equation uses only the vertical offset and the
horizontal offset, so a full rotation matrix adds nothing here.
"""

import math
from dataclasses import dataclass

import numpy as np

from ssbathy.errors import DomainError, ParameterError

PORT = "port"
STARBOARD = "starboard"
SIDES = (PORT, STARBOARD)


@dataclass(frozen=True)
class SonarPose:
    """Sensor pose for one ping.

    position: (x, y, z) meters, world frame, z <= 0 at or below the surface.
    heading: radians CCW from +x, in [0, 2*pi).
    altitude: sensor height above the seabed at nadir, meters, > 0.
    """

    position: tuple
    heading: float
    altitude: float

    def __post_init__(self):
        if self.altitude <= 0:
            raise ParameterError(f"altitude must be > 0, got {self.altitude}")
        if not 0 <= self.heading < 2 * math.pi:
            raise ParameterError(f"heading must be in [0, 2*pi), got {self.heading}")
        if self.position[2] > 0:
            raise ParameterError(f"position.z must be <= 0, got {self.position[2]}")

    @property
    def xy(self):
        return np.asarray(self.position[:2], dtype=float)

    @property
    def z(self):
        return float(self.position[2])


@dataclass(frozen=True)
class SonarParams:
    """Static sensor configuration.

    sound_speed: m/s.  max_range: slant range of the last bin, m.
    n_bins: range bins per side.  vertical_beamwidth / horizontal_beamwidth:
    radians; the horizontal opening is orders of magnitude smaller, which is
    what justifies collapsing the iso-range arc to a point.
    """

    sound_speed: float = 1500.0
    max_range: float = 40.0
    n_bins: int = 512
    vertical_beamwidth: float = math.radians(50.0)
    horizontal_beamwidth: float = math.radians(0.1)

    def __post_init__(self):
        if self.sound_speed <= 0:
            raise ParameterError(f"sound_speed must be > 0, got {self.sound_speed}")
        if self.n_bins < 2:
            raise ParameterError(f"n_bins must be >= 2, got {self.n_bins}")
        if not 0 < self.horizontal_beamwidth < self.vertical_beamwidth < math.pi:
            raise ParameterError("beamwidths must satisfy 0 < horizontal < vertical < pi")

    @property
    def bin_width(self):
        """Slant-range extent of one bin, meters."""
        return self.max_range / self.n_bins


@dataclass(frozen=True)
class GeoSample:
    """A georeferenced return: slant/ground range, grazing angle, 3D point."""

    slant_range: float
    ground_range: float
    grazing_angle: float
    point: np.ndarray
    side: str


def grazing_angle(altitude, point_altitude, slant_range):
    """Angle between the straight ray and the horizontal seabed plane.

    arcsin((altitude - point_altitude) / slant_range), ray bending ignored.
    Raises DomainError when the vertical offset exceeds the slant range.
    """
    if slant_range <= 0:
        raise ParameterError(f"slant_range must be > 0, got {slant_range}")
    ratio = (altitude - point_altitude) / slant_range
    if not -1.0 <= ratio <= 1.0:
        raise DomainError(
            f"vertical offset {altitude - point_altitude} exceeds slant range {slant_range}"
        )
    return math.asin(ratio)


def slant_range(sound_speed, two_way_time):
    """Slant range from the two-way travel time: c * t / 2."""
    if sound_speed <= 0:
        raise ParameterError(f"sound_speed must be > 0, got {sound_speed}")
    if two_way_time < 0:
        raise ParameterError(f"two_way_time must be >= 0, got {two_way_time}")
    return sound_speed * two_way_time / 2.0


def ground_range(slant_range, delta_z):
    """Horizontal projection of the slant range: sqrt(r_s^2 - delta_z^2)."""
    if slant_range < abs(delta_z):
        raise DomainError(
            f"slant range {slant_range} shorter than vertical offset {delta_z}"
        )
    return math.sqrt(slant_range * slant_range - delta_z * delta_z)


def bin_to_slant_range(bin_index, params):
    """Slant range of a bin center: (i + 0.5) * max_range / n_bins.

    Bin-center convention; the draping and fusion paths use the same rule.
    """
    if not 0 <= bin_index < params.n_bins:
        raise ParameterError(
            f"bin_index {bin_index} out of range [0, {params.n_bins})"
        )
    return (bin_index + 0.5) * params.max_range / params.n_bins


def slant_range_to_bin(r_s, params):
    """Index of the bin whose [i*w, (i+1)*w) interval contains r_s."""
    if r_s < 0 or r_s > params.max_range:
        raise DomainError(f"slant range {r_s} outside [0, {params.max_range}]")
    return min(int(r_s / params.bin_width), params.n_bins - 1)


def across_track_unit(heading, side):
    """Horizontal unit vector from the track toward the given side.

    starboard = (sin(heading), -cos(heading), 0); port is its negation.
    """
    u = np.array([math.sin(heading), -math.cos(heading), 0.0])
    if side == STARBOARD:
        return u
    if side == PORT:
        return -u
    raise ParameterError(f"side must be one of {SIDES}, got {side!r}")


def along_track_unit(heading):
    """Horizontal unit vector in the direction of travel."""
    return np.array([math.cos(heading), math.sin(heading), 0.0])


def backproject(pose, params, side, bin_index, relative_depth):
    """Locate the seabed point for (ping pose, side, bin, depth below sensor).

    relative_depth is the vertical drop from the sensor to the seabed point
    (the quantity the depth regressor predicts).  The point is placed at
    ground range sqrt(r_s^2 - dz^2) along the across-track direction:

        point = position + r_g * u_side - (0, 0, relative_depth)
    """
    if relative_depth <= 0:
        raise ParameterError(f"relative_depth must be > 0, got {relative_depth}")
    r_s = bin_to_slant_range(bin_index, params)
    r_g = ground_range(r_s, relative_depth)  # DomainError if r_s < dz
    u = across_track_unit(pose.heading, side)
    point = np.asarray(pose.position, dtype=float) + r_g * u
    point[2] = pose.position[2] - relative_depth
    theta = grazing_angle(relative_depth, 0.0, r_s)
    return GeoSample(
        slant_range=r_s,
        ground_range=r_g,
        grazing_angle=theta,
        point=point,
        side=side,
    )
