"""Independent reference implementations used by the test suite.

Everything here deliberately avoids the library's own intersection,
draping and gradient code paths: brute-force sweeps, closed forms and
finite differences only.
"""

import math

import numpy as np

from ssbathy import terrain


def arc_intersection_bruteforce(hf, pose, side, r_s, n=10_000):
    """First seabed intersection of an iso-range arc, by dense sweep.

    The arc is parametrized by the angle t from straight-down; sweeping
    outward from nadir, the intersection is bracketed between the last
    sample below the seabed and the first at or above it, then refined
    linearly.  Returns (ground_range, z) or None when the arc never
    surfaces through the seabed inside the heightfield.
    """
    from ssbathy import geom

    u = geom.across_track_unit(pose.heading, side)
    t = np.linspace(0.0, math.pi / 2.0, n)
    g = r_s * np.sin(t)
    arc_z = pose.z - r_s * np.cos(t)
    xs = pose.position[0] + g * u[0]
    ys = pose.position[1] + g * u[1]
    seabed, ok = terrain.sample_depth_many(hf, xs, ys)
    diff = arc_z - seabed  # negative while the arc is below the seabed
    for k in range(1, n):
        if not ok[k]:
            return None
        if diff[k - 1] < 0 <= diff[k]:
            w = diff[k - 1] / (diff[k - 1] - diff[k])
            gg = g[k - 1] + w * (g[k] - g[k - 1])
            zz = arc_z[k - 1] + w * (arc_z[k] - arc_z[k - 1])
            return gg, zz
    return None


def arc_plane_intersection(sensor_z, r_s, slope, intercept):
    """Closed-form first crossing of an iso-range circle with the plane
    z = slope * g + intercept in the across-track plane.

    Solves (sensor_z - slope*g - intercept)^2 = r_s^2 - g^2 for the
    smallest non-negative root.  Returns (g, z) or None.
    """
    m = sensor_z - intercept
    a = 1.0 + slope * slope
    b = -2.0 * slope * m
    c = m * m - r_s * r_s
    disc = b * b - 4 * a * c
    if disc < 0:
        return None
    roots = sorted(((-b - math.sqrt(disc)) / (2 * a), (-b + math.sqrt(disc)) / (2 * a)))
    for g in roots:
        if g >= 0:
            return g, slope * g + intercept
    return None


def step_shadow_extent(sensor_z, g_edge, z_top, z_base):
    """Ground range where the ray grazing a step's top edge re-hits the
    lower floor behind it (similar triangles)."""
    return g_edge * (sensor_z - z_base) / (sensor_z - z_top)


def central_difference_grad(f, x, h=1e-5):
    """Dense central-difference gradient of scalar f at array x."""
    x = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(x)
    flat = x.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        fp = f(x)
        flat[i] = orig - h
        fm = f(x)
        flat[i] = orig
        gflat[i] = (fp - fm) / (2 * h)
    return grad


def max_rel_error(analytic, numeric, floor=1e-6):
    """Largest elementwise relative difference with a small denominators floor."""
    a = np.asarray(analytic, dtype=float)
    n = np.asarray(numeric, dtype=float)
    denom = np.maximum(floor, np.maximum(np.abs(a), np.abs(n)))
    return float(np.max(np.abs(a - n) / denom)) if a.size else 0.0
