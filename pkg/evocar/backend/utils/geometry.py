# -*- coding: utf-8 -*-
# Planar geometry for oriented vehicle rectangles, axis-aligned walls and rays.

import math

import numpy as np

_PARALLEL_EPS = 1e-12


def normalize_angle(angle):
    """Wrap an angle into (-pi, pi]."""
    angle = math.remainder(angle, 2 * math.pi)
    if angle <= -math.pi:
        angle += 2 * math.pi
    return angle


def rect_corners(cx, cy, heading, length, width):
    """
    # Returns
        corners : array, shape of (4, 2)
            counter-clockwise from the front-left corner
    """
    c, s = math.cos(heading), math.sin(heading)
    hl, hw = length / 2., width / 2.
    local = np.array([[hl, hw], [-hl, hw], [-hl, -hw], [hl, -hw]])
    rot = np.array([[c, -s], [s, c]])
    return local.dot(rot.T) + np.array([cx, cy])


def rect_edges(corners):
    """
    # Returns
        segments : array, shape of (4, 4), (x1, y1, x2, y2)-ordered
    """
    return np.hstack([corners, np.roll(corners, -1, axis=0)])


def _axes(poly):
    edges = np.roll(poly, -1, axis=0) - poly
    normals = np.stack([-edges[:, 1], edges[:, 0]], axis=1)
    lengths = np.linalg.norm(normals, axis=1)
    return normals[lengths > 0] / lengths[lengths > 0, None]


def polygons_overlap(poly_a, poly_b):
    """Separating-axis test for two convex polygons; touching counts as overlap.

    # Args
        poly_a, poly_b : arrays, shape of (N, 2)
            vertices in order around the polygon (a 2-vertex polygon is a segment)
    """
    for axis in np.vstack([_axes(poly_a), _axes(poly_b)]):
        proj_a = poly_a.dot(axis)
        proj_b = poly_b.dot(axis)
        if proj_a.max() < proj_b.min() or proj_b.max() < proj_a.min():
            return False
    return True


def segment_hits_rect(segment, corners):
    """True when the segment crosses, touches or lies inside the rectangle."""
    x1, y1, x2, y2 = segment
    return polygons_overlap(np.array([[x1, y1], [x2, y2]]), corners)


def aabb(points):
    return points[:, 0].min(), points[:, 1].min(), points[:, 0].max(), points[:, 1].max()


def segments_near_box(segments, box):
    """Mask of segments whose bounding boxes intersect the axis-aligned box (xmin, ymin, xmax, ymax)."""
    if len(segments) == 0:
        return np.zeros(0, dtype=bool)
    xmin = np.minimum(segments[:, 0], segments[:, 2])
    xmax = np.maximum(segments[:, 0], segments[:, 2])
    ymin = np.minimum(segments[:, 1], segments[:, 3])
    ymax = np.maximum(segments[:, 1], segments[:, 3])
    return (xmax >= box[0]) & (xmin <= box[2]) & (ymax >= box[1]) & (ymin <= box[3])


def ray_distances(origin, directions, segments):
    """Distance along each ray to its nearest segment.

    # Args
        origin : (x, y)
        directions : array, shape of (B, 2), unit vectors
        segments : array, shape of (M, 4), (x1, y1, x2, y2)-ordered

    # Returns
        distances : array, shape of (B,)
            np.inf for rays that hit nothing
    """
    directions = np.asarray(directions, dtype=np.float64)
    if len(segments) == 0:
        return np.full(len(directions), np.inf)
    segments = np.asarray(segments, dtype=np.float64)
    q = segments[:, :2] - np.asarray(origin, dtype=np.float64)
    s = segments[:, 2:] - segments[:, :2]

    rx, ry = directions[:, 0, None], directions[:, 1, None]
    denom = rx * s[:, 1] - ry * s[:, 0]
    q_cross_s = q[:, 0] * s[:, 1] - q[:, 1] * s[:, 0]
    q_cross_r = q[:, 0] * ry - q[:, 1] * rx
    parallel = np.abs(denom) < _PARALLEL_EPS
    safe = np.where(parallel, 1.0, denom)
    t = q_cross_s / safe
    u = q_cross_r / safe
    hit = ~parallel & (t >= 0) & (u >= 0) & (u <= 1)
    return np.where(hit, t, np.inf).min(axis=1)
