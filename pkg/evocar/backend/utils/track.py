# -*- coding: utf-8 -*-
# Static environments: wall sets, track construction and the plain-text track format.
#
# Track file format:
#     # comment lines start with '#'
#     bounds xmin ymin xmax ymax
#     x1 y1 x2 y2          <- one axis-aligned wall per line, meters

import math

import numpy as np

GRID_CELL = 0.5
TRACK_LANE_LENGTH = 40.0

# corridor width as a multiple of the vehicle body width, junction and bay sides in meters
# beyond the corridor width
TRACK_PRESETS = {
    "narrow": {"width_factor": 1.5, "junction_extra": 6.0, "bay_extra": 6.0},
    "wide":   {"width_factor": 3.0, "junction_extra": 6.0, "bay_extra": 10.0},
}


class Environment(object):
    """
    # Attributes
        walls : array, shape of (M, 4)
            (x1, y1, x2, y2)-ordered, each horizontal or vertical
        bounds : (xmin, ymin, xmax, ymax)
    """

    def __init__(self, walls, bounds=None):
        walls = np.asarray(walls, dtype=np.float64).reshape(-1, 4)
        skewed = (walls[:, 0] != walls[:, 2]) & (walls[:, 1] != walls[:, 3])
        if skewed.any():
            raise ValueError("walls must be horizontal or vertical; offending wall {}".format(
                walls[np.argmax(skewed)].tolist()))
        if bounds is None:
            bounds = _extent(walls) if len(walls) else (-math.inf, -math.inf, math.inf, math.inf)
        bounds = tuple(float(b) for b in bounds)
        if len(walls):
            xmin, ymin, xmax, ymax = _extent(walls)
            if xmin < bounds[0] or ymin < bounds[1] or xmax > bounds[2] or ymax > bounds[3]:
                raise ValueError("bounds {} do not contain all walls (extent {})".format(
                    bounds, (xmin, ymin, xmax, ymax)))
        walls.setflags(write=False)
        self._walls = walls
        self._bounds = bounds

    @property
    def walls(self):
        return self._walls

    @property
    def bounds(self):
        return self._bounds

    def __len__(self):
        return len(self._walls)


def _extent(walls):
    return (float(min(walls[:, 0].min(), walls[:, 2].min())),
            float(min(walls[:, 1].min(), walls[:, 3].min())),
            float(max(walls[:, 0].max(), walls[:, 2].max())),
            float(max(walls[:, 1].max(), walls[:, 3].max())))


def walls_from_rooms(rooms, cell=GRID_CELL):
    """Boundary walls of the union of axis-aligned free-space rectangles.

    # Args
        rooms : list of (xmin, ymin, xmax, ymax), coordinates multiples of cell
        cell : float

    # Returns
        walls : array, shape of (M, 4)
            maximal horizontal and vertical boundary segments
    """
    rooms = np.asarray(rooms, dtype=np.float64).reshape(-1, 4)
    x0, y0 = rooms[:, 0].min(), rooms[:, 1].min()
    grid = np.rint((rooms - [x0, y0, x0, y0]) / cell)
    if not np.allclose(grid * cell, rooms - [x0, y0, x0, y0], atol=1e-9):
        raise ValueError("room coordinates must be multiples of {} m".format(cell))
    grid = grid.astype(int)
    nx, ny = grid[:, 2].max(), grid[:, 3].max()

    # padded occupancy: free[row + 1, col + 1] is cell (col, row)
    free = np.zeros((ny + 2, nx + 2), dtype=bool)
    for c0, r0, c1, r1 in grid:
        free[r0 + 1:r1 + 1, c0 + 1:c1 + 1] = True

    walls = []
    horizontal = free[1:, :] != free[:-1, :]
    for i, row in enumerate(horizontal):
        for j0, j1 in _runs(row):
            y = y0 + i * cell
            walls.append((x0 + (j0 - 1) * cell, y, x0 + (j1 - 1) * cell, y))
    vertical = free[:, 1:] != free[:, :-1]
    for j, col in enumerate(vertical.T):
        for i0, i1 in _runs(col):
            x = x0 + j * cell
            walls.append((x, y0 + (i0 - 1) * cell, x, y0 + (i1 - 1) * cell))
    return np.array(walls, dtype=np.float64).reshape(-1, 4)


def _runs(mask):
    """Half-open [start, stop) index ranges of consecutive True values."""
    padded = np.concatenate([[False], mask, [False]]).astype(int)
    edges = np.flatnonzero(np.diff(padded))
    return list(zip(edges[0::2], edges[1::2]))


def build_track(corridor_width, junction_size, bay_size, lane_length=TRACK_LANE_LENGTH):
    """Serpentine corridor with four 90-degree corners and a turn-around bay at each end.

    # Returns
        environment : Environment
        start : (x, y, heading)
            centre of the first bay, facing the first corridor
    """
    centreline = [(0., 0.),
                  (lane_length, 0.),
                  (lane_length, lane_length),
                  (0., lane_length),
                  (0., 2 * lane_length),
                  (lane_length, 2 * lane_length)]
    half_w = corridor_width / 2.
    rooms = []
    for (xa, ya), (xb, yb) in zip(centreline[:-1], centreline[1:]):
        rooms.append((min(xa, xb) - half_w, min(ya, yb) - half_w, max(xa, xb) + half_w, max(ya, yb) + half_w))
    for x, y in centreline[1:-1]:
        rooms.append(_square(x, y, junction_size))
    for x, y in (centreline[0], centreline[-1]):
        rooms.append(_square(x, y, bay_size))

    walls = walls_from_rooms(rooms)
    return Environment(walls), (0., 0., 0.)


def _square(x, y, side):
    return (x - side / 2., y - side / 2., x + side / 2., y + side / 2.)


def bundled_track(name, vehicle_width=2.0, lane_length=TRACK_LANE_LENGTH):
    if name not in TRACK_PRESETS:
        raise ValueError("unknown track {!r}; bundled tracks are {}".format(name, sorted(TRACK_PRESETS)))
    preset = TRACK_PRESETS[name]
    width = _snap(preset["width_factor"] * vehicle_width)
    return build_track(width,
                       width + preset["junction_extra"],
                       width + preset["bay_extra"],
                       lane_length)


def _snap(value):
    return round(value / GRID_CELL) * GRID_CELL


def build_arena(width, height):
    """Rectangular free space enclosed by four walls, lower-left corner at the origin."""
    walls = [(0., 0., width, 0.),
             (width, 0., width, height),
             (width, height, 0., height),
             (0., height, 0., 0.)]
    return Environment(walls, (0., 0., width, height))


def perimeter_poses(bounds, count, margin):
    """Poses spaced equally along the bounds rectangle inset by margin, counter-clockwise.

    # Returns
        poses : list of (x, y, heading), heading along the loop
    """
    xmin, ymin, xmax, ymax = bounds[0] + margin, bounds[1] + margin, bounds[2] - margin, bounds[3] - margin
    if xmax <= xmin or ymax <= ymin:
        raise ValueError("margin {} leaves no room inside bounds {}".format(margin, bounds))
    w, h = xmax - xmin, ymax - ymin
    perimeter = 2 * (w + h)
    sides = [((xmin, ymin), (1., 0.), w),
             ((xmax, ymin), (0., 1.), h),
             ((xmax, ymax), (-1., 0.), w),
             ((xmin, ymax), (0., -1.), h)]
    poses = []
    for k in range(count):
        s = (k + 0.5) * perimeter / count
        for (sx, sy), (dx, dy), side in sides:
            if s <= side:
                poses.append((sx + dx * s, sy + dy * s, math.atan2(dy, dx)))
                break
            s -= side
    return poses


def read_track(track_file):
    bounds = None
    walls = []
    with open(track_file) as f:
        for lineno, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if fields[0] == "bounds":
                bounds = _floats(fields[1:], track_file, lineno)
            else:
                walls.append(_floats(fields, track_file, lineno))
    return Environment(walls, bounds)


def _floats(fields, track_file, lineno):
    if len(fields) != 4:
        raise ValueError("{}:{}: expected 4 numbers, got {!r}".format(track_file, lineno, " ".join(fields)))
    try:
        return [float(v) for v in fields]
    except ValueError:
        raise ValueError("{}:{}: non-numeric value in {!r}".format(track_file, lineno, " ".join(fields)))


def write_track(track_file, environment, comment=None):
    with open(track_file, "w") as f:
        if comment:
            f.write("# {}\n".format(comment))
        f.write("bounds {:g} {:g} {:g} {:g}\n".format(*environment.bounds))
        for wall in environment.walls:
            f.write("{:g} {:g} {:g} {:g}\n".format(*wall))
