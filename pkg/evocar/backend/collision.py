# -*- coding: utf-8 -*-
# Collision detection between oriented vehicle bodies and walls, and the
# counterfactual test deciding which vehicle caused a collision.

from collections import namedtuple

import numpy as np

from evocar.backend.utils.geometry import aabb, polygons_overlap, segment_hits_rect, segments_near_box

VEHICLE = "vehicle"
WALL = "wall"

# participants: (i, j) with i < j for vehicle events, (i,) for wall events
# wall: index into environment.walls for wall events, None otherwise
CollisionEvent = namedtuple("CollisionEvent", ["kind", "participants", "wall"])


def detect_collisions(vehicles, environment):
    """
    # Args
        vehicles : list of VehicleState
        environment : Environment

    # Returns
        events : list of CollisionEvent, wall events first, each group in index order
    """
    corners = [v.corners() for v in vehicles]
    events = []
    walls = environment.walls
    for i, body in enumerate(corners):
        for w in np.flatnonzero(segments_near_box(walls, aabb(body))):
            if segment_hits_rect(walls[w], body):
                events.append(CollisionEvent(WALL, (i,), int(w)))

    if len(vehicles) > 1:
        centres = np.array([[v.x, v.y] for v in vehicles])
        radii = np.array([np.hypot(v.length, v.width) / 2. for v in vehicles])
        gaps = np.linalg.norm(centres[:, None, :] - centres[None, :, :], axis=2)
        reach = radii[:, None] + radii[None, :]
        for i, j in zip(*np.nonzero(np.triu(gaps <= reach, k=1))):
            if polygons_overlap(corners[i], corners[j]):
                events.append(CollisionEvent(VEHICLE, (int(i), int(j)), None))
    return events


def responsible_parties(prev, curr, event):
    """Vehicles whose own move alone, all others frozen at prev, newly produces the event.

    A pair that already overlapped at prev is a continuing contact and blames nobody.

    # Returns
        ids : set of ints
    """
    if event.kind == WALL:
        return set(event.participants)
    i, j = event.participants
    if polygons_overlap(prev[i].corners(), prev[j].corners()):
        return set()
    responsible = set()
    if polygons_overlap(curr[i].corners(), prev[j].corners()):
        responsible.add(i)
    if polygons_overlap(curr[j].corners(), prev[i].corners()):
        responsible.add(j)
    return responsible


def attribute_responsibility(prev, curr, events):
    """
    # Args
        prev, curr : lists of VehicleState for consecutive steps
        events : list of CollisionEvent detected at curr

    # Returns
        ids : set of responsible vehicle indices
    """
    responsible = set()
    for event in events:
        responsible |= responsible_parties(prev, curr, event)
    return responsible
