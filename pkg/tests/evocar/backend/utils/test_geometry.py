# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from evocar.backend.utils.geometry import (normalize_angle, polygons_overlap, ray_distances,
                                           rect_corners, segment_hits_rect, segments_near_box)


@pytest.mark.parametrize("angle, expected", [(0., 0.),
                                             (math.pi, math.pi),
                                             (-math.pi, math.pi),
                                             (2.5 * math.pi, 0.5 * math.pi),
                                             (-0.75 * math.pi, -0.75 * math.pi)])
def test_normalize_angle(angle, expected):
    assert np.isclose(normalize_angle(angle), expected)


def test_rect_corners_rotate_about_the_centre():
    corners = rect_corners(1., 2., math.pi / 2, 4., 2.)
    assert np.allclose(corners, [[0., 4.], [0., 0.], [2., 0.], [2., 4.]])


def test_touching_rectangles_overlap():
    a = rect_corners(0., 0., 0., 4., 2.)
    assert polygons_overlap(a, rect_corners(4., 0., 0., 4., 2.))
    assert not polygons_overlap(a, rect_corners(4.001, 0., 0., 4., 2.))


def test_rotated_rectangles_separate_on_a_diagonal_axis():
    a = rect_corners(0., 0., math.pi / 4, 4., 0.2)
    b = rect_corners(1.2, -1.2, math.pi / 4, 4., 0.2)
    assert not polygons_overlap(a, b)
    assert polygons_overlap(a, rect_corners(0., 0., -math.pi / 4, 4., 0.2))


def test_segment_hits_rect():
    corners = rect_corners(0., 0., 0., 4., 2.)
    assert segment_hits_rect((2., -5., 2., 5.), corners)
    assert segment_hits_rect((-0.5, 0., 0.5, 0.), corners)
    assert not segment_hits_rect((2.1, -5., 2.1, 5.), corners)


def test_ray_distances():
    segments = np.array([[5., -1., 5., 1.], [0., 3., 4., 3.]])
    directions = np.array([[1., 0.], [0., 1.], [-1., 0.]])
    assert np.allclose(ray_distances((0., 0.), directions, segments), [5., 3., np.inf])
    assert np.all(np.isinf(ray_distances((0., 0.), directions, np.zeros((0, 4)))))


def test_ray_behind_the_origin_is_ignored():
    segments = np.array([[-2., -1., -2., 1.]])
    assert np.isinf(ray_distances((0., 0.), np.array([[1., 0.]]), segments)[0])


def test_segments_near_box():
    segments = np.array([[0., 0., 10., 0.], [20., 0., 20., 5.], [0., 3., 0., 9.]])
    assert segments_near_box(segments, (4., -1., 6., 1.)).tolist() == [True, False, False]
    assert segments_near_box(np.zeros((0, 4)), (0., 0., 1., 1.)).shape == (0,)


if __name__ == '__main__':
    pytest.main([__file__, "-v", "-s"])
