import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bodyblock.errors import InvalidValue, ManifoldTooSmall, MissingKey, UnknownKey, WrongBodyKind
from bodyblock.fields import wavelength
from bodyblock.geometry import (
    ArrayManifold,
    BodyKind,
    BodyModel,
    Pose,
    array_points,
    build_scene,
    projected_width,
    silhouette,
)

LAM = wavelength(2.4868e9)


def test_default_scene():
    sc = build_scene()
    assert sc.frequency_hz == 2.4868e9
    assert sc.standoff_d == 4.0
    assert sc.manifold.dims == (50, 180, 90)
    assert sc.manifold.spacing == pytest.approx(LAM / 10, rel=1e-15)
    assert sc.source.position == (0.0, 0.0, 0.0)
    assert sc.source.axis == (0.0, 0.0, 1.0)


def test_zero_rows_rejected():
    with pytest.raises(InvalidValue):
        build_scene({"n_rows": "0"})


def test_wide_body_does_not_fit():
    # 90 columns at lambda/10 span about 1.085 m
    with pytest.raises(ManifoldTooSmall):
        build_scene({"body.width": "3"})


def test_tall_body_does_not_fit():
    with pytest.raises(ManifoldTooSmall):
        build_scene({"n_rows": 90})


def test_unknown_and_missing_keys():
    with pytest.raises(UnknownKey):
        build_scene({"frequncy_hz": "1e9"})
    with pytest.raises(MissingKey):
        build_scene({"body.height": " "})
    with pytest.raises(MissingKey):
        build_scene({"body.kind": "rectangular_screen", "body.width": "0.5"})


@pytest.mark.parametrize("key,value", [("frequency_hz", "-1"), ("standoff_d", "0"), ("n_cols", "2.5"), ("body.kind", "cube"), ("body.width", "abc")])
def test_invalid_values(key, value):
    with pytest.raises(InvalidValue):
        build_scene({key: value})


def test_screen_config():
    sc = build_scene({"body.kind": "rectangular_screen", "body.width": "0.4", "body.height": "1.5"})
    assert sc.body.kind is BodyKind.RECTANGULAR_SCREEN
    assert sc.body.thickness == 0.0


def test_single_point_manifold():
    pts = array_points(ArrayManifold(1, 1, 1, 0.1, 4.0))
    np.testing.assert_array_equal(pts, [[4.0, 0.0, 0.0]])


def test_three_columns_symmetric():
    pts = array_points(ArrayManifold(1, 1, 3, 0.1, 4.0))
    np.testing.assert_allclose(pts[:, 1], [-0.1, 0.0, 0.1], atol=1e-15)
    assert np.all(pts[:, 2] == 0.0)


def test_default_manifold_points():
    m = build_scene().manifold
    pts = array_points(m)
    assert pts.shape == (810000, 3)
    assert pts[-1, 0] == pytest.approx(4.0 + 49 * LAM / 10, abs=1e-12)
    assert pts[-1, 0] == pytest.approx(4.5907, abs=1e-4)
    # 180 rows span the 1.8 m body height, 90 columns its 0.52 m width
    assert pts[:, 2].max() - pts[:, 2].min() == pytest.approx(179 * LAM / 10)
    assert pts[:, 1].max() - pts[:, 1].min() == pytest.approx(89 * LAM / 10)


def test_array_points_order_exhaustive():
    m = ArrayManifold(3, 4, 5, 0.2, 1.0)
    pts = array_points(m)
    assert len(pts) == 3 * 4 * 5
    i = 0
    for s in range(3):
        for r in range(4):
            for c in range(5):
                np.testing.assert_array_equal(pts[i], [m.surface_x()[s], m.col_y()[c], m.row_z()[r]])
                i += 1
    np.testing.assert_array_equal(pts, array_points(m))


def test_restricted_is_subblock():
    m = build_scene().manifold
    sub = m.restricted(n_surfaces=2, n_rows=20, n_cols=10)
    np.testing.assert_allclose(sub.row_z(), m.row_z()[80:100], atol=1e-15)
    np.testing.assert_allclose(sub.col_y(), m.col_y()[40:50], atol=1e-15)
    np.testing.assert_array_equal(sub.surface_x(), m.surface_x()[:2])


@pytest.mark.parametrize("theta,width", [(0, 0.52), (90, 0.32), (45, 2 * math.sqrt(0.26**2 * 0.5 + 0.16**2 * 0.5))])
def test_projected_width_examples(theta, width):
    assert projected_width(BodyModel(), theta) == pytest.approx(width, abs=1e-12)


def test_projected_width_45_value():
    assert projected_width(BodyModel(), 45) == pytest.approx(0.4317, abs=1e-4)


def test_projected_width_screen():
    with pytest.raises(WrongBodyKind):
        projected_width(BodyModel(BodyKind.RECTANGULAR_SCREEN, 1.0, 0.5, 0.0), 0)


@settings(max_examples=200, deadline=None)
@given(st.floats(-720, 720, allow_nan=False))
def test_projected_width_periodic_and_bounded(theta):
    body = BodyModel()
    w = projected_width(body, theta)
    assert w == pytest.approx(projected_width(body, theta + 180.0), abs=1e-12)
    assert body.thickness - 1e-12 <= w <= body.width + 1e-12


def test_silhouette_examples():
    r = silhouette(BodyModel(), Pose(2.0, 0.0, 0.0))
    assert (r.y_min, r.y_max, r.z_min, r.z_max, r.plane_x) == pytest.approx((-0.26, 0.26, -0.9, 0.9, 2.0))
    r = silhouette(BodyModel(), Pose(2.0, 0.25, 90.0))
    assert (r.y_min, r.y_max) == pytest.approx((0.09, 0.41), abs=1e-12)


@pytest.mark.parametrize("theta", [0, 30, 90, 135])
def test_screen_silhouette_ignores_heading(theta):
    r = silhouette(BodyModel(BodyKind.RECTANGULAR_SCREEN, 1.2, 0.4, 0.0), Pose(2.0, 0.1, theta))
    assert r.width == pytest.approx(0.4)
    assert r.height == pytest.approx(1.2)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 360), st.floats(-0.5, 0.5))
def test_silhouette_area(theta, y):
    body = BodyModel()
    r = silhouette(body, Pose(2.0, y, theta))
    assert abs(r.area - projected_width(body, theta) * body.height) < 1e-12
