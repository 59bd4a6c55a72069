import pytest

from bvosc import Cube, DegenerateCubeError, Interval
from bvosc.geometry import interval_as_cube, unit_cube


def test_interval_basics():
    iv = Interval(-1.0, 3.0)
    assert iv.length == 4.0
    assert iv.center == 1.0
    s = iv.shrink(0.5)
    assert (s.a, s.b) == (0.0, 2.0)
    with pytest.raises(DegenerateCubeError):
        Interval(1.0, 1.0)


def test_interval_overlap_abutment():
    assert not Interval(0, 1).intersects(Interval(1, 2))
    assert Interval(0, 1.1).intersects(Interval(1, 2))
    assert Interval(0, 1).contains(Interval(0.2, 0.8))


def test_cube_map_roundtrip():
    Q = Cube((0.3, -0.2), 0.5, (False, True))
    y = (0.1, 0.4)
    x = Q.map_from_unit(y)
    back = Q.map_to_unit(x)
    assert back == pytest.approx(y)


def test_cube_shrink_and_contains():
    Q = Cube((1.0,), 2.0)
    assert Q.shrink(0.5).as_interval().length == pytest.approx(1.0)
    assert Q.contains(Cube((1.2,), 0.5))
    assert not Q.contains(Cube((2.0,), 0.5))
    with pytest.raises(DegenerateCubeError):
        Cube((0.0,), 0.0)


def test_map_cube_composes_transforms():
    Q = Cube((2.0, 1.0), 2.0, (True, False))
    S = Cube((0.1, -0.2), 0.25, (True, True))
    QS = Q.map_cube(S)
    # composed map applied to a point equals sequential application
    y = (0.2, -0.1)
    assert QS.map_from_unit(y) == pytest.approx(Q.map_from_unit(S.map_from_unit(y)))
    # flips compose by parity
    assert QS.axis_flip == (False, True)
    assert QS.side == pytest.approx(0.5)


def test_unit_cube_and_conversion():
    Q0 = unit_cube(1)
    assert Q0.as_interval().a == -0.5
    iv = Interval(2.0, 3.0)
    assert interval_as_cube(iv).center == (2.5,)
    with pytest.raises(ValueError):
        unit_cube(2).as_interval()
