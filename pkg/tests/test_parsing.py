import pytest

from utils.parsing import DEFAULT_RANGE_POINTS, parse_float_grid, parse_int, parse_int_grid


def test_parse_int():
    assert parse_int(" 7 ") == 7
    assert parse_int("1e6") == 1_000_000
    for bad in ("1.5", "x", ""):
        with pytest.raises(ValueError):
            parse_int(bad)


def test_parse_int_grid():
    assert parse_int_grid("2..5") == [2, 3, 4, 5]
    assert parse_int_grid("2,1e4") == [2, 10_000]
    assert parse_int_grid("2..4, 100") == [2, 3, 4, 100]
    for bad in ("2..5:3", "5..2", "", ",", "a..b"):
        with pytest.raises(ValueError):
            parse_int_grid(bad)


def test_parse_float_grid():
    assert parse_float_grid("0.5, 2") == [0.5, 2.0]
    grid = parse_float_grid("0..1:5")
    assert grid == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])
    default = parse_float_grid("0..1")
    assert len(default) == DEFAULT_RANGE_POINTS
    assert default[0] == 0.0 and default[-1] == 1.0
    for bad in ("x", "1..0", "0..1:0", "a..1", ""):
        with pytest.raises(ValueError):
            parse_float_grid(bad)
