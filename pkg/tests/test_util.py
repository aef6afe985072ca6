import pytest

from hypdiskpy.util import format_complex, format_real, parse_complex, relative_error


@pytest.mark.parametrize(
    "value, text",
    [(0.5, "0.5"), (-0.0, "0"), (0.0, "0"), (-1.25, "-1.25")],
)
def test_format_real(value, text):
    assert format_real(value) == text


@pytest.mark.parametrize(
    "value, text",
    [
        (complex(0.3, -0.2), "0.29999999999999999-0.20000000000000001i"),
        (complex(-0.0, -0.0), "0+0i"),
        (complex(0.5, 0.0), "0.5+0i"),
    ],
)
def test_format_complex(value, text):
    assert format_complex(value) == text


@pytest.mark.parametrize(
    "text, value",
    [("0.5", 0.5 + 0j), ("-i", -1j), ("0.1+0.2i", 0.1 + 0.2j), ("2i", 2j), ("1e-3-4i", 0.001 - 4j)],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_parse_complex_rejects_garbage():
    with pytest.raises(ValueError):
        parse_complex("1+")


def test_relative_error_floor():
    assert relative_error(1e-3, 0.0) == pytest.approx(1e-3)
    assert relative_error(2.2, 2.0) == pytest.approx(0.1)
