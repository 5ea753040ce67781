import pytest

from wormsim.units import (
    UnitError,
    parse_density,
    parse_dimensionless,
    parse_length,
    parse_rate,
    parse_speed,
    parse_time,
)


class TestLength:
    def test_meters(self):
        assert parse_length("5 m") == 5.0
        assert parse_length("5m") == 5.0

    def test_kilometers(self):
        assert parse_length("1.5 km") == 1500.0

    def test_bare_number_uses_default(self):
        assert parse_length("7") == 7.0
        assert parse_length(7) == 7.0

    def test_scientific_notation(self):
        assert parse_length("2.5e3 m") == 2500.0

    def test_unknown_unit(self):
        with pytest.raises(UnitError):
            parse_length("5 furlong")


class TestSpeed:
    def test_m_per_day(self):
        assert parse_speed("2000 m/day") == 2000.0

    def test_km_per_day(self):
        assert parse_speed("2 km/day") == 2000.0

    def test_km_per_hour(self):
        assert parse_speed("1 km/h") == pytest.approx(24000.0)

    def test_default(self):
        assert parse_speed(2000) == 2000.0

    def test_bad(self):
        with pytest.raises(UnitError):
            parse_speed("2 km")


class TestDensity:
    def test_per_m2(self):
        assert parse_density("0.003 /m^2") == 0.003

    def test_per_km2(self):
        assert parse_density("3000 /km^2") == pytest.approx(3e-3)

    def test_default(self):
        assert parse_density(1e-3) == 1e-3

    def test_bad(self):
        with pytest.raises(UnitError):
            parse_density("3000 /acre")


class TestRate:
    def test_per_day(self):
        assert parse_rate("1 /day") == 1.0
        assert parse_rate("0.5/d") == 0.5

    def test_per_hour(self):
        assert parse_rate("1 /h") == pytest.approx(24.0)

    def test_bad(self):
        with pytest.raises(UnitError):
            parse_rate("1 /fortnight")


class TestTime:
    def test_days(self):
        assert parse_time("3 days") == 3.0
        assert parse_time("3 d") == 3.0

    def test_hours(self):
        assert parse_time("12 h") == 0.5

    def test_bad(self):
        with pytest.raises(UnitError):
            parse_time("3 weeks")


class TestDimensionless:
    def test_plain(self):
        assert parse_dimensionless("0.1") == 0.1
        assert parse_dimensionless(0.1) == 0.1

    def test_rejects_unit(self):
        with pytest.raises(UnitError):
            parse_dimensionless("0.1 m")

    def test_rejects_garbage(self):
        with pytest.raises(UnitError):
            parse_dimensionless("abc")
