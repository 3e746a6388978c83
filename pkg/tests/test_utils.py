"""Tests for quadrature, output writers, log context and exceptions."""

import csv
import io
import json

import numpy as np
import pytest
import structlog

from src.utils.exceptions import (
    ClassViolationError,
    ProfileError,
    QuadratureError,
    VortexSpectraError,
)
from src.utils.output import (
    build_header,
    canonical_json,
    config_hash,
    emit,
    render_csv,
    render_json,
)
from src.utils.logger import run_context
from src.utils.quadrature import integrate


class TestIntegrate:
    """Tests for adaptive quadrature."""

    def test_finite_interval(self) -> None:
        """Test a polynomial integral."""
        assert integrate(lambda x: x**2, 0.0, 3.0) == pytest.approx(9.0, rel=1e-12)

    def test_infinite_interval(self) -> None:
        """Test the Gaussian integral on the half line."""
        value = integrate(lambda x: np.exp(-(x**2)), 0.0, np.inf)

        assert value == pytest.approx(np.sqrt(np.pi) / 2.0, rel=1e-10)

    def test_complex_integrand(self) -> None:
        """Test complex integrands are split into two real integrals."""
        value = integrate(lambda x: np.exp(1j * x), 0.0, np.pi, complex_valued=True)

        assert value == pytest.approx(2j, abs=1e-12)

    def test_empty_interval(self) -> None:
        """Test a degenerate interval returns zero."""
        assert integrate(lambda x: 1.0, 1.0, 1.0) == 0.0
        assert integrate(lambda x: 1.0, 1.0, 1.0, complex_valued=True) == 0j

    def test_break_points(self) -> None:
        """Test interior break points for a kink."""
        value = integrate(lambda x: abs(x - 0.3), 0.0, 1.0, points=[0.3])

        assert value == pytest.approx(0.5 * (0.3**2 + 0.7**2), rel=1e-12)

    def test_divergent_integral_raises(self) -> None:
        """Test a divergent integral surfaces as QuadratureError after retries."""
        with pytest.raises(QuadratureError) as exc_info:
            integrate(lambda x: 1.0 / x, 0.0, 1.0, limit=20, retries=2)

        assert exc_info.value.details["a"] == 0.0


class TestOutput:
    """Tests for deterministic writers."""

    def test_config_hash_ignores_key_order(self) -> None:
        """Test the hash uses the canonical sorted-key form."""
        assert config_hash({"a": 1, "b": [1.0, 2.0]}) == config_hash({"b": [1.0, 2.0], "a": 1})
        assert len(config_hash({"a": 1})) == 16

    def test_canonical_json_converts_numpy(self) -> None:
        """Test numpy scalars, arrays and complex values serialize."""
        text = canonical_json({"x": np.float64(1.5), "v": np.arange(2), "z": 1 + 2j})

        assert json.loads(text) == {"v": [0, 1], "x": 1.5, "z": {"im": 2.0, "re": 1.0}}

    def test_header_fields(self) -> None:
        """Test header content."""
        header = build_header("spectrum", {"m": 2}, {"ode_rtol": 1e-10})

        assert header["command"] == "spectrum"
        assert header["config_hash"] == config_hash({"m": 2})
        assert header["tolerances"] == {"ode_rtol": 1e-10}
        assert "version" in header

    def test_render_csv(self) -> None:
        """Test comment header lines and RFC-4180 quoting."""
        header = build_header("kelvin", {"m": 2}, {"ode_rtol": 1e-10})
        text = render_csv(header, ["name", "value"], [["a,b", 0.1], ["c", 2]])
        lines = text.splitlines()
        body = [line for line in lines if not line.startswith("#")]
        rows = list(csv.reader(io.StringIO("\n".join(body))))

        assert lines[0].startswith("# command=kelvin")
        assert rows[0] == ["name", "value"]
        assert rows[1] == ["a,b", "0.1"]
        assert '"a,b"' in text

    def test_render_json_sorted(self) -> None:
        """Test JSON output has sorted keys and is deterministic."""
        header = build_header("rankine", {"m": 2}, {})
        first = render_json(header, {"z": 1, "a": [1.0]})
        second = render_json(header, {"a": [1.0], "z": 1})

        assert first == second
        assert first.index('"data"') < first.index('"header"')

    def test_emit_to_file(self, tmp_path) -> None:
        """Test output files are created with parent directories."""
        target = tmp_path / "nested" / "out.csv"
        emit("x\n", target)

        assert target.read_text(encoding="utf-8") == "x\n"

    def test_emit_to_stdout(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test stdout carries only the rendered text."""
        emit("payload\n", None)

        assert capsys.readouterr().out == "payload\n"


class TestRunContext:
    """Tests for per-command log context."""

    def test_binds_and_resets(self) -> None:
        """Test the command and hash are bound inside the block only."""
        structlog.contextvars.bind_contextvars(seed=7)
        try:
            with run_context("spectrum", "0123456789abcdef"):
                bound = structlog.contextvars.get_contextvars()
                assert bound["command"] == "spectrum"
                assert bound["config_hash"] == "0123456789abcdef"
            after = structlog.contextvars.get_contextvars()
            assert "command" not in after
            assert after["seed"] == 7
        finally:
            structlog.contextvars.clear_contextvars()


class TestExceptions:
    """Tests for the exception hierarchy."""

    def test_details_default(self) -> None:
        """Test details default to an empty dict."""
        error = VortexSpectraError("boom")

        assert error.message == "boom"
        assert error.details == {}
        assert str(error) == "boom"

    def test_class_violation_is_profile_error(self) -> None:
        """Test the admissibility error specializes ProfileError."""
        error = ClassViolationError("not admissible", details={"kind": "rankine"})

        assert isinstance(error, ProfileError)
        assert error.details["kind"] == "rankine"
