"""Compiled core vs numpy fallback: bit-for-bit agreement on every kernel."""

import numpy as np
import pytest

from depthforge._core import backend_name, get_backend

try:
    compiled = get_backend("compiled")
except ImportError:  # extension absent: nothing to compare against
    compiled = None

python_backend = get_backend("python")

needs_compiled = pytest.mark.skipif(
    compiled is None, reason="compiled core not built"
)


def test_active_backend_is_named():
    assert backend_name() in ("compiled", "python")


@needs_compiled
class TestBackendAgreement:
    def test_projection_rect_bitwise(self):
        rng = np.random.default_rng(0)
        for m, n, d in [(1, 1, 1), (9, 7, 1), (33, 65, 17), (128, 50, 300)]:
            x = rng.standard_normal((n, d))
            xt = np.ascontiguousarray(x.T)
            u = rng.standard_normal((m, d))
            for d_chunk in (1, 7, 256, d):
                a = np.empty((m, n))
                compiled.proj_rect(xt, u, a, 0, m, 0, n, d_chunk)
                b = np.empty((m, n))
                python_backend.proj_rect(xt, u, b, 0, m, 0, n, d_chunk)
                assert a.tobytes() == b.tobytes()

    def test_projection_naive_bitwise(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((41, 13))
        u = rng.standard_normal((29, 13))
        a = np.empty((29, 41))
        compiled.proj_naive(x, u, a)
        b = np.empty((29, 41))
        python_backend.proj_naive(x, u, b)
        assert a.tobytes() == b.tobytes()

    def test_point_span_bitwise(self):
        rng = np.random.default_rng(2)
        z = rng.standard_normal(23)
        u = rng.standard_normal((77, 23))
        a = np.empty(77)
        compiled.proj_point_span(z, u, a, 0, 77)
        b = np.empty(77)
        python_backend.proj_point_span(z, u, b, 0, 77)
        assert a.tobytes() == b.tobytes()

    @pytest.mark.parametrize(
        "kernel", ["halfspace_span", "projection_span", "asym_projection_span"]
    )
    @pytest.mark.parametrize("n", [1, 2, 3, 18, 101, 1024])
    def test_univariate_spans_bitwise(self, kernel, n):
        rng = np.random.default_rng(3)
        m = 60
        # rounded values induce ties; mix query above/below/at data values
        px = np.round(rng.standard_normal((m, n)) * 4, 1)
        pz = np.round(rng.standard_normal(m) * 4, 1)
        a = np.empty(m)
        getattr(compiled, kernel)(px, pz, a, 0, m)
        b = np.empty(m)
        getattr(python_backend, kernel)(px, pz, b, 0, m)
        assert a.tobytes() == b.tobytes()

    def test_degenerate_rows_agree(self):
        # constant rows (MAD = 0) and rows with no mass above the median
        px = np.array(
            [
                [2.0, 2.0, 2.0, 2.0],
                [1.0, 1.0, 1.0, 5.0],
                [-3.0, -3.0, -1.0, -1.0],
            ]
        )
        pz = np.array([2.0, 6.0, -2.0])
        for kernel in ("projection_span", "asym_projection_span"):
            a = np.empty(3)
            getattr(compiled, kernel)(px, pz, a, 0, 3)
            b = np.empty(3)
            getattr(python_backend, kernel)(px, pz, b, 0, 3)
            assert a.tobytes() == b.tobytes()

    def test_get_backend_unknown(self):
        with pytest.raises(ValueError):
            get_backend("fortran")
