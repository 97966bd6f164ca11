import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqdiscord.dynamics import (
    CAVITY_INDICATORS,
    KT_INFINITY,
    DampingParams,
    SweepTable,
    damping_amplitudes,
    figure_sweep,
    grid,
    indicator_sweep,
    is_unimodal,
    output_state,
    peak_offsets,
)
from sqdiscord.monogamy import CAVITY_COMPONENTS, CorrelationCache


def test_damping_amplitude_examples():
    assert damping_amplitudes(0.0) == (1.0, 0.0)
    xi, chi = damping_amplitudes(50.0)
    assert xi == pytest.approx(0, abs=1e-10) and chi == pytest.approx(1.0)
    xi, chi = damping_amplitudes(math.log(2))
    assert (xi, chi) == pytest.approx((1 / math.sqrt(2), 1 / math.sqrt(2)))
    with pytest.raises(ValueError):
        damping_amplitudes(-0.1)


@given(st.floats(0, 60))
def test_damping_amplitudes_normalized(kt):
    xi, chi = damping_amplitudes(kt)
    assert xi ** 2 + chi ** 2 == pytest.approx(1.0, abs=1e-12)


def test_infinity_stand_in_is_saturated():
    assert 1 - damping_amplitudes(KT_INFINITY)[1] < 1e-6


def test_params_validation():
    assert DampingParams(1.0, 0.6).beta == pytest.approx(0.8)
    with pytest.raises(ValueError):
        DampingParams(-1.0, 0.5)
    with pytest.raises(ValueError):
        DampingParams(1.0, 1.5)


def test_output_state_initial():
    alpha = 0.6
    psi = output_state(DampingParams(0.0, alpha))
    assert psi.labels == ("c1", "r1", "c2", "r2")
    expected = np.zeros(16)
    expected[0b0000] = alpha
    expected[0b1010] = 0.8  # |1>_c1 |0>_r1 |1>_c2 |0>_r2
    np.testing.assert_allclose(psi.amplitudes, expected, atol=1e-15)


def test_output_state_alpha_one_is_vacuum():
    for kt in (0.0, 0.7, 5.0):
        psi = output_state(kt, 1.0)
        assert abs(psi.amplitudes[0]) == pytest.approx(1.0)


def test_output_state_norm_over_grid():
    for kt in grid(0, 6, 0.5):
        for alpha in grid(0.05, 0.95, 0.15):
            a = output_state(kt, alpha).amplitudes
            assert np.vdot(a, a).real == pytest.approx(1.0, abs=1e-12)


def test_output_state_long_time_is_product():
    cache = CorrelationCache(output_state(50.0, 0.4))
    for name, fn in CAVITY_COMPONENTS.items():
        assert abs(fn(cache)) < 1e-5, name


# --- tables and grids

def test_grid_inclusive():
    np.testing.assert_allclose(grid(0, 1, 0.25), [0, 0.25, 0.5, 0.75, 1.0])
    assert grid(0, 6, 0.05).size == 121
    with pytest.raises(ValueError):
        grid(1, 0, 0.1)
    with pytest.raises(ValueError):
        grid(0, 1, 0)


def test_sweep_table_validation():
    with pytest.raises(ValueError):
        SweepTable([])
    with pytest.raises(ValueError):
        SweepTable([("x", [])])
    with pytest.raises(ValueError):
        SweepTable([("x", [1, 2])], {"v": np.zeros(3)})


def test_sweep_table_rows_row_major():
    t = SweepTable([("x", [1, 2]), ("y", [10, 20])], {"v": np.array([[1, 2], [3, 4]])})
    rows = list(t.rows())
    assert [r[0] for r in rows] == [(1, 10), (1, 20), (2, 10), (2, 20)]
    assert [r[1] for r in rows] == [(1,), (2,), (3,), (4,)]


def test_indicator_sweep_errors():
    with pytest.raises(ValueError, match="unknown indicator"):
        indicator_sweep("cavity", [("kt", [0.1])], ["nope"], {"alpha": 0.3})
    with pytest.raises(ValueError, match="unknown sweep family"):
        indicator_sweep("nope", [("kt", [0.1])], ["q4_13"])
    with pytest.raises(ValueError, match="needs values"):
        indicator_sweep("cavity", [("kt", [0.1])], ["q4_13"])
    with pytest.raises(ValueError):
        indicator_sweep("gen_w", [("phi", [0.1])], ["sqd_dist"], {"theta": 0.3, "phi": 0.2})


def test_pure3_sweep_matches_scalar():
    from sqdiscord.monogamy import q3_pure
    from sqdiscord.qstate import build_named_state
    t = indicator_sweep("two_param", [("p", [0.2, 0.6])], ["sqd_dist", "q3_mean"], {"eps": 0.5})
    for i, p in enumerate([0.2, 0.6]):
        psi = build_named_state("two_param", [p, 0.5])
        assert t.values["sqd_dist"][i] == pytest.approx(q3_pure(psi, 0), abs=1e-9)
        mean = sum(q3_pure(psi, k) for k in range(3)) / 3
        assert t.values["q3_mean"][i] == pytest.approx(mean, abs=1e-9)


def test_sweep_is_deterministic():
    args = ("cavity", [("kt", [0.2, 0.9]), ("alpha", [0.3, 0.7])], ["q4_13", "e3_r1"])
    a, b = indicator_sweep(*args), indicator_sweep(*args)
    for name in a.values:
        np.testing.assert_array_equal(a.values[name], b.values[name])
    assert a.shape == (2, 2)


def test_progress_callback():
    seen = []
    indicator_sweep("cavity", [("kt", [0.1, 0.2, 0.3])], ["q4_13"], {"alpha": 0.5},
                    progress=lambda done, total: seen.append((done, total)))
    assert seen[-1] == (3, 3)


# --- figures

def test_figure1_left_contrast():
    t = figure_sweep(1, "left")
    assert t.axis_names == ["phi"]
    assert list(t.values) == ["qd_dist", "sqd_dist"]
    assert t.values["sqd_dist"].min() >= -1e-9
    assert t.values["qd_dist"].min() < -1e-3


def test_figure1_right_contrast():
    t = figure_sweep(1, "right")
    assert t.values["sqd_dist"].min() >= -1e-9
    assert t.values["qd_dist"].min() < -1e-3


def test_figure2_small_grid():
    t = figure_sweep(2, acin_divisions=8)
    assert t.shape == (9, 9, 9, 9)
    assert t.values["sqd_dist"].min() >= -1e-9


def test_figure4_shape_and_sign():
    t = figure_sweep(4, kt_grid=grid(0, 3, 0.5), alpha_grid=[0.2, 0.6])
    assert t.axis_names == ["kt", "alpha"]
    for v in t.values.values():
        assert v.min() >= -1e-9
        np.testing.assert_allclose(v[0], 0, atol=1e-9)


def test_figure5_unimodal_and_offset():
    t = figure_sweep(5)
    assert list(t.values) == list(CAVITY_INDICATORS)
    for name, v in t.values.items():
        assert is_unimodal(v), name
    report = peak_offsets(t)
    assert any(r["bin_offset"] != 0 for r in report.values())


def test_unknown_figure():
    with pytest.raises(ValueError):
        figure_sweep(3)
    with pytest.raises(ValueError):
        figure_sweep(1, "middle")


def test_is_unimodal():
    assert is_unimodal([0, 1, 3, 2, 1])
    assert is_unimodal([0, 0, 0])
    assert not is_unimodal([0, 2, 1, 2, 0])
    assert is_unimodal([0, 1, 1 - 1e-9, 1, 0.5])
