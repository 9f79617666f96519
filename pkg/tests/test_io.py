import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlcwt.errors import FormatError
from qlcwt.io import (
    read_lct,
    read_mask,
    read_pgm,
    read_qsg,
    read_qwc,
    read_signal,
    read_signal_csv,
    resolve_lct,
    wavelet_from_spec,
    write_energy_csv,
    write_lct,
    write_pgm16,
    write_qsg,
    write_qwc,
    write_signal_csv,
)
from qlcwt.qlct import fractional_pair, qwt_pair
from qlcwt.quaternion import Grid2D, QSignal2D
from qlcwt.signals import gaussian
from qlcwt.transform import qlcwt_forward
from qlcwt.wavelets import GroupGrid, make_dog_wavelet


@settings(max_examples=15)
@given(st.integers(2, 9), st.integers(2, 9), st.floats(0.01, 5), st.floats(-10, 10), st.integers(0, 2**31))
def test_qsg_roundtrip_bit_exact(tmp_path_factory, n1, n2, d, m, seed):
    g = Grid2D(n1, n2, d, 2 * d, m, -m)
    f = QSignal2D(g, np.random.default_rng(seed).normal(size=(n1, n2, 4)))
    path = tmp_path_factory.mktemp("qsg") / "f.qsg"
    write_qsg(path, f)
    back = read_qsg(path)
    assert back.grid == g
    assert np.array_equal(back.data, f.data)


def test_qsg_layout(tmp_path):
    g = Grid2D(2, 3, 0.5, 0.25, -1.0, -2.0)
    f = QSignal2D(g, np.arange(24, dtype=float).reshape(2, 3, 4))
    write_qsg(tmp_path / "f.qsg", f)
    raw = (tmp_path / "f.qsg").read_bytes()
    assert raw[:4] == b"QSG1"
    assert len(raw) == 4 + 8 + 32 + 24 * 8
    assert np.array_equal(np.frombuffer(raw[44:], "<f8"), np.arange(24.0))


def test_qsg_errors(tmp_path):
    (tmp_path / "bad.qsg").write_bytes(b"XXXX" + bytes(40))
    with pytest.raises(FormatError):
        read_qsg(tmp_path / "bad.qsg")
    (tmp_path / "short.qsg").write_bytes(b"QSG1")
    with pytest.raises(FormatError):
        read_qsg(tmp_path / "short.qsg")
    g = Grid2D.centered(4, 2.0)
    write_qsg(tmp_path / "t.qsg", QSignal2D.zeros(g))
    raw = (tmp_path / "t.qsg").read_bytes()
    (tmp_path / "t.qsg").write_bytes(raw[:-8])
    with pytest.raises(FormatError):
        read_qsg(tmp_path / "t.qsg")


def test_csv_roundtrip(tmp_path, rng):
    g = Grid2D.centered(6, 3.0)
    f = QSignal2D(g, rng.normal(size=(6, 6, 4)))
    write_signal_csv(tmp_path / "f.csv", f)
    assert (tmp_path / "f.csv").read_text().splitlines()[0] == "x1,x2,q0,q1,q2,q3"
    back = read_signal_csv(tmp_path / "f.csv")
    assert back.grid.matches(g)
    assert np.array_equal(back.data, f.data)
    assert np.array_equal(read_signal(tmp_path / "f.csv").data, f.data)


def test_qwc_roundtrip(tmp_path, rng):
    g = Grid2D.centered(12, 6.0)
    psi = make_dog_wavelet(0.5, g)
    gg = GroupGrid(g, 0.5, 2.0, 3, 2)
    W = qlcwt_forward(gaussian(g), psi, gg, fractional_pair(0.7), check=False)
    write_qwc(tmp_path / "w.qwc", W)
    back = read_qwc(tmp_path / "w.qwc")
    assert np.array_equal(back.coeffs, W.coeffs)
    assert back.group_grid == gg and back.lct == W.lct and back.source == g
    assert back.wavelet == {"type": "dog", "lambda": 0.5}
    raw = (tmp_path / "w.qwc").read_bytes()
    assert raw[:4] == b"QWC1"
    (tmp_path / "x.qwc").write_bytes(b"QWC0" + raw[4:])
    with pytest.raises(FormatError):
        read_qwc(tmp_path / "x.qwc")


def test_lct_json(tmp_path):
    P = fractional_pair(0.4)
    write_lct(tmp_path / "p.json", P)
    assert read_lct(tmp_path / "p.json") == P
    assert resolve_lct(tmp_path / "p.json", "qwt") == P
    assert resolve_lct(None, None) == qwt_pair()
    (tmp_path / "bad.json").write_text('{"A1": {"a": 1}}')
    with pytest.raises(FormatError):
        read_lct(tmp_path / "bad.json")
    (tmp_path / "garbage.json").write_text("{not json")
    with pytest.raises(FormatError):
        read_lct(tmp_path / "garbage.json")


def test_wavelet_specs(tmp_path):
    g = Grid2D.centered(16, 8.0)
    assert wavelet_from_spec({"type": "dog", "lambda": 0.6}, g).analytic_form["lambda"] == 0.6
    assert wavelet_from_spec('{"type":"gaussian","sigma":2}', g).analytic_form["sigma"] == 2.0
    write_qsg(tmp_path / "psi.qsg", make_dog_wavelet(0.5, g).signal)
    (tmp_path / "w.json").write_text(json.dumps({"type": "file", "path": "psi.qsg"}))
    w = wavelet_from_spec(str(tmp_path / "w.json"), g)
    assert w.func is None and np.array_equal(w.signal.data, make_dog_wavelet(0.5, g).signal.data)
    with pytest.raises(FormatError):
        wavelet_from_spec({"type": "morlet"}, g)
    with pytest.raises(FormatError):
        wavelet_from_spec({"type": "file", "path": str(tmp_path / "psi.qsg")}, Grid2D.centered(8, 8.0))


def test_pgm_roundtrip_and_mask(tmp_path):
    img = np.array([[0.0, 1.0, 2.0], [4.0, 3.0, 0.5]])
    top = write_pgm16(tmp_path / "m.pgm", img)
    assert top == 4.0
    back = read_pgm(tmp_path / "m.pgm")
    assert back.shape == (2, 3)
    assert np.allclose(back / 65535 * top, img, atol=top / 65535)
    mask = read_mask(tmp_path / "m.pgm", (2, 3))
    assert mask.tolist() == [[False, True, True], [True, True, True]]
    with pytest.raises(FormatError):
        read_mask(tmp_path / "m.pgm", (3, 3))
    (tmp_path / "a.pgm").write_text("P2\n# comment\n2 2\n255\n0 1\n1 0\n")
    assert read_pgm(tmp_path / "a.pgm").tolist() == [[0, 1], [1, 0]]
    (tmp_path / "b.pgm").write_text("P7\n2 2\n255\n")
    with pytest.raises(FormatError):
        read_pgm(tmp_path / "b.pgm")


def test_energy_csv(tmp_path):
    g = Grid2D.centered(3, 3.0)
    write_energy_csv(tmp_path / "e.csv", g, np.arange(9.0).reshape(3, 3))
    rows = (tmp_path / "e.csv").read_text().splitlines()
    assert rows[0] == "y1,y2,energy" and len(rows) == 10
