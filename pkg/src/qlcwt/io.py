"""File formats: QSG1 signals, QWC1 coefficients, JSON configs and energy maps.

QSG1 layout (little endian)::

    b"QSG1" | u32 n1 | u32 n2 | f64 dx1 | f64 dx2 | f64 x1_min | f64 x2_min | n1*n2*4 f64

QWC1 layout::

    b"QWC1" | u32 M | u32 L | u32 n1 | u32 n2 | u32 len | len bytes of UTF-8 JSON | M*L*n1*n2*4 f64

The JSON block of QWC1 holds the group grid, the signal grid, the LCT pair
and the wavelet spec, which is enough to rebuild a :class:`QLCWTCoefficients`.
"""

from __future__ import annotations

import csv
import json
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError, QLCWTError
from .qlct import LCTPair, parse_preset
from .quaternion import Grid2D, QSignal2D
from .transform import QLCWTCoefficients
from .wavelets import GroupGrid, MotherWavelet, make_dog_wavelet, make_gaussian_wavelet, wavelet_from_signal

_QSG_HEAD = struct.Struct("<4sIIdddd")
_QWC_HEAD = struct.Struct("<4sIIIII")
_F64 = np.dtype("<f8")


# ---------------------------------------------------------------------------
# QSG1
# ---------------------------------------------------------------------------


def write_qsg(path, f: QSignal2D) -> None:
    g = f.grid
    with open(path, "wb") as fh:
        fh.write(_QSG_HEAD.pack(b"QSG1", g.n1, g.n2, g.d1, g.d2, g.min1, g.min2))
        fh.write(np.ascontiguousarray(f.data, dtype=_F64).tobytes())


def read_qsg(path) -> QSignal2D:
    raw = Path(path).read_bytes()
    if len(raw) < _QSG_HEAD.size:
        raise FormatError(f"{path}: too short for a QSG1 header")
    magic, n1, n2, d1, d2, m1, m2 = _QSG_HEAD.unpack_from(raw)
    if magic != b"QSG1":
        raise FormatError(f"{path}: bad magic {magic!r}")
    count = n1 * n2 * 4
    body = raw[_QSG_HEAD.size :]
    if len(body) != count * 8:
        raise FormatError(f"{path}: expected {count} values, found {len(body) // 8}")
    try:
        grid = Grid2D(n1, n2, d1, d2, m1, m2)
    except QLCWTError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    data = np.frombuffer(body, dtype=_F64).reshape(n1, n2, 4)
    return QSignal2D(grid, data)


def write_signal_csv(path, f: QSignal2D) -> None:
    x1, x2 = f.grid.mesh()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x1", "x2", "q0", "q1", "q2", "q3"])
        for p in range(f.grid.n1):
            for q in range(f.grid.n2):
                w.writerow([repr(float(x1[p, q])), repr(float(x2[p, q]))] + [repr(float(v)) for v in f.data[p, q]])


def _uniform_axis(values: np.ndarray, name: str) -> tuple[int, float, float]:
    u = np.unique(values)
    if u.size < 2:
        raise FormatError(f"axis {name} needs at least two distinct samples")
    steps = np.diff(u)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
        raise FormatError(f"axis {name} is not uniformly sampled")
    return u.size, float(steps.mean()), float(u[0])


def read_signal_csv(path) -> QSignal2D:
    try:
        arr = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if arr.shape[1] != 6:
        raise FormatError(f"{path}: expected 6 columns x1,x2,q0,q1,q2,q3")
    n1, d1, m1 = _uniform_axis(arr[:, 0], "x1")
    n2, d2, m2 = _uniform_axis(arr[:, 1], "x2")
    if arr.shape[0] != n1 * n2:
        raise FormatError(f"{path}: {arr.shape[0]} rows do not fill a {n1}x{n2} grid")
    p = np.rint((arr[:, 0] - m1) / d1).astype(int)
    q = np.rint((arr[:, 1] - m2) / d2).astype(int)
    data = np.zeros((n1, n2, 4))
    data[p, q] = arr[:, 2:]
    return QSignal2D(Grid2D(n1, n2, d1, d2, m1, m2), data)


def read_signal(path) -> QSignal2D:
    """QSG1 or CSV, chosen by the file's first bytes."""
    with open(path, "rb") as fh:
        head = fh.read(4)
    return read_qsg(path) if head == b"QSG1" else read_signal_csv(path)


# ---------------------------------------------------------------------------
# QWC1
# ---------------------------------------------------------------------------


def write_qwc(path, W: QLCWTCoefficients) -> None:
    gg = W.group_grid
    meta = {
        "group_grid": gg.to_dict(),
        "scales": gg.scales.tolist(),
        "angles": gg.angles.tolist(),
        "source": W.source.to_dict(),
        "lct": W.lct.to_dict(),
        "wavelet": W.wavelet,
    }
    blob = json.dumps(meta, sort_keys=True).encode("utf-8")
    M, L, n1, n2, _ = W.coeffs.shape
    with open(path, "wb") as fh:
        fh.write(_QWC_HEAD.pack(b"QWC1", M, L, n1, n2, len(blob)))
        fh.write(blob)
        fh.write(np.ascontiguousarray(W.coeffs, dtype=_F64).tobytes())


def _grid_from_dict(d: dict) -> Grid2D:
    return Grid2D(int(d["n1"]), int(d["n2"]), float(d["d1"]), float(d["d2"]), float(d["min1"]), float(d["min2"]))


def group_grid_from_dict(d: dict) -> GroupGrid:
    return GroupGrid(_grid_from_dict(d["ygrid"]), float(d["a_min"]), float(d["a_max"]), int(d["n_scales"]), int(d["n_angles"]))


def read_qwc(path) -> QLCWTCoefficients:
    raw = Path(path).read_bytes()
    if len(raw) < _QWC_HEAD.size:
        raise FormatError(f"{path}: too short for a QWC1 header")
    magic, M, L, n1, n2, nmeta = _QWC_HEAD.unpack_from(raw)
    if magic != b"QWC1":
        raise FormatError(f"{path}: bad magic {magic!r}")
    start = _QWC_HEAD.size
    try:
        meta = json.loads(raw[start : start + nmeta].decode("utf-8"))
        gg = group_grid_from_dict(meta["group_grid"])
        source = _grid_from_dict(meta["source"])
        lct = LCTPair.from_dict(meta["lct"])
    except (ValueError, KeyError, TypeError, QLCWTError) as exc:
        raise FormatError(f"{path}: bad metadata block ({exc})") from exc
    body = raw[start + nmeta :]
    count = M * L * n1 * n2 * 4
    if len(body) != count * 8:
        raise FormatError(f"{path}: expected {count} values, found {len(body) // 8}")
    if gg.shape != (M, L, n1, n2):
        raise FormatError(f"{path}: header dims disagree with the metadata group grid")
    data = np.frombuffer(body, dtype=_F64).reshape(M, L, n1, n2, 4).copy()
    return QLCWTCoefficients(data, gg, lct, source, meta.get("wavelet", {}))


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def read_lct(path) -> LCTPair:
    doc = _load_json(path)
    try:
        return LCTPair.from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: not an LCT pair ({exc})") from exc


def write_lct(path, P: LCTPair) -> None:
    Path(path).write_text(json.dumps(P.to_dict(), indent=2) + "\n")


def resolve_lct(lct_path=None, preset: str | None = None) -> LCTPair:
    """``--lct`` file wins over ``--preset``; the default is the Fourier preset."""
    if lct_path:
        return read_lct(lct_path)
    return parse_preset(preset or "qwt")


def wavelet_from_spec(spec, grid: Grid2D, base: Path | None = None) -> MotherWavelet:
    """Build a mother wavelet from a spec dict, a JSON file path or a JSON string."""
    if isinstance(spec, (str, Path)):
        text = str(spec)
        if text.lstrip().startswith("{"):
            try:
                spec = json.loads(text)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid wavelet spec ({exc})") from exc
        else:
            path = Path(text)
            base = path.parent
            spec = _load_json(path)
    if not isinstance(spec, dict) or "type" not in spec:
        raise FormatError("wavelet spec needs a 'type' field")
    kind = spec["type"]
    if kind == "dog":
        return make_dog_wavelet(float(spec.get("lambda", 0.5)), grid)
    if kind == "gaussian":
        return make_gaussian_wavelet(grid, float(spec.get("sigma", 1.0)))
    if kind == "file":
        p = Path(spec["path"])
        if not p.is_absolute() and base is not None:
            p = base / p
        sig = read_signal(p)
        if not sig.grid.matches(grid):
            raise FormatError(f"wavelet file {p} lives on a different grid than the signal")
        return wavelet_from_signal(sig)
    raise FormatError(f"unknown wavelet type {kind!r}")


# ---------------------------------------------------------------------------
# energy maps and masks
# ---------------------------------------------------------------------------


def write_pgm16(path, image: np.ndarray) -> float:
    """Write a P5 16-bit PGM of a non-negative map scaled to its maximum.

    Rows follow the first axis.  Returns the scale (value represented by 65535).
    """
    img = np.asarray(image, dtype=float)
    top = float(img.max()) if img.size else 0.0
    scaled = np.zeros(img.shape) if top <= 0 else img / top
    px = np.rint(np.clip(scaled, 0, 1) * 65535).astype(">u2")
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n65535\n".encode("ascii"))
        fh.write(px.tobytes())
    return top


def read_pgm(path) -> np.ndarray:
    """Read a binary (P5) or ASCII (P2) PGM, 8 or 16 bit."""
    raw = Path(path).read_bytes()
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if raw[pos : pos + 1] == b"#":
            while pos < len(raw) and raw[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError(f"{path}: truncated PGM header")
        tokens.append(raw[start:pos])
    magic = tokens[0]
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise FormatError(f"{path}: bad PGM header") from exc
    if magic == b"P5":
        body = raw[pos + 1 :]
        dtype = ">u2" if maxval > 255 else "u1"
        need = width * height * np.dtype(dtype).itemsize
        if len(body) < need:
            raise FormatError(f"{path}: truncated PGM data")
        return np.frombuffer(body[:need], dtype=dtype).reshape(height, width).astype(float)
    if magic == b"P2":
        vals = np.array([int(t) for t in raw[pos:].split()], dtype=float)
        if vals.size < width * height:
            raise FormatError(f"{path}: truncated PGM data")
        return vals[: width * height].reshape(height, width)
    raise FormatError(f"{path}: unsupported PGM magic {magic!r}")


def read_mask(path, shape: tuple[int, int]) -> np.ndarray:
    img = read_pgm(path)
    if img.shape != shape:
        raise FormatError(f"{path}: mask is {img.shape}, grid is {shape}")
    return img > 0


def write_energy_csv(path, grid: Grid2D, energy: np.ndarray) -> None:
    y1, y2 = grid.mesh()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["y1", "y2", "energy"])
        for a, b, e in zip(y1.ravel(), y2.ravel(), np.asarray(energy).ravel()):
            w.writerow([repr(float(a)), repr(float(b)), repr(float(e))])
