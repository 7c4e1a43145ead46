"""File writers: sample CSV, surface OBJ, count-map CSV and PGM."""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike

from .errors import UnsupportedFormat

SAMPLE_HEADER = "theta,z0,x,y,z,dc_value,residual"
GRAY = {-1: 32, 0: 0, 1: 64, 2: 128, 3: 192, 4: 255}


def _fmt(v: float) -> str:
    return "%.17g" % v


def samples_csv(samples) -> str:
    """One row per companion sample; LF line endings, 17 significant digits.

    Raises:
        ValueError: if ``samples`` is empty.
    """
    if not len(samples):
        raise ValueError("no samples to export")
    out = [SAMPLE_HEADER]
    for s in samples:
        row = (s.theta, s.z0, *s.companion.as_array(), s.dc_value, s.residual)
        out.append(",".join(_fmt(float(v)) for v in row))
    return "\n".join(out) + "\n"


def count_map_csv(cm) -> str:
    """Rows ``i,j,x,y,z,count,count_with_multiplicity`` with i along u and j along v."""
    X = cm.spec.nodes()
    out = ["i,j,x,y,z,count,count_with_multiplicity"]
    for j in range(cm.counts.shape[0]):
        for i in range(cm.counts.shape[1]):
            x, y, z = X[j, i]
            out.append(f"{i},{j},{_fmt(x)},{_fmt(y)},{_fmt(z)},"
                       f"{int(cm.counts[j, i])},{int(cm.counts_aware[j, i])}")
    return "\n".join(out) + "\n"


def count_map_pgm(counts: ArrayLike) -> bytes:
    """Binary P5 image, maxval 255; row 0 is the first v row.

    Counts map to gray levels 0, 64, 128, 192, 255 for 0..4; invalid nodes
    (count -1) are 32.
    """
    C = np.asarray(counts)
    if C.ndim != 2 or C.size == 0:
        raise ValueError("count map must be a non-empty 2-D grid")
    lut = np.zeros(6, dtype=np.uint8)
    for k, g in GRAY.items():
        lut[k + 1] = g
    if C.min() < -1 or C.max() > 4:
        raise ValueError("counts outside -1..4")
    header = f"P5\n{C.shape[1]} {C.shape[0]}\n255\n".encode("ascii")
    return header + lut[C + 1].astype(np.uint8).tobytes()


def read_pgm(data: bytes) -> np.ndarray:
    """Inverse of :func:`count_map_pgm` for the fixed header layout (gray levels)."""
    head, rest = data.split(b"\n", 1)
    if head != b"P5":
        raise UnsupportedFormat("not a binary PGM")
    dims, rest = rest.split(b"\n", 1)
    maxval, body = rest.split(b"\n", 1)
    w, h = (int(v) for v in dims.split())
    if int(maxval) != 255 or len(body) != w * h:
        raise UnsupportedFormat("unexpected PGM layout")
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w)


def surface_obj(poly, bounds: ArrayLike, resolution: int = 64) -> str:
    """Zero set of ``poly`` inside an axis-aligned box as a Wavefront OBJ mesh.

    Args:
        poly: Callable on (N, 3) arrays.
        bounds: ((xmin, xmax), (ymin, ymax), (zmin, zmax)).
        resolution: Grid nodes per axis.

    Raises:
        ValueError: if the polynomial does not change sign in the box.
    """
    from skimage.measure import marching_cubes

    B = np.asarray(bounds, dtype=float)
    axes = [np.linspace(lo, hi, resolution) for lo, hi in B]
    G = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    V = np.asarray(poly(G), dtype=float).reshape((resolution,) * 3)
    if not (V.min() < 0 < V.max()):
        raise ValueError("surface does not cross the box")
    spacing = tuple((hi - lo) / (resolution - 1) for lo, hi in B)
    verts, faces, _, _ = marching_cubes(V, level=0.0, spacing=spacing)
    verts = verts + B[:, 0]
    buf = io.StringIO()
    for v in verts:
        buf.write("v %.9g %.9g %.9g\n" % tuple(v))
    for f in faces:
        buf.write("f %d %d %d\n" % tuple(f + 1))
    return buf.getvalue()


def write(path: str | Path, content: str | bytes) -> Path:
    """Write text (LF endings) or bytes; the suffix must be a known format."""
    path = Path(path)
    if path.suffix not in {".csv", ".obj", ".pgm", ".json", ".txt"}:
        raise UnsupportedFormat(f"unsupported output format {path.suffix!r}")
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(content, bytes):
        path.write_bytes(content)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(content)
    return path
