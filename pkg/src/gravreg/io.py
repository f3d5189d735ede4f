"""File ingestion and serialization: XYZ / ascii-PLY clouds, landmark and
weight files, flat key-value result records."""

import numpy as np

from .core import PointCloud, RigidTransform
from .errors import ParseError, UnsupportedFormat
from .masses import LandmarkSet


def load_cloud(path) -> PointCloud:
    """Parse a point cloud; format is sniffed from the first non-blank line."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    for line in lines:
        if line.strip():
            if line.strip().lower() == "ply":
                return _parse_ply(lines)
            return _parse_xyz(lines)
    raise ParseError(0, "empty file")


def _parse_xyz(lines):
    rows = []
    width = None
    for i, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        fields = text.split()
        if width is None:
            width = len(fields)
            if width not in (2, 3):
                raise ParseError(i, f"expected 2 or 3 columns, got {width}")
        elif len(fields) != width:
            raise ParseError(i, f"expected {width} columns, got {len(fields)}")
        try:
            rows.append([float(v) for v in fields])
        except ValueError:
            raise ParseError(i, f"bad number in {text!r}") from None
    if not rows:
        raise ParseError(len(lines), "no points")
    return PointCloud(np.array(rows))


def _parse_ply(lines):
    n_vertex = None
    header_end = None
    props = []
    in_vertex_element = False
    for i, line in enumerate(lines):
        text = line.strip()
        if i == 0:
            continue
        if text.startswith("format"):
            if text != "format ascii 1.0":
                raise UnsupportedFormat(f"unsupported PLY format: {text!r}")
        elif text.startswith("element"):
            fields = text.split()
            in_vertex_element = fields[1] == "vertex"
            if in_vertex_element:
                n_vertex = int(fields[2])
        elif text.startswith("property") and in_vertex_element:
            props.append(text.split()[-1])
        elif text == "end_header":
            header_end = i
            break
    if header_end is None or n_vertex is None:
        raise ParseError(len(lines), "missing PLY header terminator or vertex element")
    try:
        cols = [props.index(axis) for axis in ("x", "y", "z")]
    except ValueError:
        raise ParseError(header_end, "vertex element lacks x y z properties") from None

    body = [ln for ln in lines[header_end + 1:] if ln.strip()]
    if len(body) < n_vertex:
        raise ParseError(len(lines), f"vertex count {n_vertex} exceeds body rows {len(body)}")
    rows = []
    for off, line in enumerate(body[:n_vertex]):
        fields = line.split()
        try:
            rows.append([float(fields[c]) for c in cols])
        except (ValueError, IndexError):
            raise ParseError(header_end + 2 + off, f"bad vertex row {line!r}") from None
    return PointCloud(np.array(rows))


def write_cloud(path, cloud: PointCloud):
    with open(path, "w") as fh:
        for p in cloud.points:
            fh.write(" ".join(f"{v:.17g}" for v in p) + "\n")


def load_weights(path):
    values = []
    with open(path) as fh:
        for i, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise ParseError(i, f"bad weight {text!r}") from None
    return np.array(values)


def write_weights(path, values):
    with open(path, "w") as fh:
        for v in values:
            fh.write(f"{v:.17g}\n")


def load_landmarks(path) -> LandmarkSet:
    pairs = []
    with open(path) as fh:
        for i, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            fields = text.split()
            if len(fields) != 2:
                raise ParseError(i, "expected two indices per line")
            try:
                a, b = int(fields[0]), int(fields[1])
            except ValueError:
                raise ParseError(i, f"bad index in {text!r}") from None
            if a < 0 or b < 0:
                raise ParseError(i, "indices must be non-negative")
            pairs.append((a, b))
    return LandmarkSet(tuple(pairs))


def write_record(path, record, transform: RigidTransform | None = None):
    """Flat diff-friendly 'key value' record, transform rows appended row-major."""
    with open(path, "w") as fh:
        for key, value in record.items():
            if isinstance(value, float):
                fh.write(f"{key} {value:.17g}\n")
            else:
                fh.write(f"{key} {value}\n")
        if transform is not None:
            mat = transform.as_matrix()
            fh.write("transform " + " ".join(f"{v:.17g}" for v in mat.ravel()) + "\n")


def read_record(path):
    """Inverse of write_record; 'transform' is decoded back to a RigidTransform."""
    record = {}
    transform = None
    with open(path) as fh:
        for line in fh:
            text = line.strip()
            if not text:
                continue
            key, _, rest = text.partition(" ")
            if key == "transform":
                vals = np.array([float(v) for v in rest.split()])
                d = 3 if len(vals) == 12 else 2
                mat = vals.reshape(d, d + 1)
                transform = RigidTransform(mat[:, :d], mat[:, d])
            else:
                record[key] = rest
    return record, transform


def parse_config_file(path):
    """Flat 'key value' config file; '#' comments and blank lines ignored."""
    config = {}
    with open(path) as fh:
        for i, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            key, _, value = text.partition(" ")
            if not value:
                raise ParseError(i, f"config line needs 'key value': {text!r}")
            config[key] = value.strip()
    return config
