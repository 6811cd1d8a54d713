"""CSV and JSON file formats.

Floats are written with 17 significant digits in CSV and with Python's
shortest round-trip ``repr`` in JSON, so doubles survive a write/read
cycle bit for bit.  Every file is written to a temporary sibling and
renamed into place.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .exceptions import DataError
from .loewner import ReducedModel, SingularValues

__all__ = [
    "fmt",
    "atomic_write_text",
    "write_csv",
    "read_csv",
    "write_json",
    "config_hash",
    "write_samples_csv",
    "read_samples_csv",
    "encode_array",
    "decode_array",
    "model_to_dict",
    "model_from_dict",
    "save_model",
    "load_model",
    "fem_to_dict",
]

ARCHIVE_FORMAT = "loewner-mor/reduced-model"
SAMPLE_COLUMNS = ("omega", "re_H", "im_H", "abs_H")


def fmt(x):
    """17-significant-digit decimal, enough to round-trip any double."""
    return format(float(x), ".17g")


def atomic_write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    atomic_write_text(path, buf.getvalue())


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader if row]


def write_json(path, payload):
    atomic_write_text(path, json.dumps(payload, indent=1, sort_keys=True) + "\n")


def config_hash(config):
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def write_samples_csv(path, points, values):
    """One row per sample: ``omega, re_H, im_H, abs_H`` with ``s = j omega``."""
    points = np.asarray(points, dtype=complex)
    values = np.asarray(values, dtype=complex)
    if np.any(points.real != 0):
        raise DataError("sample CSV holds points on the imaginary axis only")
    rows = ((z.imag, h.real, h.imag, abs(h)) for z, h in zip(points, values))
    write_csv(path, SAMPLE_COLUMNS, rows)


def read_samples_csv(path):
    header, rows = read_csv(path)
    if tuple(header) != SAMPLE_COLUMNS:
        raise DataError(f"{path}: expected columns {','.join(SAMPLE_COLUMNS)}, got {','.join(header)}")
    data = np.array([[float(x) for x in row[:3]] for row in rows]).reshape(-1, 3)
    return 1j * data[:, 0], data[:, 1] + 1j * data[:, 2]


def encode_array(arr):
    """Nested lists; complex entries become ``[re, im]`` pairs."""
    arr = np.asarray(arr)
    if np.iscomplexobj(arr):
        return np.stack([arr.real, arr.imag], axis=-1).tolist()
    return arr.astype(float).tolist()


def decode_array(data, is_complex):
    arr = np.asarray(data, dtype=float)
    if is_complex:
        return arr[..., 0] + 1j * arr[..., 1]
    return arr


def model_to_dict(model, metadata=None):
    is_complex = not model.is_real
    out = {
        "format": ARCHIVE_FORMAT,
        "order": model.order,
        "complex": is_complex,
        "E": encode_array(model.Ehat),
        "A": encode_array(model.Ahat),
        "B": encode_array(model.Bhat),
        "C": encode_array(model.Chat),
        "D": encode_array(np.asarray(model.Dhat, dtype=complex if is_complex else float)),
        "provenance": {"tool_version": __version__, **(metadata or {})},
    }
    if model.singular_values is not None:
        out["singular_values"] = {
            "row": encode_array(model.singular_values.sv_row),
            "col": encode_array(model.singular_values.sv_col),
        }
    return out


def model_from_dict(doc):
    if doc.get("format") != ARCHIVE_FORMAT:
        raise DataError(f"not a reduced-model archive (format={doc.get('format')!r})")
    is_complex = bool(doc["complex"])
    svs = None
    if "singular_values" in doc:
        svs = SingularValues(
            sv_row=np.asarray(doc["singular_values"]["row"], dtype=float),
            sv_col=np.asarray(doc["singular_values"]["col"], dtype=float),
        )
    D = decode_array(doc["D"], is_complex)
    model = ReducedModel(
        Ehat=decode_array(doc["E"], is_complex),
        Ahat=decode_array(doc["A"], is_complex),
        Bhat=decode_array(doc["B"], is_complex),
        Chat=decode_array(doc["C"], is_complex),
        Dhat=D[()] if D.ndim == 0 else D,
        singular_values=svs,
    )
    if model.Ehat.shape != (doc["order"], doc["order"]):
        raise DataError("archive order does not match the stored matrices")
    return model


def save_model(path, model, metadata=None):
    write_json(path, model_to_dict(model, metadata))


def load_model(path, with_metadata=False):
    with open(path) as fh:
        doc = json.load(fh)
    model = model_from_dict(doc)
    return (model, doc.get("provenance", {})) if with_metadata else model


def fem_to_dict(second, first, params):
    return {
        "format": "loewner-mor/fem-system",
        "N": second.n_intervals,
        "h": second.mesh_h,
        "beam": params.to_dict(),
        "second_order": {
            "M": encode_array(second.mass_M),
            "J": encode_array(second.damping_J),
            "K": encode_array(second.stiffness_K),
            "f": encode_array(second.input_f),
            "c1": encode_array(second.out_c1),
            "c2": encode_array(second.out_c2),
            "d": second.feedthrough_d,
        },
        "first_order": {
            "G": encode_array(first.desc_G.toarray()),
            "A": encode_array(first.state_A.toarray()),
            "B": encode_array(first.input_B),
            "C": encode_array(first.output_C),
            "D": first.feedthrough_D,
        },
        "provenance": {"tool_version": __version__},
    }
