"""Writers for spectrum, eigenvalue and report files.

CSV files hold a header line and data only, floats with 17 significant
digits. JSON documents carry a ``metadata`` block; the timestamp in it is
optional so repeated runs stay byte-identical.
"""

import csv
import io
import json
import pathlib
import sys

import numpy as np
from aiida.common import timezone
from aiida.common.log import AIIDA_LOGGER

from ..exceptions import FileAccessError
from ..parsers.tables import SPECTRUM_COLUMNS

LOGGER = AIIDA_LOGGER.getChild("esomit.export")

EIGEN_COLUMNS = ("omega_plus", "omega_minus", "kappa_plus", "kappa_minus", "class")


def format_float(value):
    return format(float(value), ".17g")


def _plain(value):
    """Convert numpy scalars and arrays for `json.dumps`."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"{type(value).__name__} is not JSON serialisable")


def spectrum_rows(table):
    for delta_p, t, T, tau_g in table.rows():
        yield [delta_p, t.real, t.imag, T, tau_g]


def eigen_rows(scan):
    for index, value in enumerate(scan["axis"]):
        yield [value] + [scan[name][index] for name in EIGEN_COLUMNS[:-1]] + [str(scan["kind"][index])]


def render_csv(columns, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([value if isinstance(value, str) else format_float(value) for value in row])
    return buffer.getvalue()


def render_json(document, metadata=None, timestamp=False):
    metadata = dict(metadata or {})
    if timestamp:
        metadata["timestamp"] = timezone.now().isoformat()
    payload = {"metadata": metadata, **document}
    return json.dumps(payload, indent=2, sort_keys=True, default=_plain) + "\n"


def render_table(columns, rows, fmt, metadata=None, timestamp=False):
    """Render a table as CSV, or as JSON with ``columns`` and ``rows`` keys."""
    rows = list(rows)
    if fmt == "csv":
        return render_csv(columns, rows)
    return render_json({"columns": list(columns), "rows": rows}, metadata, timestamp)


def write_output(text, out=None):
    """Write `text` to `out`, or to stdout when `out` is ``None`` or ``-``."""
    if out is None or str(out) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = pathlib.Path(out)
    try:
        with path.open("w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exception:
        raise FileAccessError(path, exception.strerror or str(exception)) from None
    LOGGER.info("wrote %s", path)


def write_spectrum(table, out=None, fmt="csv", timestamp=False):
    text = render_table(SPECTRUM_COLUMNS, spectrum_rows(table), fmt, table.metadata, timestamp)
    write_output(text, out)
