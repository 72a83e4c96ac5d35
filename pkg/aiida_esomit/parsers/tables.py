"""Readers for exported spectrum tables."""

import csv
import pathlib

import numpy as np
from aiida.common.log import AIIDA_LOGGER

from ..exceptions import FileAccessError, InvalidGrid, MalformedTable
from ..physics.response import SpectrumTable

LOGGER = AIIDA_LOGGER.getChild("esomit.tables")

SPECTRUM_COLUMNS = ("delta_p", "re_t", "im_t", "T", "tau_g")


def read_spectrum_csv(path):
    """Parse an exported spectrum CSV back into a `SpectrumTable`.

    The ``T`` column is checked against ``|t|^2`` of the complex columns.
    """
    path = pathlib.Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
    except OSError as exception:
        raise FileAccessError(path, exception.strerror or str(exception)) from None

    if not rows:
        raise MalformedTable(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    if tuple(header) != SPECTRUM_COLUMNS:
        raise MalformedTable(f"{path}: expected columns {','.join(SPECTRUM_COLUMNS)}, got {','.join(header)}")

    try:
        data = np.array([[float(value) for value in row] for row in body], dtype=float)
    except ValueError as exception:
        raise MalformedTable(f"{path}: {exception}") from None
    if data.size == 0:
        raise MalformedTable(f"{path}: no data rows")
    if data.ndim != 2 or data.shape[1] != len(SPECTRUM_COLUMNS):
        raise MalformedTable(f"{path}: rows must have {len(SPECTRUM_COLUMNS)} values")

    t = data[:, 1] + 1j * data[:, 2]
    if not np.allclose(np.abs(t) ** 2, data[:, 3], rtol=1e-12, atol=0.0):
        raise MalformedTable(f"{path}: column T is inconsistent with re_t and im_t")
    try:
        table = SpectrumTable(delta_p=data[:, 0], t=t, tau_g=data[:, 4], metadata={"source": str(path)})
    except InvalidGrid as exception:
        raise MalformedTable(f"{path}: {exception}") from None
    LOGGER.debug("read %d spectrum rows from %s", len(table), path)
    return table
