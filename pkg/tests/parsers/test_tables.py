import pathlib
import tempfile
import unittest

import numpy as np

from aiida_esomit.cli.export import write_spectrum
from aiida_esomit.exceptions import FileAccessError, MalformedTable
from aiida_esomit.parsers.tables import SPECTRUM_COLUMNS, read_spectrum_csv
from aiida_esomit.physics.response import transmission_spectrum
from aiida_esomit.presets.catalog import preset

HEADER = ",".join(SPECTRUM_COLUMNS)


class TestReadSpectrumCsv(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.root = pathlib.Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def _write(self, text):
        path = self.root / "spectrum.csv"
        path.write_text(text, encoding="utf-8")
        return path

    def test_read_exported_spectrum(self):
        entry = preset("es2-ep2")
        table = transmission_spectrum(entry.params, entry.drive, np.linspace(-1e6, 1e6, 11))
        path = self.root / "exported.csv"
        write_spectrum(table, path)

        read = read_spectrum_csv(path)
        np.testing.assert_array_equal(read.delta_p, table.delta_p)
        np.testing.assert_array_equal(read.t, table.t)
        np.testing.assert_array_equal(read.tau_g, table.tau_g)
        self.assertEqual(read.metadata["source"], str(path))

    def test_missing_file(self):
        with self.assertRaises(FileAccessError) as context:
            read_spectrum_csv(self.root / "missing.csv")
        self.assertEqual(context.exception.exit_status, 3)

    def test_malformed(self):
        cases = {
            "empty": "",
            "header": "delta_p,t,T,tau_g\n0,1,1,0\n",
            "no rows": HEADER + "\n",
            "text": HEADER + "\n0,1,0,one,0\n",
            "width": HEADER + "\n0,1,0,1\n",
            "ragged": HEADER + "\n0,1,0,1,0\n1,1,0,1\n",
            "inconsistent": HEADER + "\n0,0.5,0,0.5,0\n",
            "order": HEADER + "\n1,1,0,1,0\n0,1,0,1,0\n",
        }
        for name, text in cases.items():
            with self.subTest(name):
                with self.assertRaises(MalformedTable) as context:
                    read_spectrum_csv(self._write(text))
                self.assertEqual(context.exception.exit_status, 3)
