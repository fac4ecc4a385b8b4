import csv
import json
import math
import tempfile
from dataclasses import dataclass
from pathlib import Path

from django.test import SimpleTestCase

from ..utils import parse_gen_option, parse_number_list, parse_vector, write_csv, write_json


class ParserTests(SimpleTestCase):
    def test_gen_option(self):
        self.assertEqual(parse_gen_option('6, 0.5, 3'), (True, (6, 0.5, 3)))
        for bad in ('6,0.5', '1,0.5,3', '6,1.5,3', '6,0.5,-1', 'a,b,c'):
            with self.subTest(value=bad):
                ok, message = parse_gen_option(bad)
                self.assertFalse(ok)
                self.assertIsInstance(message, str)

    def test_vector(self):
        self.assertEqual(parse_vector('1, -2,3.5'), (True, (1.0, -2.0, 3.5)))
        self.assertEqual(parse_vector([1, 2]), (True, (1.0, 2.0)))
        for bad in ('', '0,0', '1,nan', 'x'):
            with self.subTest(value=bad):
                self.assertFalse(parse_vector(bad)[0])

    def test_number_list(self):
        self.assertEqual(parse_number_list('1e-2,1e-3'), (True, [1e-2, 1e-3]))
        self.assertEqual(parse_number_list('6,12', cast=int), (True, [6, 12]))
        self.assertFalse(parse_number_list('1,-1')[0])
        self.assertFalse(parse_number_list('6,1.5', cast=int)[0])


@dataclass
class Row:
    k: int
    value: float


class WriterTests(SimpleTestCase):
    def test_csv_and_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_csv(Path(tmp) / 'nested' / 'rows.csv', ['k', 'value'], [Row(1, 0.5), Row(2, math.nan)])
            with path.open() as handle:
                self.assertEqual(list(csv.reader(handle)), [['k', 'value'], ['1', '0.5'], ['2', 'nan']])
            path = write_json(Path(tmp) / 'out.json', {'b': 1, 'a': [1.5]})
            self.assertEqual(json.loads(path.read_text()), {'a': [1.5], 'b': 1})
