# MIT License
#
# Copyright (c) 2018 Jared Gillespie
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

from collections import namedtuple
import json
import os
import shutil
import tempfile
import unittest

import numpy as np

from lptight.ssvm import MetricsRecord
from lptight.stores import (
    METRICS_CSV,
    METRICS_JSONL,
    RunStore,
    jsonable
)

Point = namedtuple('Point', ['x', 'y'])


def record(iteration, duality_gap=None):
    return MetricsRecord(iteration, 1.5, 1.0, 0.5, 0.25, 0.25, 1.0, None, 0.75, duality_gap)


class TestJsonable(unittest.TestCase):
    def test_jsonable_converts_infinities_to_strings(self):
        self.assertEqual(['inf', '-inf'], jsonable([float('inf'), -np.inf]))

    def test_jsonable_converts_nan_to_none(self):
        self.assertIsNone(jsonable(float('nan')))

    def test_jsonable_converts_namedtuple_to_object(self):
        self.assertEqual({'x': 1, 'y': [2.0, 'inf']}, jsonable(Point(1, (2.0, np.inf))))

    def test_jsonable_converts_numpy_values(self):
        actual = jsonable({'a': np.arange(3), 'b': np.float64(0.5), 'c': np.bool_(True), 1: np.int64(4)})

        self.assertEqual({'a': [0, 1, 2], 'b': 0.5, 'c': True, '1': 4}, actual)
        self.assertIsInstance(actual['a'][0], int)
        self.assertIsInstance(actual['c'], bool)

    def test_jsonable_sorts_sets(self):
        self.assertEqual([1, 2, 3], jsonable({3, 1, 2}))

    def test_jsonable_uses_to_dict(self):
        self.assertEqual('iteration', list(jsonable(record(1)).keys())[0])


class TestRunStore(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.store = RunStore(os.path.join(self.directory, 'run'))

    def tearDown(self):
        shutil.rmtree(self.directory)

    def read(self, name):
        with open(self.store.path(name)) as f:
            return f.read()

    def test_store_creates_directory(self):
        self.assertTrue(os.path.isdir(self.store.directory))

    def test_write_json_sorts_keys(self):
        self.store.write_json('doc.json', {'b': 1, 'a': np.inf})

        self.assertLess(self.read('doc.json').index('"a"'), self.read('doc.json').index('"b"'))
        self.assertEqual({'a': 'inf', 'b': 1}, self.store.read_json('doc.json'))

    def test_write_json_is_reproducible(self):
        self.store.write_json('one.json', {'x': [1.0, 2.0], 'y': {'z': None}})
        self.store.write_json('two.json', {'y': {'z': None}, 'x': [1.0, 2.0]})
        self.assertEqual(self.read('one.json'), self.read('two.json'))

    def test_write_weights_returns_path(self):
        path = self.store.write_weights(np.array([1, 2.5]))

        self.assertEqual(self.store.path('weights.json'), path)
        self.assertEqual({'w': [1.0, 2.5]}, self.store.read_json('weights.json'))

    def test_write_csv_writes_header_and_blank_none(self):
        self.store.write_csv('table.csv', ['a', 'b'], [[1, None], [np.float64(0.5), np.inf]])
        self.assertEqual(['a,b', '1,', '0.5,inf'], self.read('table.csv').splitlines())

    def test_append_metrics_writes_header_once(self):
        self.store.append_metrics(record(1, 0.5))
        self.store.append_metrics(record(2))
        lines = self.read(METRICS_CSV).splitlines()

        self.assertEqual(3, len(lines))
        self.assertTrue(lines[0].startswith('iteration,relaxed_objective,exact_objective,relaxed_hinge'))
        self.assertEqual('1,1.5,1.0,0.5,0.25,0.25,1.0,,0.75,0.5,,', lines[1])
        self.assertEqual('2,1.5,1.0,0.5,0.25,0.25,1.0,,0.75,,,', lines[2])

    def test_append_metrics_writes_json_lines(self):
        self.store.append_metrics(record(1))
        self.store.append_metrics(record(2))
        rows = [json.loads(line) for line in self.read(METRICS_JSONL).splitlines()]

        self.assertEqual([1, 2], [row['iteration'] for row in rows])
        self.assertIsNone(rows[0]['test_tight_fraction'])

    def test_append_metrics_truncates_previous_run(self):
        RunStore(self.store.directory).append_metrics(record(1))
        RunStore(self.store.directory).append_metrics(record(7))
        self.assertEqual(2, len(self.read(METRICS_CSV).splitlines()))


if __name__ == '__main__':
    unittest.main()
