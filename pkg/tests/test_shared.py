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

import os
import unittest
try:
    from unittest.mock import Mock, patch
except ImportError:
    from mock import Mock, patch

import requests

from lptight.errors import (
    ConfigValidationError,
    RequestFailedError,
    RequestNotOKError
)
from lptight.shared import (
    WORKERS_ENV,
    parallel_map,
    request_dataset,
    worker_count
)


class TestWorkerCount(unittest.TestCase):
    def test_worker_count_returns_explicit_count(self):
        self.assertEqual(3, worker_count(3))
        self.assertEqual(2, worker_count('2'))

    def test_worker_count_reads_environment(self):
        with patch.dict(os.environ, {WORKERS_ENV: '4'}):
            self.assertEqual(4, worker_count())

    def test_worker_count_defaults_to_one(self):
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(1, worker_count())

    def test_worker_count_raises_if_invalid(self):
        for workers in (0, -2, 'many'):
            with self.assertRaises(ConfigValidationError):
                worker_count(workers)

    def test_worker_count_raises_if_environment_invalid(self):
        with patch.dict(os.environ, {WORKERS_ENV: 'x'}):
            with self.assertRaises(ConfigValidationError):
                worker_count()


class TestParallelMap(unittest.TestCase):
    def test_parallel_map_runs_in_process(self):
        func = Mock(side_effect=lambda x: x * 2)

        self.assertEqual([2, 4, 6], parallel_map(func, iter([1, 2, 3]), workers=1))
        self.assertEqual(3, func.call_count)

    def test_parallel_map_keeps_order_with_workers(self):
        items = list(range(-5, 5))
        self.assertEqual([abs(x) for x in items], parallel_map(abs, items, workers=2))

    def test_parallel_map_returns_empty_list(self):
        self.assertEqual([], parallel_map(abs, [], workers=2))


class TestRequestDataset(unittest.TestCase):
    @patch('lptight.shared.requests.get')
    def test_request_dataset_returns_response(self, get):
        response = Mock(ok=True, status_code=200)
        get.return_value = response
        self.assertIs(response, request_dataset('http://example.org/data.json'))

    @patch('lptight.shared.requests.get')
    def test_request_dataset_raises_if_not_ok(self, get):
        get.return_value = Mock(ok=False, status_code=500)
        with self.assertRaises(RequestNotOKError):
            request_dataset('http://example.org/data.json')

    @patch('lptight.shared.requests.get')
    def test_request_dataset_raises_if_request_fails(self, get):
        get.side_effect = requests.Timeout()
        with self.assertRaises(RequestFailedError):
            request_dataset('http://example.org/data.json')


if __name__ == '__main__':
    unittest.main()
