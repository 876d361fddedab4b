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

__all__ = ['CONFIG_FILE', 'METRICS_CSV', 'METRICS_JSONL', 'RunStore', 'WEIGHTS_FILE', 'jsonable']


import csv
import json
import logging
import math
import os
from threading import Lock

import numpy as np

logger = logging.getLogger(__name__)

CONFIG_FILE = 'run_config.json'
METRICS_JSONL = 'metrics.jsonl'
METRICS_CSV = 'metrics.csv'
WEIGHTS_FILE = 'weights.json'


def jsonable(obj):
    """Converts reports into plain JSON values.

    Namedtuples become objects, numpy values become Python numbers, infinities become the strings 'inf' / '-inf'
    and NaN becomes null.
    """
    if hasattr(obj, '_asdict'):
        return {k: jsonable(v) for k, v in obj._asdict().items()}
    if hasattr(obj, 'to_dict'):
        return jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset, np.ndarray)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return 'inf' if obj > 0 else '-inf'
        return obj
    return obj


def _csv_value(value):
    return '' if value is None else value


class RunStore:
    """Writes the artifacts of one run into its own directory.

    Metrics go to both a JSON-lines file and a CSV file whose header is the record's field names. Documents are written
    with sorted keys, so identical runs give identical bytes.

    :param directory:
        The run directory, created if missing.
    :type directory: string
    """
    def __init__(self, directory):
        self._directory = str(directory)
        self._lock = Lock()
        self._metrics_fields = None
        os.makedirs(self._directory, exist_ok=True)

    @property
    def directory(self):
        return self._directory

    def path(self, name):
        return os.path.join(self._directory, name)

    def write_json(self, name, document):
        """Writes a JSON document and returns its path."""
        path = self.path(name)
        with self._lock:
            with open(path, 'w') as f:
                json.dump(jsonable(document), f, sort_keys=True, indent=2)
                f.write('\n')
        logger.info('wrote %s', path)
        return path

    def read_json(self, name):
        with open(self.path(name)) as f:
            return json.load(f)

    def write_config(self, config):
        return self.write_json(CONFIG_FILE, config)

    def write_weights(self, w):
        return self.write_json(WEIGHTS_FILE, {'w': np.asarray(w, dtype=float).tolist()})

    def write_csv(self, name, header, rows):
        """Writes a CSV table and returns its path."""
        path = self.path(name)
        with self._lock:
            with open(path, 'w', newline='') as f:
                writer = csv.writer(f, lineterminator='\n')
                writer.writerow(header)
                for row in rows:
                    writer.writerow([_csv_value(jsonable(v)) for v in row])
        logger.info('wrote %s', path)
        return path

    def append_metrics(self, record):
        """Appends one metrics record to the JSON-lines and CSV files.

        The first record of a store truncates both files and writes the CSV header.

        :param record:
            A record with a `to_dict` method or a mapping.
        :type record: MetricsRecord or dict
        """
        data = jsonable(record)
        with self._lock:
            mode = 'a'
            if self._metrics_fields is None:
                self._metrics_fields = list(data.keys())
                mode = 'w'

            with open(self.path(METRICS_JSONL), mode) as f:
                f.write(json.dumps(data, sort_keys=True) + '\n')

            with open(self.path(METRICS_CSV), mode, newline='') as f:
                writer = csv.writer(f, lineterminator='\n')
                if mode == 'w':
                    writer.writerow(self._metrics_fields)
                writer.writerow([_csv_value(data.get(field)) for field in self._metrics_fields])
