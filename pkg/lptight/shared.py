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


__all__ = ['INTEGRALITY_TOL', 'PIVOT_TOL', 'TIE_TOL', 'WORKERS_ENV', 'parallel_map', 'request_dataset', 'worker_count']


from concurrent.futures import ProcessPoolExecutor
import logging
import os

import requests

from .errors import (
    ConfigValidationError,
    RequestFailedError,
    RequestNotOKError
)

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-9
INTEGRALITY_TOL = 1e-6
TIE_TOL = 1e-9

WORKERS_ENV = 'LPTIGHT_WORKERS'


def request_dataset(url, timeout=30):
    try:
        response = requests.get(url, timeout=timeout)
    except requests.RequestException:
        raise RequestFailedError('request to {} failed'.format(url))

    if not response.ok:
        raise RequestNotOKError('request to {} returned status {}'.format(url, response.status_code))
    return response


def worker_count(workers=None):
    """Resolves the number of worker processes.

    :param workers:
        (optional) An explicit count. When None, the `LPTIGHT_WORKERS` environment variable is read, defaulting to 1.
    :type workers: int or None
    :return:
        The number of workers, at least 1.
    :rtype: int
    :raises ConfigValidationError:
        If the count is not a positive integer.
    """
    if workers is None:
        workers = os.environ.get(WORKERS_ENV, '1')

    try:
        workers = int(workers)
    except (TypeError, ValueError):
        raise ConfigValidationError('{} is not a valid worker count'.format(workers))

    if workers < 1:
        raise ConfigValidationError('worker count must be at least 1, got {}'.format(workers))
    return workers


def parallel_map(func, items, workers=None):
    """Applies `func` to every item, preserving order.

    With a single worker this runs in-process; otherwise items are spread over a process pool, so `func` and the
    items must be picklable.

    :param func:
        The function to apply.
    :param items:
        The inputs.
    :param workers:
        (optional) The number of workers, see `worker_count`.
    :type func: function
    :type items: iterable
    :type workers: int or None
    :return:
        The results in input order.
    :rtype: list
    """
    items = list(items)
    workers = worker_count(workers)

    if workers == 1 or len(items) < 2:
        return [func(item) for item in items]

    logger.debug('mapping %d items over %d workers', len(items), workers)
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as executor:
        return list(executor.map(func, items))
