"""
Reading points, sites, matrices and JSON documents from disk.

Points CSV files have a header row. Euclidean coordinates sit in columns
x0..x{d-1}; a leading ``site_id`` column makes product points resolved
against a site table; a ``t`` column makes hyperboloid points; a trailing
``channel`` column makes channel points; a ``weight`` column attaches
measure weights.
"""

import csv
import hashlib
import json
import logging
import math
import os

import numpy as np

from kernelforge.core import Channel, Euclidean, Hyperboloid, Product
from kernelforge.exceptions import InputError, ParseError
from kernelforge.hyperbolic import lift as lift_point
from kernelforge.numerics import SymMatrix

logger = logging.getLogger(__name__)


def file_digest(path):
    digest = hashlib.sha256()
    with open(path, 'rb') as handle:
        for chunk in iter(lambda: handle.read(65536), b''):
            digest.update(chunk)
    return digest.hexdigest()


def _float(value, line, name):
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ParseError(f"not a number: {value!r}", line=line, field=name)
    if not math.isfinite(number):
        raise ParseError(f"not finite: {value!r}", line=line, field=name)
    return number


def read_table(path):
    """Header and (line number, row) pairs of a CSV file, skipping blank lines."""
    with open(path, newline='') as handle:
        reader = csv.reader(handle)
        header = None
        rows = []
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            row = [cell.strip() for cell in row]
            if header is None:
                header = row
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"expected {len(header)} fields, got {len(row)}", line=reader.line_num)
            rows.append((reader.line_num, row))
    if header is None:
        raise ParseError("file is empty", line=1)
    return header, rows


def _coordinate_columns(header, prefix='x'):
    columns = [i for i, name in enumerate(header)
               if name.startswith(prefix) and name[len(prefix):].isdigit()]
    expected = [f"{prefix}{k}" for k in range(len(columns))]
    if [header[i] for i in columns] != expected:
        raise ParseError(f"coordinate columns must be {prefix}0..{prefix}{len(columns) - 1}",
                         line=1)
    return columns


def read_sites(path):
    """Site table: ``site_id`` plus coordinate columns x0..."""
    header, rows = read_table(path)
    if 'site_id' not in header:
        raise ParseError("site table needs a site_id column", line=1, field='site_id')
    key = header.index('site_id')
    columns = _coordinate_columns(header)
    sites = {}
    for line, row in rows:
        site_id = row[key]
        if site_id in sites:
            raise ParseError(f"site {site_id!r} repeats", line=line, field='site_id')
        sites[site_id] = Euclidean(tuple(_float(row[i], line, header[i]) for i in columns))
    return sites


def read_points(path, sites=None, lift=False):
    """Points of a CSV file and their weights (None without a weight column)."""
    header, rows = read_table(path)
    if not rows:
        raise InputError(f"{os.path.basename(path)} has no points")
    columns = _coordinate_columns(header)
    if not columns:
        raise ParseError("no coordinate columns x0..", line=1)
    has_site = 'site_id' in header
    if has_site and sites is None:
        raise InputError("points carry site_id but no site table was given (--sites)")
    has_t = 't' in header
    has_channel = 'channel' in header
    has_weight = 'weight' in header
    if has_t and lift:
        raise ParseError("hyperboloid points have a t column already; drop --lift", line=1,
                         field='t')
    points = []
    weights = []
    for line, row in rows:
        coords = tuple(_float(row[i], line, header[i]) for i in columns)
        if has_site:
            site_id = row[header.index('site_id')]
            if site_id not in sites:
                raise ParseError(f"unknown site {site_id!r}", line=line, field='site_id')
            point = Product(sites[site_id], coords)
        elif has_t:
            point = Hyperboloid(coords, _float(row[header.index('t')], line, 't'))
        elif lift:
            point = lift_point(coords)
        else:
            point = Euclidean(coords)
        if has_channel:
            raw = row[header.index('channel')]
            if not raw.isdigit():
                raise ParseError(f"channel must be a non-negative integer, got {raw!r}",
                                 line=line, field='channel')
            point = Channel(point, int(raw))
        points.append(point)
        if has_weight:
            weights.append(_float(row[header.index('weight')], line, 'weight'))
    logger.debug("read %d points from %s", len(points), path)
    return points, (weights if has_weight else None)


def read_json(path):
    with open(path) as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno)


def read_matrix(path):
    """Symmetric matrix from JSON (list of lists) or header-less CSV."""
    if path.endswith('.json'):
        data = read_json(path)
        if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
            raise ParseError("matrix JSON must be a list of lists", line=1)
        rows = [[_float(v, k + 1, f"col {j}") for j, v in enumerate(row)]
                for k, row in enumerate(data)]
    else:
        rows = []
        with open(path, newline='') as handle:
            reader = csv.reader(handle)
            for row in reader:
                if not row or all(not cell.strip() for cell in row):
                    continue
                rows.append([_float(v.strip(), reader.line_num, f"col {j}")
                             for j, v in enumerate(row)])
    if not rows:
        raise ParseError("matrix file is empty", line=1)
    width = len(rows)
    for k, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"matrix is not square: row has {len(row)} entries, expected {width}",
                             line=k + 1)
    entries = np.array(rows)
    if not np.allclose(entries, entries.T, rtol=1e-12, atol=0.0):
        raise InputError("matrix is not symmetric")
    return SymMatrix(entries)


def write_matrix(path, entries, fmt='csv', header=None):
    entries = np.asarray(entries, dtype=float)
    if fmt == 'json':
        with open(path, 'w') as handle:
            json.dump(entries.tolist(), handle)
            handle.write('\n')
        return
    with open(path, 'w', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        if header is not None:
            writer.writerow(header)
        for row in entries.tolist():
            writer.writerow([repr(float(v)) for v in row])
