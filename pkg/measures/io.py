"""
CSV ingestion and export.

    source: x1,...,xd,label   (1-based integer labels)
    target: x1,...,xd         (an optional label column is returned separately)
    labels: label
"""
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from common.exceptions import DataFormatError
from measures.domain import DiscreteMeasure, LabeledSample

logger = logging.getLogger(__name__)

LABEL_COLUMN = 'label'
FLOAT_FORMAT = '%.17g'


def coordinate_columns(d):
    return [f'x{i}' for i in range(1, d + 1)]


def _read_frame(path):
    path = Path(path)
    try:
        frame = pd.read_csv(path, skipinitialspace=True)
    except (pd.errors.EmptyDataError, pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataFormatError(f"{path}: cannot parse CSV: {e}") from e
    frame.columns = [str(column).strip() for column in frame.columns]
    if frame.empty:
        raise DataFormatError(f"{path}: no data rows")
    return frame


def _split_columns(frame, path, require_label):
    columns = list(frame.columns)
    has_label = bool(columns) and columns[-1] == LABEL_COLUMN
    coordinate_names = columns[:-1] if has_label else columns

    if require_label and not has_label:
        raise DataFormatError(f"{path}: last column must be '{LABEL_COLUMN}', got header {columns}")
    if not coordinate_names or coordinate_names != coordinate_columns(len(coordinate_names)):
        expected = ','.join(coordinate_columns(max(len(coordinate_names), 1)))
        raise DataFormatError(f"{path}: expected coordinate header {expected}, got {','.join(columns)}")
    return coordinate_names, has_label


def _numeric_block(frame, columns, path):
    block = frame[columns].apply(pd.to_numeric, errors='coerce')
    if block.isna().to_numpy().any():
        row = int(np.flatnonzero(block.isna().to_numpy().any(axis=1))[0])
        raise DataFormatError(f"{path}: non-numeric value in data row {row + 1}")
    return block.to_numpy(dtype=np.float64)


def _integer_labels(series, path):
    values = pd.to_numeric(series, errors='coerce').to_numpy(dtype=np.float64)
    if np.isnan(values).any() or not np.all(values == np.round(values)):
        raise DataFormatError(f"{path}: labels must be integers")
    return values.astype(np.int64)


def read_source_csv(path, n_classes=None):
    """labeled source -> LabeledSample"""
    frame = _read_frame(path)
    coordinate_names, _ = _split_columns(frame, path, require_label=True)
    points = _numeric_block(frame, coordinate_names, path)
    labels = _integer_labels(frame[LABEL_COLUMN], path)
    sample = LabeledSample(points, labels, n_classes=n_classes)
    logger.info(f"Read source CSV: path={path} m={sample.m} d={sample.d} K={sample.n_classes}")
    return sample


def read_target_csv(path, with_labels=False):
    """
    unlabeled target -> 균등 가중치 DiscreteMeasure

    with_labels=True 이면 (measure, labels 또는 None) 반환
    """
    frame = _read_frame(path)
    coordinate_names, has_label = _split_columns(frame, path, require_label=False)
    measure = DiscreteMeasure.uniform(_numeric_block(frame, coordinate_names, path))
    logger.info(f"Read target CSV: path={path} n={measure.n} d={measure.d} labeled={has_label}")

    if not with_labels:
        return measure
    labels = _integer_labels(frame[LABEL_COLUMN], path) if has_label else None
    return measure, labels


def read_labels_csv(path):
    frame = _read_frame(path)
    if list(frame.columns) != [LABEL_COLUMN]:
        raise DataFormatError(f"{path}: expected single '{LABEL_COLUMN}' column, got {list(frame.columns)}")
    return _integer_labels(frame[LABEL_COLUMN], path)


def _write(frame, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.debug(f"Wrote CSV: path={path} rows={len(frame)}")
    return path


def write_source_csv(sample, path):
    frame = pd.DataFrame(sample.points, columns=coordinate_columns(sample.d))
    frame[LABEL_COLUMN] = sample.labels
    return _write(frame, path)


def write_target_csv(measure, path):
    points = measure.points if isinstance(measure, DiscreteMeasure) else np.asarray(measure)
    return _write(pd.DataFrame(points, columns=coordinate_columns(points.shape[1])), path)


def write_labels_csv(labels, path):
    return _write(pd.DataFrame({LABEL_COLUMN: np.asarray(labels, dtype=np.int64)}), path)
