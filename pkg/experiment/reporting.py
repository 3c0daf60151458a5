"""
Error metrics, per-cell aggregates and report files.

    records.csv     loss,lambda,ell,rep,error,seconds,sinkhorn_iters,converged,dataset_hash
    aggregates.json {"theta_star": [...], "w0_band": {...}, "cells": [{loss, lambda, ell, mean_error,
                     median_error, q1_error, q3_error, total_seconds, total_sinkhorn_iters,
                     repetitions, failures}, ...]}
"""
import json
import logging
import math
from pathlib import Path

import numpy as np
import pandas as pd

from common.exceptions import ConfigurationError, InputError, UnknownClassError
from estimator.domain import LossKind
from experiment.domain import CellKey
from measures.domain import SimplexVector

logger = logging.getLogger(__name__)

RECORD_COLUMNS = ['loss', 'lambda', 'ell', 'rep', 'error', 'seconds', 'sinkhorn_iters', 'converged', 'dataset_hash']


def evaluate_target_proportions(target_labels, n_classes=None):
    """
    숨겨진 target 라벨의 경험적 비율 theta*

    Raises:
        UnknownClassError: n_classes 범위를 벗어난 라벨
    """
    labels = np.asarray(target_labels, dtype=np.int64).reshape(-1)
    if labels.size == 0:
        raise InputError("target labels are empty")
    n_classes = int(labels.max()) if n_classes is None else int(n_classes)
    out_of_range = labels[(labels < 1) | (labels > n_classes)]
    if out_of_range.size:
        raise UnknownClassError(int(out_of_range[0]), n_classes)
    return SimplexVector.from_counts(np.bincount(labels, minlength=n_classes + 1)[1:])


def records_frame(report):
    return pd.DataFrame([record.as_row() for record in report.records], columns=RECORD_COLUMNS)


def _cell_statistics(errors, seconds, iterations, failures):
    valid = errors[~np.isnan(errors)]
    if valid.size:
        mean, median = float(np.mean(valid)), float(np.median(valid))
        q1, q3 = (float(q) for q in np.quantile(valid, [0.25, 0.75]))
    else:
        mean = median = q1 = q3 = None
    return {
        'mean_error': mean,
        'median_error': median,
        'q1_error': q1,
        'q3_error': q3,
        'total_seconds': float(np.sum(seconds)),
        'total_sinkhorn_iters': int(np.sum(iterations)),
        'repetitions': int(errors.size),
        'failures': int(failures),
    }


def aggregate(report):
    """
    셀별 평균/중앙값/사분위 오차, 총 시간, 실패 수 와 W0 기준 밴드

    평균 오차는 실패하지 않은 반복들의 산술 평균
    """
    cells = []
    for cell in report.cells:
        records = report.records_for(cell)
        stats = _cell_statistics(
            np.array([r.error for r in records], dtype=np.float64),
            np.array([r.seconds for r in records], dtype=np.float64),
            np.array([r.sinkhorn_iters for r in records], dtype=np.int64),
            sum(r.failed for r in records),
        )
        cells.append({'loss': cell.loss, 'lambda': cell.lam, 'ell': cell.ell_field, **stats})

    w0_band = None
    for entry in cells:
        if entry['loss'] == LossKind.W0.value:
            w0_band = {key: entry[key] for key in ('median_error', 'q1_error', 'q3_error', 'mean_error')}
    return {'theta_star': list(report.theta_star), 'w0_band': w0_band, 'cells': cells}


def aggregate_from_frame(frame):
    """records.csv 에서 다시 계산한 셀별 평균 오차 (검증용)"""
    frame = frame.copy()
    frame['lambda'] = frame['lambda'].fillna('').astype(str)
    frame['ell'] = frame['ell'].fillna('').astype(str)
    grouped = frame.groupby(['loss', 'lambda', 'ell'], sort=False)['error'].mean()
    return {CellKey.from_fields(loss, lam, ell): float(value) for (loss, lam, ell), value in grouped.items()}


def compare_cells(report, cell_a, cell_b):
    """
    같은 반복 집합에 대한 쌍별 오차 차이 error_a - error_b

    Raises:
        ConfigurationError: 반복 집합이 다르거나 셀이 비어 있는 경우
    """
    errors_a = {r.rep: r.error for r in report.records_for(cell_a)}
    errors_b = {r.rep: r.error for r in report.records_for(cell_b)}
    if not errors_a or not errors_b:
        raise ConfigurationError(f"cells must be populated: {cell_a.label}, {cell_b.label}")
    if set(errors_a) != set(errors_b):
        raise ConfigurationError(f"repetition sets differ: {cell_a.label} vs {cell_b.label}")

    reps = sorted(errors_a)
    differences = np.array([errors_a[r] - errors_b[r] for r in reps])
    valid = differences[~np.isnan(differences)]
    return {
        'cell_a': cell_a.label,
        'cell_b': cell_b.label,
        'repetitions': reps,
        'differences': differences.tolist(),
        'mean_difference': float(np.mean(valid)) if valid.size else None,
        'median_difference': float(np.median(valid)) if valid.size else None,
    }


def _json_safe(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, dict):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_json_safe(item) for item in value]
    return value


def write_report(report, directory):
    """
    Returns:
        dict: records / aggregates 파일 경로
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    records_path = directory / 'records.csv'
    aggregates_path = directory / 'aggregates.json'

    records_frame(report).to_csv(records_path, index=False, float_format='%.17g', na_rep='nan')
    aggregates_path.write_text(json.dumps(_json_safe(aggregate(report)), indent=2), encoding='utf-8')

    logger.info(f"Wrote experiment report: directory={directory} records={len(report.records)}")
    return {'records': records_path, 'aggregates': aggregates_path}
