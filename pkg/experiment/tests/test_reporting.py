import json
import math

import numpy as np
import pandas as pd
import pytest

from common.exceptions import ConfigurationError, UnknownClassError
from experiment.domain import CellKey, CellRecord, ExperimentReport
from experiment.reporting import (
    RECORD_COLUMNS,
    aggregate,
    aggregate_from_frame,
    compare_cells,
    evaluate_target_proportions,
    write_report,
)

W0 = CellKey('W0')
WL = CellKey('Wlambda', 0.5, None)
WL5 = CellKey('Wlambda', 0.5, 5)


def _record(cell, rep, error, failure=None):
    return CellRecord(cell, rep, error, 0.1 * (rep + 1), 10 * rep, failure is None, f'hash{rep}', failure=failure)


@pytest.fixture
def report():
    records = (
        _record(W0, 0, 0.02), _record(W0, 1, 0.04), _record(W0, 2, 0.03),
        _record(WL, 0, 0.01), _record(WL, 1, 0.05), _record(WL, 2, float('nan'), failure='overflow'),
        _record(WL5, 0, 0.2), _record(WL5, 1, 0.1), _record(WL5, 2, 0.3),
    )
    return ExperimentReport(records=records, cells=(W0, WL, WL5), theta_star=(0.5, 0.5),
                            dataset_hashes=('hash0', 'hash1', 'hash2'))


class TestEvaluateTargetProportions:
    """evaluate_target_proportions 테스트"""

    def test_two_classes(self):
        """(1,1,2,2) -> (1/2, 1/2)"""
        assert evaluate_target_proportions([1, 1, 2, 2]).tolist() == [0.5, 0.5]

    def test_reference_counts(self):
        """(20,5,8,7,10) -> (0.4, 0.1, 0.16, 0.14, 0.2)"""
        labels = np.repeat(np.arange(1, 6), [20, 5, 8, 7, 10])
        assert np.allclose(evaluate_target_proportions(labels).theta, [0.4, 0.1, 0.16, 0.14, 0.2])

    def test_single_label(self):
        """한 라벨 -> one-hot"""
        assert evaluate_target_proportions([2, 2, 2], n_classes=3).tolist() == [0.0, 1.0, 0.0]

    def test_unseen_class(self):
        """K 밖의 라벨"""
        with pytest.raises(UnknownClassError):
            evaluate_target_proportions([1, 4], n_classes=3)


class TestAggregate:
    """aggregate 테스트"""

    def test_mean_of_repetitions(self, report):
        """평균 오차 = 반복 오차의 산술 평균 (실패 제외)"""
        cells = {(c['loss'], c['ell']): c for c in aggregate(report)['cells']}
        assert cells[('W0', '')]['mean_error'] == pytest.approx(0.03)
        assert cells[('Wlambda', 'inf')]['mean_error'] == pytest.approx(0.03)
        assert cells[('Wlambda', 'inf')]['failures'] == 1
        assert cells[('Wlambda', '5')]['median_error'] == pytest.approx(0.2)

    def test_w0_band(self, report):
        """W0 중앙값 / 사분위 밴드"""
        band = aggregate(report)['w0_band']
        assert band['median_error'] == pytest.approx(0.03)
        assert band['q1_error'] == pytest.approx(0.025)
        assert band['q3_error'] == pytest.approx(0.035)

    def test_report_files(self, report, output_dir):
        """records.csv 에서 다시 계산한 평균 = aggregates.json"""
        # When
        paths = write_report(report, output_dir)

        # Then
        frame = pd.read_csv(paths['records'], keep_default_na=False, na_values=['nan', 'NaN'])
        assert list(frame.columns) == RECORD_COLUMNS
        assert len(frame) == 9

        aggregates = json.loads(paths['aggregates'].read_text())
        recomputed = aggregate_from_frame(frame)
        for cell in aggregates['cells']:
            key = CellKey.from_fields(cell['loss'], '' if cell['lambda'] is None else cell['lambda'], cell['ell'])
            assert recomputed[key] == pytest.approx(cell['mean_error'])


class TestCompareCells:
    """compare_cells 테스트"""

    def test_paired_differences(self, report):
        """같은 반복끼리 차이"""
        summary = compare_cells(report, WL5, W0)
        assert summary['repetitions'] == [0, 1, 2]
        assert summary['differences'] == pytest.approx([0.18, 0.06, 0.27])

    def test_failed_repetition_excluded_from_mean(self, report):
        """NaN 차이는 평균에서 제외"""
        summary = compare_cells(report, WL, W0)
        assert math.isnan(summary['differences'][2])
        assert summary['mean_difference'] == pytest.approx(0.0)

    def test_missing_cell(self, report):
        """기록 없는 셀"""
        with pytest.raises(ConfigurationError):
            compare_cells(report, CellKey('Slambda', 0.5, None), W0)
