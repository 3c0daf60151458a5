import json

import numpy as np
import pandas as pd
import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from common.exceptions import EXIT_INPUT
from factories import LabeledSampleFactory
from measures.io import write_source_csv, write_target_csv


@pytest.fixture
def separated_files(tmp_path):
    """두 성분 source, target 은 class 1 에서 2개, class 2 에서 6개"""
    source = LabeledSampleFactory(per_class=(8, 8), seed=3)
    picked = np.concatenate([np.flatnonzero(source.labels == 1)[:2], np.flatnonzero(source.labels == 2)[:6]])
    source_path = write_source_csv(source, tmp_path / 'source.csv')
    target_path = write_target_csv(source.points[picked], tmp_path / 'target.csv')
    return source_path, target_path


class TestEstimateCommand:
    """estimate 커맨드 테스트"""

    def test_single_class(self, capsys, tmp_path, output_dir):
        """K=1 이면 theta = (1.0)"""
        # Given
        source = LabeledSampleFactory(per_class=(4,))
        source_path = write_source_csv(source, tmp_path / 'source.csv')
        target_path = write_target_csv(source.points[:2], tmp_path / 'target.csv')

        # When
        call_command('estimate', str(source_path), str(target_path), '--quiet',
                     '--theta-out', str(output_dir / 'theta.json'), '--trace-out', str(output_dir / 'trace.csv'))

        # Then
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == '1\t1.0'
        assert json.loads((output_dir / 'theta.json').read_text())['theta_hat'] == [1.0]

    def test_exact_recovery(self, capsys, separated_files, output_dir):
        """W0 로 (0.25, 0.75) 복원"""
        # When
        call_command('estimate', *map(str, separated_files), '--quiet',
                     '--theta-out', str(output_dir / 'theta.json'), '--trace-out', str(output_dir / 'trace.csv'))

        # Then
        payload = json.loads((output_dir / 'theta.json').read_text())
        assert payload['loss'] == 'W0'
        assert payload['classes'] == [1, 2]
        assert payload['theta_hat'] == pytest.approx([0.25, 0.75], abs=0.05)

        trace = pd.read_csv(output_dir / 'trace.csv')
        assert list(trace.columns) == ['iteration', 'loss', 'gradient_norm']
        assert trace['loss'].iloc[-1] <= trace['loss'].iloc[0] + 1e-12

    def test_config_file_and_flags(self, separated_files, tmp_path, output_dir):
        """설정 파일 값 위에 플래그"""
        # Given
        config = tmp_path / 'estimate.txt'
        config.write_text("loss = Slambda\nlam = 5\niters = 20\nmax_outer_iterations = 30\n")

        # When
        call_command('estimate', *map(str, separated_files), '--config', str(config), '--lambda', '0.5',
                     '--quiet', '--theta-out', str(output_dir / 'theta.json'),
                     '--trace-out', str(output_dir / 'trace.csv'))

        # Then
        payload = json.loads((output_dir / 'theta.json').read_text())
        assert payload['loss'] == 'Slambda'
        assert payload['lambda'] == 0.5
        assert payload['iters'] == 20
        assert payload['outer_iterations'] <= 30

    def test_unknown_config_key(self, separated_files, tmp_path):
        """알 수 없는 설정 키 -> 2"""
        config = tmp_path / 'estimate.txt'
        config.write_text("lamda = 0.5\n")
        with pytest.raises(CommandError) as exc_info:
            call_command('estimate', *map(str, separated_files), '--config', str(config), '--quiet')
        assert exc_info.value.returncode == EXIT_INPUT

    def test_bad_seed_theta(self, separated_files):
        """합이 1이 아닌 초기값 -> 2"""
        with pytest.raises(CommandError) as exc_info:
            call_command('estimate', *map(str, separated_files), '--seed-theta', '0.5, 0.7', '--quiet')
        assert exc_info.value.returncode == EXIT_INPUT
