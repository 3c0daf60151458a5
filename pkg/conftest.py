import logging

import numpy as np
import pytest


@pytest.fixture
def rng():
    """테스트마다 고정 seed 의 numpy Generator"""
    return np.random.default_rng(12345)


@pytest.fixture
def celery_eager(settings):
    """Celery 작업을 broker 없이 현재 프로세스에서 실행"""
    from config.celery import app

    settings.CELERY_TASK_ALWAYS_EAGER = True
    settings.CELERY_TASK_EAGER_PROPAGATES = True
    app.conf.task_always_eager = True
    app.conf.task_eager_propagates = True
    yield app
    app.conf.task_always_eager = False


@pytest.fixture
def output_dir(tmp_path):
    """커맨드 출력 파일용 임시 디렉터리"""
    directory = tmp_path / 'output'
    directory.mkdir()
    return directory


@pytest.fixture(autouse=True)
def restore_logging():
    """--quiet 커맨드가 끈 logging 을 테스트 후 복구"""
    yield
    logging.disable(logging.NOTSET)
