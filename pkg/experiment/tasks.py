"""
Celery tasks for distributed experiment sweeps.
"""
import logging

from celery import shared_task

from experiment.harness import run_payload

logger = logging.getLogger(__name__)


@shared_task(bind=True, name='experiment.run_cell')
def run_cell_task(self, payload):
    """
    sweep 의 한 단위 (cell, repetition) 실행

    Returns:
        dict: CellRecord.as_payload()
    """
    logger.info(f"Running sweep unit: task_id={self.request.id} cell={payload['cell']} rep={payload['rep']}")
    record = run_payload(payload)
    return record.as_payload()
