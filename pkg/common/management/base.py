"""
Base class for the optimal transport management commands.

Maps library exceptions onto the stable exit-code contract:
0 success, 2 input/config, 3 numeric failure.
"""
import logging

from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from common.exceptions import EXIT_INPUT, OptimalTransportError

logger = logging.getLogger(__name__)


class TransportCommand(BaseCommand):
    """
    handle() 대신 run() 을 구현하는 커맨드 베이스 클래스

    run() 에서 발생한 예외를 CommandError(returncode=...) 로 변환합니다.
    """

    def add_quiet_argument(self, parser):
        parser.add_argument(
            '--quiet',
            action='store_true',
            help='Disable library logging output (only show results)'
        )

    def handle(self, *args, **options):
        if options.get('quiet'):
            logging.disable(logging.CRITICAL)

        try:
            return self.run(*args, **options)
        except serializers.ValidationError as e:
            raise CommandError(f"Invalid configuration: {self._format_validation(e.detail)}",
                               returncode=EXIT_INPUT) from e
        except OptimalTransportError as e:
            logger.warning(f"Command failed: command={self.__module__} error={e}")
            raise CommandError(str(e), returncode=e.exit_code) from e
        except OSError as e:
            raise CommandError(f"I/O error: {e}", returncode=EXIT_INPUT) from e

    def run(self, *args, **options):
        raise NotImplementedError('subclasses of TransportCommand must provide a run() method')

    @staticmethod
    def _format_validation(detail):
        if isinstance(detail, dict):
            return '; '.join(f"{key}: {TransportCommand._format_validation(value)}"
                             for key, value in detail.items())
        if isinstance(detail, list):
            return ', '.join(TransportCommand._format_validation(item) for item in detail)
        return str(detail)
