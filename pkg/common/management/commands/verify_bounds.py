from django.core.management.base import CommandError

from common.exceptions import EXIT_NUMERIC
from common.management.base import TransportCommand
from ot_core.verification import verify_bounds


class Command(TransportCommand):
    help = 'Check the regularization bounds and transport identities on random instances'

    def add_arguments(self, parser):
        parser.add_argument('--instances', type=int, default=20,
                            help='Number of random measure pairs (default: 20)')
        parser.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')
        self.add_quiet_argument(parser)

    def run(self, *args, **options):
        if options['instances'] < 1:
            raise CommandError('--instances must be >= 1', returncode=2)

        checks = verify_bounds(instances=options['instances'], seed=options['seed'])

        self.stdout.write(f"{'Property':<24} {'Evaluations':>12} {'Violations':>11} {'Worst slack':>14}")
        self.stdout.write('-' * 64)
        for check in checks:
            line = f"{check.name:<24} {check.evaluations:>12} {check.violations:>11} {check.worst_slack:>14.3e}"
            self.stdout.write(self.style.SUCCESS(line) if check.passed else self.style.ERROR(line))

        failed = [check.name for check in checks if not check.passed]
        if failed:
            raise CommandError(f"Bound violations: {', '.join(failed)}", returncode=EXIT_NUMERIC)
        self.stdout.write(self.style.SUCCESS('\nAll properties hold'))
