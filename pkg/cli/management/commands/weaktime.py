import logging
import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from WeakTime.exception_handler import EXIT_FAILURE, EXIT_INDEFINITE, custom_exception_handler
from WeakTime.logging_filters import bind_command
from cli.commands import cmd_check, cmd_conditional, cmd_dwell, cmd_figures, cmd_oracle
from cli.exceptions import UsageFailure
from cli.figures import PRESETS
from cli.scenario import load_scenario

logger = logging.getLogger(__name__)

ACTIONS = ('dwell', 'conditional', 'check', 'oracle', 'figures')


def parse_gammas(raw):
    if raw is None:
        return None
    try:
        return [float(part) for part in raw.split(',') if part.strip()]
    except ValueError as exc:
        raise UsageFailure(f"cannot read couplings {raw!r}", field='gammas') from exc


class Command(BaseCommand):
    help = 'Weak-measurement dwell and conditional times: compute, check and write CSV.'
    requires_system_checks = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        """Command-line parser errors exit with the usage status (1)."""
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser_error = parser.error

        def error(message):
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                parser.exit(EXIT_FAILURE, f"{parser.prog}: error: {message}\n")
            parser_error(message)

        parser.error = error
        return parser

    def add_arguments(self, parser):
        parser.add_argument('action', choices=ACTIONS)
        parser.add_argument('--config', help='Scenario document (JSON, or YAML by extension).')
        parser.add_argument('--final', help='Final subspace label.')
        parser.add_argument('--chi', type=int, default=0, help='Observable index (default 0).')
        parser.add_argument('--t', type=float, help='Time for check and oracle.')
        parser.add_argument('--gammas', help='Comma-separated descending couplings for oracle.')
        parser.add_argument('--out', help='CSV output path; stdout when omitted.')
        parser.add_argument('--preset', choices=PRESETS, help='Figure preset.')

    def handle(self, *args, **options):
        action = options['action']
        scenario_name = Path(options['config']).stem if options.get('config') else ''
        with bind_command(action, scenario=scenario_name):
            try:
                verdict_failed = self.run(action, options)
            except CommandError:
                raise
            except Exception as exc:
                payload = custom_exception_handler(exc, context=action)
                raise CommandError(payload['message'], returncode=payload['code']) from exc
        if verdict_failed:
            raise SystemExit(EXIT_INDEFINITE)

    def _required(self, options, name):
        if options.get(name) is None:
            raise CommandError(f"--{name} is required for {options['action']}", returncode=1)
        return options[name]

    def _emit(self, series, options):
        if options.get('out'):
            series.save(options['out'])
            logger.info(f"Wrote {len(series.rows)} rows to {options['out']}")
        else:
            self.stdout.write(series.to_csv(), ending='')

    def run(self, action, options):
        """Dispatch ``action``; returns True only for an INDEFINITE check."""
        if action == 'figures':
            self._emit(cmd_figures(self._required(options, 'preset')), options)
            return False

        scenario = load_scenario(self._required(options, 'config'))
        if action == 'dwell':
            self._emit(cmd_dwell(scenario), options)
        elif action == 'conditional':
            self._emit(cmd_conditional(scenario, self._required(options, 'final')), options)
        elif action == 'check':
            report = cmd_check(scenario, options['chi'], self._required(options, 'final'), self._required(options, 't'))
            self.stdout.write(report.line())
            return not report.definite
        elif action == 'oracle':
            series = cmd_oracle(
                scenario,
                final_label=options.get('final'),
                gammas=parse_gammas(options.get('gammas')),
                chi_index=options['chi'],
                t=options.get('t'),
            )
            self._emit(series, options)
        return False
