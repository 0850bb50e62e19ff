import json
import math
import tempfile
from contextlib import redirect_stderr
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from WeakTime.exception_handler import custom_exception_handler
from WeakTime.exceptions import ComputationError
from timefunc.times import dwell_time
from twolevel.closed_forms import conditional_closed
from .commands import cmd_check, cmd_conditional, cmd_dwell, cmd_figures, cmd_oracle, default_gammas
from .exceptions import OutputFailure, ScenarioParseError, ScenarioValidationError, UsageFailure
from .management.commands.weaktime import Command
from .figures import FIG1_HEADER, FIG2_HEADER
from .scenario import parse_scenario
from .series import TimeSeries, format_value

ROOT3 = math.sqrt(3.0)
LEVEL_0 = [[1, 0], [0, 0]]
LEVEL_1 = [[0, 0], [0, 1]]


def two_level_document(t_max=10.0, samples=1000, v=(ROOT3, 0.0), **extra):
    document = {
        'name': 'rabi',
        'system': {'preset': 'two-level', 'omega': 2.0, 'v': list(v)},
        'time': {'t_max': t_max, 'samples': samples},
    }
    document.update(extra)
    return document


def explicit_document(finals=None, t_max=2.0, samples=50):
    return {
        'name': 'explicit',
        'system': {
            'hamiltonian': [[-1.0, ROOT3], [ROOT3, 1.0]],
            'initial': [1, 0],
            'observable': {'values': [0, 1], 'projectors': [LEVEL_0, LEVEL_1]},
            'finals': finals or {'labels': ['0', '1'], 'projectors': [LEVEL_0, LEVEL_1], 'complete': True},
        },
        'time': {'t_max': t_max, 'samples': samples},
    }


def identity_final_document(**kwargs):
    return explicit_document(finals={'labels': ['any'], 'projectors': [[[1, 0], [0, 1]]], 'complete': True},
                             **kwargs)


class ParseScenarioTestCase(SimpleTestCase):
    def test_two_level_preset(self):
        scenario = parse_scenario(two_level_document(v=(1.7320508, 0)))
        self.assertAlmostEqual(scenario.params.Omega, 4.0, delta=1e-6)
        self.assertEqual(scenario.model.dim, 2)
        self.assertEqual(scenario.time.samples, 1000)
        self.assertIsNone(scenario.detector)
        self.assertEqual(scenario.detector_coeff(), 0.0)

    def test_missing_initial_names_path(self):
        document = explicit_document()
        del document['system']['initial']
        with self.assertRaises(ScenarioValidationError) as cm:
            parse_scenario(document)
        self.assertEqual(cm.exception.path, 'system.initial')

    def test_single_sample_rejected(self):
        with self.assertRaises(ScenarioValidationError) as cm:
            parse_scenario(two_level_document(samples=1))
        self.assertEqual(cm.exception.path, 'time.samples')

    def test_non_positive_t_max_rejected(self):
        with self.assertRaises(ScenarioValidationError) as cm:
            parse_scenario(two_level_document(t_max=0.0))
        self.assertEqual(cm.exception.path, 'time.t_max')

    def test_model_errors_are_prefixed(self):
        document = explicit_document()
        document['system']['initial'] = {'density': [[2, 0], [0, 0]]}
        with self.assertRaises(ScenarioValidationError) as cm:
            parse_scenario(document)
        self.assertEqual(cm.exception.path, 'system.initial')

    def test_bad_matrix_entry(self):
        document = explicit_document()
        document['system']['hamiltonian'] = [[0, 'a'], [0, 0]]
        with self.assertRaises(ScenarioValidationError) as cm:
            parse_scenario(document)
        self.assertEqual(cm.exception.path, 'system.hamiltonian')

    def test_complex_entries(self):
        document = explicit_document()
        document['system']['hamiltonian'] = [[-1, [1, -1]], [[1, 1], 1]]
        scenario = parse_scenario(document)
        self.assertEqual(scenario.model.hamiltonian.matrix[0, 1], 1 - 1j)

    def test_span_projectors(self):
        document = explicit_document()
        document['system']['observable']['projectors'] = [{'span': [[1, 0]]}, {'span': [[0, [1, 0]]]}]
        scenario = parse_scenario(document)
        self.assertAlmostEqual(scenario.model.projector(1).matrix[1, 1].real, 1.0, delta=1e-12)

    def test_malformed_json_reports_line(self):
        with self.assertRaises(ScenarioParseError) as cm:
            parse_scenario('{\n  "name": "x",\n  "system": ,\n}')
        self.assertEqual(cm.exception.line, 3)

    def test_yaml_document(self):
        text = (
            "name: yaml\n"
            "system:\n"
            "  preset: two-level\n"
            "  omega: 2.0\n"
            "  v: [1.7320508075688772, 0.0]\n"
            "time:\n"
            "  t_max: 1.0\n"
            "  samples: 5\n"
        )
        scenario = parse_scenario(text, yaml_document=True)
        self.assertEqual(scenario.name, 'yaml')
        self.assertAlmostEqual(scenario.params.Omega, 4.0, delta=1e-12)

    def test_top_level_must_be_mapping(self):
        with self.assertRaises(ScenarioParseError):
            parse_scenario('[1, 2]')

    def test_detector_block(self):
        scenario = parse_scenario(two_level_document(detector={'gamma': 1e-3, 'chirp': 1.0}))
        self.assertEqual(scenario.detector.gamma, 1e-3)
        self.assertAlmostEqual(scenario.detector_coeff(), 1.0, delta=1e-8)

    def test_detector_errors(self):
        with self.assertRaises(ScenarioValidationError) as cm:
            parse_scenario(two_level_document(detector={'chirp': 1.0}))
        self.assertEqual(cm.exception.path, 'detector.gamma')
        with self.assertRaises(ScenarioValidationError) as cm:
            parse_scenario(two_level_document(detector={'gamma': 1e-3, 'N': 500}))
        self.assertEqual(cm.exception.path, 'detector.N')

    def test_tolerances(self):
        scenario = parse_scenario(two_level_document(tolerances={'p_min': 1e-6, 'quadrature_N': 400}))
        self.assertEqual(scenario.tolerances.p_min, 1e-6)
        self.assertEqual(scenario.tolerances.quadrature_N, 400)
        self.assertIsNone(scenario.tolerances.definiteness_threshold)


class TimeSeriesTestCase(SimpleTestCase):
    def test_format(self):
        self.assertEqual(format_value(None), '')
        self.assertEqual(format_value(float('nan')), '')
        self.assertEqual(format_value(1.0), '1')
        self.assertEqual(format_value(0.1), '0.10000000000000001')

    def test_csv(self):
        series = TimeSeries(header=('t', 'x'))
        series.append((0.0, 1.5))
        series.append((0.5, None))
        self.assertEqual(series.to_csv(), 't,x\n0,1.5\n0.5,\n')
        self.assertTrue(series.is_time_ordered())

    def test_row_width_checked(self):
        with self.assertRaises(ValueError):
            TimeSeries(header=('t', 'x')).append((0.0,))


class CmdDwellTestCase(SimpleTestCase):
    def test_two_level_closed_form(self):
        series = cmd_dwell(parse_scenario(two_level_document()))
        self.assertEqual(series.header, ('t', 'tau0', 'tau1', 'presence0', 'presence1'))
        self.assertEqual(len(series.rows), 1000)
        self.assertTrue(series.is_time_ordered())
        for t, tau0, tau1, presence0, presence1 in series.rows:
            self.assertAlmostEqual(tau0, 0.625 * t + 0.09375 * math.sin(4 * t), delta=1e-9)
            self.assertAlmostEqual(tau0 + tau1, t, delta=1e-8)
            self.assertAlmostEqual(presence0 + presence1, 1.0, delta=1e-12)

    def test_no_coupling(self):
        series = cmd_dwell(parse_scenario(two_level_document(v=(0.0, 0.0), samples=50)))
        for t, tau0, tau1, _, _ in series.rows:
            self.assertAlmostEqual(tau0, t, delta=1e-12 * max(1.0, t))
            self.assertAlmostEqual(tau1, 0.0, delta=1e-12)

    def test_quadrature_override(self):
        exact = cmd_dwell(parse_scenario(two_level_document(t_max=1.0, samples=11)))
        quadrature = cmd_dwell(parse_scenario(two_level_document(t_max=1.0, samples=11,
                                                                 tolerances={'quadrature_N': 2000})))
        for a, b in zip(exact.column('tau0'), quadrature.column('tau0')):
            self.assertAlmostEqual(a, b, delta=1e-8)


class CmdConditionalTestCase(SimpleTestCase):
    def test_level_one_final(self):
        series = cmd_conditional(parse_scenario(two_level_document()), '1')
        self.assertEqual(series.header[:6], ('t', 'prob_f', 'tau1_0', 'tau2_0', 'tau_0', 'norm_0'))
        first = series.rows[0]
        self.assertEqual(first[:2], (0.0, 0.0))
        self.assertTrue(all(value is None for value in first[2:]))
        defined = [row for row in series.rows if row[2] is not None]
        self.assertGreater(len(defined), 990)
        for row in defined:
            t, tau1 = row[0], row[2]
            self.assertAlmostEqual(tau1, t / 2, delta=1e-6)

    def test_level_zero_final_matches_closed_forms(self):
        scenario = parse_scenario(two_level_document())
        series = cmd_conditional(scenario, '0')
        for row in series.rows:
            expected = conditional_closed(scenario.params, row[0], '0')
            self.assertAlmostEqual(row[2], expected.tau1_of_0, delta=1e-9)
            self.assertAlmostEqual(row[3], expected.tau2_of_0, delta=1e-9)
            self.assertAlmostEqual(row[6], expected.tau1_of_1, delta=1e-9)

    def test_identity_final(self):
        scenario = parse_scenario(identity_final_document())
        series = cmd_conditional(scenario, 'any')
        for row in series.rows:
            t = row[0]
            self.assertAlmostEqual(row[1], 1.0, delta=1e-12)
            self.assertAlmostEqual(row[2], dwell_time(scenario.model, 0, t), delta=1e-10)
            self.assertAlmostEqual(row[3], 0.0, delta=1e-10)
            self.assertAlmostEqual(row[5], 0.0, delta=1e-10)

    def test_detector_coefficient(self):
        scenario = parse_scenario(two_level_document(samples=20, detector={'gamma': 1e-3, 'chirp': 1.0}))
        for row in cmd_conditional(scenario, '0').rows:
            self.assertAlmostEqual(row[4], row[2] + row[3], delta=1e-7)


class CmdCheckTestCase(SimpleTestCase):
    def test_uncoupled_is_definite(self):
        report = cmd_check(parse_scenario(two_level_document(v=(0.0, 0.0))), 0, '1', 1.0)
        self.assertTrue(report.definite)
        self.assertLessEqual(report.commutator_norm, 1e-10)
        self.assertTrue(report.line().endswith(' DEFINITE'))

    def test_figure_parameters_are_indefinite(self):
        report = cmd_check(parse_scenario(two_level_document()), 0, '1', 1.0)
        self.assertFalse(report.definite)
        self.assertEqual(report.verdict, 'INDEFINITE')
        self.assertEqual(report.threshold, 1e-9)

    def test_identity_final_is_definite(self):
        self.assertTrue(cmd_check(parse_scenario(identity_final_document()), 0, 'any', 1.0).definite)


class CmdOracleTestCase(SimpleTestCase):
    def test_default_gammas(self):
        self.assertEqual(default_gammas(1e-2), [1e-2, 5e-3, 2.5e-3, 1.25e-3])

    def test_unconditional_sweep(self):
        scenario = parse_scenario(two_level_document(t_max=1.0, samples=2, detector={'gamma': 1e-2, 'q0': 0.5}))
        series = cmd_oracle(scenario)
        self.assertEqual(series.header, ('gamma', 'tau_oracle', 'tau_formula', 'abs_error'))
        self.assertEqual(series.column('gamma'), [1e-2, 5e-3, 2.5e-3, 1.25e-3])
        errors = series.column('abs_error')
        self.assertLess(errors[-1], errors[0])
        self.assertLessEqual(errors[-1], 1e-4)

    def test_level_one_final_limit(self):
        scenario = parse_scenario(two_level_document(t_max=1.0, samples=2, detector={'gamma': 2e-3}))
        series = cmd_oracle(scenario, final_label='1', gammas=[2e-3, 1e-3])
        self.assertAlmostEqual(series.column('tau_oracle')[-1], 0.5, delta=1e-3)

    def test_needs_detector(self):
        with self.assertRaises(ScenarioValidationError):
            cmd_oracle(parse_scenario(two_level_document(samples=2)))


class CmdFiguresTestCase(SimpleTestCase):
    def test_fig1(self):
        series = cmd_figures('fig1')
        self.assertEqual(series.header, FIG1_HEADER)
        self.assertEqual(len(series.rows), 1000)
        self.assertEqual(series.rows[-1][0], 10.0)
        for t, tau0, tau1, given_1, *_ in series.rows:
            self.assertAlmostEqual(tau0 + tau1, t, delta=1e-12)
            if given_1 is not None:
                self.assertAlmostEqual(given_1, t / 2, delta=1e-12)
        self.assertIsNone(series.rows[0][3])
        self.assertTrue(any(row[4] > row[0] for row in series.rows))
        self.assertTrue(any(row[5] < 0 for row in series.rows))

    def test_fig2(self):
        series = cmd_figures('fig2')
        self.assertEqual(series.header, FIG2_HEADER)
        for _, derived, printed in series.rows:
            self.assertAlmostEqual(printed, derived / 2, delta=1e-15)

    def test_output_is_deterministic(self):
        self.assertEqual(cmd_figures('fig1').to_csv(), cmd_figures('fig1').to_csv())

    def test_unknown_preset(self):
        with self.assertRaises(UsageFailure):
            cmd_figures('fig3')


class ExceptionHandlerTestCase(SimpleTestCase):
    def test_codes(self):
        self.assertEqual(custom_exception_handler(ScenarioValidationError(field='time'))['code'], 2)
        self.assertEqual(custom_exception_handler(ComputationError())['code'], 1)
        self.assertEqual(custom_exception_handler(FileNotFoundError(2, 'No such file', 'x.json'))['code'], 1)
        self.assertEqual(custom_exception_handler(UsageFailure(field='preset'))['code'], 1)
        with self.assertNoLogs('weaktime.command', level='ERROR'):
            payload = custom_exception_handler(OutputFailure("cannot write x.csv", field='out'))
        self.assertEqual(payload, {'status': False, 'code': 1, 'message': 'out: cannot write x.csv'})
        payload = custom_exception_handler(ScenarioValidationError("bad", field='system.initial'))
        self.assertEqual(payload, {'status': False, 'code': 2, 'message': 'system.initial: bad'})


class WeaktimeCommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write(self, name, document):
        path = Path(self.tmp.name) / name
        path.write_text(json.dumps(document) if isinstance(document, dict) else document, encoding='utf-8')
        return str(path)

    def run_command(self, *args, **options):
        out = StringIO()
        call_command('weaktime', *args, stdout=out, **options)
        return out.getvalue()

    def test_dwell_to_stdout(self):
        config = self.write('rabi.json', two_level_document(samples=5))
        lines = self.run_command('dwell', config=config).splitlines()
        self.assertEqual(lines[0], 't,tau0,tau1,presence0,presence1')
        self.assertEqual(len(lines), 6)
        self.assertEqual([float(value) for value in lines[1].split(',')], [0.0, 0.0, 0.0, 1.0, 0.0])

    def test_yaml_config(self):
        config = self.write('rabi.yaml', "system: {preset: two-level, omega: 2.0}\ntime: {t_max: 1.0, samples: 3}\n")
        lines = self.run_command('dwell', config=config).splitlines()
        self.assertEqual([float(value) for value in lines[-1].split(',')[:3]], [1.0, 1.0, 0.0])

    def test_conditional_sentinel(self):
        config = self.write('rabi.json', two_level_document(samples=3))
        lines = self.run_command('conditional', config=config, final='1').splitlines()
        fields = lines[1].split(',')
        self.assertEqual([float(value) for value in fields[:2]], [0.0, 0.0])
        self.assertEqual(fields[2:], [''] * 8)

    def test_check_exit_statuses(self):
        definite = self.write('free.json', two_level_document(v=(0.0, 0.0), samples=2))
        self.assertIn('DEFINITE', self.run_command('check', config=definite, final='1', t=1.0))
        indefinite = self.write('rabi.json', two_level_document(samples=2))
        out = StringIO()
        with self.assertRaises(SystemExit) as cm:
            call_command('weaktime', 'check', config=indefinite, final='1', t=1.0, chi=0, stdout=out)
        self.assertEqual(cm.exception.code, 3)
        self.assertIn('INDEFINITE', out.getvalue())

    def test_oracle_empty_gammas(self):
        config = self.write('rabi.json', two_level_document(t_max=1.0, samples=2, detector={'gamma': 1e-2}))
        with self.assertRaises(CommandError) as cm:
            self.run_command('oracle', config=config, gammas='')
        self.assertEqual(cm.exception.returncode, 2)

    def test_invalid_scenario(self):
        document = explicit_document()
        del document['system']['initial']
        config = self.write('broken.json', document)
        with self.assertRaises(CommandError) as cm:
            self.run_command('dwell', config=config)
        self.assertEqual(cm.exception.returncode, 2)
        self.assertIn('system.initial', str(cm.exception))

    def test_missing_config_file(self):
        with self.assertRaises(CommandError) as cm:
            self.run_command('dwell', config=str(Path(self.tmp.name) / 'absent.json'))
        self.assertEqual(cm.exception.returncode, 1)

    def test_missing_option(self):
        with self.assertRaises(CommandError) as cm:
            self.run_command('figures')
        self.assertEqual(cm.exception.returncode, 1)

    def test_figures_to_file(self):
        path = Path(self.tmp.name) / 'fig2.csv'
        self.run_command('figures', preset='fig2', out=str(path))
        written = path.read_text(encoding='utf-8')
        self.assertEqual(written, self.run_command('figures', preset='fig2'))
        self.assertTrue(written.startswith('t,tau0_2_of_0,tau0_2_of_0_printed\n'))

    def test_figures_to_missing_directory(self):
        path = Path(self.tmp.name) / 'absent' / 'fig1.csv'
        with self.assertNoLogs('weaktime.command', level='ERROR'):
            with self.assertRaises(CommandError) as cm:
                self.run_command('figures', preset='fig1', out=str(path))
        self.assertEqual(cm.exception.returncode, 1)
        self.assertTrue(str(cm.exception).startswith('out: cannot write'))
        self.assertFalse(path.exists())

    def test_usage_errors_exit_1(self):
        for argv in (
            ['manage.py', 'weaktime', 'bogus'],
            ['manage.py', 'weaktime', 'figures', '--preset', 'fig3'],
            ['manage.py', 'weaktime', 'check', '--t', 'soon'],
        ):
            with self.subTest(argv=argv):
                stderr = StringIO()
                with redirect_stderr(stderr), self.assertRaises(SystemExit) as cm:
                    Command().run_from_argv(argv)
                self.assertEqual(cm.exception.code, 1)
                self.assertIn('error:', stderr.getvalue())

    def test_usage_errors_through_call_command(self):
        with self.assertRaises(CommandError) as cm:
            self.run_command('bogus')
        self.assertEqual(cm.exception.returncode, 1)
        with self.assertRaises(CommandError) as cm:
            self.run_command('figures', preset='fig3')
        self.assertEqual(cm.exception.returncode, 1)
        config = self.write('rabi.json', two_level_document(t_max=1.0, samples=2, detector={'gamma': 1e-2}))
        with self.assertRaises(CommandError) as cm:
            self.run_command('oracle', config=config, gammas='1e-2,abc')
        self.assertEqual(cm.exception.returncode, 1)
