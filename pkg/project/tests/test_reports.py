import csv
import io
import json
import math

from django.test import SimpleTestCase

from uniest.errors import UniestInputError
from uniest.reports import CheckResult, Report, RunConfig, grid_spacing, parse_grid, parse_vector


def make_config(**overrides):
    values = dict(command='fidelity-n1', d=2, samples=1000, seed=0)
    values.update(overrides)
    return RunConfig(**values)


class TestParsing(SimpleTestCase):

    def test_comma_grid(self):
        self.assertEqual(parse_grid('0, 0.5,1'), [0.0, 0.5, 1.0])

    def test_range_grid(self):
        self.assertEqual(parse_grid('0:1:0.25'), [0.0, 0.25, 0.5, 0.75, 1.0])
        self.assertEqual(len(parse_grid('0.5:1:0.05')), 11)

    def test_bad_grids(self):
        with self.assertRaises(UniestInputError):
            parse_grid('0:1:0')
        with self.assertRaises(UniestInputError):
            parse_grid('a,b')

    def test_vector(self):
        self.assertEqual(parse_vector('0,0,1'), (0.0, 0.0, 1.0))
        with self.assertRaises(UniestInputError):
            parse_vector('x,y,z')

    def test_spacing(self):
        self.assertAlmostEqual(grid_spacing([0.0, 0.5, 0.6]), 0.5)
        self.assertEqual(grid_spacing([0.3]), 0.0)


class TestRunConfig(SimpleTestCase):

    def test_valid(self):
        config = make_config()
        self.assertIs(config.validate(), config)

    def test_rejects(self):
        for overrides in (
            {'samples': 99},
            {'d': 1},
            {'d': 9},
            {'seed': -1},
            {'seed': 2**63},
            {'output_format': 'xml'},
            {'workers': 0},
            {'max_attempts': 0},
            {'grid': []},
            {'grid': [0.5, 1.2]},
        ):
            with self.subTest(**overrides), self.assertRaises(UniestInputError):
                make_config(**overrides).validate()

    def test_as_dict_leaves_out_execution_details(self):
        config = make_config(workers=4, output_path='/tmp/out.json', max_attempts=50, options={'strategy': 'bell'})
        data = config.as_dict()
        self.assertNotIn('workers', data)
        self.assertNotIn('output_path', data)
        self.assertNotIn('max_attempts', data)
        self.assertEqual(data['strategy'], 'bell')
        self.assertEqual(make_config(workers=1, options={'strategy': 'bell'}).as_dict(), data)


class TestCheckResult(SimpleTestCase):

    def test_within(self):
        self.assertTrue(CheckResult.within('x', 0.505, 0.5, 0.01).passed)
        self.assertFalse(CheckResult.within('x', 0.52, 0.5, 0.01).passed)

    def test_bounds(self):
        self.assertTrue(CheckResult.at_most('x', 0.5, 0.5).passed)
        self.assertFalse(CheckResult.at_most('x', 0.51, 0.5).passed)
        self.assertTrue(CheckResult.at_least('x', 0.49, 0.5, tolerance=0.02).passed)

    def test_as_dict(self):
        data = CheckResult.within('x', math.inf, 0.5, 0.01).as_dict()
        self.assertIsNone(data['value'])
        self.assertFalse(data['pass'])


class TestReport(SimpleTestCase):

    def setUp(self):
        self.report = Report(
            command='fidelity-n1',
            config=make_config().as_dict(),
            results={'fidelity': {'mean': 0.5012, 'stderr': 0.0016}, 'strategy': 'bell', 'samples': [1, 2]},
            checks=[
                CheckResult.within('mean_fidelity', 0.5012, 0.5, 0.01),
                CheckResult.at_most('below_optimal_bound', 0.7, 0.5),
            ],
        )

    def test_failures(self):
        self.assertEqual(self.report.failures, ['below_optimal_bound'])
        self.assertFalse(self.report.passed)

    def test_json(self):
        data = json.loads(self.report.to_json())
        self.assertEqual(data['schema'], 1)
        self.assertEqual(data['results']['fidelity']['mean'], 0.5012)
        self.assertEqual(data['failures'], ['below_optimal_bound'])
        self.assertNotIn('timestamp', data)

    def test_timestamp(self):
        self.report.timestamp = '2024-01-01T00:00:00+00:00'
        self.assertEqual(json.loads(self.report.to_json())['timestamp'], '2024-01-01T00:00:00+00:00')

    def test_csv_metrics(self):
        rows = list(csv.reader(io.StringIO(self.report.render('csv'))))
        self.assertEqual(rows[0], ['metric', 'value', 'reference', 'tolerance', 'pass'])
        metrics = {row[0]: row for row in rows[1:]}
        self.assertEqual(float(metrics['fidelity.mean'][1]), 0.5012)
        self.assertNotIn('samples', metrics)
        self.assertEqual(metrics['check.below_optimal_bound'][4], 'False')

    def test_csv_table(self):
        self.report.results['table'] = [{'a': 0.5, 'mean': 0.6}, {'a': 1.0, 'mean': 0.5}]
        rows = list(csv.reader(io.StringIO(self.report.to_csv())))
        self.assertEqual(rows, [['a', 'mean'], ['0.5', '0.6'], ['1.0', '0.5']])

    def test_non_finite_values_become_null(self):
        self.report.results['ratio'] = math.nan
        self.assertIsNone(json.loads(self.report.to_json())['results']['ratio'])
