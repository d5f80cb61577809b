"""
Тесты для загрузки документов, отчетов и CLI

Содержит тесты для:
- Разбора документов и позиций ошибок
- Выгрузки и повторной загрузки структур
- Формата отчетов
- Команды polyweave и кодов возврата
"""

import json
import tempfile
from io import StringIO
from pathlib import Path

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from structures.constants import DOC_THIN_MERGE, EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK
from structures.exceptions import StructureParseError
from structures.fixtures import load_fixture
from structures.services.axioms import check_merge_axioms
from structures.services.certificates import Certificate, Report
from structures.services.report import HEADER, emit_report
from structures.services.runner import run_command
from structures.services.structure_loader import (
    dump_structure,
    emit_document,
    load_structure,
    parse_structure,
)
from structures.utils import ArityBudget

SMALL = ArityBudget(2, 2, 3)
TINY = ArityBudget(2, 1, 2)

THIN_DOC = {
    'kind': 'thin-poly',
    'name': 'Chain',
    'budget': '2,2,3',
    'zero_cells': ['x', 'y'],
    'one_cells': {'f': ['x', 'y'], 'g': ['y', 'x']},
    'relation': [{'ins': ['f', 'g'], 'outs': ['f', 'g']}, {'ins': ['f'], 'outs': ['f']}],
}


class ParseStructureTest(SimpleTestCase):
    """Тесты для разбора документов"""

    def test_thin_document(self):
        doc = parse_structure(json.dumps(THIN_DOC))
        self.assertEqual(doc.name, 'Chain')
        self.assertEqual(doc.budget, SMALL)
        self.assertFalse(doc.value.allows_intervals)
        self.assertEqual(len(doc.value.hom(('f', 'g'), ('f', 'g'))), 1)
        self.assertEqual(doc.value.hom(('g',), ('g',)), [])

    def test_fixture_keyword(self):
        doc = parse_structure(b'{"kind": "fixture", "fixture": "x2", "budget": "2,2,3"}')
        self.assertEqual(doc.value.name, 'X2')
        self.assertEqual(doc.value.budget, SMALL)

    def test_json_error_has_line_and_column(self):
        with self.assertRaises(StructureParseError) as ctx:
            parse_structure(b'{\n  "kind": "thin-poly",\n  oops\n}')
        self.assertEqual(ctx.exception.position, 'line 3 col 3')

    def test_unknown_kind(self):
        with self.assertRaises(StructureParseError) as ctx:
            parse_structure(b'{"kind": "sheaf"}')
        self.assertEqual(ctx.exception.position, 'kind')

    def test_undeclared_one_cell_in_cells(self):
        document = {
            'kind': 'tabular-poly',
            'zero_cells': ['x'],
            'one_cells': {'a': ['x', 'x']},
            'cells': {'p': {'ins': ['b'], 'outs': ['a']}},
        }
        with self.assertRaises(StructureParseError) as ctx:
            parse_structure(json.dumps(document))
        self.assertEqual(ctx.exception.position, 'cells.p.ins[0]')

    def test_undeclared_zero_cell(self):
        document = dict(THIN_DOC, one_cells={'f': ['x', 'z']})
        with self.assertRaises(StructureParseError) as ctx:
            parse_structure(json.dumps(document))
        self.assertTrue(ctx.exception.position.startswith('one_cells'))

    def test_explicit_budget_wins(self):
        doc = parse_structure(json.dumps(THIN_DOC), ArityBudget(3, 3, 4))
        self.assertEqual(doc.budget, ArityBudget(3, 3, 4))


class TabularOverlayTest(SimpleTestCase):
    """Тесты для табличного документа поверх фикстуры"""

    def setUp(self):
        self.zg = load_fixture('zg', SMALL)
        self.unit = self.zg.unit_on(('1',))
        [self.other] = [cell for cell in self.zg.hom(('1',), ('1',)) if cell != self.unit]

    def _document(self, result):
        unit_id = self.zg.cell_label(self.unit)
        return {
            'kind': 'tabular-merge',
            'name': 'ZG-bad',
            'source': 'zg',
            'table': [{'t': unit_id, 'interval_t': [1, 1], 's': unit_id, 'interval_s': [1, 1], 'result': result}],
        }

    def test_corrupted_entry_breaks_associativity(self):
        doc = parse_structure(json.dumps(self._document(self.zg.cell_label(self.other))), SMALL)
        self.assertEqual(doc.value.name, 'ZG-bad')
        report = check_merge_axioms(doc.value, TINY)
        self.assertIn('associativity', {finding.kind for finding in report.findings})

    def test_source_alone_satisfies_axioms(self):
        doc = parse_structure(b'{"kind": "tabular-merge", "source": "zg"}', SMALL)
        self.assertEqual(check_merge_axioms(doc.value, TINY).findings, [])

    def test_unknown_result_cell(self):
        with self.assertRaises(StructureParseError) as ctx:
            parse_structure(json.dumps(self._document('nowhere')), SMALL)
        self.assertEqual(ctx.exception.position, 'table[0].result')


class DumpStructureTest(SimpleTestCase):
    """Тесты для выгрузки структур"""

    def test_thin_round_trip(self):
        x2 = load_fixture('x2', SMALL)
        document = dump_structure(x2, SMALL)
        self.assertEqual(document['kind'], DOC_THIN_MERGE)
        rebuilt = parse_structure(emit_document(document)).value
        self.assertEqual(set(rebuilt.all_cells(SMALL)), set(x2.all_cells(SMALL)))

    def test_emit_is_canonical(self):
        document = dump_structure(load_fixture('b4', SMALL), SMALL)
        data = emit_document(document)
        self.assertTrue(data.endswith(b'\n'))
        self.assertEqual(data, emit_document(json.loads(data)))

    def test_tabular_dump_lists_units(self):
        document = dump_structure(load_fixture('zg', SMALL), SMALL)
        self.assertEqual(document['kind'], 'tabular-merge')
        self.assertIn(['1'], [entry['seq'] for entry in document['units']])

    def test_bicategory_dump_reloads(self):
        z2 = load_fixture('z2')
        rebuilt = parse_structure(emit_document(dump_structure(z2))).value
        self.assertEqual(set(rebuilt.two_cells), set(z2.two_cells))


class LoadStructureTest(SimpleTestCase):
    """Тесты для поиска фикстур и файлов"""

    def test_unknown_reference(self):
        with self.assertRaises(StructureParseError) as ctx:
            load_structure('no-such-thing')
        self.assertEqual(ctx.exception.position, 'input')

    def test_file_reference(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'chain.json'
            path.write_text(json.dumps(THIN_DOC), encoding='utf-8')
            self.assertEqual(load_structure(str(path)).name, 'Chain')

    def test_fixtures_dir_takes_precedence(self):
        with tempfile.TemporaryDirectory() as directory:
            Path(directory, 'x2.json').write_text(json.dumps(dict(THIN_DOC, name='Local')), encoding='utf-8')
            config = dict(settings.POLYWEAVE_CONFIG, FIXTURES_DIR=directory)
            with override_settings(POLYWEAVE_CONFIG=config):
                self.assertEqual(load_structure('x2', SMALL).name, 'Local')
                self.assertEqual(load_structure('b4', SMALL).name, 'B4')


class ReportFormatTest(SimpleTestCase):
    """Тесты для построчного формата отчета"""

    def test_empty_report(self):
        data = emit_report(Report('check X', SMALL))
        self.assertEqual(data.decode('utf-8'), f'{HEADER}\nreport=check_X\nbudget=2,2,3\nfindings: 0\n')

    def test_flags_and_findings(self):
        report = Report('check X', SMALL)
        report.flag('tensor_ok', Certificate.passed('tensor', '<a,b>', SMALL))
        report.flag('dual', Certificate.failed('dual', 'a', SMALL, {'cell': 'p q'}))
        report.add('associativity', 'p', expected='q')
        lines = emit_report(report).decode('utf-8').splitlines()
        self.assertIn('tensor ok: certified', lines)
        self.assertIn('dual: refuted', lines)
        self.assertIn('finding kind=associativity subject=p expected=q', lines)
        self.assertEqual(lines[-1], 'findings: 1')
        flag_lines = [line for line in lines if line.startswith('flag ')]
        self.assertTrue(flag_lines[0].startswith('flag name=dual '))
        self.assertIn('cx.cell=p_q', flag_lines[0])

    def test_output_is_deterministic(self):
        first = run_command('report', 'b4', budget='2,2,3')
        second = run_command('report', 'b4', budget='2,2,3')
        self.assertEqual(first.output, second.output)


class RunCommandTest(SimpleTestCase):
    """Тесты для выполнения команд и кодов возврата"""

    def test_check_parity(self):
        result = run_command('check', 'x2', budget='2,2,3')
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertTrue(result.output.startswith(HEADER.encode('utf-8')))

    def test_bad_budget(self):
        result = run_command('check', 'x2', budget='3,3')
        self.assertEqual(result.exit_code, EXIT_INPUT_ERROR)
        self.assertTrue(result.output.startswith(b'error position=budget'))

    def test_unknown_fixture(self):
        self.assertEqual(run_command('check', 'nope', budget='2,2,3').exit_code, EXIT_INPUT_ERROR)

    def test_hom_requires_target(self):
        self.assertEqual(run_command('hom', 'x2', budget='2,2,3').exit_code, EXIT_INPUT_ERROR)

    def test_parity_equivalent_to_its_grothendieck(self):
        result = run_command('equiv', 'x2', budget='2,2,3')
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertTrue(result.report.flags['isomorphism'].holds)

    def test_strictify_group_like(self):
        config = dict(settings.POLYWEAVE_CONFIG, AXIOM_BUDGET='2,1,2', MONAD_SAMPLE_SIZE=2)
        with override_settings(POLYWEAVE_CONFIG=config):
            result = run_command('strictify', 'zg', budget='2,2,3')
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertTrue(result.report.flags['semi_strict'].holds)

    def test_corrupted_table_fails_check(self):
        zg = load_fixture('zg', SMALL)
        unit = zg.unit_on(('1',))
        [other] = [cell for cell in zg.hom(('1',), ('1',)) if cell != unit]
        document = {
            'kind': 'tabular-merge',
            'source': 'zg',
            'table': [{'t': zg.cell_label(unit), 'interval_t': [1, 1], 's': zg.cell_label(unit),
                       'interval_s': [1, 1], 'result': zg.cell_label(other)}],
        }
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'zg-bad.json'
            path.write_text(json.dumps(document), encoding='utf-8')
            result = run_command('check', str(path), budget='2,2,3')
        self.assertEqual(result.exit_code, EXIT_CHECK_FAILED)
        self.assertIn(b'finding kind=associativity', result.output)

    def test_dump(self):
        result = run_command('dump', 'x2', budget='2,2,3')
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertEqual(json.loads(result.output)['kind'], DOC_THIN_MERGE)


class PolyweaveCommandTest(SimpleTestCase):
    """Тесты для management команды"""

    def test_writes_report_to_stdout(self):
        out = StringIO()
        call_command('polyweave', 'check', 'b4', '--budget', '2,2,3', stdout=out)
        self.assertIn(HEADER, out.getvalue())

    def test_writes_report_to_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'report.txt'
            call_command('polyweave', 'check', 'x2', '--budget', '2,2,3', '--out', str(path), stdout=StringIO())
            self.assertTrue(path.read_text(encoding='utf-8').startswith(HEADER))

    def test_input_error_exit_code(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('polyweave', 'check', 'x2', '--budget', 'bad', stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, EXIT_INPUT_ERROR)
