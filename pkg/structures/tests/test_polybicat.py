"""
Тесты для базового слоя структур

Содержит тесты для:
- Бюджета арности и раскладки слияний (случаи (a)-(d))
- Полиграфов и проверки глобулярности
- Тонкого и табличного бэкендов, двойственных представлений
"""

from django.test import SimpleTestCase
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from structures.constants import DUAL_CO, DUAL_OP
from structures.exceptions import BudgetExceeded, IllegalMerge, StructureParseError
from structures.fixtures import load_fixture
from structures.services.axioms import check_cut_axioms, check_merge_axioms
from structures.services.polybicat import Cell, Op, TabularStructure, dual, underlying_polybicat
from structures.services.polygraph import (
    OneCellDecl,
    RegularTwoPolygraph,
    TwoCellDecl,
    enumerate_sequences,
    polygraph_of,
    truncate_globular,
    validate_globularity,
)
from structures.services.polygraph import dual as dual_polygraph
from structures.utils import ArityBudget, find_interval, merge_layout

SMALL = ArityBudget(2, 2, 3)


class ArityBudgetTest(SimpleTestCase):
    """Тесты для разбора и сравнения бюджетов"""

    def test_parse(self):
        self.assertEqual(ArityBudget.parse('3,3,4'), ArityBudget(3, 3, 4))
        self.assertEqual(str(ArityBudget.parse(' 2, 1 ,3')), '2,1,3')

    def test_parse_rejects_garbage(self):
        for text in ('3,3', 'a,b,c', '0,1,1', ''):
            with self.assertRaises(StructureParseError):
                ArityBudget.parse(text)

    def test_meet(self):
        self.assertEqual(ArityBudget(3, 1, 4).meet(ArityBudget(2, 2, 3)), ArityBudget(2, 1, 3))

    def test_admits(self):
        self.assertTrue(SMALL.admits(2, 1))
        self.assertFalse(SMALL.admits(3, 1))
        self.assertFalse(SMALL.admits(0, 1))


class MergeLayoutTest(SimpleTestCase):
    """Тесты для формул границ слияния"""

    def test_case_a_full_input_of_lower(self):
        case, ins, outs = merge_layout(('x',), ('a', 'b'), (1, 2), ('a', 'b'), ('c',), (1, 2))
        self.assertEqual((case, ins, outs), ('a', ('x',), ('c',)))

    def test_case_b(self):
        case, ins, outs = merge_layout(('x',), ('a', 'b'), (2, 2), ('b', 'd'), ('c',), (1, 1))
        self.assertEqual((case, ins, outs), ('b', ('x', 'd'), ('a', 'c')))

    def test_case_c_full_output_of_upper(self):
        case, ins, outs = merge_layout(('x',), ('a',), (1, 1), ('y', 'a', 'z'), ('c',), (2, 2))
        self.assertEqual((case, ins, outs), ('c', ('y', 'x', 'z'), ('c',)))

    def test_case_d(self):
        case, ins, outs = merge_layout(('x',), ('a', 'b'), (1, 1), ('y', 'a'), ('c',), (2, 2))
        self.assertEqual((case, ins, outs), ('d', ('y', 'x'), ('c', 'b')))

    def test_inner_positions_are_illegal(self):
        with self.assertRaises(IllegalMerge):
            merge_layout(('x',), ('a', 'b', 'c'), (2, 2), ('y', 'b', 'z'), ('w',), (2, 2))

    def test_lengths_must_agree(self):
        with self.assertRaises(IllegalMerge):
            merge_layout(('x',), ('a', 'b'), (1, 2), ('a',), ('c',), (1, 1))

    def test_find_interval(self):
        tags = (('t', 1), ('s', 1), ('s', 2))
        self.assertEqual(find_interval(tags, [('s', 1), ('s', 2)]), (2, 3))
        self.assertIsNone(find_interval(tags, [('t', 1), ('s', 2)]))
        self.assertIsNone(find_interval(tags, [('r', 1)]))


class PolygraphTest(SimpleTestCase):
    """Тесты для полиграфов"""

    def setUp(self):
        self.polygraph = RegularTwoPolygraph(
            frozenset({'x', 'y'}),
            {'f': OneCellDecl('f', 'x', 'y'), 'g': OneCellDecl('g', 'y', 'x'), 'h': OneCellDecl('h', 'x', 'x')},
            {'p': TwoCellDecl('p', ('f', 'g'), ('h',))},
        )

    def test_valid_polygraph(self):
        self.assertEqual(validate_globularity(self.polygraph).findings, [])

    def test_fixture_polygraphs_are_globular(self):
        for name in ('b4', 'x2', 'zg'):
            with self.subTest(name=name):
                structure = load_fixture(name, SMALL)
                self.assertEqual(validate_globularity(polygraph_of(structure, SMALL)).findings, [])

    def test_dangling_reference(self):
        self.polygraph.two_cells['q'] = TwoCellDecl('q', ('k',), ('h',))
        findings = validate_globularity(self.polygraph).findings
        self.assertEqual([(f.kind, f.subject) for f in findings], [('dangling', 'q')])

    def test_ends_mismatch(self):
        self.polygraph.two_cells['q'] = TwoCellDecl('q', ('f',), ('h',))
        kinds = {f.kind for f in validate_globularity(self.polygraph).findings}
        self.assertEqual(kinds, {'globularity'})

    def test_empty_boundary_is_irregular(self):
        self.polygraph.two_cells['q'] = TwoCellDecl('q', (), ('h',))
        self.assertEqual(validate_globularity(self.polygraph).findings[0].kind, 'regularity')

    def test_dual_is_involution(self):
        for kind in (DUAL_OP, DUAL_CO):
            with self.subTest(kind=kind):
                self.assertEqual(dual_polygraph(dual_polygraph(self.polygraph, kind), kind), self.polygraph)

    def test_op_reverses_boundaries(self):
        flipped = dual_polygraph(self.polygraph, DUAL_OP)
        self.assertEqual(flipped.two_cells['p'].inputs, ('g', 'f'))
        self.assertEqual(flipped.one_cells['f'].src, 'y')

    def test_truncation_keeps_unary_cells(self):
        self.polygraph.two_cells['u'] = TwoCellDecl('u', ('h',), ('h',))
        self.assertEqual(set(truncate_globular(self.polygraph).two_cells), {'u'})

    def test_enumerate_sequences(self):
        found = [str(seq) for seq in enumerate_sequences(self.polygraph, 'x', 'x', 2)]
        self.assertEqual(found, ['<h>', '<f,g>', '<h,h>'])


class ThinStructureTest(SimpleTestCase):
    """Тесты для тонкой merge-бикатегории четности"""

    def setUp(self):
        self.x2 = load_fixture('x2', SMALL)

    def test_hom_follows_parity(self):
        self.assertEqual(self.x2.hom(('1', '1'), ('0',)), [Cell(('1', '1'), ('0',))])
        self.assertEqual(self.x2.hom(('1',), ('0',)), [])

    def test_unit(self):
        self.assertEqual(self.x2.unit_on(('1', '0')), Cell(('1', '0'), ('1', '0')))

    def test_cut_respects_budget(self):
        t, s = Cell(('1', '1'), ('0',)), Cell(('0', '1'), ('1',))
        with self.assertRaises(BudgetExceeded):
            self.x2.cut(t, 1, s, 1)
        self.assertEqual(self.x2.cut(t, 1, s, 1, strict=False), Cell(('1', '1', '1'), ('1',)))

    def test_merge_checks_shared_interval(self):
        t, s = Cell(('0',), ('1', '1')), Cell(('0', '1'), ('1',))
        with self.assertRaises(IllegalMerge):
            self.x2.merge(t, (1, 2), s, (1, 2))

    def test_interval_merge(self):
        t, s = Cell(('0',), ('1', '1')), Cell(('1', '1'), ('0',))
        self.assertEqual(self.x2.merge(t, (1, 2), s, (1, 2)), Cell(('0',), ('0',)))

    def test_boolean_cut_axioms(self):
        tiny = ArityBudget(2, 1, 2)
        self.assertEqual(check_cut_axioms(load_fixture('b4', tiny), tiny).findings, [])

    def test_polycategory_rejects_intervals(self):
        b4 = load_fixture('b4', SMALL)
        t, s = Cell(('1',), ('1', '1')), Cell(('1', '1'), ('1',))
        with self.assertRaises(IllegalMerge):
            b4.merge(t, (1, 2), s, (1, 2))

    @hypothesis_settings(max_examples=30, deadline=None)
    @given(st.data())
    def test_cells_have_matching_parity(self, data):
        cell = data.draw(st.sampled_from(self.x2.all_cells()))
        self.assertEqual(sum(map(int, cell.ins)) % 2, sum(map(int, cell.outs)) % 2)


class DualViewTest(SimpleTestCase):
    """Тесты для двойственных представлений"""

    def setUp(self):
        self.x2 = load_fixture('x2', SMALL)

    def test_dual_twice_returns_original(self):
        for kind in (DUAL_OP, DUAL_CO):
            with self.subTest(kind=kind):
                self.assertIs(dual(dual(self.x2, kind), kind), self.x2)

    def test_co_swaps_boundaries(self):
        co = dual(self.x2, DUAL_CO)
        [cell] = co.hom(('0',), ('1', '1'))
        self.assertEqual(cell.core, Cell(('1', '1'), ('0',)))

    def test_op_reverses_sequences(self):
        op = dual(self.x2, DUAL_OP)
        [cell] = op.hom((Op('1'), Op('0')), (Op('1'),))
        self.assertEqual(cell.core, Cell(('0', '1'), ('1',)))

    def test_co_merge_is_merge_in_base(self):
        co = dual(self.x2, DUAL_CO)
        [t] = co.hom(('0',), ('1', '1'))
        [s] = co.hom(('1', '1'), ('0',))
        self.assertEqual(co.merge(t, (1, 2), s, (1, 2)).core, Cell(('0',), ('0',)))

    def test_underlying_polybicat_forgets_intervals(self):
        forgetful = underlying_polybicat(self.x2)
        self.assertFalse(forgetful.allows_intervals)
        t, s = Cell(('0',), ('1', '1')), Cell(('1', '1'), ('0',))
        with self.assertRaises(IllegalMerge):
            forgetful.merge(t, (1, 2), s, (1, 2))


class TabularStructureTest(SimpleTestCase):
    """Тесты для табличного бэкенда"""

    def setUp(self):
        self.zg = load_fixture('zg', SMALL)

    def test_two_cells_per_boundary(self):
        self.assertEqual(len(self.zg.hom(('1',), ('1',))), 2)
        self.assertEqual(self.zg.hom(('1',), ('0',)), [])

    def test_materialisation_keeps_cells(self):
        x2 = load_fixture('x2', SMALL)
        tabular = TabularStructure.from_structure(x2, SMALL)
        self.assertEqual(len(tabular.all_cells()), len(x2.all_cells()))

    def test_with_entry_overrides_table(self):
        first, second = self.zg.hom(('1',), ('1',))
        key = (first.core, (1, 1), first.core, (1, 1))
        expected = self.zg.cut(first, 1, first, 1)
        other = second if expected == first else first
        patched = self.zg.with_entry(key, other.core)
        self.assertEqual(patched.cut(first, 1, first, 1), other)
        self.assertEqual(self.zg.cut(first, 1, first, 1), expected)

    def test_drop_cells(self):
        dropped = self.zg.drop_cells(lambda cell: cell.ins == ('1',) and cell.outs == ('1',))
        self.assertEqual(dropped.hom(('1',), ('1',)), [])

    def test_merge_scheme_with_split_interval(self):
        """Интервал r, задевающий обе клетки слияния, проверяется перегруппировкой"""
        tabular = TabularStructure.from_structure(load_fixture('x2', SMALL), SMALL)
        report = check_merge_axioms(tabular, SMALL)
        self.assertEqual(report.findings, [])
        self.assertGreater(report.meta['merge_scheme'], 0)
        self.assertNotIn('mixed_spans', report.meta)

    def test_group_like_merge_schemes(self):
        report = check_merge_axioms(self.zg, SMALL)
        self.assertEqual(report.findings, [])
        self.assertGreater(report.meta['merge_scheme'], 0)
