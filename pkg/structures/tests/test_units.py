"""
Тесты для делимости, единиц и представимости

Содержит тесты для:
- Делимости клеток и решения уравнений деления
- 2-единиц, обратных клеток и тензорных единиц
- Представляющих 1-клеток и таксономии представимости
"""

from django.test import SimpleTestCase

from structures.constants import KIND_RHOM, KIND_TENSOR, SIDE_INPUT, SIDE_OUTPUT
from structures.exceptions import NoSolution, NotDivisible
from structures.fixtures import load_fixture
from structures.services.divisibility import divide, is_divisible_at, is_divisible_interval
from structures.services.polybicat import Cell, TabularStructure
from structures.services.representability import representability_report, representations
from structures.services.units import (
    check_linear_adjunction,
    inverse2,
    invert2,
    is_divisible1,
    is_seq_unit,
    is_tensor_unit1,
    is_unit2,
    search_representing,
    unit1_from_divisible1,
    unit2_from_divisible,
)
from structures.utils import ArityBudget

SMALL = ArityBudget(2, 2, 3)


class DivisibilityTest(SimpleTestCase):
    """Тесты для делимости и деления"""

    def setUp(self):
        self.x2 = load_fixture('x2', SMALL)
        self.yn = load_fixture('yn', SMALL)

    def test_parity_cell_divisible(self):
        t = Cell(('1', '1'), ('0',))
        self.assertTrue(is_divisible_at(self.x2, t, SIDE_OUTPUT, 1).holds)
        self.assertTrue(is_divisible_at(self.x2, t, SIDE_INPUT, 2).holds)

    def test_interval_divisibility(self):
        t = Cell(('0',), ('1', '1'))
        self.assertTrue(is_divisible_interval(self.x2, t, SIDE_OUTPUT, (1, 2)).holds)

    def test_naturals_cell_not_divisible(self):
        certificate = is_divisible_at(self.yn, Cell(('1', '1'), ('0',)), SIDE_OUTPUT, 1)
        self.assertFalse(certificate.holds)
        self.assertEqual(certificate.counterexample['solutions'], 0)

    def test_divide(self):
        t, s = Cell(('1', '1'), ('0',)), Cell(('1', '1'), ('0',))
        self.assertEqual(divide(self.x2, t, SIDE_OUTPUT, 1, s), Cell(('0',), ('0',)))

    def test_divide_without_solution(self):
        with self.assertRaises(NoSolution):
            divide(self.yn, Cell(('1', '1'), ('0',)), SIDE_OUTPUT, 1, Cell(('1', '1'), ('2',)))


class UnitsTest(SimpleTestCase):
    """Тесты для 2-единиц и обратных"""

    def setUp(self):
        self.x2 = load_fixture('x2', SMALL)
        self.b4 = load_fixture('b4', SMALL)
        self.zg = load_fixture('zg', SMALL)
        self.identity = self.zg.unit_on(('1',))
        [self.twist] = [cell for cell in self.zg.hom(('1',), ('1',)) if cell != self.identity]

    def test_thin_units(self):
        self.assertTrue(is_unit2(self.x2, Cell(('0',), ('0',))).holds)
        self.assertTrue(is_unit2(self.b4, Cell(('p',), ('p',))).holds)
        self.assertTrue(is_seq_unit(self.x2, Cell(('1', '0'), ('1', '0'))).holds)

    def test_unit2_requires_single_input(self):
        certificate = is_unit2(self.x2, Cell(('1', '0'), ('1', '0')))
        self.assertEqual(certificate.counterexample['reason'], 'arity')

    def test_twisted_automorphism_is_not_unit(self):
        self.assertTrue(is_unit2(self.zg, self.identity).holds)
        self.assertFalse(is_unit2(self.zg, self.twist).holds)

    def test_units_from_divisible_cell(self):
        unit = Cell(('1',), ('1',))
        self.assertEqual(unit2_from_divisible(self.x2, unit), (unit, unit))
        self.assertEqual(unit2_from_divisible(self.zg, self.twist), (self.identity, self.identity))

    def test_invert2(self):
        self.assertEqual(invert2(self.x2, Cell(('1', '1'), ('0',))), Cell(('0',), ('1', '1')))
        self.assertEqual(inverse2(self.zg, self.twist), self.twist)
        self.assertEqual(inverse2(self.b4, Cell(('p',), ('p',))), Cell(('p',), ('p',)))

    def test_non_invertible(self):
        with self.assertRaises(NotDivisible):
            invert2(self.b4, Cell(('p',), ('1',)))
        with self.assertRaises(NotDivisible):
            inverse2(self.x2, Cell(('1', '1'), ('0',)))


class RepresentingTest(SimpleTestCase):
    """Тесты для поиска представляющих 1-клеток"""

    def setUp(self):
        self.x2m = load_fixture('x2m', SMALL)

    def test_search_representing(self):
        c, cell, certificate = search_representing(load_fixture('x2', SMALL), KIND_TENSOR, '1', '1')
        self.assertEqual((c, cell), ('0', Cell(('1', '1'), ('0',))))
        self.assertTrue(certificate.holds)
        c, cell, _ = search_representing(load_fixture('yn', SMALL), KIND_RHOM, '2', '5')
        self.assertEqual((c, cell), ('3', Cell(('2', '3'), ('5',))))
        c, cell, _ = search_representing(load_fixture('b4', SMALL), KIND_RHOM, 'p', 'p')
        self.assertEqual((c, cell), ('1', Cell(('p', '1'), ('p',))))

    def test_tensor_units(self):
        self.assertTrue(is_tensor_unit1(load_fixture('b4', SMALL), '1').holds)
        self.assertTrue(is_tensor_unit1(self.x2m, '0').holds)
        self.assertFalse(is_tensor_unit1(self.x2m, '1').holds)

    def test_divisible_one_cells(self):
        self.assertTrue(is_divisible1(self.x2m, '1').holds)
        self.assertFalse(is_divisible1(load_fixture('b4', SMALL), 'p').holds)
        self.assertFalse(is_divisible1(load_fixture('yn', SMALL), '1').holds)

    def test_units_from_divisible_one_cell(self):
        (right, right_cert), (left, left_cert) = unit1_from_divisible1(self.x2m, '1')
        self.assertEqual((right, left), ('0', '0'))
        self.assertTrue(right_cert.holds and left_cert.holds)

    def test_linear_adjunction(self):
        x2 = load_fixture('x2', SMALL)
        certificate = check_linear_adjunction(x2, '1', '1', '0', '0')
        self.assertTrue(certificate.holds)
        self.assertEqual(certificate.witnesses['condition'], 'eps.input1')
        self.assertFalse(check_linear_adjunction(x2, '0', '1', '0', '0').holds)


class RepresentabilityReportTest(SimpleTestCase):
    """Тесты для таксономии представимости"""

    def test_boolean_algebra(self):
        flags = representability_report(load_fixture('b4', SMALL)).flags
        for name in ('unital', 'tensor_0_representable', 'tensor_1_representable',
                     'right_closed', 'left_closed', 'star_autonomous'):
            with self.subTest(flag=name):
                self.assertTrue(flags[name].holds)

    def test_parity(self):
        flags = representability_report(load_fixture('x2', SMALL)).flags
        self.assertTrue(flags['tensor_1_representable'].holds)
        self.assertTrue(flags['par_1_representable'].holds)

    def test_naturals_are_closed(self):
        report = representability_report(load_fixture('yn', SMALL))
        for name in ('tensor_1_representable', 'right_closed', 'left_closed'):
            with self.subTest(flag=name):
                self.assertTrue(report.flags[name].holds)

    def test_single_one_cell(self):
        self.assertTrue(representations(load_fixture('s1', SMALL), KIND_TENSOR).holds)

    def test_deleting_tensors_breaks_representability(self):
        x2 = TabularStructure.from_structure(load_fixture('x2', SMALL), SMALL)
        ablated = x2.drop_cells(lambda cell: len(cell.ins) == 2 and len(cell.outs) == 1)
        self.assertFalse(representations(ablated, KIND_TENSOR).holds)
