"""
Тесты для конечных бикатегорий, конструкции ∫ и извлечения
"""

from django.test import SimpleTestCase

from structures.exceptions import ConstructionError
from structures.fixtures import load_fixture
from structures.services.axioms import check_merge_axioms
from structures.services.bicat import Leaf, Node, Rebracketer, check_bicategory_axioms, left_comb, z2_two_group
from structures.services.extraction import extract_bicategory, extract_linear
from structures.services.groth import groth
from structures.services.polybicat import Cell, ThinStructure
from structures.utils import ArityBudget

SMALL = ArityBudget(2, 2, 3)
TINY = ArityBudget(2, 1, 2)


def _skewed(a, b, c):
    return 1 if (a, b, c) == (1, 0, 0) else 0


class FiniteBicategoryTest(SimpleTestCase):
    """Тесты для 2-группы Z/2"""

    def test_cocycle_satisfies_axioms(self):
        report = check_bicategory_axioms(z2_two_group())
        self.assertEqual(report.findings, [])
        self.assertEqual(report.meta['pentagon'], 16)

    def test_non_cocycle_breaks_pentagon(self):
        report = check_bicategory_axioms(z2_two_group(omega=_skewed, name='Z2-skewed'))
        self.assertIn('pentagon', {finding.kind for finding in report.findings})

    def test_inverse(self):
        z2 = z2_two_group()
        self.assertEqual(z2.inverse('1.1'), '1.1')
        self.assertEqual(z2.then('0.1', '0.1'), '0.0')

    def test_unknown_composite(self):
        with self.assertRaises(ConstructionError):
            z2_two_group().then('0.1', '1.1')


class RebracketerTest(SimpleTestCase):
    """Тесты для канонических перестановок скобок"""

    def setUp(self):
        self.z2 = z2_two_group()
        self.rebracketer = Rebracketer(self.z2)

    def test_left_to_right_is_associator(self):
        right = Node(Leaf('1'), Node(Leaf('1'), Leaf('1')))
        self.assertEqual(self.rebracketer.rebracket(left_comb(('1', '1', '1')), right), self.z2.assoc[('1', '1', '1')])

    def test_paths_agree(self):
        seq = ('1', '1', '0', '1')
        source = left_comb(seq)
        middle = Node(Node(Leaf('1'), Leaf('1')), Node(Leaf('0'), Leaf('1')))
        target = Node(Leaf('1'), Node(Leaf('1'), Node(Leaf('0'), Leaf('1'))))
        R = self.rebracketer
        self.assertEqual(self.z2.then(R.rebracket(source, middle), R.rebracket(middle, target)),
                         R.rebracket(source, target))
        self.assertEqual(R.rebracket(source, source), self.z2.vunit[R.composite(source)])

    def test_different_leaves(self):
        with self.assertRaises(ConstructionError):
            self.rebracketer.rebracket(left_comb(('1', '0')), left_comb(('0', '1')))


class GrothTest(SimpleTestCase):
    """Тесты для ∫B"""

    def setUp(self):
        self.structure = groth(z2_two_group(), SMALL)

    def test_hom_between_combs(self):
        self.assertEqual(len(self.structure.hom(('1',), ('1',))), 2)
        self.assertEqual(len(self.structure.hom(('1', '1'), ('0',))), 2)
        self.assertEqual(self.structure.hom(('1',), ('0',)), [])

    def test_chosen_tensor(self):
        value, cell = self.structure.chosen_tensor(('1', '1'))
        self.assertEqual(value, '0')
        self.assertEqual(cell, Cell(('1', '1'), ('0',), '0.0'))

    def test_merge_axioms(self):
        self.assertEqual(check_merge_axioms(groth(z2_two_group(), TINY), TINY).findings, [])


class ExtractionTest(SimpleTestCase):
    """Тесты для извлечения бикатегорий из представимых структур"""

    def test_parity_extracts_to_bicategory(self):
        bicategory = extract_bicategory(load_fixture('x2', SMALL))
        self.assertEqual(set(bicategory.one_cells), {'0', '1'})
        self.assertEqual(bicategory.tensor1('1', '1'), '0')
        self.assertEqual(check_bicategory_axioms(bicategory).findings, [])

    def test_linear_boolean_algebra(self):
        data, report = extract_linear(load_fixture('b4', SMALL))
        self.assertEqual(report.findings, [])
        self.assertEqual(len(data.dist_left), 64)
        self.assertEqual(len(data.dist_right), 64)

    def test_not_representable(self):
        with self.assertRaises(ConstructionError):
            extract_bicategory(ThinStructure(
                'Empty', ['*'], {'a': ('*', '*')}, lambda ins, outs: False, SMALL))
