"""
Тесты для конструкций Chu, I, M и строгой ассоциативности
"""

from unittest import mock

from django.test import SimpleTestCase

from structures.constants import METHOD_SAMPLED
from structures.exceptions import ConstructionError
from structures.fixtures import POINT, load_fixture
from structures.services.certificates import Certificate
from structures.services.chu import (
    ChuZero,
    band_type,
    check_bands,
    chu_adjunction_witness,
    chu_build,
    chu_involution_check,
    chu_unit_synthesize,
    involute,
)
from structures.services.coherence import coherentize_witnesses, raw_witnesses
from structures.services.extraction import choose
from structures.services.inflate import (
    ITEM_CELL,
    Eps,
    check_i_algebra,
    collapse_normal_form,
    eta_inflate,
    i_algebra_from_choices,
    inflate,
    sample,
)
from structures.services.merge_monad import (
    MO,
    flatten,
    merge_monad,
    naturality_of_sigma,
    verify_monad_laws,
    zeta_merge,
)
from structures.services.morphisms import identity_morphism, validate_morphism
from structures.services.polybicat import Cell
from structures.services.strictify import semi_strictify, verify_strict_associativity
from structures.utils import ArityBudget

SMALL = ArityBudget(2, 2, 3)
TINY = ArityBudget(2, 1, 2)


class ChuTest(SimpleTestCase):
    """Тесты для Chu(X2m)"""

    def setUp(self):
        self.chu = chu_build(load_fixture('x2m', TINY), TINY)

    def test_cells(self):
        self.assertEqual(self.chu.zero_cells(), (ChuZero(POINT, '0'), ChuZero(POINT, '1')))
        self.assertEqual([str(a) for a in self.chu.one_cells()], ['(0,0)', '(0,1)', '(1,0)', '(1,1)'])

    def test_one_cells_are_endo(self):
        for a in self.chu.one_cells():
            with self.subTest(one_cell=str(a)):
                self.assertEqual(self.chu.src(a), self.chu.tgt(a))

    def test_band_type(self):
        a, b = self.chu.one_cells()[:2]
        self.assertEqual(band_type((a,), (b,)), (a, b.dual()))

    def test_bands_hold(self):
        self.assertGreater(check_bands(self.chu), 0)

    def test_involution(self):
        for cell in self.chu.all_cells():
            with self.subTest(cell=self.chu.cell_label(cell)):
                self.assertEqual(involute(involute(cell)), cell)
        self.assertTrue(chu_involution_check(self.chu).holds)

    def test_unit_and_adjoint(self):
        family = coherentize_witnesses(self.chu.M, raw_witnesses(self.chu.M))
        unit, report = chu_unit_synthesize(self.chu, ChuZero(POINT, '0'), family)
        self.assertEqual(str(unit), '(0,0)')
        self.assertTrue(report.flags['tensor_unit1'].holds)
        A = self.chu.one_cells()[-1]
        cell, certificate = chu_adjunction_witness(self.chu, A, family)
        self.assertEqual(cell.ins, (A, A.dual()))
        self.assertTrue(certificate.holds)

    def test_adjoint_refuted_by_criterion(self):
        family = coherentize_witnesses(self.chu.M, raw_witnesses(self.chu.M))
        A = self.chu.one_cells()[-1]
        refuted = Certificate.failed('linear_adjunction', str(A), TINY, {'a': str(A.dual())})
        with mock.patch('structures.services.chu.check_linear_adjunction', return_value=refuted):
            _, certificate = chu_adjunction_witness(self.chu, A, family)
        self.assertFalse(certificate.holds)
        self.assertEqual(certificate.counterexample['criterion'], 'fails')

    def test_requires_multi_bicategory(self):
        with self.assertRaises(ConstructionError):
            chu_build(load_fixture('b4', TINY))


class InflateTest(SimpleTestCase):
    """Тесты для I(X) и алгебры α"""

    def setUp(self):
        self.x2 = load_fixture('x2', TINY)

    def test_eps_label(self):
        self.assertEqual(str(Eps(POINT)), 'ε*')
        self.assertEqual(str(Eps(POINT, 2)), 'ε2*')

    def test_eta(self):
        p = Cell(('1', '1'), ('0',))
        image = eta_inflate(self.x2, inflate(self.x2)).cell(p)
        self.assertEqual(image, Cell(('1', '1'), ('0',), ((ITEM_CELL, p),)))

    def test_algebra_unit_law(self):
        alpha = i_algebra_from_choices(self.x2, choose(self.x2, TINY).family)
        report = check_i_algebra(alpha, TINY, sample_size=6)
        self.assertNotIn('algebra_unit', {finding.kind for finding in report.findings})
        self.assertEqual(report.meta['algebra_unit.coverage'], 6)

    def test_sample(self):
        self.assertEqual(sample(range(10), 5), [0, 2, 4, 6, 8])
        self.assertEqual(sample(range(3), 0), [0, 1, 2])
        self.assertEqual(sample(range(3), 7), [0, 1, 2])


class MergeMonadTest(SimpleTestCase):
    """Тесты для M(X)"""

    def setUp(self):
        self.x2 = load_fixture('x2', SMALL)
        self.mx = merge_monad(self.x2, SMALL)

    def test_flatten(self):
        self.assertEqual(flatten((MO(('0',)), MO(('1', '1')))), ('0', '1', '1'))
        self.assertEqual(str(MO(('0', '1'))), '<0,1>')

    def test_hom_on_flattened_boundary(self):
        ins, outs = (MO(('1', '1')),), (MO(('0',)),)
        self.assertEqual(self.mx.hom(ins, outs), [Cell(ins, outs, Cell(('1', '1'), ('0',)))])
        self.assertEqual(self.mx.hom((MO(('1',)),), outs), [])

    def test_chosen_tensor_concatenates(self):
        one = MO(('1',))
        value, cell = self.mx.chosen_tensor((one, one))
        self.assertEqual(value, MO(('1', '1')))
        self.assertEqual(cell.core, Cell(('1', '1'), ('1', '1')))

    def test_zeta_is_morphism(self):
        tiny = load_fixture('x2', TINY)
        self.assertTrue(validate_morphism(zeta_merge(tiny, merge_monad(tiny, TINY)), TINY).holds)

    def test_strict_associativity(self):
        report = verify_strict_associativity(self.mx, SMALL)
        self.assertTrue(report.flags['strict_associativity'].holds)
        self.assertEqual(report.meta['triples'], 8)

    def test_hom_beyond_base_budget(self):
        """Уплощенная граница длины 3 берет клетки из исходной ∫B"""
        mx = merge_monad(load_fixture('zg', SMALL), SMALL)
        block = MO(('0', '0', '0'))
        self.assertEqual(len(mx.hom((block,), (block,))), 2)

    def test_strict_associativity_of_group_like(self):
        report = verify_strict_associativity(merge_monad(load_fixture('zg', SMALL), SMALL), SMALL)
        self.assertEqual(report.findings, [])
        self.assertTrue(report.flags['strict_associativity'].holds)


class MonadLawsTest(SimpleTestCase):
    """Тесты для законов монад и нормальной формы диаграмм"""

    def setUp(self):
        self.x2 = load_fixture('x2', TINY)

    def test_collapse_order_does_not_matter(self):
        IX = inflate(self.x2, TINY)
        eta = eta_inflate(self.x2, IX)
        p, q = eta.cell(Cell(('1', '1'), ('0',))), eta.cell(Cell(('0',), ('1', '1')))
        below = collapse_normal_form(IX, p, [(q, 'below', (1, 1), (1, 1))])
        above = collapse_normal_form(IX, q, [(p, 'above', (1, 1), (1, 1))])
        self.assertEqual(below, above)
        self.assertEqual((below.ins, below.outs), (('1', '1'), ('1', '1')))

    def test_sampled_coverage(self):
        report = verify_monad_laws(self.x2, sample_size=2, budget=TINY)
        self.assertEqual(report.findings, [])
        self.assertEqual(report.meta['merge_left_unit.method'], METHOD_SAMPLED)
        self.assertTrue(report.meta['merge_left_unit.coverage'].startswith('2/'))

    def test_sigma_naturality_coverage(self):
        report = naturality_of_sigma(identity_morphism(self.x2), TINY, sample_size=2)
        self.assertEqual(report.findings, [])
        self.assertTrue(report.meta['sigma_natural.coverage'].startswith('2/'))


class SemiStrictifyTest(SimpleTestCase):
    """Тесты для полустрогификации"""

    def test_parity(self):
        x2 = load_fixture('x2', TINY)
        result = semi_strictify(x2, TINY, sample_size=2)
        self.assertEqual(result.Y.name, 'M(X2)')
        self.assertTrue(result.beta.report.meta['algebra_unit.coverage'].startswith('2/'))
        self.assertTrue(result.certificate.holds)

    def test_group_like_has_non_unit_unitors(self):
        """ZG: M(ZG) строго ассоциативна, но ⟨1_x⟩⊗a ≠ a"""
        zg = load_fixture('zg', SMALL)
        choices = choose(zg, SMALL)
        result = semi_strictify(zg, SMALL, choices, sample_size=2)
        self.assertEqual(result.Y.name, 'M(ZG)')
        self.assertTrue(result.certificate.holds)
        report = verify_strict_associativity(result.Y, SMALL, choices.family)
        self.assertTrue(report.flags['strict_associativity'].holds)
        self.assertGreater(report.meta['unitors.non_unit'], 0)
