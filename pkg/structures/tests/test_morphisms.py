"""
Тесты для когерентности, merge-представимости, морфизмов и hom-объектов
"""

from django.test import SimpleTestCase

from structures.exceptions import BudgetExceeded, ConstructionError
from structures.fixtures import POINT, load_fixture
from structures.services.coherence import (
    check_coherence,
    coherentize_witnesses,
    find_tensor_units,
    raw_witnesses,
)
from structures.services.extraction import choose, extract_functor, restore_oplax, transfer_oplax
from structures.services.hom_object import (
    EquivalenceData,
    enumerate_morphisms,
    hom_object,
    identity_transfor,
    is_equivalence_1cell,
    same_morphism,
    validate_transfor,
    verify_equivalence,
)
from structures.services.mergebicat import invertibility_report, merge_representability_report
from structures.services.morphisms import (
    Morphism,
    classify_morphism,
    compose_morphisms,
    identity_morphism,
    validate_morphism,
)
from structures.services.polybicat import ThinStructure
from structures.utils import ArityBudget

SMALL = ArityBudget(2, 2, 3)


class CoherenceTest(SimpleTestCase):
    """Тесты для свидетелей единичности"""

    def test_tensor_unit_of_boolean_algebra(self):
        units = find_tensor_units(load_fixture('b4', SMALL))
        self.assertEqual(units[POINT][0], '1')

    def test_thin_family_is_already_coherent(self):
        b4 = load_fixture('b4', SMALL)
        raw = raw_witnesses(b4)
        family = coherentize_witnesses(b4, raw)
        self.assertTrue(family.same_cells(raw))
        self.assertTrue(family.coherent)

    def test_perturbed_family_is_repaired(self):
        zg = load_fixture('zg', SMALL)
        identity = zg.unit_on(('1',))
        [twist] = [cell for cell in zg.hom(('1',), ('1',)) if cell != identity]
        raw = raw_witnesses(zg)
        raw.left['1'] = zg.cut(raw.left['1'], 1, twist, 1, strict=False)
        family = coherentize_witnesses(zg, raw)
        self.assertEqual(check_coherence(zg, family).findings, [])
        self.assertTrue(family.coherent)

    def test_no_tensor_unit(self):
        balanced = ThinStructure('Balanced', [POINT], {'a': (POINT, POINT)},
                                 lambda ins, outs: len(ins) == len(outs), SMALL)
        with self.assertRaises(ConstructionError):
            raw_witnesses(balanced)


class MergeRepresentabilityTest(SimpleTestCase):
    """Тесты для представимости merge-бикатегорий"""

    def test_parity_is_representable(self):
        report = merge_representability_report(load_fixture('x2', SMALL))
        self.assertTrue(report.flags['representable'].holds)
        self.assertTrue(report.ok)

    def test_invertibility_matches_divisibility(self):
        report = invertibility_report(load_fixture('x2', SMALL))
        self.assertEqual(report.findings, [])
        self.assertGreater(report.meta['cells'], 0)


class MorphismTest(SimpleTestCase):
    """Тесты для морфизмов и их классификации"""

    def setUp(self):
        self.x2m = load_fixture('x2m', SMALL)
        self.yn = load_fixture('yn', SMALL)
        self.inclusion = Morphism(self.x2m, self.yn, {POINT: POINT}, {'0': '0', '1': '1'}, name='iota')

    def test_identity_has_every_property(self):
        report = classify_morphism(identity_morphism(load_fixture('b4', SMALL)))
        self.assertTrue(report.ok)

    def test_inclusion_of_parity_into_naturals(self):
        flags = classify_morphism(self.inclusion).flags
        self.assertTrue(flags['valid'].holds)
        self.assertTrue(flags['unital'].holds)
        self.assertTrue(flags['right_closed'].holds)
        self.assertTrue(flags['left_closed'].holds)
        self.assertFalse(flags['tensor_strong'].holds)
        self.assertEqual(flags['tensor_strong'].counterexample['pair'], '1,1')

    def test_constant_morphism(self):
        f = Morphism(load_fixture('s1', SMALL), self.x2m, {POINT: POINT}, {'a': '0'})
        self.assertTrue(validate_morphism(f).holds)
        self.assertTrue(classify_morphism(f).flags['unital'].holds)
        composite = compose_morphisms(f, self.inclusion)
        self.assertTrue(validate_morphism(composite).holds)
        self.assertTrue(same_morphism(compose_morphisms(identity_morphism(f.source), f), f))

    def test_swap_is_not_a_morphism(self):
        x2 = load_fixture('x2', SMALL)
        swap = Morphism(x2, x2, {POINT: POINT}, {'0': '1', '1': '0'})
        certificate = validate_morphism(swap)
        self.assertFalse(certificate.holds)
        self.assertEqual(certificate.counterexample['reason'], 'boundary')
        report = classify_morphism(swap)
        self.assertEqual([finding.kind for finding in report.findings], ['invalid_morphism'])


class HomObjectTest(SimpleTestCase):
    """Тесты для [X, Y] и трансформаций"""

    def setUp(self):
        self.x2 = load_fixture('x2', SMALL)

    def test_parity_preserving_endomorphisms(self):
        found = enumerate_morphisms(load_fixture('x2m', SMALL), self.x2, SMALL)
        self.assertEqual(len(found), 2)
        self.assertEqual({m.one('0') for m in found}, {'0'})

    def test_enumeration_cap(self):
        with self.assertRaises(BudgetExceeded):
            enumerate_morphisms(load_fixture('x2m', SMALL), self.x2, SMALL, max_morphisms=1)

    def test_hom_object_zero_cells(self):
        H = hom_object(load_fixture('x2m', SMALL), self.x2, SMALL)
        self.assertEqual(len(H.zero_cells()), 2)
        self.assertTrue(H.one_cells())

    def test_identity_transfor(self):
        identity = identity_morphism(self.x2)
        T = identity_transfor(identity)
        flags = validate_transfor(T).flags
        for name in ('valid', 'fair', 'pseudo_natural', 'pseudo_equivalence'):
            with self.subTest(flag=name):
                self.assertTrue(flags[name].holds)
        self.assertTrue(is_equivalence_1cell(T).holds)

    def test_missing_component(self):
        T = identity_transfor(identity_morphism(self.x2))
        del T.comp1['1']
        flags = validate_transfor(T).flags
        self.assertFalse(flags['valid'].holds)
        self.assertNotIn('fair', flags)

    def test_identity_equivalence(self):
        identity = identity_morphism(self.x2)
        T = identity_transfor(identity)
        self.assertTrue(verify_equivalence(EquivalenceData(identity, identity, T, T)).holds)

    def test_equivalence_needs_identity_source(self):
        identity = identity_morphism(self.x2)
        const0 = Morphism(self.x2, self.x2, {POINT: POINT}, {'0': '0', '1': '0'}, name='const0')
        eta = identity_transfor(const0)
        self.assertTrue(validate_transfor(eta).flags['pseudo_equivalence'].holds)
        certificate = verify_equivalence(EquivalenceData(identity, identity, eta, identity_transfor(identity)))
        self.assertFalse(certificate.holds)
        self.assertEqual(certificate.counterexample['transfor'], 'eta')
        self.assertEqual(certificate.counterexample['reason'], 'source')


class OplaxTransferTest(SimpleTestCase):
    """Тесты для переноса трансформаций на извлеченные функторы"""

    def test_identity_functor(self):
        x2 = load_fixture('x2', SMALL)
        _, report = extract_functor(identity_morphism(x2), budget=SMALL)
        self.assertEqual(report.findings, [])

    def test_identity_round_trip(self):
        x2 = load_fixture('x2', SMALL)
        T = identity_transfor(identity_morphism(x2))
        choices = choose(x2, SMALL)
        data, report = transfer_oplax(T, choices, choices, SMALL)
        self.assertEqual(report.findings, [])
        self.assertEqual(set(data.comp1), {'0', '1'})
        self.assertEqual(restore_oplax(data, choices), T.comp1)

    def test_invalid_transfor_is_rejected(self):
        x2 = load_fixture('x2', SMALL)
        T = identity_transfor(identity_morphism(x2))
        del T.comp1['1']
        with self.assertRaisesMessage(ConstructionError, 'проверку valid'):
            transfer_oplax(T, budget=SMALL)
