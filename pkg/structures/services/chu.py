"""
Сервис конструкции Chu

Отвечает за:
- Построение поли-бикатегории Chu(M) по регулярной мульти-бикатегории M
- Проверку циклических уравнений лент
- Композицию лент, направляемую типизацией
- Синтез тензорных единиц, инволюцию (-)⊥ и линейные сопряжения ε_A
"""

import logging
from dataclasses import dataclass
from itertools import product

from structures.constants import DUAL_CO, DUAL_OP, SIDE_INPUT, SIDE_OUTPUT
from structures.exceptions import ConstructionError, IllegalMerge
from structures.services.certificates import Certificate, Report
from structures.services.coherence import coherentize_witnesses, raw_witnesses
from structures.services.divisibility import is_divisible_at
from structures.services.morphisms import Morphism, validate_morphism
from structures.services.polybicat import BaseStructure, Cell, Op, dual
from structures.services.units import check_linear_adjunction, is_par_unit1, is_tensor_unit1
from structures.utils import merge_layout, tag

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChuZero:
    """0-клетка Chu(M): эндо-1-клетка a на x"""

    x: object
    a: object

    def __str__(self):
        return str(self.a)


@dataclass(frozen=True)
class ChuOneCell:
    """
    1-клетка Chu(M)

    A: x -> y и A⊥: y -> x в M с клетками e_A: (A, A⊥) -> (a)
    и e_{A⊥}: (A⊥, A) -> (b)
    """

    A: object
    Adual: object
    eA: object
    eAdual: object

    def dual(self):
        return ChuOneCell(self.Adual, self.A, self.eAdual, self.eA)

    def __str__(self):
        if self.eA.core is None and self.eAdual.core is None:
            return f'({self.A},{self.Adual})'
        return f'({self.A},{self.Adual};{self.eA.core},{self.eAdual.core})'


def band_type(ins, outs):
    """Циклический тип ленты клетки (A_1..A_n) -> (B_1..B_m): (A_1..A_n, B_m⊥..B_1⊥)"""
    return tuple(ins) + tuple(b.dual() for b in reversed(outs))


def _rest(cycle, k):
    """Элементы цикла после позиции k (с нуля), по кругу"""
    return cycle[k + 1:] + cycle[:k]


def band_failures(M, cycle, components):
    """
    Номера нарушенных уравнений ленты

    cut(p_i, 1, e_{A_i⊥}, 1) = cut(p_{i+1}, 1, e_{A_{i+1}}, 2)
    """
    failing = []
    size = len(cycle)
    for i in range(size):
        nxt = (i + 1) % size
        try:
            left = M.cut(components[i], 1, cycle[i].eAdual, 1, strict=False)
            right = M.cut(components[nxt], 1, cycle[nxt].eA, 2, strict=False)
        except IllegalMerge:
            failing.append(i + 1)
            continue
        if left != right:
            failing.append(i + 1)
    return failing


class ChuStructure(BaseStructure):
    """
    Поли-бикатегория Chu(M)

    2-клетки (A_1..A_n) -> (B_1..B_m) при n, m >= 1 - ленты типа
    (A_1..A_n, B_m⊥..B_1⊥), все циклические уравнения которых выполнены.
    """

    allows_intervals = False

    def __init__(self, M, budget, name=None):
        super().__init__(name or f'Chu({M.name})', budget)
        self.M = M
        self._zeros = tuple(
            ChuZero(M.src(a), a) for a in sorted(M.one_cells(), key=M.label) if M.src(a) == M.tgt(a)
        )
        self._ones = None

    def zero_cells(self):
        return self._zeros

    def one_cells(self):
        if self._ones is None:
            M = self.M
            ones = []
            for source in self._zeros:
                for target in self._zeros:
                    for A in M.one_cells():
                        if M.src(A) != source.x or M.tgt(A) != target.x:
                            continue
                        for Adual in M.one_cells():
                            if M.src(Adual) != target.x or M.tgt(Adual) != source.x:
                                continue
                            for eA, eAdual in product(M.hom((A, Adual), (source.a,)),
                                                      M.hom((Adual, A), (target.a,))):
                                ones.append(ChuOneCell(A, Adual, eA, eAdual))
            self._ones = sorted(ones, key=str)
            logger.debug(f'{self.name}: {len(self._ones)} 1-клеток')
        return tuple(self._ones)

    def src(self, a):
        return ChuZero(self.M.src(a.A), a.eA.outs[0])

    def tgt(self, a):
        return ChuZero(self.M.tgt(a.A), a.eAdual.outs[0])

    def _component_options(self, cycle):
        return [
            self.M.hom(tuple(c.A for c in _rest(cycle, k)), (cycle[k].Adual,))
            for k in range(len(cycle))
        ]

    def hom(self, ins, outs):
        ins, outs = tuple(ins), tuple(outs)
        if not ins or not outs or not (self.composable(ins) and self.composable(outs)):
            return []
        if self.src(ins[0]) != self.src(outs[0]) or self.tgt(ins[-1]) != self.tgt(outs[-1]):
            return []
        cycle = band_type(ins, outs)
        return [
            Cell(ins, outs, tuple(components))
            for components in product(*self._component_options(cycle))
            if not band_failures(self.M, cycle, components)
        ]

    def _compose(self, t, interval_t, s, interval_s, case, ins, outs):
        """
        Компонента результата для элемента из t получается подстановкой
        компоненты s при общей 1-клетке на место общей позиции, и наоборот.
        """
        j, i = interval_t[0], interval_s[0]
        n_t, m_t = len(t.ins), len(t.outs)
        size_t, size_s = len(t.core), len(s.core)
        shared_t = n_t + (m_t - j + 1)
        shared_s = i
        _, in_tags, out_tags = merge_layout(
            tag(t.ins, 't.in'), tag(t.outs, 't.out'), interval_t,
            tag(s.ins, 's.in'), tag(s.outs, 's.out'), interval_s,
        )
        cycle_tags = in_tags + tuple(reversed(out_tags))
        cycle = band_type(ins, outs)
        components = []
        for (origin, index), element in zip(cycle_tags, cycle):
            if origin.startswith('t'):
                k = index if origin == 't.in' else n_t + (m_t - index + 1)
                pos = (shared_t - k - 1) % size_t + 1
                partner, own = s.core[shared_s - 1], t.core[k - 1]
            else:
                k = index if origin == 's.in' else len(s.ins) + (len(s.outs) - index + 1)
                pos = (shared_s - k - 1) % size_s + 1
                partner, own = t.core[shared_t - 1], s.core[k - 1]
            component = self.M.cut(partner, 1, own, pos, strict=False)
            expected_ins = tuple(c.A for c in _rest(cycle, len(components)))
            if component.ins != expected_ins or component.outs != (element.Adual,):
                raise ConstructionError(
                    f'{self.name}: типизация ленты неоднозначна на {origin}{index}: '
                    f'{self.M.cell_label(component)}'
                )
            components.append(component)
        failing = band_failures(self.M, cycle, components)
        if failing:
            logger.error(f'{self.name}: уравнения ленты {failing} нарушены после композиции')
            raise ConstructionError(f'{self.name}: композиция дала некорректную ленту, уравнения {failing}')
        return Cell(ins, outs, tuple(components))

    def label(self, item):
        return str(item)

    def cell_label(self, cell):
        cores = ','.join(str(p.core) for p in cell.core if p.core is not None)
        text = f'{",".join(map(str, cell.ins))}->{",".join(map(str, cell.outs))}'
        return f'{text}[{cores}]' if cores else text


def chu_build(M, budget=None):
    """
    Строит Chu(M)

    Raises:
        ConstructionError: Если M не мульти-бикатегория
    """
    if not M.multi:
        raise ConstructionError(f'{M.name}: конструкция Chu требует регулярной мульти-бикатегории')
    chu = ChuStructure(M, budget or M.budget)
    logger.info(f'{chu.name}: {len(chu.zero_cells())} 0-клеток, {len(chu.one_cells())} 1-клеток')
    return chu


def check_bands(chu, budget=None):
    """
    Повторная проверка лент всех клеток в пределах бюджета

    Raises:
        ConstructionError: Если лента хранимой клетки нарушает уравнение
    """
    budget = budget or chu.budget
    checked = 0
    for cell in chu.all_cells(budget):
        failing = band_failures(chu.M, band_type(cell.ins, cell.outs), cell.core)
        if failing:
            raise ConstructionError(f'{chu.name}: лента {chu.cell_label(cell)} нарушает уравнения {failing}')
        checked += 1
    return checked


def chu_unit(chu, zero, family):
    """1_a = (1_x, a, l_a, r_a)"""
    u = family.unit1[zero.x]
    return ChuOneCell(u, zero.a, family.left[zero.a], family.right[zero.a])


def chu_unit_synthesize(chu, zero, family=None, budget=None):
    """
    Синтез тензорной единицы 1_a в Chu(M)

    Для каждой A из a строится лента l_A = (e_A, r_{A⊥}, l_A),
    для каждой A в a - лента r_A = (l_{A⊥}, e_{A⊥}, r_A).

    Returns:
        tuple: (ChuOneCell, Report)

    Raises:
        ConstructionError: Если у M нет когерентных свидетелей единичности
    """
    M = chu.M
    budget = budget or chu.budget
    family = family or coherentize_witnesses(M, raw_witnesses(M))
    if not family.coherent:
        raise ConstructionError(f'{M.name}: свидетели единичности не когерентны')
    unit = chu_unit(chu, zero, family)
    report = Report(f'chu unit {zero}', budget)
    for A in chu.one_cells():
        if chu.src(A) == zero:
            _unit_band(chu, report, 'left', (unit, A), (A,),
                       (A.eA, family.right[A.Adual], family.left[A.A]), budget)
        if chu.tgt(A) == zero:
            _unit_band(chu, report, 'right', (A, unit), (A,),
                       (family.left[A.Adual], A.eAdual, family.right[A.A]), budget)
    report.flag('tensor_unit1', is_tensor_unit1(chu, unit, budget))
    report.flag('par_unit1', is_par_unit1(chu, unit.dual(), budget))
    logger.info(f'{chu.name}: единица на {zero} = {unit}, {len(report.findings)} нарушений')
    return unit, report


def _unit_band(chu, report, family_name, ins, outs, components, budget):
    subject = f'{family_name}.{outs[0]}'
    report.count('bands')
    failing = band_failures(chu.M, band_type(ins, outs), components)
    if failing:
        report.add('band', subject, equations=','.join(map(str, failing)))
        return
    cell = Cell(ins, outs, components)
    positions = ((SIDE_OUTPUT, 1), (SIDE_INPUT, 2 if family_name == 'left' else 1))
    for side, pos in positions:
        if not is_divisible_at(chu, cell, side, pos, budget).holds:
            report.add('band_divisible', subject, side=side, pos=pos)


def involution_morphism(chu):
    """(-)⊥ как морфизм Chu(M) -> co-op Chu(M)"""
    opposite = dual(chu, DUAL_OP)
    target = dual(opposite, DUAL_CO)

    def image(cell):
        return target.wrap(opposite.wrap(involute(cell)))

    return Morphism(
        chu, target,
        {x: x for x in chu.zero_cells()},
        {a: Op(a.dual()) for a in chu.one_cells()},
        image,
        name=f'perp({chu.name})',
    )


def involute(cell):
    """p⊥: (B_m⊥..B_1⊥) -> (A_n⊥..A_1⊥), компоненты сдвинуты на n"""
    n = len(cell.ins)
    ins = tuple(b.dual() for b in reversed(cell.outs))
    outs = tuple(a.dual() for a in reversed(cell.ins))
    return Cell(ins, outs, tuple(cell.core[n:]) + tuple(cell.core[:n]))


def chu_involution_check(chu, budget=None):
    """
    Инволюция - изоморфизм Chu(M) -> co-op Chu(M)

    Returns:
        Certificate
    """
    budget = budget or chu.budget
    for a in chu.one_cells():
        if a.dual().dual() != a or a.dual() not in chu.one_cells():
            return Certificate.failed('involution', chu.name, budget, {'one_cell': a})
    cells = chu.all_cells(budget)
    for cell in cells:
        image = involute(cell)
        if involute(image) != cell or image not in chu.hom(image.ins, image.outs):
            return Certificate.failed('involution', chu.name, budget, {'cell': chu.cell_label(cell)})
    valid = validate_morphism(involution_morphism(chu), budget)
    if not valid.holds:
        return Certificate.failed('involution', chu.name, budget, valid.counterexample)
    return Certificate.passed('involution', chu.name, budget,
                              {'cells': len(cells), 'compositions': valid.witnesses['compositions']})


def chu_adjunction_witness(chu, A, family=None, budget=None):
    """
    Лента ε_A = (r_{A⊥}, l_A, e_A): (A, A⊥) -> (1_a⊥)

    Returns:
        tuple: (Cell, Certificate) - делимость на входах 1 и 2,
        то есть A⊥ - левый линейный сопряженный к A
    """
    M = chu.M
    budget = budget or chu.budget
    family = family or coherentize_witnesses(M, raw_witnesses(M))
    source, target = chu.src(A), chu.tgt(A)
    unit_a, unit_b = chu_unit(chu, source, family), chu_unit(chu, target, family)
    ins, outs = (A, A.dual()), (unit_a.dual(),)
    components = (family.right[A.Adual], family.left[A.A], A.eA)
    subject = f'eps{A}'
    failing = band_failures(M, band_type(ins, outs), components)
    if failing:
        return None, Certificate.failed('linear_adjoint', subject, budget,
                                        {'equations': ','.join(map(str, failing))})
    cell = Cell(ins, outs, components)
    witnesses = {}
    for pos in (1, 2):
        if not is_divisible_at(chu, cell, SIDE_INPUT, pos, budget).holds:
            return cell, Certificate.failed('linear_adjoint', subject, budget, {'side': SIDE_INPUT, 'pos': pos})
        witnesses[f'input{pos}'] = 'divisible'
    adjunction = check_linear_adjunction(chu, A.dual(), A, unit_b, unit_a.dual(), budget)
    if not adjunction.holds:
        return cell, Certificate.failed('linear_adjoint', subject, budget,
                                        dict(adjunction.counterexample or {}, criterion=adjunction.verdict))
    witnesses['criterion'] = adjunction.witnesses.get('condition', adjunction.verdict)
    return cell, Certificate.passed('linear_adjoint', subject, budget, witnesses)
