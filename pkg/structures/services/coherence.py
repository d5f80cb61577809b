"""
Сервис когерентных свидетелей единичности

Отвечает за:
- Сбор сырого семейства свидетелей l_a, r_b по тензорным единицам
- Когерентизацию семейства делением и пост-композицией
- Независимую проверку уравнений натуральности и треугольника
"""

import logging
from dataclasses import dataclass, field

from structures.constants import SIDE_INPUT, SIDE_OUTPUT
from structures.exceptions import BudgetExceeded, ConstructionError, DivisionError, IllegalMerge
from structures.services.certificates import Report
from structures.services.divisibility import divide
from structures.services.units import is_tensor_unit1

logger = logging.getLogger(__name__)


@dataclass
class UnitalityWitnessFamily:
    """
    Семейство свидетелей единичности

    Attributes:
        unit1: 0-клетка -> тензорная единица 1_x
        left: 1-клетка a -> l_a: (1_x, a) -> (a)
        right: 1-клетка b -> r_b: (b, 1_x) -> (b)
        coherent: Выполнены ли уравнения когерентности
        automorphisms: a -> (e_a, e'_a), найденные при когерентизации
    """

    unit1: dict
    left: dict
    right: dict
    coherent: bool = False
    automorphisms: dict = field(default_factory=dict)

    def same_cells(self, other):
        return self.unit1 == other.unit1 and self.left == other.left and self.right == other.right


def find_tensor_units(structure, budget=None):
    """
    Первая по меткам тензорная единица на каждой 0-клетке

    Returns:
        dict: 0-клетка -> (1-клетка, Certificate); отсутствие единицы не включается
    """
    units = {}
    for a in sorted(structure.one_cells(), key=structure.label):
        x = structure.src(a)
        if x in units or structure.tgt(a) != x:
            continue
        certificate = is_tensor_unit1(structure, a, budget)
        if certificate.holds:
            units[x] = (a, certificate)
    return units


def raw_witnesses(structure, budget=None, units=None):
    """
    Сырое семейство свидетелей из сертификатов тензорных единиц

    Raises:
        ConstructionError: Если у какой-то 0-клетки нет тензорной единицы
    """
    units = units or find_tensor_units(structure, budget)
    missing = [x for x in structure.zero_cells() if x not in units]
    if missing:
        raise ConstructionError(f'{structure.name}: нет тензорных единиц на {missing}')
    unit1, left, right = {}, {}, {}
    for x, (u, certificate) in units.items():
        unit1[x] = u
        left.update(certificate.data['left'])
        right.update(certificate.data['right'])
    return UnitalityWitnessFamily(unit1, left, right)


def coherentize_witnesses(structure, raw):
    """
    Делает семейство свидетелей когерентным

    Сначала приводит r_{1x} к l_{1x}: φ решает cut(φ,1,r_{1x},2) = l_{1x},
    и каждое r_b заменяется на cut(φ,1,r_b,2). Затем для каждой a
    новое l̃_a решает cut(l̃_a,1,l_a,2) = cut(l_{1x},1,l_a,1), и двойственно
    r̃_b решает cut(r̃_b,1,r_b,1) = cut(r_{1x},1,r_b,2).

    Args:
        structure: Структура с тензорными единицами
        raw: UnitalityWitnessFamily

    Returns:
        UnitalityWitnessFamily: Когерентное семейство

    Raises:
        ConstructionError: Если сырое семейство некорректно
    """
    left, right, automorphisms = {}, {}, {}
    try:
        normalized_right = dict(raw.right)
        for x, u in raw.unit1.items():
            l_unit, r_unit = raw.left[u], raw.right[u]
            if l_unit != r_unit:
                phi = divide(structure, r_unit, SIDE_INPUT, 2, l_unit)
                for b, r_b in raw.right.items():
                    if structure.tgt(b) == x:
                        normalized_right[b] = structure.cut(phi, 1, r_b, 2, strict=False)
                logger.info(f'{structure.name}: r_1 на {x} приведен к l_1')
        for a, l_a in raw.left.items():
            u = raw.unit1[structure.src(a)]
            target = structure.cut(raw.left[u], 1, l_a, 1, strict=False)
            left[a] = divide(structure, l_a, SIDE_INPUT, 2, target, at=1)
            automorphisms.setdefault(a, [None, None])[0] = divide(structure, l_a, SIDE_OUTPUT, 1, left[a])
        for b, r_b in normalized_right.items():
            u = raw.unit1[structure.tgt(b)]
            target = structure.cut(normalized_right[u], 1, r_b, 2, strict=False)
            right[b] = divide(structure, r_b, SIDE_INPUT, 1, target, at=1)
            automorphisms.setdefault(b, [None, None])[1] = divide(structure, r_b, SIDE_OUTPUT, 1, right[b])
    except (DivisionError, IllegalMerge, KeyError) as exc:
        logger.error(f'{structure.name}: когерентизация не удалась: {exc}')
        raise ConstructionError(f'Некорректное семейство свидетелей: {exc}') from exc
    family = UnitalityWitnessFamily(dict(raw.unit1), left, right,
                                    automorphisms={k: tuple(v) for k, v in automorphisms.items()})
    family.coherent = check_coherence(structure, family).ok
    return family


def _equal_or_none(structure, first, second):
    try:
        return first() == second()
    except (IllegalMerge, BudgetExceeded, ConstructionError):
        return None


def check_coherence(structure, family, budget=None):
    """
    Независимая проверка уравнений когерентности

    - natural:   cut(p,1,l_b,2) = cut(l_a,1,p,1) для p: (a,...)->(b,...)
    - natural2:  cut(p,m,r_c,1) = cut(r_a,1,p,n) для p: (...,a)->(...,c)
    - triangle:  cut(r_a,1,q,k) = cut(l_d,1,q,k+1) для входов q (a,d) на k, k+1

    Returns:
        Report: Находка на каждый нарушенный экземпляр
    """
    budget = budget or structure.budget
    report = Report('coherence', budget)
    for p in structure.all_cells(budget):
        label = structure.cell_label(p)
        a, b = p.ins[0], p.outs[0]
        if a in family.left and b in family.left:
            report.count('natural')
            verdict = _equal_or_none(
                structure,
                lambda: structure.cut(p, 1, family.left[b], 2, strict=False),
                lambda: structure.cut(family.left[a], 1, p, 1, strict=False),
            )
            if verdict is False:
                report.add('natural', label, a=a, b=b)
        a, c = p.ins[-1], p.outs[-1]
        if a in family.right and c in family.right:
            report.count('natural2')
            n, m = len(p.ins), len(p.outs)
            verdict = _equal_or_none(
                structure,
                lambda: structure.cut(p, m, family.right[c], 1, strict=False),
                lambda: structure.cut(family.right[a], 1, p, n, strict=False),
            )
            if verdict is False:
                report.add('natural2', label, a=a, c=c)
        for k in range(1, len(p.ins)):
            a, d = p.ins[k - 1], p.ins[k]
            if a in family.right and d in family.left:
                report.count('triangle')
                verdict = _equal_or_none(
                    structure,
                    lambda: structure.cut(family.right[a], 1, p, k, strict=False),
                    lambda: structure.cut(family.left[d], 1, p, k + 1, strict=False),
                )
                if verdict is False:
                    report.add('triangle', label, position=k)
    logger.info(f'{structure.name}: когерентность, {len(report.findings)} нарушений')
    return report
