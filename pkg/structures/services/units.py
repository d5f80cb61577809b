"""
Сервис единиц и представляющих клеток

Отвечает за:
- Проверку 2-единиц и единиц на последовательностях
- Построение единиц и обратных по делимым клеткам
- Поиск тензоров, паров, homs и cohoms
- Тензорные единицы и делимые 1-клетки
- Критерий линейного сопряжения
"""

import logging

from structures.constants import (
    DUAL_CO,
    KIND_LCOHOM,
    KIND_LHOM,
    KIND_PAR,
    KIND_RCOHOM,
    KIND_RHOM,
    KIND_TENSOR,
    SIDE_INPUT,
    SIDE_OUTPUT,
)
from structures.exceptions import ConstructionError, IllegalMerge, NotDivisible
from structures.services.certificates import Certificate
from structures.services.divisibility import divide, is_divisible_at
from structures.services.polybicat import dual

logger = logging.getLogger(__name__)


def is_seq_unit(structure, p, budget=None, prop='unit'):
    """
    Проверяет, что p: (Γ)->(Γ) нейтральна во всех слияниях по всей своей границе

    Returns:
        Certificate: Свидетели - проверенные слияния
    """
    budget = budget or structure.budget
    subject = structure.cell_label(p)
    if p.ins != p.outs:
        return Certificate.failed(prop, subject, budget, {'cell': subject, 'reason': 'shape'})
    witnesses = {}
    for other, side, interval, result in structure.unit_instances(p, budget):
        instance = f'{structure.cell_label(other)}:{side}@{interval[0]},{interval[1]}'
        if result != other:
            return Certificate.failed(prop, subject, budget, {
                'cell': subject,
                'other': structure.cell_label(other),
                'side': side,
                'at': f'{interval[0]},{interval[1]}',
                'result': structure.cell_label(result) if result is not None else 'undefined',
            }, witnesses)
        witnesses[instance] = 'ok'
    return Certificate.passed(prop, subject, budget, witnesses)


def is_unit2(structure, p, budget=None):
    """Единица на 1-клетке: p: (a)->(a)"""
    if len(p.ins) != 1:
        subject = structure.cell_label(p)
        return Certificate.failed('unit2', subject, budget or structure.budget, {'cell': subject, 'reason': 'arity'})
    return is_seq_unit(structure, p, budget, prop='unit2')


def unit2_from_divisible(structure, p):
    """
    Единицы на входе и выходе делимой клетки p: (a)->(a')

    Returns:
        tuple: (id_a, id_a') как решения делений p на себя
    """
    left = divide(structure, p, SIDE_INPUT, 1, p)
    right = divide(structure, p, SIDE_OUTPUT, 1, p)
    return left, right


def invert2(structure, p):
    """
    Обратная клетка относительно слияний по всей границе

    Raises:
        NotDivisible: Если единиц нет или обратная не найдена
    """
    unit_in = structure.unit_on(p.ins)
    unit_out = structure.unit_on(p.outs)
    if unit_in is None or unit_out is None:
        raise NotDivisible(f'Нет единиц для обращения {structure.cell_label(p)}')
    full_in, full_out = (1, len(p.ins)), (1, len(p.outs))
    for q in structure.hom(p.outs, p.ins):
        try:
            if (structure.merge(p, full_out, q, full_out, strict=False) == unit_in
                    and structure.merge(q, full_in, p, full_in, strict=False) == unit_out):
                return q
        except (IllegalMerge, ConstructionError):
            continue
    raise NotDivisible(f'Клетка {structure.cell_label(p)} необратима')


def inverse2(structure, p):
    """Обратная клетки (a)->(a')"""
    if len(p.ins) != 1 or len(p.outs) != 1:
        raise NotDivisible(f'inverse2 ожидает клетку (a)->(b), получено {structure.cell_label(p)}')
    return invert2(structure, p)


# вид -> (входы, выходы, сторона, позиция) для представляющей клетки
def _representing_shape(kind, a, b, c):
    return {
        KIND_TENSOR: ((a, b), (c,), SIDE_OUTPUT, 1),
        KIND_PAR: ((c,), (a, b), SIDE_INPUT, 1),
        KIND_RHOM: ((a, c), (b,), SIDE_INPUT, 2),
        KIND_LHOM: ((c, a), (b,), SIDE_INPUT, 1),
        KIND_RCOHOM: ((b,), (a, c), SIDE_OUTPUT, 2),
        KIND_LCOHOM: ((b,), (c, a), SIDE_OUTPUT, 1),
    }[kind]


def search_representing(structure, kind, a, b, budget=None):
    """
    Ищет представляющую 1-клетку и делимую клетку нужного вида

    Кандидаты перебираются по меткам 1-клеток; возвращается первое попадание.

    Returns:
        tuple | None: (1-клетка, клетка, Certificate) или None
    """
    budget = budget or structure.budget
    for c in sorted(structure.one_cells(), key=structure.label):
        ins, outs, side, pos = _representing_shape(kind, a, b, c)
        if not (structure.composable(ins) and structure.composable(outs)):
            continue
        if structure.src(ins[0]) != structure.src(outs[0]) or structure.tgt(ins[-1]) != structure.tgt(outs[-1]):
            continue
        for cell in structure.hom(ins, outs):
            certificate = is_divisible_at(structure, cell, side, pos, budget)
            if certificate.holds:
                logger.debug(f'{kind}({a},{b}) = {c} через {structure.cell_label(cell)}')
                return c, cell, certificate
    return None


def _first_divisible(structure, candidates, positions, budget):
    """Первая клетка, делимая во всех указанных позициях"""
    for cell in candidates:
        if all(is_divisible_at(structure, cell, side, pos, budget).holds for side, pos in positions):
            return cell
    return None


def is_tensor_unit1(structure, u, budget=None, prop='tensor_unit1'):
    """
    Проверяет, что u: x->x - тензорная единица

    Для каждой a: x->y нужна l_a: (u,a)->(a), делимая на выходе 1 и входе 2;
    для каждой b: z->x нужна r_b: (b,u)->(b), делимая на выходе 1 и входе 1.

    Returns:
        Certificate: data содержит семейства left и right
    """
    budget = budget or structure.budget
    subject = structure.label(u)
    if structure.src(u) != structure.tgt(u):
        return Certificate.failed(prop, subject, budget, {'one_cell': subject, 'reason': 'not endo'})
    x = structure.src(u)
    left, right, witnesses = {}, {}, {}
    for a in sorted(structure.one_cells(), key=structure.label):
        if structure.src(a) == x:
            cell = _first_divisible(structure, structure.hom((u, a), (a,)),
                                    ((SIDE_OUTPUT, 1), (SIDE_INPUT, 2)), budget)
            if cell is None:
                return Certificate.failed(prop, subject, budget,
                                          {'family': 'left', 'one_cell': structure.label(a)}, witnesses)
            left[a] = cell
            witnesses[f'l.{structure.label(a)}'] = structure.cell_label(cell)
        if structure.tgt(a) == x:
            cell = _first_divisible(structure, structure.hom((a, u), (a,)),
                                    ((SIDE_OUTPUT, 1), (SIDE_INPUT, 1)), budget)
            if cell is None:
                return Certificate.failed(prop, subject, budget,
                                          {'family': 'right', 'one_cell': structure.label(a)}, witnesses)
            right[a] = cell
            witnesses[f'r.{structure.label(a)}'] = structure.cell_label(cell)
    return Certificate.passed(prop, subject, budget, witnesses, data={'unit': u, 'left': left, 'right': right})


def is_par_unit1(structure, w, budget=None):
    """Пар-единица: тензорная единица в co-двойственной структуре"""
    return is_tensor_unit1(dual(structure, DUAL_CO), w, budget, prop='par_unit1')


def is_divisible1(structure, e, kind=KIND_TENSOR, budget=None):
    """
    Проверяет делимость 1-клетки e: x->x'

    Четыре семейства клеток должны существовать со своими парами
    делимостей для всех 1-клеток в бюджете. Пар-вариант проверяется
    в co-двойственной структуре.

    Returns:
        Certificate
    """
    if kind == KIND_PAR:
        certificate = is_divisible1(dual(structure, DUAL_CO), e, KIND_TENSOR, budget)
        certificate.property = 'par_divisible1'
        return certificate
    budget = budget or structure.budget
    subject = structure.label(e)
    x, x2 = structure.src(e), structure.tgt(e)
    ones = sorted(structure.one_cells(), key=structure.label)
    families = (
        # (e,c)->(a) для a: x->y
        ('hom_right', lambda a: structure.src(a) == x,
         lambda a, c: ((e, c), (a,)), ((SIDE_OUTPUT, 1), (SIDE_INPUT, 2))),
        # (e,a')->(c) для a': x'->y
        ('tensor_right', lambda a: structure.src(a) == x2,
         lambda a, c: ((e, a), (c,)), ((SIDE_OUTPUT, 1), (SIDE_INPUT, 2))),
        # (c,e)->(b') для b': z->x'
        ('hom_left', lambda a: structure.tgt(a) == x2,
         lambda a, c: ((c, e), (a,)), ((SIDE_OUTPUT, 1), (SIDE_INPUT, 1))),
        # (b,e)->(c) для b: z->x
        ('tensor_left', lambda a: structure.tgt(a) == x,
         lambda a, c: ((a, e), (c,)), ((SIDE_OUTPUT, 1), (SIDE_INPUT, 1))),
    )
    witnesses = {}
    for family, applies, shape, positions in families:
        for a in ones:
            if not applies(a):
                continue
            found = None
            for c in ones:
                ins, outs = shape(a, c)
                if not structure.composable(ins) or structure.src(ins[0]) != structure.src(outs[0]) \
                        or structure.tgt(ins[-1]) != structure.tgt(outs[-1]):
                    continue
                found = _first_divisible(structure, structure.hom(ins, outs), positions, budget)
                if found is not None:
                    break
            if found is None:
                return Certificate.failed('tensor_divisible1', subject, budget,
                                          {'family': family, 'one_cell': structure.label(a)}, witnesses)
            witnesses[f'{family}.{structure.label(a)}'] = structure.cell_label(found)
    return Certificate.passed('tensor_divisible1', subject, budget, witnesses)


def unit1_from_divisible1(structure, e, budget=None):
    """
    Тензорные единицы из тензорно делимой 1-клетки e: x->x'

    Returns:
        tuple: ((e\\e, Certificate), (e/e, Certificate))

    Raises:
        ConstructionError: Если самоделение не найдено
    """
    right = search_representing(structure, KIND_RHOM, e, e, budget)
    left = search_representing(structure, KIND_LHOM, e, e, budget)
    if right is None or left is None:
        raise ConstructionError(f'Нет самоделения 1-клетки {structure.label(e)}')
    return (
        (right[0], is_tensor_unit1(structure, right[0], budget)),
        (left[0], is_tensor_unit1(structure, left[0], budget)),
    )


def check_linear_adjunction(structure, a, b, u, w, budget=None):
    """
    Критерий линейного сопряжения a ⊣ b

    Достаточно одного из четырех условий: ε: (b,a)->(w) делима на входе 1
    или 2, либо η: (u)->(a,b) делима на выходе 1 или 2.

    Returns:
        Certificate: Свидетель condition указывает сработавшее условие
    """
    budget = budget or structure.budget
    subject = f'{structure.label(a)}-|{structure.label(b)}'
    attempts = (
        ('eps.input1', (b, a), (w,), SIDE_INPUT, 1),
        ('eps.input2', (b, a), (w,), SIDE_INPUT, 2),
        ('eta.output1', (u,), (a, b), SIDE_OUTPUT, 1),
        ('eta.output2', (u,), (a, b), SIDE_OUTPUT, 2),
    )
    for condition, ins, outs, side, pos in attempts:
        if not (structure.composable(ins) and structure.composable(outs)):
            continue
        for cell in structure.hom(ins, outs):
            if is_divisible_at(structure, cell, side, pos, budget).holds:
                return Certificate.passed('linear_adjunction', subject, budget,
                                          {'condition': condition, 'cell': structure.cell_label(cell)})
    return Certificate.failed('linear_adjunction', subject, budget, {'a': structure.label(a), 'b': structure.label(b),
                                                                     'reason': 'no divisible unit or counit'})
