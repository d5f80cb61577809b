"""
Сервис делимости 2-клеток

Отвечает за:
- Вывод всех корректных уравнений деления для клетки t
- Проверку делимости в позиции и на интервале границы
- Решение уравнения деления (divide)

Уравнение на выходной стороне: merge(t, K, x, I) = s.
Уравнение на входной стороне:  merge(x, J, t, K) = s.
"""

import logging
from collections import defaultdict

from structures.constants import SIDE_INPUT, SIDE_OUTPUT
from structures.exceptions import (
    BudgetExceeded,
    ConstructionError,
    IllegalMerge,
    NonUniqueSolution,
    NoSolution,
)
from structures.services.certificates import Certificate
from structures.utils import merge_layout, seq_label

logger = logging.getLogger(__name__)


def _as_interval(pos):
    if isinstance(pos, int):
        return pos, pos
    return tuple(pos)


def _output_shapes(t, interval, s_ins, s_outs):
    """Границы x и интервалы на входах x для уравнений merge(t, K, x, I) = s"""
    k1, k2 = interval
    length = k2 - k1 + 1
    n, m = len(t.ins), len(t.outs)
    shared = t.outs[k1 - 1:k2]
    shapes = []
    # (a): вход x целиком совпадает с интервалом
    if s_ins == t.ins:
        outs = s_outs[k1 - 1:len(s_outs) - (m - k2)]
        if s_outs[:k1 - 1] == t.outs[:k1 - 1] and s_outs[len(s_outs) - (m - k2):] == t.outs[k2:]:
            shapes.append((shared, outs, (1, length)))
    # (b): интервал в конце выходов t, x дописывает входы справа
    if k2 == m and s_ins[:n] == t.ins and s_outs[:m - length] == t.outs[:m - length]:
        shapes.append((shared + s_ins[n:], s_outs[m - length:], (1, length)))
    # (c): t целиком подставляется во вход x
    if k1 == 1 and k2 == m:
        for i1 in range(1, len(s_ins) - n + 2):
            if s_ins[i1 - 1:i1 - 1 + n] == t.ins:
                ins = s_ins[:i1 - 1] + shared + s_ins[i1 - 1 + n:]
                shapes.append((ins, s_outs, (i1, i1 + length - 1)))
    # (d): интервал в начале выходов t, x дописывает входы слева
    if k1 == 1 and s_ins[len(s_ins) - n:] == t.ins and s_outs[len(s_outs) - (m - length):] == t.outs[length:]:
        ins = s_ins[:len(s_ins) - n] + shared
        shapes.append((ins, s_outs[:len(s_outs) - (m - length)], (len(ins) - length + 1, len(ins))))
    return shapes


def _input_shapes(t, interval, s_ins, s_outs):
    """Границы x и интервалы на выходах x для уравнений merge(x, J, t, K) = s"""
    k1, k2 = interval
    length = k2 - k1 + 1
    n, q = len(t.ins), len(t.outs)
    shared = t.ins[k1 - 1:k2]
    shapes = []
    # (a): t целиком подставляется в выход x
    if k1 == 1 and k2 == n:
        for j1 in range(1, len(s_outs) - q + 2):
            if s_outs[j1 - 1:j1 - 1 + q] == t.outs:
                outs = s_outs[:j1 - 1] + shared + s_outs[j1 - 1 + q:]
                shapes.append((s_ins, outs, (j1, j1 + length - 1)))
    # (b): интервал в начале входов t, выходы x заканчиваются интервалом
    if k1 == 1 and s_ins[len(s_ins) - (n - length):] == t.ins[length:] and s_outs[len(s_outs) - q:] == t.outs:
        outs = s_outs[:len(s_outs) - q] + shared
        shapes.append((s_ins[:len(s_ins) - (n - length)], outs, (len(outs) - length + 1, len(outs))))
    # (c): выход x целиком совпадает с интервалом
    if s_outs == t.outs and s_ins[:k1 - 1] == t.ins[:k1 - 1] and s_ins[len(s_ins) - (n - k2):] == t.ins[k2:]:
        shapes.append((s_ins[k1 - 1:len(s_ins) - (n - k2)], shared, (1, length)))
    # (d): интервал в конце входов t, выходы x начинаются интервалом
    if k2 == n and s_ins[:n - length] == t.ins[:n - length] and s_outs[:q] == t.outs:
        shapes.append((s_ins[n - length:], shared + s_outs[q:], (1, length)))
    return shapes


def equation_shapes(structure, t, side, interval, s_ins, s_outs):
    """
    Корректные уравнения деления t с заданной границей s

    Каждая форма проверяется повторным вычислением раскладки границ.

    Returns:
        list: Тройки (входы x, выходы x, интервал на x) без повторов
    """
    s_ins, s_outs = tuple(s_ins), tuple(s_outs)
    if side == SIDE_OUTPUT:
        raw = _output_shapes(t, interval, s_ins, s_outs)
    elif side == SIDE_INPUT:
        raw = _input_shapes(t, interval, s_ins, s_outs)
    else:
        raise ValueError(f'Неизвестная сторона: {side}')
    shapes = []
    for x_ins, x_outs, x_interval in raw:
        shape = (tuple(x_ins), tuple(x_outs), x_interval)
        if shape in shapes or not x_ins or not x_outs:
            continue
        if not (structure.composable(x_ins) and structure.composable(x_outs)):
            continue
        if structure.src(x_ins[0]) != structure.src(x_outs[0]) or structure.tgt(x_ins[-1]) != structure.tgt(x_outs[-1]):
            continue
        try:
            if side == SIDE_OUTPUT:
                _, ins, outs = merge_layout(t.ins, t.outs, interval, x_ins, x_outs, x_interval)
            else:
                _, ins, outs = merge_layout(x_ins, x_outs, x_interval, t.ins, t.outs, interval)
        except IllegalMerge:
            continue
        if (ins, outs) == (s_ins, s_outs):
            shapes.append(shape)
    return shapes


def _solve(structure, t, side, interval, x, x_interval):
    try:
        if side == SIDE_OUTPUT:
            return structure.merge(t, interval, x, x_interval, strict=False)
        return structure.merge(x, x_interval, t, interval, strict=False)
    except (IllegalMerge, BudgetExceeded, ConstructionError):
        return None


def is_divisible_interval(structure, t, side, interval, budget=None):
    """
    Проверяет делимость t на интервале границы

    Перебирает все границы s в пределах бюджета и все корректные
    уравнения для них. Делимость выполнена, если у каждого уравнения
    ровно одно решение.

    Args:
        structure: Поли- или merge-бикатегория
        t: Клетка
        side: input / output
        interval: (k1, k2) с единицы
        budget: Бюджет (по умолчанию бюджет структуры)

    Returns:
        Certificate: Со свидетелями или контрпримером
    """
    budget = budget or structure.budget
    interval = _as_interval(interval)
    k1, k2 = interval
    arity = len(t.outs) if side == SIDE_OUTPUT else len(t.ins)
    prop = f'divisible.{side}[{k1},{k2}]'
    subject = structure.cell_label(t)
    if not 1 <= k1 <= k2 <= arity:
        raise IllegalMerge(f'Позиция [{k1},{k2}] вне арности {arity} клетки {subject}')
    witnesses = {}
    for s_ins, s_outs in structure.boundaries(budget):
        for x_ins, x_outs, x_interval in equation_shapes(structure, t, side, interval, s_ins, s_outs):
            if not budget.admits(structure.seq_weight(x_ins), structure.seq_weight(x_outs)):
                continue
            solutions = defaultdict(list)
            for x in structure.hom(x_ins, x_outs):
                result = _solve(structure, t, side, interval, x, x_interval)
                if result is not None:
                    solutions[result].append(x)
            for s in structure.hom(s_ins, s_outs):
                found = solutions.get(s, [])
                instance = f'{structure.cell_label(s)}@{x_interval[0]},{x_interval[1]}'
                if len(found) != 1:
                    logger.debug(f'{subject} не делима: {instance} имеет {len(found)} решений')
                    return Certificate.failed(prop, subject, budget, {
                        'cell': subject,
                        'side': side,
                        'pos': f'{k1},{k2}' if k1 != k2 else k1,
                        'target': structure.cell_label(s),
                        'unknown': f'{seq_label(x_ins)}->{seq_label(x_outs)}',
                        'at': f'{x_interval[0]},{x_interval[1]}',
                        'solutions': len(found),
                    }, witnesses)
                witnesses[instance] = structure.cell_label(found[0])
    return Certificate.passed(prop, subject, budget, witnesses)


def is_divisible_at(structure, t, side, pos, budget=None):
    """Делимость в одной позиции границы"""
    return is_divisible_interval(structure, t, side, (pos, pos), budget)


def divide(structure, t, side, pos, s, at=None):
    """
    Решает уравнение деления s через t

    Args:
        structure: Структура
        t: Делитель
        side: input / output
        pos: Позиция или интервал на t
        s: Делимое
        at: Позиция или интервал на x, если уравнений несколько

    Returns:
        Cell: Единственное решение x

    Raises:
        NoSolution: Решений нет
        NonUniqueSolution: Решений больше одного
    """
    interval = _as_interval(pos)
    wanted = _as_interval(at) if at is not None else None
    found = []
    for x_ins, x_outs, x_interval in equation_shapes(structure, t, side, interval, s.ins, s.outs):
        if wanted is not None and x_interval != wanted:
            continue
        for x in structure.hom(x_ins, x_outs):
            if x not in found and _solve(structure, t, side, interval, x, x_interval) == s:
                found.append(x)
    if not found:
        raise NoSolution(f'Нет решения: {structure.cell_label(s)} через {structure.cell_label(t)} ({side} {pos})')
    if len(found) > 1:
        raise NonUniqueSolution(
            f'{len(found)} решений: {structure.cell_label(s)} через {structure.cell_label(t)} ({side} {pos})'
        )
    return found[0]
