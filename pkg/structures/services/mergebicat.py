"""
Сервис merge-бикатегорий

Отвечает за:
- Представимость merge-бикатегории (единицы на последовательностях,
  делимые 1-клетки, унарные делимые клетки, бинарные тензоры)
- Проверки схлопывания тензоров с парами и тензорных единиц с пар-единицами
- Согласованность делимости по всей границе с обратимостью
"""

import logging

from structures.constants import KIND_TENSOR, SIDE_INPUT, SIDE_OUTPUT
from structures.exceptions import NotDivisible
from structures.services.certificates import Certificate, Report
from structures.services.coherence import find_tensor_units
from structures.services.divisibility import is_divisible_at, is_divisible_interval
from structures.services.representability import representations
from structures.services.units import invert2, is_divisible1, is_par_unit1, is_seq_unit

logger = logging.getLogger(__name__)


def _merge_unital(structure, budget):
    witnesses = {}
    length = min(budget.max_in, budget.max_out)
    for seq in structure.sequences(max_weight=length):
        unit = structure.unit_on(seq)
        label = ','.join(structure.label(a) for a in seq)
        if unit is None or not is_seq_unit(structure, unit, budget).holds:
            return Certificate.failed('unital', structure.name, budget, {'sequence': label}, witnesses)
        witnesses[label] = structure.cell_label(unit)
    return Certificate.passed('unital', structure.name, budget, witnesses)


def _divisible_one_cells(structure, budget):
    witnesses = {}
    ones = sorted(structure.one_cells(), key=structure.label)
    for x in sorted(structure.zero_cells(), key=str):
        candidates = (e for e in ones if structure.src(e) == x)
        found = next((e for e in candidates if is_divisible1(structure, e, KIND_TENSOR, budget).holds), None)
        if found is None:
            return Certificate.failed('divisible_1cell', structure.name, budget, {'zero_cell': x}, witnesses)
        witnesses[str(x)] = structure.label(found)
    return Certificate.passed('divisible_1cell', structure.name, budget, witnesses)


def _unary_divisible(structure, budget):
    witnesses = {}
    ones = sorted(structure.one_cells(), key=structure.label)
    for a in ones:
        found = None
        for b in ones:
            for p in structure.hom((a,), (b,)):
                if is_divisible_at(structure, p, SIDE_OUTPUT, 1, budget).holds:
                    found = p
                    break
            if found is not None:
                break
        if found is None:
            return Certificate.failed('unary_divisible', structure.name, budget, {'one_cell': structure.label(a)},
                                      witnesses)
        witnesses[structure.label(a)] = structure.cell_label(found)
    return Certificate.passed('unary_divisible', structure.name, budget, witnesses)


def _tensor_par_collapse(structure, budget, tensors):
    witnesses = {}
    for (a, b), (c, cell) in tensors.items():
        label = structure.cell_label(cell)
        try:
            inverse = invert2(structure, cell)
        except NotDivisible:
            return Certificate.failed('tensor_par_collapse', structure.name, budget,
                                      {'tensor': label, 'reason': 'not invertible'}, witnesses)
        if not is_divisible_at(structure, inverse, SIDE_INPUT, 1, budget).holds:
            return Certificate.failed('tensor_par_collapse', structure.name, budget,
                                      {'tensor': label, 'reason': 'inverse not a par'}, witnesses)
        witnesses[label] = structure.cell_label(inverse)
    return Certificate.passed('tensor_par_collapse', structure.name, budget, witnesses)


def _unit_collapse(structure, budget, units):
    witnesses = {}
    for x, (u, _) in sorted(units.items(), key=lambda item: str(item[0])):
        if not is_par_unit1(structure, u, budget).holds:
            return Certificate.failed('unit_collapse', structure.name, budget, {'unit': structure.label(u)}, witnesses)
        witnesses[str(x)] = structure.label(u)
    return Certificate.passed('unit_collapse', structure.name, budget, witnesses)


def merge_representability_report(structure, budget=None):
    """
    Представимость merge-бикатегории

    Returns:
        Report: Флаги unital, divisible_1cell, unary_divisible,
        binary_tensor, representable, tensor_par_collapse, unit_collapse
    """
    budget = budget or structure.budget
    report = Report(f'merge representability {structure.name}', budget)
    unital = report.flag('unital', _merge_unital(structure, budget))
    divisible = report.flag('divisible_1cell', _divisible_one_cells(structure, budget))
    unary = report.flag('unary_divisible', _unary_divisible(structure, budget))
    tensors = report.flag('binary_tensor', representations(structure, KIND_TENSOR, budget, report))
    parts = (unital, divisible, unary, tensors)
    failing = next((cert for cert in parts if not cert.holds), None)
    if failing is None:
        report.flag('representable', Certificate.passed('representable', structure.name, budget,
                                                        {cert.property: 'holds' for cert in parts}))
    else:
        report.flag('representable', Certificate.failed('representable', structure.name, budget,
                                                        {'failing': failing.property}))
    if tensors.holds:
        report.flag('tensor_par_collapse', _tensor_par_collapse(structure, budget, tensors.data['table']))
    units = find_tensor_units(structure, budget)
    if units:
        report.flag('unit_collapse', _unit_collapse(structure, budget, units))
    return report


def invertibility_report(structure, budget=None):
    """
    Сверяет делимость по всей выходной и входной границе с обратимостью

    Для единичной структуры три свойства совпадают на каждой клетке.

    Returns:
        Report: Находка на каждую клетку с расхождением
    """
    budget = budget or structure.budget
    report = Report(f'invertibility {structure.name}', budget)
    for p in structure.all_cells(budget):
        report.count('cells')
        out_div = is_divisible_interval(structure, p, SIDE_OUTPUT, (1, len(p.outs)), budget).holds
        in_div = is_divisible_interval(structure, p, SIDE_INPUT, (1, len(p.ins)), budget).holds
        try:
            invert2(structure, p)
            invertible = True
        except NotDivisible:
            invertible = False
        if not out_div == in_div == invertible:
            report.add('invertibility', structure.cell_label(p), output=out_div, input=in_div, inverse=invertible)
    logger.info(f'{structure.name}: обратимость сверена на {report.meta.get("cells", 0)} клетках')
    return report
