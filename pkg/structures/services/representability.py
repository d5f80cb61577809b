"""
Сервис отчетов о представимости

Отвечает за:
- Таксономию поли-бикатегорий: единичность, 0- и 1-представимость,
  замкнутость и козамкнутость, *-автономность
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
)
from structures.services.certificates import Certificate, Report
from structures.services.coherence import find_tensor_units
from structures.services.polybicat import dual
from structures.services.units import check_linear_adjunction, is_unit2, search_representing

logger = logging.getLogger(__name__)

# вид -> условие на пару (a, b)
_PAIRING = {
    KIND_TENSOR: lambda X, a, b: X.tgt(a) == X.src(b),
    KIND_PAR: lambda X, a, b: X.tgt(a) == X.src(b),
    KIND_RHOM: lambda X, a, b: X.src(a) == X.src(b),
    KIND_LHOM: lambda X, a, b: X.tgt(a) == X.tgt(b),
    KIND_RCOHOM: lambda X, a, b: X.src(a) == X.src(b),
    KIND_LCOHOM: lambda X, a, b: X.tgt(a) == X.tgt(b),
}


def representations(structure, kind, budget=None, report=None, partial=False):
    """
    Представления вида kind для всех подходящих пар 1-клеток

    При partial=True пары без представления пропускаются.

    Returns:
        Certificate: data['table'] содержит (a, b) -> (c, клетка)
    """
    budget = budget or structure.budget
    ones = sorted(structure.one_cells(), key=structure.label)
    table, witnesses = {}, {}
    for a in ones:
        for b in ones:
            if not _PAIRING[kind](structure, a, b):
                continue
            pair = f'{structure.label(a)},{structure.label(b)}'
            found = search_representing(structure, kind, a, b, budget)
            if found is None:
                if structure.beyond_cap(kind, a, b):
                    if report is not None:
                        report.count(f'{kind}.capped')
                    logger.warning(f'{structure.name}: {kind}({pair}) обрезан потолком')
                    continue
                if partial:
                    continue
                return Certificate.failed(kind, structure.name, budget, {'pair': pair, 'reason': 'none'}, witnesses)
            table[(a, b)] = found[:2]
            witnesses[pair] = structure.label(found[0])
    return Certificate.passed(kind, structure.name, budget, witnesses, data={'table': table})


def _zero_representable(structure, budget, prop):
    units = find_tensor_units(structure, budget)
    missing = [x for x in sorted(structure.zero_cells(), key=str) if x not in units]
    witnesses = {str(x): structure.label(u) for x, (u, _) in units.items()}
    if missing:
        return Certificate.failed(prop, structure.name, budget, {'zero_cell': missing[0]}, witnesses)
    return Certificate.passed(prop, structure.name, budget, witnesses, data={'units': units})


def _unital(structure, budget):
    witnesses = {}
    for a in sorted(structure.one_cells(), key=structure.label):
        unit = structure.unit_on((a,))
        if unit is None or not is_unit2(structure, unit, budget).holds:
            return Certificate.failed('unital', structure.name, budget, {'one_cell': structure.label(a)}, witnesses)
        witnesses[structure.label(a)] = structure.cell_label(unit)
    return Certificate.passed('unital', structure.name, budget, witnesses)


def _star_autonomous(structure, budget, tensor_units, par_units):
    witnesses = {}
    ones = sorted(structure.one_cells(), key=structure.label)
    for a in ones:
        x, y = structure.src(a), structure.tgt(a)
        found = None
        for b in ones:
            if structure.src(b) != y or structure.tgt(b) != x:
                continue
            if check_linear_adjunction(structure, a, b, tensor_units[x][0], par_units[y][0], budget).holds:
                found = b
                break
        if found is None:
            return Certificate.failed('star_autonomous', structure.name, budget,
                                      {'one_cell': structure.label(a), 'reason': 'no linear adjoint'}, witnesses)
        witnesses[structure.label(a)] = structure.label(found)
    return Certificate.passed('star_autonomous', structure.name, budget, witnesses)


def representability_report(structure, budget=None):
    """
    Таксономия представимости поли-бикатегории

    Returns:
        Report: Флаги unital, tensor/par 0- и 1-представимости,
        замкнутости с обеих сторон и *-автономности
    """
    budget = budget or structure.budget
    report = Report(f'representability {structure.name}', budget)
    report.flag('unital', _unital(structure, budget))
    tensor0 = report.flag('tensor_0_representable', _zero_representable(structure, budget, 'tensor_0_representable'))
    co = dual(structure, DUAL_CO)
    par0 = report.flag('par_0_representable', _zero_representable(co, budget, 'par_0_representable'))
    tensor1 = report.flag('tensor_1_representable', representations(structure, KIND_TENSOR, budget, report))
    par1 = report.flag('par_1_representable', representations(structure, KIND_PAR, budget, report))
    for name, kind in (('right_closed', KIND_RHOM), ('left_closed', KIND_LHOM),
                       ('right_coclosed', KIND_RCOHOM), ('left_coclosed', KIND_LCOHOM)):
        report.flag(name, representations(structure, kind, budget, report))
    if tensor0.holds and par0.holds and tensor1.holds and par1.holds:
        report.flag('star_autonomous', _star_autonomous(structure, budget, tensor0.data['units'], par0.data['units']))
    else:
        report.flag('star_autonomous', Certificate.failed('star_autonomous', structure.name, budget,
                                                          {'reason': 'not representable'}))
    return report

