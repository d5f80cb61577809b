"""
Сервис проверки аксиом композиции

Для тонких структур проверяется замкнутость предиката относительно
всех допустимых композиций. Для табличных и вычисляемых структур
перебираются тройки клеток: композиция r с результатом merge(t, s)
сравнивается с композицией, где r сначала присоединяется к той клетке,
откуда пришел затронутый интервал (ассоциативность, если это s сверху
или t снизу, и перестановочность, если это другая клетка).
Если интервал затрагивает обе клетки, он делится на части t и s:
r сначала сливается с той клеткой, с которой связан только одной
стороной, а вторая клетка присоединяется по объединенному интервалу
(схема merge_scheme).
"""

import logging

from django.conf import settings

from structures.exceptions import BudgetExceeded, ConstructionError, IllegalMerge
from structures.services.certificates import Report
from structures.services.polybicat import ThinStructure, underlying_polybicat
from structures.utils import ArityBudget, find_interval, merge_layout, seq_label, tag

logger = logging.getLogger(__name__)


def axiom_budget(structure):
    """Бюджет кубических проверок: минимум бюджета структуры и AXIOM_BUDGET"""
    ceiling = ArityBudget.parse(settings.POLYWEAVE_CONFIG['AXIOM_BUDGET'])
    return structure.budget.meet(ceiling)


def merge_intervals(structure, upper, lower):
    """Все пары интервалов, по которым upper сверху может слиться с lower"""
    max_len = min(len(upper.outs), len(lower.ins)) if structure.allows_intervals else 1
    for length in range(1, max_len + 1):
        for j1 in range(1, len(upper.outs) - length + 2):
            piece = upper.outs[j1 - 1:j1 - 1 + length]
            for i1 in range(1, len(lower.ins) - length + 2):
                if lower.ins[i1 - 1:i1 - 1 + length] != piece:
                    continue
                try:
                    merge_layout(upper.ins, upper.outs, (j1, j1 + length - 1),
                                 lower.ins, lower.outs, (i1, i1 + length - 1))
                except IllegalMerge:
                    continue
                yield (j1, j1 + length - 1), (i1, i1 + length - 1)


def _by_inputs(cells):
    index = {}
    for cell in cells:
        for a in set(cell.ins):
            index.setdefault(a, []).append(cell)
    return index


def _check_thin(structure, budget, report):
    cells = structure.all_cells(budget)
    below = _by_inputs(cells)
    for t in cells:
        candidates = {id(s): s for a in set(t.outs) for s in below.get(a, [])}
        for s in candidates.values():
            for interval_t, interval_s in merge_intervals(structure, t, s):
                _, ins, outs = merge_layout(t.ins, t.outs, interval_t, s.ins, s.outs, interval_s)
                if not budget.admits(structure.seq_weight(ins), structure.seq_weight(outs)):
                    continue
                report.count('closure')
                if not structure.holds(ins, outs):
                    report.add('closure', f'{seq_label(ins)}->{seq_label(outs)}',
                               upper=t, lower=s, at=f'{interval_t[0]},{interval_t[1]}/{interval_s[0]},{interval_s[1]}')


def _merge(structure, t, interval_t, s, interval_s):
    return structure.merge(t, interval_t, s, interval_s, strict=False)


def _triple(structure, report, t, interval_t, s, interval_s, u, u_tags, r, above):
    """
    Сравнивает две расстановки скобок для тройки (t, s, r)

    u_tags: помеченные границы u = merge(t, s) с происхождением элементов
    above: r сверху u или снизу
    """
    u_ins, u_outs = u_tags
    if above:
        pairs = merge_intervals(structure, r, u)
    else:
        pairs = merge_intervals(structure, u, r)
    for interval_a, interval_b in pairs:
        touched = u_ins[interval_b[0] - 1:interval_b[1]] if above else u_outs[interval_a[0] - 1:interval_a[1]]
        origins = {origin.split('.')[0] for origin, _ in touched}
        interval_r = interval_a if above else interval_b
        try:
            if above:
                left = _merge(structure, r, interval_a, u, interval_b)
            else:
                left = _merge(structure, u, interval_a, r, interval_b)
            if len(origins) > 1:
                scheme = 'merge_scheme'
                split = _split_above if above else _split_below
                right = split(structure, t, interval_t, s, interval_s, r, interval_r, touched)
            else:
                origin = origins.pop()
                scheme = 'associativity' if (origin == 's') != above else 'interchange'
                regroup = _regroup_above if above else _regroup_below
                right = regroup(structure, origin, t, interval_t, s, interval_s, r, interval_r, touched)
        except (IllegalMerge, BudgetExceeded, ConstructionError):
            report.count('undecomposed')
            continue
        if right is None:
            report.count('undecomposed')
            continue
        report.count(scheme)
        if left != right:
            report.add(scheme, structure.cell_label(left), expected=structure.cell_label(right),
                       upper=structure.cell_label(t), lower=structure.cell_label(s),
                       third=structure.cell_label(r), position='above' if above else 'below')


def _span(positions):
    """Непрерывный интервал (k1, k2) из позиций или None"""
    positions = sorted(positions)
    if not positions or positions != list(range(positions[0], positions[0] + len(positions))):
        return None
    return positions[0], positions[-1]


def _parts(touched, interval_r):
    """Затронутый интервал по клеткам: происхождение -> [(индекс в клетке, позиция на r)]"""
    parts = {}
    for offset, (origin, index) in enumerate(touched):
        parts.setdefault(origin.split('.')[0], []).append((index, interval_r[0] + offset))
    return parts


def _regroup_below(structure, origin, t, interval_t, s, interval_s, r, interval_r, touched):
    interval_own = _span(index for _, index in touched)
    if interval_own is None:
        return None
    if origin == 's':
        # (t;s);r = t;(s;r)
        inner = _merge(structure, s, interval_own, r, interval_r)
        _, ins, _ = merge_layout(tag(s.ins, 's'), tag(s.outs, 's.out'), interval_own,
                                 tag(r.ins, 'r'), tag(r.outs, 'r.out'), interval_r)
        where = find_interval(ins, [('s', k) for k in range(interval_s[0], interval_s[1] + 1)])
        return None if where is None else _merge(structure, t, interval_t, inner, where)
    # (t;s);r = (t;r);s
    inner = _merge(structure, t, interval_own, r, interval_r)
    _, _, outs = merge_layout(tag(t.ins, 't'), tag(t.outs, 't'), interval_own,
                              tag(r.ins, 'r'), tag(r.outs, 'r.out'), interval_r)
    where = find_interval(outs, [('t', k) for k in range(interval_t[0], interval_t[1] + 1)])
    return None if where is None else _merge(structure, inner, where, s, interval_s)


def _regroup_above(structure, origin, t, interval_t, s, interval_s, r, interval_r, touched):
    interval_own = _span(index for _, index in touched)
    if interval_own is None:
        return None
    if origin == 't':
        # r;(t;s) = (r;t);s
        inner = _merge(structure, r, interval_r, t, interval_own)
        _, _, outs = merge_layout(tag(r.ins, 'r.in'), tag(r.outs, 'r'), interval_r,
                                  tag(t.ins, 't.in'), tag(t.outs, 't'), interval_own)
        where = find_interval(outs, [('t', k) for k in range(interval_t[0], interval_t[1] + 1)])
        return None if where is None else _merge(structure, inner, where, s, interval_s)
    # r;(t;s) = t;(r;s)
    inner = _merge(structure, r, interval_r, s, interval_own)
    _, ins, _ = merge_layout(tag(r.ins, 'r.in'), tag(r.outs, 'r'), interval_r,
                             tag(s.ins, 's'), tag(s.outs, 's.out'), interval_own)
    where = find_interval(ins, [('s', k) for k in range(interval_s[0], interval_s[1] + 1)])
    return None if where is None else _merge(structure, t, interval_t, inner, where)


def _split_below(structure, t, interval_t, s, interval_s, r, interval_r, touched):
    """
    (t;s);r = t;(s;r), когда r снизу забирает выходы и t, и s

    r сначала сливается с s по выходам s, затем t присоединяется
    к результату по interval_t вместе со своими выходами, ушедшими в r.
    """
    parts = _parts(touched, interval_r)
    own = _span(index for index, _ in parts['s'])
    on_r = _span(position for _, position in parts['s'])
    fed = dict(parts['t'])
    joined = _span(list(range(interval_t[0], interval_t[1] + 1)) + list(fed))
    if None in (own, on_r, joined):
        return None
    inner = _merge(structure, s, own, r, on_r)
    _, ins, _ = merge_layout(tag(s.ins, 's'), tag(s.outs, 's.out'), own, tag(r.ins, 'r'), tag(r.outs, 'r.out'), on_r)
    wanted = [
        ('s', interval_s[0] + k - interval_t[0]) if interval_t[0] <= k <= interval_t[1] else ('r', fed[k])
        for k in range(joined[0], joined[1] + 1)
    ]
    where = find_interval(ins, wanted)
    return None if where is None else _merge(structure, t, joined, inner, where)


def _split_above(structure, t, interval_t, s, interval_s, r, interval_r, touched):
    """
    r;(t;s) = (r;t);s, когда r сверху питает входы и t, и s

    r сначала сливается с t по входам t, затем s присоединяется
    к результату по interval_s вместе со своими входами из r.
    """
    parts = _parts(touched, interval_r)
    own = _span(index for index, _ in parts['t'])
    on_r = _span(position for _, position in parts['t'])
    fed = dict(parts['s'])
    joined = _span(list(range(interval_s[0], interval_s[1] + 1)) + list(fed))
    if None in (own, on_r, joined):
        return None
    inner = _merge(structure, r, on_r, t, own)
    _, _, outs = merge_layout(tag(r.ins, 'r.in'), tag(r.outs, 'r'), on_r, tag(t.ins, 't.in'), tag(t.outs, 't'), own)
    wanted = [
        ('t', interval_t[0] + k - interval_s[0]) if interval_s[0] <= k <= interval_s[1] else ('r', fed[k])
        for k in range(joined[0], joined[1] + 1)
    ]
    where = find_interval(outs, wanted)
    return None if where is None else _merge(structure, inner, where, s, joined)


def _check_schemes(structure, budget, report):
    cells = structure.all_cells(budget)
    below = _by_inputs(cells)
    for t in cells:
        candidates = {id(s): s for a in set(t.outs) for s in below.get(a, [])}
        for s in candidates.values():
            for interval_t, interval_s in merge_intervals(structure, t, s):
                try:
                    u = _merge(structure, t, interval_t, s, interval_s)
                except ConstructionError:
                    report.count('undefined')
                    continue
                if not structure.within(u, budget):
                    continue
                _, u_ins, u_outs = merge_layout(tag(t.ins, 't.in'), tag(t.outs, 't.out'), interval_t,
                                                tag(s.ins, 's.in'), tag(s.outs, 's.out'), interval_s)
                for r in cells:
                    for above in (False, True):
                        _triple(structure, report, t, interval_t, s, interval_s, u, (u_ins, u_outs), r, above)


def check_merge_axioms(structure, budget=None):
    """
    Проверяет аксиомы композиции в пределах бюджета

    Returns:
        Report: Пустой список находок, если аксиомы выполнены
    """
    budget = budget or axiom_budget(structure)
    report = Report(f'axioms {structure.name}', budget)
    if isinstance(structure, ThinStructure):
        _check_thin(structure, budget, report)
    else:
        _check_schemes(structure, budget, report)
    logger.info(
        f'{structure.name}: аксиомы при бюджете {budget}, '
        f'{len(report.findings)} нарушений, счетчики {dict(sorted(report.meta.items()))}'
    )
    return report


def check_cut_axioms(structure, budget=None):
    """Аксиомы поли-бикатегории: те же проверки только для cut"""
    if not isinstance(structure, ThinStructure):
        structure = underlying_polybicat(structure)
    return check_merge_axioms(structure, budget)
