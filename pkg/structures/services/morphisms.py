"""
Сервис морфизмов структур

Отвечает за:
- Представление морфизма конечными отображениями клеток
- Проверку корректности (границы, сохранение композиций)
- Классификацию: единичность, сохранение делимых клеток,
  тензорная и пар-строгость, сохранение homs
"""

import logging

from structures.constants import KIND_LHOM, KIND_PAR, KIND_RHOM, KIND_TENSOR, SIDE_INPUT, SIDE_OUTPUT
from structures.exceptions import BudgetExceeded, ConstructionError, IllegalMerge
from structures.services.axioms import merge_intervals
from structures.services.certificates import Certificate, Report
from structures.services.coherence import find_tensor_units
from structures.services.divisibility import is_divisible_at
from structures.services.representability import representations
from structures.services.units import is_tensor_unit1

logger = logging.getLogger(__name__)


class Morphism:
    """
    Морфизм source -> target

    Attributes:
        map0: 0-клетка -> 0-клетка
        map1: 1-клетка -> 1-клетка
        map2: dict клетка -> клетка, функция или None для тонкой цели
              (образ - единственная клетка с отображенной границей)
    """

    def __init__(self, source, target, map0, map1, map2=None, name=None):
        self.source = source
        self.target = target
        self.map0 = dict(map0)
        self.map1 = dict(map1)
        self.map2 = map2
        self.name = name or f'{source.name}->{target.name}'

    def zero(self, x):
        return self.map0[x]

    def one(self, a):
        return self.map1[a]

    def seq(self, seq):
        return tuple(self.map1[a] for a in seq)

    def cell(self, p):
        """Образ 2-клетки или None, если он не определен"""
        if p is None:
            return None
        if self.map2 is None:
            found = self.target.hom(self.seq(p.ins), self.seq(p.outs))
            return found[0] if found else None
        if callable(self.map2):
            return self.map2(p)
        return self.map2.get(p)

    def key(self):
        """Хешируемый ключ для сравнения морфизмов из перечислений"""
        cells = ()
        if isinstance(self.map2, dict):
            cells = tuple(sorted(
                ((self.source.cell_label(p), self.target.cell_label(q)) for p, q in self.map2.items()),
            ))
        return (
            tuple(sorted((str(x), str(y)) for x, y in self.map0.items())),
            tuple(sorted((self.source.label(a), self.target.label(b)) for a, b in self.map1.items())),
            cells,
        )

    def __eq__(self, other):
        return isinstance(other, Morphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        ones = ','.join(f'{a}:{b}' for a, b in self.key()[1])
        return f'{self.name}[{ones}]'


def identity_morphism(structure):
    return Morphism(
        structure, structure,
        {x: x for x in structure.zero_cells()},
        {a: a for a in structure.one_cells()},
        lambda cell: cell,
        name=f'id({structure.name})',
    )


def compose_morphisms(f, g):
    """Композиция f;g: сначала f, затем g"""
    return Morphism(
        f.source, g.target,
        {x: g.zero(f.zero(x)) for x in f.map0},
        {a: g.one(f.one(a)) for a in f.map1},
        lambda cell: g.cell(f.cell(cell)),
        name=f'{f.name};{g.name}',
    )


def _invalid(f, budget, fields):
    return Certificate.failed('valid', f.name, budget, fields)


def validate_morphism(f, budget=None):
    """
    Проверяет границы и сохранение всех слияний в пределах бюджета

    Returns:
        Certificate
    """
    X, Y = f.source, f.target
    budget = budget or X.budget
    for a in X.one_cells():
        if a not in f.map1:
            return _invalid(f, budget, {'one_cell': X.label(a), 'reason': 'missing'})
        b = f.one(a)
        if Y.src(b) != f.map0.get(X.src(a)) or Y.tgt(b) != f.map0.get(X.tgt(a)):
            return _invalid(f, budget, {'one_cell': X.label(a), 'reason': 'boundary'})
    cells = X.all_cells(budget)
    for p in cells:
        q = f.cell(p)
        if q is None or q.ins != f.seq(p.ins) or q.outs != f.seq(p.outs):
            return _invalid(f, budget, {'cell': X.cell_label(p), 'reason': 'boundary'})
    checked = 0
    for t in cells:
        for s in cells:
            for interval_t, interval_s in merge_intervals(X, t, s):
                try:
                    merged = X.merge(t, interval_t, s, interval_s)
                except (BudgetExceeded, ConstructionError):
                    continue
                checked += 1
                try:
                    image = Y.merge(f.cell(t), interval_t, f.cell(s), interval_s, strict=False)
                except (IllegalMerge, ConstructionError):
                    image = None
                if image != f.cell(merged):
                    return _invalid(f, budget, {
                        'upper': X.cell_label(t), 'lower': X.cell_label(s),
                        'at': f'{interval_t[0]},{interval_t[1]}/{interval_s[0]},{interval_s[1]}',
                        'reason': 'composition',
                    })
    logger.debug(f'{f.name}: проверено {checked} композиций')
    return Certificate.passed('valid', f.name, budget, {'compositions': checked})


def _unital(f, budget):
    X, Y = f.source, f.target
    witnesses = {}
    for a in sorted(X.one_cells(), key=X.label):
        unit = X.unit_on((a,))
        if unit is None:
            continue
        if f.cell(unit) != Y.unit_on((f.one(a),)):
            return Certificate.failed('unital', f.name, budget, {'one_cell': X.label(a)}, witnesses)
        witnesses[X.label(a)] = Y.cell_label(f.cell(unit))
    return Certificate.passed('unital', f.name, budget, witnesses)


def _positions(cell):
    return [(SIDE_INPUT, k) for k in range(1, len(cell.ins) + 1)]


def _preserves_divisible(f, budget):
    X, Y = f.source, f.target
    witnesses = {}
    for p in X.all_cells(budget):
        for side, pos in _positions(p):
            if not is_divisible_at(X, p, side, pos, budget).holds:
                continue
            instance = f'{X.cell_label(p)}@{side}{pos}'
            if not is_divisible_at(Y, f.cell(p), side, pos, budget).holds:
                return Certificate.failed('preserves_divisible', f.name, budget,
                                          {'cell': X.cell_label(p), 'side': side, 'pos': pos}, witnesses)
            witnesses[instance] = Y.cell_label(f.cell(p))
    return Certificate.passed('preserves_divisible', f.name, budget, witnesses)


# вид -> (свойство, сторона, позиция)
_STRONG = {
    KIND_TENSOR: ('tensor_strong', SIDE_OUTPUT, 1),
    KIND_PAR: ('par_strong', SIDE_INPUT, 1),
    KIND_RHOM: ('right_closed', SIDE_INPUT, 2),
    KIND_LHOM: ('left_closed', SIDE_INPUT, 1),
}


def _preserves_kind(f, kind, budget):
    X, Y = f.source, f.target
    prop, side, pos = _STRONG[kind]
    table = representations(X, kind, budget, partial=True)
    witnesses = {}
    for (a, b), (c, cell) in sorted(table.data['table'].items(), key=lambda item: (X.label(item[0][0]),
                                                                                 X.label(item[0][1]))):
        pair = f'{X.label(a)},{X.label(b)}'
        image = f.cell(cell)
        if image is None or not is_divisible_at(Y, image, side, pos, budget).holds:
            return Certificate.failed(prop, f.name, budget, {
                'pair': pair,
                'image': Y.cell_label(image) if image is not None else 'undefined',
            }, witnesses)
        witnesses[pair] = Y.cell_label(image)
    return Certificate.passed(prop, f.name, budget, witnesses)


def _preserves_tensor_units(f, budget):
    X, Y = f.source, f.target
    witnesses = {}
    for x, (u, _) in sorted(find_tensor_units(X, budget).items(), key=lambda item: str(item[0])):
        if not is_tensor_unit1(Y, f.one(u), budget).holds:
            return Certificate.failed('preserves_tensor_units', f.name, budget, {'unit': X.label(u)}, witnesses)
        witnesses[X.label(u)] = Y.label(f.one(u))
    return Certificate.passed('preserves_tensor_units', f.name, budget, witnesses)


def classify_morphism(f, budget=None):
    """
    Классификация морфизма

    Returns:
        Report: Флаги valid, unital, preserves_divisible, tensor_strong,
        par_strong, right_closed, left_closed; для тензорно строгих
        морфизмов также preserves_tensor_units
    """
    budget = budget or f.source.budget.meet(f.target.budget)
    report = Report(f'morphism {f.name}', budget)
    valid = report.flag('valid', validate_morphism(f, budget))
    if not valid.holds:
        report.add('invalid_morphism', f.name, **valid.counterexample)
        return report
    report.flag('unital', _unital(f, budget))
    report.flag('preserves_divisible', _preserves_divisible(f, budget))
    for kind in (KIND_TENSOR, KIND_PAR, KIND_RHOM, KIND_LHOM):
        certificate = report.flag(_STRONG[kind][0], _preserves_kind(f, kind, budget))
        if kind == KIND_TENSOR and certificate.holds:
            report.flag('preserves_tensor_units', _preserves_tensor_units(f, budget))
    logger.info(f'{f.name}: классификация {sorted(k for k, v in report.flags.items() if v.holds)}')
    return report
