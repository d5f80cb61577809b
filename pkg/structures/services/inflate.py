"""
Сервис монады раздувания I

Отвечает за:
- Merge-бикатегорию I(X): свободно добавленные 1-клетки ε_x
  и 2-клетки в нормальной форме (декорированная граница + ряд)
- Слияние нормальных форм со сборкой связных компонент в X
- Отображения монады η, μ и функториальность I(f)
- Алгебру α: I(X) -> X по когерентным свидетелям единичности
"""

import logging
from dataclasses import dataclass

from structures.exceptions import ConstructionError, IllegalMerge, NotDivisible
from structures.services.certificates import Report
from structures.services.morphisms import Morphism
from structures.services.polybicat import BaseStructure, Cell
from structures.services.units import invert2
from structures.utils import find_interval, merge_layout, seq_label, tag

logger = logging.getLogger(__name__)

ITEM_CELL = 'cell'
ITEM_WIRE = 'wire'


@dataclass(frozen=True)
class Eps:
    """Свободно добавленная 1-клетка ε_x; depth - уровень вложенности I"""

    x: object
    depth: int = 1

    def __str__(self):
        return f'ε{self.x}' if self.depth == 1 else f'ε{self.depth}{self.x}'


@dataclass(frozen=True)
class _Piece:
    core: tuple
    in_tags: tuple
    out_tags: tuple


class InflateStructure(BaseStructure):
    """
    I(X)

    2-клетка - декорированная граница и ряд элементов ('cell', p)
    или ('wire', a) в X; конкатенация входов ряда равна входам
    без ε, и так же для выходов. Ряд из одних проводов - формальная единица.
    """

    def __init__(self, base, budget=None, name=None):
        super().__init__(name or f'I({base.name})', budget or base.budget)
        self.base = base
        self.inflate_depth = getattr(base, 'inflate_depth', 0) + 1
        self.allows_intervals = base.allows_intervals
        self.one_object = base.one_object
        self._eps = tuple(Eps(x, self.inflate_depth) for x in base.zero_cells())

    def is_eps(self, a):
        return isinstance(a, Eps) and a.depth == self.inflate_depth

    def eps(self, x):
        return Eps(x, self.inflate_depth)

    def collapse(self, seq):
        return tuple(a for a in seq if not self.is_eps(a))

    def zero_cells(self):
        return self.base.zero_cells()

    def one_cells(self):
        return tuple(self.base.one_cells()) + self._eps

    def src(self, a):
        return a.x if self.is_eps(a) else self.base.src(a)

    def tgt(self, a):
        return a.x if self.is_eps(a) else self.base.tgt(a)

    def weight(self, a):
        return 1 if self.is_eps(a) else self.base.weight(a)

    def label(self, item):
        return str(item) if self.is_eps(item) else self.base.label(item)

    def hom(self, ins, outs):
        ins, outs = tuple(ins), tuple(outs)
        if not ins or not outs or not (self.composable(ins) and self.composable(outs)):
            return []
        if self.src(ins[0]) != self.src(outs[0]) or self.tgt(ins[-1]) != self.tgt(outs[-1]):
            return []
        return [Cell(ins, outs, row) for row in self._rows(self.collapse(ins), self.collapse(outs))]

    def _rows(self, ins, outs):
        if not ins and not outs:
            yield ()
            return
        if not ins or not outs:
            return
        X = self.base
        if ins[0] == outs[0]:
            for rest in self._rows(ins[1:], outs[1:]):
                yield ((ITEM_WIRE, ins[0]),) + rest
        for k in range(1, len(ins) + 1):
            for m in range(1, len(outs) + 1):
                if X.tgt(ins[k - 1]) != X.tgt(outs[m - 1]):
                    continue
                for p in X.hom(ins[:k], outs[:m]):
                    for rest in self._rows(ins[k:], outs[m:]):
                        yield ((ITEM_CELL, p),) + rest

    def _pieces(self, cell, in_tags, out_tags, rename=None):
        rename = rename or {}
        real_in = [rename.get(t, t) for t, a in zip(in_tags, cell.ins) if not self.is_eps(a)]
        real_out = [t for t, a in zip(out_tags, cell.outs) if not self.is_eps(a)]
        pieces = []
        for kind, value in cell.core:
            if kind == ITEM_WIRE:
                n, m = 1, 1
            else:
                n, m = len(value.ins), len(value.outs)
            pieces.append(_Piece((kind, value), tuple(real_in[:n]), tuple(real_out[:m])))
            real_in, real_out = real_in[n:], real_out[m:]
        return pieces

    def _compose(self, t, interval_t, s, interval_s, case, ins, outs):
        ti, to, si, so = tag(t.ins, 'ti'), tag(t.outs, 'to'), tag(s.ins, 'si'), tag(s.outs, 'so')
        _, result_in, result_out = merge_layout(ti, to, interval_t, si, so, interval_s)
        length = interval_t[1] - interval_t[0] + 1
        shared = {si[interval_s[0] - 1 + k]: to[interval_t[0] - 1 + k] for k in range(length)}
        real = {tg for tg, a in zip(ti + to + si + so, t.ins + t.outs + s.ins + s.outs) if not self.is_eps(a)}
        upper = self._pieces(t, ti, to)
        lower = self._pieces(s, si, so, shared)
        pieces = upper + lower
        parent = list(range(len(pieces)))

        def find(k):
            while parent[k] != k:
                parent[k] = parent[parent[k]]
                k = parent[k]
            return k

        for u, piece in enumerate(upper):
            for w, other in enumerate(lower, start=len(upper)):
                if set(piece.out_tags) & set(other.in_tags):
                    parent[find(u)] = find(w)
        groups = {}
        for k, piece in enumerate(pieces):
            groups.setdefault(find(k), []).append(piece)
        combined = [group[0] if len(group) == 1 else self._combine(group) for group in groups.values()]
        position = {tg: k for k, tg in enumerate(result_in)}
        combined.sort(key=lambda piece: position[piece.in_tags[0]])
        flat_in = tuple(tg for piece in combined for tg in piece.in_tags)
        flat_out = tuple(tg for piece in combined for tg in piece.out_tags)
        if flat_in != tuple(tg for tg in result_in if tg in real) or \
                flat_out != tuple(tg for tg in result_out if tg in real):
            raise IllegalMerge(f'{self.name}: ряд результата не согласован с границей')
        return Cell(ins, outs, tuple(piece.core for piece in combined))

    def _combine(self, group):
        current, remaining = group[0], list(group[1:])
        while remaining:
            for piece in remaining:
                joined = self._join(current, piece)
                if joined is not None:
                    current = joined
                    remaining.remove(piece)
                    break
            else:
                raise IllegalMerge(f'{self.name}: компонента диаграммы не собирается в X')
        return current

    def _join(self, a, b):
        down = [tg for tg in a.out_tags if tg in b.in_tags]
        up = [tg for tg in b.out_tags if tg in a.in_tags]
        if down and up:
            raise IllegalMerge(f'{self.name}: цикл в диаграмме')
        if not down and not up:
            return None
        upper, lower, shared = (a, b, down) if down else (b, a, up)
        interval_u = find_interval(upper.out_tags, shared)
        interval_l = find_interval(lower.in_tags, shared)
        if interval_u is None or interval_l is None:
            return None
        if upper.core[0] == ITEM_WIRE:
            k = interval_l[0] - 1
            return _Piece(lower.core, lower.in_tags[:k] + upper.in_tags + lower.in_tags[k + 1:], lower.out_tags)
        if lower.core[0] == ITEM_WIRE:
            k = interval_u[0] - 1
            return _Piece(upper.core, upper.in_tags, upper.out_tags[:k] + lower.out_tags + upper.out_tags[k + 1:])
        try:
            _, new_in, new_out = merge_layout(upper.in_tags, upper.out_tags, interval_u,
                                              lower.in_tags, lower.out_tags, interval_l)
            cell = self.base.merge(upper.core[1], interval_u, lower.core[1], interval_l, strict=False)
        except IllegalMerge:
            return None
        return _Piece((ITEM_CELL, cell), new_in, new_out)

    def unit_on(self, seq):
        seq = tuple(seq)
        return Cell(seq, seq, tuple((ITEM_WIRE, a) for a in self.collapse(seq)))

    def chosen_tensor(self, seq):
        return None

    def item_label(self, item):
        kind, value = item
        return f'id:{self.base.label(value)}' if kind == ITEM_WIRE else self.base.cell_label(value)

    def cell_label(self, cell):
        return f'{seq_label(cell.ins)}->{seq_label(cell.outs)}[{"|".join(map(self.item_label, cell.core))}]'


def inflate(X, budget=None):
    """Строит I(X)"""
    return InflateStructure(X, budget)


def collapse_normal_form(structure, first, steps):
    """
    Нормальная форма композиционной диаграммы

    Args:
        first: Начальная клетка
        steps: Последовательность (клетка, 'above' | 'below', интервал на текущей,
               интервал на клетке); 'below' означает, что клетка стоит ниже текущей

    Returns:
        Cell: Клетка I(X) в нормальной форме
    """
    current = first
    for other, place, interval_current, interval_other in steps:
        if place == 'below':
            current = structure.merge(current, interval_current, other, interval_other, strict=False)
        else:
            current = structure.merge(other, interval_other, current, interval_current, strict=False)
    return current


def eta_inflate(X, IX):
    """η_X: X -> I(X), p ↦ ряд из одной клетки p"""
    return Morphism(
        X, IX,
        {x: x for x in X.zero_cells()},
        {a: a for a in X.one_cells()},
        lambda p: Cell(p.ins, p.outs, ((ITEM_CELL, p),)),
        name=f'eta_I({X.name})',
    )


def inflate_map(f, IX, IY):
    """I(f): I(X) -> I(Y)"""

    def one(a):
        return IY.eps(f.zero(a.x)) if IX.is_eps(a) else f.one(a)

    def cell(p):
        row = tuple(
            (kind, f.one(value) if kind == ITEM_WIRE else f.cell(value)) for kind, value in p.core
        )
        return Cell(tuple(map(one, p.ins)), tuple(map(one, p.outs)), row)

    return Morphism(
        IX, IY,
        {x: f.zero(x) for x in IX.zero_cells()},
        {a: one(a) for a in IX.one_cells()},
        cell,
        name=f'I({f.name})',
    )


def mu_inflate(IIX, IX):
    """μ_X: I(I(X)) -> I(X): ряды уплощаются, провода ε_x внутреннего уровня выбрасываются"""

    def one(a):
        return IX.eps(a.x) if IIX.is_eps(a) else a

    def cell(p):
        row = []
        for kind, value in p.core:
            if kind == ITEM_CELL:
                row.extend(value.core)
            elif not IX.is_eps(value):
                row.append((ITEM_WIRE, value))
        return Cell(tuple(map(one, p.ins)), tuple(map(one, p.outs)), tuple(row))

    return Morphism(
        IIX, IX,
        {x: x for x in IIX.zero_cells()},
        {a: one(a) for a in IIX.one_cells()},
        cell,
        name=f'mu_I({IX.base.name})',
    )


class InflateAlgebra:
    """
    Алгебра α: I(X) -> X

    ε_x ↦ 1_x, p ↦ W_in ; V ; W_out⁻¹, где W - композиты свидетелей l, r,
    убирающие образы ε, а V - горизонтальная склейка ряда через 1_y.
    """

    def __init__(self, X, IX, family):
        self.X, self.IX, self.family = X, IX, family

    def one(self, a):
        return self.family.unit1[a.x] if self.IX.is_eps(a) else a

    def _unit(self, seq):
        unit = self.X.unit_on(seq)
        if unit is None:
            raise ConstructionError(f'{self.X.name}: нет единицы на {seq_label(seq)}')
        return unit

    def reduce(self, seq):
        """Композит (α seq) -> (seq без ε) или (1_x), если seq из одних ε"""
        X, IX, family = self.X, self.IX, self.family
        current = tuple(map(self.one, seq))
        marks = [IX.is_eps(a) for a in seq]
        cell = self._unit(current)
        while any(marks) and len(current) > 1:
            k = marks.index(True)
            if k + 1 < len(current):
                witness = family.left[current[k + 1]]
                cell = X.merge(cell, (k + 1, k + 2), witness, (1, 2), strict=False)
            else:
                witness = family.right[current[k - 1]]
                cell = X.merge(cell, (k, k + 1), witness, (1, 2), strict=False)
            current = current[:k] + current[k + 1:]
            marks = marks[:k] + marks[k + 1:]
        return cell

    def juxtapose(self, first, second):
        """Склейка first и second через 1_y: r⁻¹, затем l, затем second"""
        X, family = self.X, self.family
        m = len(first.outs)
        step = X.merge(first, (m, m), invert2(X, family.right[first.outs[-1]]), (1, 1), strict=False)
        step = X.merge(step, (m + 1, m + 1), family.left[second.ins[0]], (1, 1), strict=False)
        return X.merge(step, (m + 1, m + 1), second, (1, 1), strict=False)

    def row_cell(self, row, reduced):
        if not row:
            return self._unit(reduced)
        items = [self._unit((value,)) if kind == ITEM_WIRE else value for kind, value in row]
        result = items[0]
        for item in items[1:]:
            result = self.juxtapose(result, item)
        return result

    def cell(self, p):
        X = self.X
        try:
            w_in, w_out = self.reduce(p.ins), self.reduce(p.outs)
            middle = self.row_cell(p.core, w_in.outs)
            result = X.merge(w_in, (1, len(w_in.outs)), middle, (1, len(middle.ins)), strict=False)
            back = invert2(X, w_out)
            return X.merge(result, (1, len(result.outs)), back, (1, len(back.ins)), strict=False)
        except (IllegalMerge, NotDivisible, KeyError) as exc:
            logger.error(f'{X.name}: α не определена на {self.IX.cell_label(p)}: {exc}')
            raise ConstructionError(f'α не определена на {self.IX.cell_label(p)}: {exc}') from exc

    def morphism(self):
        return Morphism(
            self.IX, self.X,
            {x: x for x in self.IX.zero_cells()},
            {a: self.one(a) for a in self.IX.one_cells()},
            self.cell,
            name=f'alpha({self.X.name})',
        )


def i_algebra_from_choices(X, family, IX=None):
    """
    α: I(X) -> X по выбранным единицам и когерентным свидетелям

    Raises:
        ConstructionError: Если свидетели не когерентны
    """
    if not family.coherent:
        raise ConstructionError(f'{X.name}: α требует когерентных свидетелей')
    return InflateAlgebra(X, IX or inflate(X), family).morphism()


def sample(cells, size):
    """Детерминированная выборка: каждый k-й элемент; size=0 - все"""
    cells = list(cells)
    if not size or size >= len(cells):
        return cells
    step = len(cells) / size
    return [cells[int(k * step)] for k in range(size)]


def check_i_algebra(alpha, budget=None, sample_size=0):
    """
    Законы алгебры на выборке: α∘η = id и α∘I(α) = α∘μ

    Returns:
        Report
    """
    IX, X = alpha.source, alpha.target
    budget = budget or X.budget
    report = Report(f'i-algebra {X.name}', budget)
    eta = eta_inflate(X, IX)
    checked = sample(X.all_cells(budget), sample_size)
    for p in checked:
        if alpha.cell(eta.cell(p)) != p:
            report.add('algebra_unit', X.cell_label(p))
    report.meta['algebra_unit.coverage'] = len(checked)
    IIX = inflate(IX, budget)
    mu = mu_inflate(IIX, IX)
    lifted = inflate_map(alpha, IIX, IX)
    checked = sample(IIX.all_cells(budget), sample_size)
    for p in checked:
        try:
            left = alpha.cell(lifted.cell(p))
            right = alpha.cell(mu.cell(p))
        except ConstructionError as exc:
            report.add('partial', IIX.cell_label(p), scheme='algebra_mult', reason=exc)
            continue
        if left != right:
            report.add('algebra_mult', IIX.cell_label(p))
    report.meta['algebra_mult.coverage'] = len(checked)
    logger.info(f'{X.name}: законы I-алгебры, {len(report.findings)} нарушений')
    return report
