"""
Сервис поли- и merge-бикатегорий

Отвечает за:
- Представление 2-клеток и их композицию (cut / merge)
- Тонкий бэкенд (предикат на границах)
- Табличный бэкенд (клетки и таблица слияний)
- Двойственные представления op/co и забывание интервалов
- Перечисление последовательностей, границ и клеток в пределах бюджета
"""

import logging
from dataclasses import dataclass

from structures.constants import DUAL_CO, DUAL_OP
from structures.exceptions import BudgetExceeded, ConstructionError, IllegalMerge
from structures.utils import ArityBudget, merge_layout, seq_label

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cell:
    """
    2-клетка: входная и выходная границы плюс ядро бэкенда

    Для тонких структур ядро пусто: клетка определяется границей.
    """

    ins: tuple
    outs: tuple
    core: object = None

    def __str__(self):
        text = f'{seq_label(self.ins)}->{seq_label(self.outs)}'
        return text if self.core is None else f'{text}[{self.core}]'


@dataclass(frozen=True)
class Op:
    """1-клетка двойственной структуры op"""

    base: object

    def __str__(self):
        return f'{self.base}^op'


class BaseStructure:
    """
    Общий интерфейс конечной (в пределах бюджета) поли- или merge-бикатегории

    Методы:
    - merge(): Слияние по интервалам с проверкой случаев (a)-(d)
    - cut(): Композиция по одной 1-клетке
    - hom(): 2-клетки с заданной границей
    - sequences(): Композиционные последовательности 1-клеток
    - boundaries(): Допустимые границы в пределах бюджета
    - all_cells(): Все 2-клетки в пределах бюджета
    - unit_on(): Единица на последовательности
    """

    allows_intervals = True
    multi = False
    one_object = False

    def __init__(self, name, budget):
        self.name = name
        self.budget = budget
        self._unit_cache = {}

    # Реализуется бэкендом
    def zero_cells(self):
        raise NotImplementedError

    def one_cells(self):
        raise NotImplementedError

    def src(self, a):
        raise NotImplementedError

    def tgt(self, a):
        raise NotImplementedError

    def hom(self, ins, outs):
        raise NotImplementedError

    def _compose(self, t, interval_t, s, interval_s, case, ins, outs):
        raise NotImplementedError

    def weight(self, a):
        return 1

    def seq_weight(self, seq):
        return sum(self.weight(a) for a in seq)

    def beyond_cap(self, kind, a, b):
        """Истинно, если представление пары обрезано потолком фикстуры"""
        return False

    def chosen_tensor(self, seq):
        """Выбранный тензор последовательности: (1-клетка, 2-клетка) или None"""
        return None

    def label(self, item):
        return str(item)

    def composable(self, seq):
        return all(self.tgt(a) == self.src(b) for a, b in zip(seq, seq[1:]))

    def merge(self, t, interval_t, s, interval_s, strict=True):
        """
        Сливает t (сверху) и s (снизу) по интервалам выходов t и входов s

        Args:
            t, s: 2-клетки
            interval_t: (j1, j2) позиции выходов t
            interval_s: (i1, i2) позиции входов s
            strict: Проверять ли бюджет результата

        Returns:
            Cell: Результат слияния

        Raises:
            IllegalMerge: Несовместимые индексы или границы
            BudgetExceeded: Результат вне бюджета (только при strict)
        """
        j1, j2 = interval_t
        i1, i2 = interval_s
        if not self.allows_intervals and (j1 != j2 or i1 != i2):
            raise IllegalMerge(f'{self.name}: слияние по интервалу длины > 1 недоступно')
        if not (1 <= j1 <= j2 <= len(t.outs)) or not (1 <= i1 <= i2 <= len(s.ins)):
            raise IllegalMerge(f'{self.name}: интервалы [{j1},{j2}]/[{i1},{i2}] вне границ')
        if t.outs[j1 - 1:j2] != s.ins[i1 - 1:i2]:
            raise IllegalMerge(
                f'{self.name}: границы не совпадают {seq_label(t.outs[j1 - 1:j2])} '
                f'и {seq_label(s.ins[i1 - 1:i2])}'
            )
        case, ins, outs = merge_layout(t.ins, t.outs, interval_t, s.ins, s.outs, interval_s)
        if strict and not self.budget.admits(self.seq_weight(ins), self.seq_weight(outs)):
            raise BudgetExceeded(f'{self.name}: {seq_label(ins)}->{seq_label(outs)} вне бюджета {self.budget}')
        return self._compose(t, interval_t, s, interval_s, case, ins, outs)

    def cut(self, t, j, s, i, strict=True):
        return self.merge(t, (j, j), s, (i, i), strict=strict)

    def sequences(self, x=None, y=None, max_weight=None):
        """
        Композиционные последовательности от x до y

        Порядок: по длине, затем лексикографически по меткам.
        """
        max_weight = max_weight or self.budget.max_seq_len
        return [
            seq for seq in self._all_sequences(max_weight)
            if (x is None or self.src(seq[0]) == x) and (y is None or self.tgt(seq[-1]) == y)
        ]

    def _all_sequences(self, max_weight):
        cached = getattr(self, '_sequence_cache', None)
        if cached is None:
            cached = self._sequence_cache = {}
        if max_weight not in cached:
            ones = sorted(self.one_cells(), key=self.label)
            found = []
            frontier = [(a,) for a in ones if self.weight(a) <= max_weight]
            while frontier:
                found.extend(frontier)
                frontier = [
                    seq + (a,)
                    for seq in frontier
                    for a in ones
                    if self.tgt(seq[-1]) == self.src(a) and self.seq_weight(seq) + self.weight(a) <= max_weight
                ]
            found.sort(key=lambda seq: (len(seq), tuple(self.label(a) for a in seq)))
            cached[max_weight] = found
        return cached[max_weight]

    def boundaries(self, budget=None):
        """Пары (входы, выходы) с совпадающими концами в пределах бюджета"""
        budget = budget or self.budget
        ins_list = self._all_sequences(budget.max_in)
        outs_list = self._all_sequences(budget.max_out)
        if self.multi:
            outs_list = [seq for seq in outs_list if len(seq) == 1]
        return [
            (ins, outs)
            for ins in ins_list
            for outs in outs_list
            if self.src(ins[0]) == self.src(outs[0]) and self.tgt(ins[-1]) == self.tgt(outs[-1])
        ]

    def all_cells(self, budget=None):
        return [cell for ins, outs in self.boundaries(budget) for cell in self.hom(ins, outs)]

    def within(self, cell, budget=None):
        budget = budget or self.budget
        return budget.admits(self.seq_weight(cell.ins), self.seq_weight(cell.outs))

    def unit_on(self, seq):
        """
        Единица на последовательности: клетка (Γ)->(Γ), нейтральная
        для слияний по всей границе

        Returns:
            Cell | None: Первая подходящая клетка или None
        """
        seq = tuple(seq)
        if seq not in self._unit_cache:
            self._unit_cache[seq] = self._search_unit(seq)
        return self._unit_cache[seq]

    def _search_unit(self, seq):
        for candidate in self.hom(seq, seq):
            if all(result == other for other, _, _, result in self.unit_instances(candidate)):
                return candidate
        return None

    def unit_instances(self, p, budget=None):
        """
        Слияния, в которых p участвует всей своей границей

        Yields:
            tuple: (другая клетка, сторона, интервал на ней, результат или None)
        """
        n = len(p.ins)
        for other in self.all_cells(budget):
            for j in range(1, len(other.outs) - n + 2):
                if other.outs[j - 1:j - 1 + n] == p.ins:
                    yield other, 'above', (j, j + n - 1), self._try_merge(other, (j, j + n - 1), p, (1, n))
            for i in range(1, len(other.ins) - n + 2):
                if other.ins[i - 1:i - 1 + n] == p.outs:
                    yield other, 'below', (i, i + n - 1), self._try_merge(p, (1, n), other, (i, i + n - 1))

    def _try_merge(self, t, interval_t, s, interval_s):
        try:
            return self.merge(t, interval_t, s, interval_s, strict=False)
        except (IllegalMerge, ConstructionError):
            return None

    def cell_label(self, cell):
        return str(cell)

    def __repr__(self):
        return f'<{type(self).__name__} {self.name} budget={self.budget}>'


class ThinStructure(BaseStructure):
    """
    Тонкая структура: не более одной 2-клетки на границу,
    существование задается предикатом на (входы, выходы)
    """

    def __init__(self, name, zero_cells, one_cells, predicate, budget,
                 allows_intervals=True, multi=False, one_object=None):
        super().__init__(name, budget)
        self._zero = tuple(zero_cells)
        self._one = dict(one_cells)
        self.predicate = predicate
        self.allows_intervals = allows_intervals
        self.multi = multi
        self.one_object = len(self._zero) == 1 if one_object is None else one_object

    def zero_cells(self):
        return self._zero

    def one_cells(self):
        return tuple(sorted(self._one, key=self.label))

    def src(self, a):
        return self._one[a][0]

    def tgt(self, a):
        return self._one[a][1]

    def holds(self, ins, outs):
        if not ins or not outs or (self.multi and len(outs) != 1):
            return False
        return bool(self.predicate(tuple(ins), tuple(outs)))

    def hom(self, ins, outs):
        ins, outs = tuple(ins), tuple(outs)
        return [Cell(ins, outs)] if self.holds(ins, outs) else []

    def _compose(self, t, interval_t, s, interval_s, case, ins, outs):
        return Cell(ins, outs)

    def unit_on(self, seq):
        seq = tuple(seq)
        return Cell(seq, seq) if self.holds(seq, seq) else None


class TabularStructure(BaseStructure):
    """
    Табличная структура: явные клетки и таблица слияний

    Таблица может дополняться лениво из исходной структуры source;
    явные записи имеют приоритет над вычисленными.

    Методы:
    - from_structure(): Материализация любой конечной структуры
    - with_entry(): Копия с подмененной записью таблицы
    - drop_cells(): Копия без клеток, отобранных предикатом
    """

    def __init__(self, name, zero_cells, one_cells, cells, table, budget,
                 allows_intervals=True, multi=False, units=None, source=None,
                 source_ones=None, source_cells=None):
        super().__init__(name, budget)
        self._zero = tuple(zero_cells)
        self._one = dict(one_cells)
        self.cells = dict(cells)
        self.table = dict(table)
        self.units = dict(units or {})
        self.allows_intervals = allows_intervals
        self.multi = multi
        self.one_object = len(self._zero) == 1
        self.source = source
        self.source_ones = dict(source_ones or {})
        self.source_cells = dict(source_cells or {})
        self._source_index = {cell: cid for cid, cell in self.source_cells.items()}
        self._by_boundary = {}
        for cid in sorted(self.cells):
            self._by_boundary.setdefault(self.cells[cid], []).append(cid)

    @classmethod
    def from_structure(cls, structure, budget=None, name=None):
        """
        Материализует структуру в таблицу

        Args:
            structure: Исходная структура
            budget: Бюджет материализации (по умолчанию бюджет структуры)
            name: Имя результата

        Returns:
            TabularStructure: Клетки перечислены сразу, таблица заполняется лениво
        """
        budget = budget or structure.budget
        ones = {structure.label(a): a for a in structure.one_cells()}
        one_cells = {label: (str(structure.src(a)), str(structure.tgt(a))) for label, a in ones.items()}
        cells, source_cells = {}, {}
        for cell in structure.all_cells(budget):
            cid = structure.cell_label(cell)
            cells[cid] = (tuple(structure.label(a) for a in cell.ins), tuple(structure.label(a) for a in cell.outs))
            source_cells[cid] = cell
        logger.info(f'Материализовано {len(cells)} клеток структуры {structure.name} при бюджете {budget}')
        return cls(
            name or f'tab({structure.name})',
            [str(x) for x in structure.zero_cells()],
            one_cells,
            cells,
            {},
            budget,
            allows_intervals=structure.allows_intervals,
            multi=structure.multi,
            source=structure,
            source_ones=ones,
            source_cells=source_cells,
        )

    def _copy(self, **changes):
        params = dict(
            name=self.name, zero_cells=self._zero, one_cells=self._one, cells=self.cells,
            table=self.table, budget=self.budget, allows_intervals=self.allows_intervals,
            multi=self.multi, units=self.units, source=self.source,
            source_ones=self.source_ones, source_cells=self.source_cells,
        )
        params.update(changes)
        return TabularStructure(**params)

    def with_entry(self, key, cell_id):
        """Копия с записью таблицы key=(t, (j1,j2), s, (i1,i2)) -> cell_id"""
        table = dict(self.table)
        table[key] = cell_id
        return self._copy(table=table, name=f'{self.name}*')

    def overlay(self, name=None, cells=None, table=None, units=None):
        """Копия с явными клетками, записями таблицы и единицами поверх текущих"""
        merged_cells = dict(self.cells)
        merged_cells.update(cells or {})
        merged_table = dict(self.table)
        merged_table.update(table or {})
        merged_units = dict(self.units)
        merged_units.update(units or {})
        return self._copy(name=name or self.name, cells=merged_cells, table=merged_table, units=merged_units)

    def drop_cells(self, predicate):
        """Копия без клеток, для которых predicate(cell) истинен"""
        kept = {cid: bdry for cid, bdry in self.cells.items() if not predicate(Cell(bdry[0], bdry[1], cid))}
        return self._copy(cells=kept, name=f'{self.name}-')

    def zero_cells(self):
        return self._zero

    def one_cells(self):
        return tuple(sorted(self._one))

    def src(self, a):
        return self._one[a][0]

    def tgt(self, a):
        return self._one[a][1]

    def hom(self, ins, outs):
        """
        Клетки с заданной границей

        Вне бюджета материализации недостающие клетки берутся из
        исходной структуры, как и результаты слияний.
        """
        key = (tuple(ins), tuple(outs))
        found = [Cell(key[0], key[1], cid) for cid in self._by_boundary.get(key, [])]
        if self.source is None or not key[0] or not key[1]:
            return found
        if self.budget.admits(self.seq_weight(key[0]), self.seq_weight(key[1])):
            return found
        known = {cell.core for cell in found}
        for cid in self._source_hom(*key):
            if cid not in known:
                found.append(Cell(key[0], key[1], cid))
        return found

    def _source_hom(self, ins, outs):
        try:
            raw_ins = tuple(self.source_ones[a] for a in ins)
            raw_outs = tuple(self.source_ones[a] for a in outs)
        except KeyError:
            return []
        return [self._adopt(raw) for raw in self.source.hom(raw_ins, raw_outs)]

    def _from_source(self, cid):
        if cid not in self.source_cells:
            raise ConstructionError(f'{self.name}: клетка {cid} не связана с исходной структурой')
        return self.source_cells[cid]

    def _adopt(self, source_cell):
        """Возвращает id клетки исходной структуры, добавляя её при необходимости"""
        if source_cell not in self._source_index:
            cid = self.source.cell_label(source_cell)
            self.source_cells[cid] = source_cell
            self._source_index[source_cell] = cid
        return self._source_index[source_cell]

    def _cell(self, cid):
        if cid in self.cells:
            ins, outs = self.cells[cid]
        elif cid in self.source_cells:
            raw = self.source_cells[cid]
            ins = tuple(self.source.label(a) for a in raw.ins)
            outs = tuple(self.source.label(a) for a in raw.outs)
        else:
            raise ConstructionError(f'{self.name}: неизвестная клетка {cid}')
        return Cell(ins, outs, cid)

    def _compose(self, t, interval_t, s, interval_s, case, ins, outs):
        key = (t.core, tuple(interval_t), s.core, tuple(interval_s))
        if key in self.table:
            cid = self.table[key]
        elif self.source is not None:
            raw = self.source.merge(self._from_source(t.core), interval_t, self._from_source(s.core), interval_s,
                                    strict=False)
            cid = self._adopt(raw)
            self.table[key] = cid
        else:
            raise ConstructionError(f'{self.name}: нет записи таблицы для {key}')
        cell = self._cell(cid)
        if cell.ins != ins or cell.outs != outs:
            raise ConstructionError(f'{self.name}: запись {key} -> {cid} нарушает формулы границ')
        if cid not in self.cells and self.within(cell):
            # клетка в бюджете, но удалена из перечня
            raise ConstructionError(f'{self.name}: клетка {cid} отсутствует')
        return cell

    def unit_on(self, seq):
        seq = tuple(seq)
        if seq in self.units:
            return self._cell(self.units[seq])
        if self.source is not None:
            raw = self.source.unit_on(tuple(self.source_ones[a] for a in seq))
            if raw is None:
                return None
            cid = self._adopt(raw)
            if cid not in self.cells and self.within(self._cell(cid)):
                return None
            return self._cell(cid)
        return super().unit_on(seq)

    def cell_label(self, cell):
        return str(cell.core)


class DualView(BaseStructure):
    """
    Двойственная структура op или co, вычисляемая лениво

    op обращает 1-клетки и порядок последовательностей,
    co меняет местами входы и выходы 2-клеток. Ядро клетки
    представления хранит исходную клетку.
    """

    def __init__(self, base, kind):
        if kind not in (DUAL_OP, DUAL_CO):
            raise ValueError(f'Неизвестный вид двойственности: {kind}')
        super().__init__(f'{base.name}^{kind}', base.budget)
        self.base = base
        self.kind = kind
        self.allows_intervals = base.allows_intervals
        self.one_object = base.one_object
        # co структуры с одним выходом имеет один вход
        self.multi = base.multi if kind == DUAL_OP else False

    def _down_seq(self, seq):
        if self.kind == DUAL_OP:
            return tuple(a.base for a in reversed(seq))
        return tuple(seq)

    def _up_seq(self, seq):
        if self.kind == DUAL_OP:
            return tuple(Op(a) for a in reversed(seq))
        return tuple(seq)

    def wrap(self, cell):
        """Клетка представления по клетке исходной структуры"""
        if cell is None:
            return None
        if self.kind == DUAL_OP:
            return Cell(self._up_seq(cell.ins), self._up_seq(cell.outs), cell)
        return Cell(cell.outs, cell.ins, cell)

    def up(self, a):
        return Op(a) if self.kind == DUAL_OP else a

    def zero_cells(self):
        return self.base.zero_cells()

    def one_cells(self):
        return tuple(self.up(a) for a in self.base.one_cells())

    def src(self, a):
        return self.base.tgt(a.base) if self.kind == DUAL_OP else self.base.src(a)

    def tgt(self, a):
        return self.base.src(a.base) if self.kind == DUAL_OP else self.base.tgt(a)

    def weight(self, a):
        return self.base.weight(a.base if self.kind == DUAL_OP else a)

    def label(self, item):
        return str(item)

    def hom(self, ins, outs):
        ins, outs = self._down_seq(ins), self._down_seq(outs)
        if self.kind == DUAL_OP:
            return [self.wrap(cell) for cell in self.base.hom(ins, outs)]
        return [self.wrap(cell) for cell in self.base.hom(outs, ins)]

    def boundaries(self, budget=None):
        budget = budget or self.budget
        if self.kind == DUAL_CO:
            budget = ArityBudget(budget.max_out, budget.max_in, budget.max_seq_len)
            return [(outs, ins) for ins, outs in self.base.boundaries(budget)]
        return [(self._up_seq(ins), self._up_seq(outs)) for ins, outs in self.base.boundaries(budget)]

    def within(self, cell, budget=None):
        return self.base.within(cell.core, budget)

    def merge(self, t, interval_t, s, interval_s, strict=True):
        # бюджет проверяет исходная структура
        cell = super().merge(t, interval_t, s, interval_s, strict=False)
        if strict and not self.base.within(cell.core):
            raise BudgetExceeded(f'{self.name}: {cell} вне бюджета {self.budget}')
        return cell

    def _compose(self, t, interval_t, s, interval_s, case, ins, outs):
        (j1, j2), (i1, i2) = interval_t, interval_s
        if self.kind == DUAL_OP:
            m, p = len(t.outs), len(s.ins)
            raw = self.base.merge(t.core, (m - j2 + 1, m - j1 + 1), s.core, (p - i2 + 1, p - i1 + 1), strict=False)
        else:
            raw = self.base.merge(s.core, interval_s, t.core, interval_t, strict=False)
        return self.wrap(raw)

    def unit_on(self, seq):
        return self.wrap(self.base.unit_on(self._down_seq(seq)))

    def chosen_tensor(self, seq):
        return None

    def beyond_cap(self, kind, a, b):
        if self.kind == DUAL_CO:
            return self.base.beyond_cap(kind, a, b)
        return False

    def cell_label(self, cell):
        return f'{self.base.cell_label(cell.core)}^{self.kind}'


class ForgetfulView(BaseStructure):
    """
    Подлежащая поли-бикатегория merge-бикатегории:
    оставляет только композиции по одной 1-клетке
    """

    allows_intervals = False

    def __init__(self, base):
        super().__init__(f'U({base.name})', base.budget)
        self.base = base
        self.multi = base.multi
        self.one_object = base.one_object

    def zero_cells(self):
        return self.base.zero_cells()

    def one_cells(self):
        return self.base.one_cells()

    def src(self, a):
        return self.base.src(a)

    def tgt(self, a):
        return self.base.tgt(a)

    def weight(self, a):
        return self.base.weight(a)

    def label(self, item):
        return self.base.label(item)

    def hom(self, ins, outs):
        return self.base.hom(ins, outs)

    def _compose(self, t, interval_t, s, interval_s, case, ins, outs):
        return self.base.merge(t, interval_t, s, interval_s, strict=False)

    def unit_on(self, seq):
        return self.base.unit_on(seq)

    def chosen_tensor(self, seq):
        return self.base.chosen_tensor(seq)

    def beyond_cap(self, kind, a, b):
        return self.base.beyond_cap(kind, a, b)

    def cell_label(self, cell):
        return self.base.cell_label(cell)


def dual(structure, kind):
    """
    Двойственная структура; повторное применение того же вида
    возвращает исходный объект
    """
    if isinstance(structure, DualView) and structure.kind == kind:
        return structure.base
    return DualView(structure, kind)


def underlying_polybicat(structure):
    """Забывает слияния по интервалам, оставляя cut"""
    if not structure.allows_intervals:
        return structure
    return ForgetfulView(structure)
