"""
Сервис регулярных 2-полиграфов

Отвечает за:
- Объявления 0-, 1- и 2-клеток конечного полиграфа
- Проверку глобулярности и регулярности
- Двойственности op и co
- 2-глобулярное усечение
- Перечисление композиционных последовательностей
- Извлечение полиграфа из структуры в пределах бюджета
"""

import logging
from dataclasses import dataclass, field

from structures.constants import DUAL_CO, DUAL_OP
from structures.services.certificates import Report

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OneCellDecl:
    id: str
    src: str
    tgt: str


@dataclass(frozen=True)
class TwoCellDecl:
    id: str
    inputs: tuple
    outputs: tuple


@dataclass(frozen=True)
class PathSeq:
    """Композиционная последовательность 1-клеток"""

    cells: tuple
    src: str
    tgt: str

    def __str__(self):
        return '<' + ','.join(self.cells) + '>'


@dataclass
class RegularTwoPolygraph:
    """
    Конечный регулярный 2-полиграф

    Attributes:
        zero_cells: Множество 0-клеток
        one_cells: id -> OneCellDecl
        two_cells: id -> TwoCellDecl
    """

    zero_cells: frozenset
    one_cells: dict = field(default_factory=dict)
    two_cells: dict = field(default_factory=dict)

    def __eq__(self, other):
        return (
            isinstance(other, RegularTwoPolygraph)
            and set(self.zero_cells) == set(other.zero_cells)
            and self.one_cells == other.one_cells
            and self.two_cells == other.two_cells
        )

    def src(self, a):
        return self.one_cells[a].src

    def tgt(self, a):
        return self.one_cells[a].tgt


@dataclass
class TwoGlobularSet:
    """2-глобулярное множество: 2-клетки с одним входом и одним выходом"""

    zero_cells: frozenset
    one_cells: dict
    two_cells: dict


def validate_globularity(polygraph):
    """
    Проверяет четыре уравнения глобулярности и регулярность

    Args:
        polygraph: RegularTwoPolygraph

    Returns:
        Report: Пустой отчет, если полиграф корректен
    """
    report = Report('globularity', None)
    for a in sorted(polygraph.one_cells):
        decl = polygraph.one_cells[a]
        for end in (decl.src, decl.tgt):
            if end not in polygraph.zero_cells:
                report.add('dangling', a, ref=end, dim=0)
    for pid in sorted(polygraph.two_cells):
        decl = polygraph.two_cells[pid]
        report.count('two_cells')
        if not decl.inputs or not decl.outputs:
            report.add('regularity', pid, inputs=len(decl.inputs), outputs=len(decl.outputs))
            continue
        missing = [a for a in decl.inputs + decl.outputs if a not in polygraph.one_cells]
        if missing:
            for a in missing:
                report.add('dangling', pid, ref=a, dim=1)
            continue
        for side, seq in (('inputs', decl.inputs), ('outputs', decl.outputs)):
            for k, (a, b) in enumerate(zip(seq, seq[1:]), start=1):
                if polygraph.tgt(a) != polygraph.src(b):
                    report.add('globularity', pid, equation=f'{side}-composable', position=k)
        if polygraph.src(decl.inputs[0]) != polygraph.src(decl.outputs[0]):
            report.add('globularity', pid, equation='first-sources')
        if polygraph.tgt(decl.inputs[-1]) != polygraph.tgt(decl.outputs[-1]):
            report.add('globularity', pid, equation='last-targets')
    logger.info(f'Глобулярность: {report.meta.get("two_cells", 0)} 2-клеток, {len(report.findings)} нарушений')
    return report


def dual(polygraph, kind):
    """
    Двойственный полиграф

    op обращает направление 1-клеток и порядок границ,
    co меняет местами входы и выходы. Идентификаторы сохраняются,
    поэтому dual(dual(P, k), k) == P.
    """
    if kind == DUAL_OP:
        ones = {a: OneCellDecl(a, d.tgt, d.src) for a, d in polygraph.one_cells.items()}
        twos = {
            p: TwoCellDecl(p, tuple(reversed(d.inputs)), tuple(reversed(d.outputs)))
            for p, d in polygraph.two_cells.items()
        }
    elif kind == DUAL_CO:
        ones = dict(polygraph.one_cells)
        twos = {p: TwoCellDecl(p, d.outputs, d.inputs) for p, d in polygraph.two_cells.items()}
    else:
        raise ValueError(f'Неизвестный вид двойственности: {kind}')
    return RegularTwoPolygraph(frozenset(polygraph.zero_cells), ones, twos)


def truncate_globular(polygraph):
    """Оставляет только 2-клетки вида (a)->(b)"""
    twos = {
        p: d for p, d in polygraph.two_cells.items()
        if len(d.inputs) == 1 and len(d.outputs) == 1
    }
    return TwoGlobularSet(frozenset(polygraph.zero_cells), dict(polygraph.one_cells), twos)


def enumerate_sequences(polygraph, x, y, max_len):
    """
    Все композиционные последовательности от x до y длины не больше max_len

    Returns:
        list[PathSeq]: По длине, затем лексикографически
    """
    if max_len < 1:
        raise ValueError('max_len должен быть >= 1')
    ones = sorted(polygraph.one_cells)
    result = []
    frontier = [(a,) for a in ones if polygraph.src(a) == x]
    while frontier:
        result.extend(seq for seq in frontier if polygraph.tgt(seq[-1]) == y)
        if len(frontier[0]) == max_len:
            break
        frontier = [seq + (a,) for seq in frontier for a in ones if polygraph.tgt(seq[-1]) == polygraph.src(a)]
    return [PathSeq(seq, x, y) for seq in result]


def polygraph_of(structure, budget=None):
    """
    Полиграф структуры в пределах бюджета; 2-клетки именуются метками
    """
    ones = {
        structure.label(a): OneCellDecl(structure.label(a), str(structure.src(a)), str(structure.tgt(a)))
        for a in structure.one_cells()
    }
    twos = {}
    for cell in structure.all_cells(budget):
        pid = structure.cell_label(cell)
        twos[pid] = TwoCellDecl(
            pid,
            tuple(structure.label(a) for a in cell.ins),
            tuple(structure.label(a) for a in cell.outs),
        )
    return RegularTwoPolygraph(frozenset(str(x) for x in structure.zero_cells()), ones, twos)
