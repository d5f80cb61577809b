"""
Сервис конструкции ∫ над конечной бикатегорией

2-клетки (a1..an)->(b1..bm) - это 2-клетки B между левыми гребенками
L(a1..an) и L(b1..bm). Слияние раскладывается на не более чем два
шага с усами, соединенные каноническими перестановками скобок.
"""

import logging

from structures.exceptions import ConstructionError
from structures.services.bicat import Rebracketer, blocks_tree, left_comb
from structures.services.polybicat import BaseStructure, Cell

logger = logging.getLogger(__name__)


class GrothStructure(BaseStructure):
    """
    Merge-бикатегория ∫B

    Методы:
    - comb(): 1-клетка левой гребенки последовательности
    - hom(): 2-клетки B между гребенками границ
    - unit_on(): Единица на Γ - vunit(L(Γ))
    - chosen_tensor(): (L(Γ), vunit(L(Γ)))
    """

    def __init__(self, bicategory, budget, name=None):
        super().__init__(name or f'groth({bicategory.name})', budget)
        self.B = bicategory
        self.rebracketer = Rebracketer(bicategory)
        self.one_object = len(bicategory.zero_cells) == 1

    def zero_cells(self):
        return self.B.zero_cells

    def one_cells(self):
        return tuple(self.B.sorted_ones())

    def src(self, a):
        return self.B.src(a)

    def tgt(self, a):
        return self.B.tgt(a)

    def label(self, item):
        return self.B.label(item)

    def comb(self, seq):
        return self.rebracketer.composite(left_comb(seq))

    def hom(self, ins, outs):
        ins, outs = tuple(ins), tuple(outs)
        if not ins or not outs or not (self.composable(ins) and self.composable(outs)):
            return []
        if self.src(ins[0]) != self.src(outs[0]) or self.tgt(ins[-1]) != self.tgt(outs[-1]):
            return []
        boundary = (self.comb(ins), self.comb(outs))
        return [Cell(ins, outs, p) for p in self.B.sorted_twos() if self.B.two_cells[p] == boundary]

    def _steps(self, t, interval_t, s, interval_s, case):
        (j1, j2), (i1, i2) = interval_t, interval_s
        length = j2 - j1 + 1
        if case == 'a':
            d1, d2, d3 = t.outs[:j1 - 1], t.outs[j1 - 1:j2], t.outs[j2:]
            return [([t.ins], 0, t.core, [t.outs]), ([d1, d2, d3], 1, s.core, [d1, s.outs, d3])]
        if case == 'b':
            rest = s.ins[length:]
            d1, d2 = t.outs[:len(t.outs) - length], t.outs[len(t.outs) - length:]
            return [([t.ins, rest], 0, t.core, [t.outs, rest]), ([d1, d2 + rest], 1, s.core, [d1, s.outs])]
        if case == 'c':
            left, right = s.ins[:i1 - 1], s.ins[i2:]
            return [([left, t.ins, right], 1, t.core, [left, t.outs, right]), ([s.ins], 0, s.core, [s.outs])]
        left = s.ins[:len(s.ins) - length]
        d2, d3 = t.outs[:length], t.outs[length:]
        return [([left, t.ins], 1, t.core, [left, t.outs]), ([left + d2, d3], 0, s.core, [s.outs, d3])]

    def _compose(self, t, interval_t, s, interval_s, case, ins, outs):
        B, R = self.B, self.rebracketer
        current = left_comb(ins)
        result = B.vunit[self.comb(ins)]
        for blocks, index, core, out_blocks in self._steps(t, interval_t, s, interval_s, case):
            # пустые блоки отбрасываются, индекс активного блока сдвигается
            kept = [block for k, block in enumerate(blocks) if block or k == index]
            active = sum(1 for block in blocks[:index] if block)
            result = B.chain(result, R.rebracket(current, blocks_tree(kept)), R.whisker(kept, active, core))
            current = blocks_tree(out_blocks)
        result = B.then(result, R.rebracket(current, left_comb(outs)))
        if B.two_cells[result] != (self.comb(ins), self.comb(outs)):
            raise ConstructionError(f'{self.name}: слияние дало клетку с неверной границей')
        return Cell(tuple(ins), tuple(outs), result)

    def unit_on(self, seq):
        seq = tuple(seq)
        if not seq or not self.composable(seq):
            return None
        return Cell(seq, seq, self.B.vunit[self.comb(seq)])

    def chosen_tensor(self, seq):
        seq = tuple(seq)
        value = self.comb(seq)
        return value, Cell(seq, (value,), self.B.vunit[value])

    def cell_label(self, cell):
        ins = ','.join(self.label(a) for a in cell.ins)
        outs = ','.join(self.label(a) for a in cell.outs)
        return f'({ins})->({outs})[{self.B.label(cell.core)}]'


def groth(bicategory, budget, name=None):
    """
    Строит ∫B при заданном бюджете

    Args:
        bicategory: FiniteBicategory с полными таблицами
        budget: ArityBudget
        name: Имя результата

    Returns:
        GrothStructure
    """
    structure = GrothStructure(bicategory, budget, name)
    logger.info(f'Построена {structure.name}: {len(bicategory.one_cells)} 1-клеток, бюджет {budget}')
    return structure
