"""
Сервис конечных бикатегорий

Отвечает за:
- Табличное представление конечной бикатегории
- Исчерпывающую проверку аксиом (ассоциативность, перестановочность,
  натуральность, пятиугольник, треугольник, обратимость)
- 2-группу Z/2 с 3-коциклом
- Канонические 2-клетки перестановки скобок через левую гребенку

Вертикальная композиция записывается диаграммно: vcomp(p, q) = p;q.
"""

import logging
from dataclasses import dataclass
from functools import reduce

from structures.exceptions import ConstructionError, NotDivisible
from structures.services.certificates import Report

logger = logging.getLogger(__name__)


class FiniteBicategory:
    """
    Конечная бикатегория, заданная таблицами

    Attributes:
        zero_cells: 0-клетки
        one_cells: 1-клетка -> (источник, цель)
        two_cells: 2-клетка -> (1-клетка источник, 1-клетка цель)
        vcomp: (p, q) -> p;q
        vunit: 1-клетка -> единичная 2-клетка
        hcomp1: (a, b) -> a⊗b для a: x->y, b: y->z
        hcomp2: (p, q) -> p⊗q
        hunit: 0-клетка -> единичная 1-клетка
        assoc: (a, b, c) -> α: (a⊗b)⊗c -> a⊗(b⊗c)
        lunit: a -> λ_a: 1⊗a -> a
        runit: a -> ρ_a: a⊗1 -> a
    """

    def __init__(self, name, zero_cells, one_cells, two_cells, vcomp, vunit, hcomp1, hcomp2,
                 hunit, assoc, lunit, runit, labeler=str):
        self.name = name
        self.zero_cells = tuple(zero_cells)
        self.one_cells = dict(one_cells)
        self.two_cells = dict(two_cells)
        self.vcomp = dict(vcomp)
        self.vunit = dict(vunit)
        self.hcomp1 = dict(hcomp1)
        self.hcomp2 = dict(hcomp2)
        self.hunit = dict(hunit)
        self.assoc = dict(assoc)
        self.lunit = dict(lunit)
        self.runit = dict(runit)
        self.labeler = labeler
        self._inverses = {}

    def label(self, item):
        return self.labeler(item)

    def src(self, a):
        return self.one_cells[a][0]

    def tgt(self, a):
        return self.one_cells[a][1]

    def dom(self, p):
        return self.two_cells[p][0]

    def cod(self, p):
        return self.two_cells[p][1]

    def sorted_ones(self):
        return sorted(self.one_cells, key=self.label)

    def sorted_twos(self):
        return sorted(self.two_cells, key=self.label)

    def then(self, p, q):
        """Вертикальная композиция p;q"""
        try:
            return self.vcomp[(p, q)]
        except KeyError as exc:
            raise ConstructionError(f'{self.name}: нет записи vcomp для {self.label(p)};{self.label(q)}') from exc

    def chain(self, *cells):
        return reduce(self.then, cells)

    def tensor1(self, a, b):
        try:
            return self.hcomp1[(a, b)]
        except KeyError as exc:
            raise ConstructionError(f'{self.name}: нет записи hcomp1 для {self.label(a)}⊗{self.label(b)}') from exc

    def tensor2(self, p, q):
        try:
            return self.hcomp2[(p, q)]
        except KeyError as exc:
            raise ConstructionError(f'{self.name}: нет записи hcomp2 для {self.label(p)}⊗{self.label(q)}') from exc

    def inverse(self, p):
        """
        Обратная 2-клетка

        Raises:
            NotDivisible: Если p необратима
        """
        if p not in self._inverses:
            a, b = self.two_cells[p]
            found = None
            for q in self.sorted_twos():
                if self.two_cells[q] != (b, a):
                    continue
                if self.vcomp.get((p, q)) == self.vunit[a] and self.vcomp.get((q, p)) == self.vunit[b]:
                    found = q
                    break
            if found is None:
                raise NotDivisible(f'{self.name}: 2-клетка {self.label(p)} необратима')
            self._inverses[p] = found
        return self._inverses[p]

    def composable_pairs(self):
        ones = self.sorted_ones()
        return [(a, b) for a in ones for b in ones if self.tgt(a) == self.src(b)]

    def composable_triples(self):
        ones = self.sorted_ones()
        return [(a, b, c) for a, b in self.composable_pairs() for c in ones if self.tgt(b) == self.src(c)]

    def __repr__(self):
        return f'<FiniteBicategory {self.name}: {len(self.one_cells)} 1-клеток, {len(self.two_cells)} 2-клеток>'


def _cocycle(a, b, c):
    return a * b * c


def z2_two_group(omega=_cocycle, name='Z2'):
    """
    2-группа Z/2 с одним объектом

    1-клетки '0' и '1', 2-клетки 'a.g': автоморфизмы a, пронумерованные
    g из Z/2. Композиции складывают по модулю 2, ассоциатор
    α_{a,b,c} = (a+b+c).ω(a,b,c).

    Args:
        omega: Функция Z/2^3 -> Z/2; пятиугольник выполнен, если это 3-коцикл
        name: Имя бикатегории
    """
    elements = (0, 1)

    def one(a):
        return str(a)

    def two(a, g):
        return f'{a}.{g}'

    one_cells = {one(a): ('*', '*') for a in elements}
    two_cells = {two(a, g): (one(a), one(a)) for a in elements for g in elements}
    vcomp = {(two(a, g), two(a, h)): two(a, (g + h) % 2) for a in elements for g in elements for h in elements}
    hcomp2 = {
        (two(a, g), two(b, h)): two((a + b) % 2, (g + h) % 2)
        for a in elements for b in elements for g in elements for h in elements
    }
    return FiniteBicategory(
        name,
        ['*'],
        one_cells,
        two_cells,
        vcomp,
        {one(a): two(a, 0) for a in elements},
        {(one(a), one(b)): one((a + b) % 2) for a in elements for b in elements},
        hcomp2,
        {'*': one(0)},
        {
            (one(a), one(b), one(c)): two((a + b + c) % 2, omega(a, b, c) % 2)
            for a in elements for b in elements for c in elements
        },
        {one(a): two(a, 0) for a in elements},
        {one(a): two(a, 0) for a in elements},
    )


def _compare(B, report, kind, subject, left, right, **fields):
    report.count(kind)
    try:
        if left() != right():
            report.add(kind, subject, **fields)
    except (ConstructionError, KeyError) as exc:
        report.add('partial', subject, scheme=kind, reason=exc)


def check_bicategory_axioms(B):
    """
    Исчерпывающая проверка аксиом бикатегории

    Returns:
        Report: Находка на каждый нарушенный экземпляр, счетчики по схемам
    """
    report = Report(f'bicategory {B.name}', None)
    twos = B.sorted_twos()
    label = B.label
    for p in twos:
        a, b = B.two_cells[p]
        _compare(B, report, 'vunit', label(p), lambda: B.then(B.vunit[a], p), lambda: p)
        _compare(B, report, 'vunit', label(p), lambda: B.then(p, B.vunit[b]), lambda: p)
        for q in twos:
            if B.dom(q) != b:
                continue
            for r in twos:
                if B.dom(r) != B.cod(q):
                    continue
                _compare(B, report, 'vassoc', label(p), lambda: B.then(B.then(p, q), r),
                         lambda: B.then(p, B.then(q, r)), second=label(q), third=label(r))
    for a, b in B.composable_pairs():
        _compare(B, report, 'hunit2', f'{label(a)},{label(b)}',
                 lambda: B.tensor2(B.vunit[a], B.vunit[b]), lambda: B.vunit[B.tensor1(a, b)])
    horizontal = [(p, q) for p in twos for q in twos if B.tgt(B.dom(p)) == B.src(B.dom(q))]
    for p, q in horizontal:
        for p2 in twos:
            if B.dom(p2) != B.cod(p):
                continue
            for q2 in twos:
                if B.dom(q2) != B.cod(q):
                    continue
                _compare(B, report, 'interchange', f'{label(p)},{label(q)}',
                         lambda: B.then(B.tensor2(p, q), B.tensor2(p2, q2)),
                         lambda: B.tensor2(B.then(p, p2), B.then(q, q2)))
    for p in twos:
        a, b = B.two_cells[p]
        unit_x, unit_y = B.vunit[B.hunit[B.src(a)]], B.vunit[B.hunit[B.tgt(a)]]
        _compare(B, report, 'lunit_natural', label(p),
                 lambda: B.then(B.tensor2(unit_x, p), B.lunit[b]), lambda: B.then(B.lunit[a], p))
        _compare(B, report, 'runit_natural', label(p),
                 lambda: B.then(B.tensor2(p, unit_y), B.runit[b]), lambda: B.then(B.runit[a], p))
    for p, q in horizontal:
        for r in twos:
            if B.tgt(B.dom(q)) != B.src(B.dom(r)):
                continue
            a, b, c = B.dom(p), B.dom(q), B.dom(r)
            a2, b2, c2 = B.cod(p), B.cod(q), B.cod(r)
            _compare(B, report, 'assoc_natural', f'{label(p)},{label(q)},{label(r)}',
                     lambda: B.then(B.tensor2(B.tensor2(p, q), r), B.assoc[(a2, b2, c2)]),
                     lambda: B.then(B.assoc[(a, b, c)], B.tensor2(p, B.tensor2(q, r))))
    ones = B.sorted_ones()
    for a, b, c in B.composable_triples():
        for d in ones:
            if B.tgt(c) != B.src(d):
                continue
            # (α⊗1);α_{a,b⊗c,d};(1⊗α) = α_{a⊗b,c,d};α_{a,b,c⊗d}
            _compare(B, report, 'pentagon', ','.join(label(x) for x in (a, b, c, d)),
                     lambda: B.chain(
                         B.tensor2(B.assoc[(a, b, c)], B.vunit[d]),
                         B.assoc[(a, B.tensor1(b, c), d)],
                         B.tensor2(B.vunit[a], B.assoc[(b, c, d)]),
                     ),
                     lambda: B.then(B.assoc[(B.tensor1(a, b), c, d)], B.assoc[(a, b, B.tensor1(c, d))]))
    for a, b in B.composable_pairs():
        unit = B.hunit[B.tgt(a)]
        # ρ_a⊗1_b = α_{a,1,b};(1_a⊗λ_b)
        _compare(B, report, 'triangle', f'{label(a)},{label(b)}',
                 lambda: B.tensor2(B.runit[a], B.vunit[b]),
                 lambda: B.then(B.assoc[(a, unit, b)], B.tensor2(B.vunit[a], B.lunit[b])))
    structural = (
        [('assoc', key, cell) for key, cell in B.assoc.items()]
        + [('lunit', key, cell) for key, cell in B.lunit.items()]
        + [('runit', key, cell) for key, cell in B.runit.items()]
    )
    for kind, key, cell in structural:
        report.count('invertible')
        try:
            B.inverse(cell)
        except NotDivisible:
            report.add('invertible', label(cell), family=kind)
    logger.info(f'{B.name}: аксиомы бикатегории, {len(report.findings)} нарушений, '
                f'пятиугольников {report.meta.get("pentagon", 0)}')
    return report


@dataclass(frozen=True)
class Leaf:
    """Лист дерева расстановки скобок"""

    one_cell: object


@dataclass(frozen=True)
class Node:
    """Узел дерева расстановки скобок: left⊗right"""

    left: object
    right: object


def leaves(tree):
    if isinstance(tree, Leaf):
        return (tree.one_cell,)
    return leaves(tree.left) + leaves(tree.right)


def left_comb(seq):
    """Левая гребенка (…(a1⊗a2)…)⊗an"""
    seq = tuple(seq)
    if not seq:
        raise ConstructionError('Пустая последовательность не имеет гребенки')
    return reduce(Node, (Leaf(a) for a in seq[1:]), Leaf(seq[0]))


def blocks_tree(blocks):
    """Гребенка блоков: ((L(B1)⊗L(B2))⊗L(B3)) без пустых блоков"""
    return reduce(Node, [left_comb(block) for block in blocks if block])


class Rebracketer:
    """
    Канонические 2-клетки перестановки скобок

    Каждое дерево приводится к левой гребенке композицией ассоциаторов;
    перестановка S->T равна norm(S);norm(T)^-1.

    Методы:
    - composite(): 1-клетка дерева
    - norm(): 2-клетка дерева в его левую гребенку
    - rebracket(): 2-клетка между двумя расстановками скобок
    - whisker(): Тензор блоков с единицами вокруг активного блока
    """

    def __init__(self, bicategory):
        self.B = bicategory
        self._cache = {}

    def composite(self, tree):
        if isinstance(tree, Leaf):
            return tree.one_cell
        return self.B.tensor1(self.composite(tree.left), self.composite(tree.right))

    def _comb_value(self, seq):
        return self.composite(left_comb(seq))

    def _merge_combs(self, first, second):
        """(comb A)⊗(comb B) -> comb(A+B)"""
        B = self.B
        value = self._comb_value(first)
        if len(second) == 1:
            return B.vunit[B.tensor1(value, second[0])]
        head, last = second[:-1], second[-1]
        back = B.inverse(B.assoc[(value, self._comb_value(head), last)])
        return B.then(back, B.tensor2(self._merge_combs(first, head), B.vunit[last]))

    def norm(self, tree):
        if isinstance(tree, Leaf):
            return self.B.vunit[tree.one_cell]
        both = self.B.tensor2(self.norm(tree.left), self.norm(tree.right))
        return self.B.then(both, self._merge_combs(leaves(tree.left), leaves(tree.right)))

    def rebracket(self, source, target):
        """
        Raises:
            ConstructionError: Если листья деревьев различаются
        """
        if leaves(source) != leaves(target):
            raise ConstructionError(f'{self.B.name}: у расстановок скобок разные листья')
        key = (source, target)
        if key not in self._cache:
            self._cache[key] = self.B.then(self.norm(source), self.B.inverse(self.norm(target)))
        return self._cache[key]

    def whisker(self, blocks, index, core):
        """Тензор vunit(L(B_k)) по блокам с core на месте блока index"""
        B = self.B
        parts = [
            core if k == index else B.vunit[self._comb_value(block)]
            for k, block in enumerate(blocks) if block or k == index
        ]
        return reduce(B.tensor2, parts)
