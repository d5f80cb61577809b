"""
Сервис hom-объектов [X, Y]

Отвечает за:
- Перечисление морфизмов X -> Y с отсечением по композициям
- Oplax-трансформации и модификации, их проверку и классификацию
- Merge-бикатегорию [X, Y] с поточечными слияниями и единицами
- Эквивалентности: данные (f, g, η, ε) и их проверку
"""

import logging
from dataclasses import dataclass
from itertools import product

from structures.constants import KIND_TENSOR, SIDE_OUTPUT, TRANSFOR_MODIFICATION, TRANSFOR_OPLAX
from structures.exceptions import BudgetExceeded, ConstructionError, IllegalMerge, NotDivisible
from structures.services.axioms import merge_intervals
from structures.services.certificates import Certificate, Report
from structures.services.coherence import find_tensor_units
from structures.services.divisibility import is_divisible_interval
from structures.services.morphisms import Morphism, compose_morphisms, identity_morphism
from structures.services.polybicat import BaseStructure, Cell
from structures.services.units import invert2, is_divisible1

logger = logging.getLogger(__name__)

DEFAULT_MAX_MORPHISMS = 64


class Transfor:
    """
    Oplax-трансформация или модификация

    Для oplax: source, target - морфизмы f, g; comp0: x -> σ_x: f(x)->g(x);
    comp1: a -> σ_a: (f(a), σ_y) -> (σ_x, g(a)).
    Для модификации: source, target - последовательности трансформаций;
    comp0: x -> μ_x: (σ^1_x..σ^n_x) -> (τ^1_x..τ^m_x).
    """

    def __init__(self, kind, source, target, comp0, comp1=None, name=None):
        if kind not in (TRANSFOR_OPLAX, TRANSFOR_MODIFICATION):
            raise ValueError(f'Неизвестный вид трансфора: {kind}')
        self.kind = kind
        self.source = source
        self.target = target
        self.comp0 = dict(comp0)
        self.comp1 = dict(comp1 or {})
        self._name = name

    @property
    def codomain(self):
        """Структура, в которой лежат компоненты"""
        if self.kind == TRANSFOR_OPLAX:
            return self.source.target
        return self.source[0].codomain

    def key(self):
        Y = self.codomain
        return (
            self.kind,
            tuple(sorted((str(x), Y.cell_label(c) if isinstance(c, Cell) else Y.label(c))
                         for x, c in self.comp0.items())),
            tuple(sorted((str(a), Y.cell_label(c)) for a, c in self.comp1.items())),
            self._ends_key(),
        )

    def _ends_key(self):
        if self.kind == TRANSFOR_OPLAX:
            return (self.source.key(), self.target.key())
        return (tuple(t.key() for t in self.source), tuple(t.key() for t in self.target))

    def __eq__(self, other):
        return isinstance(other, Transfor) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        if self._name:
            return self._name
        parts = ','.join(f'{x}:{c}' for x, c in self.key()[1])
        return f'σ({parts})' if self.kind == TRANSFOR_OPLAX else f'μ({parts})'


def _chain(Y, components):
    """C_1 = c_1, C_{k+1} = cut(c_{k+1}, 1, C_k, k+1)"""
    result = components[0]
    for k, component in enumerate(components[1:], start=1):
        result = Y.cut(component, 1, result, k + 1, strict=False)
    return result


def _stack(Y, components):
    """S_1 = c_1, S_{k+1} = cut(S_k, k+1, c_{k+1}, 1)"""
    result = components[0]
    for k, component in enumerate(components[1:], start=1):
        result = Y.cut(result, k + 1, component, 1, strict=False)
    return result


def oplax_naturality_failures(T, budget):
    """
    Экземпляры уравнения натуральности, которые нарушены

    merge(f(p), [1,m], C_b, [1,m]) = merge(C_a, [2,n+1], g(p), [1,n])
    """
    f, g = T.source, T.target
    X, Y = f.source, f.target
    for p in X.all_cells(budget):
        n, m = len(p.ins), len(p.outs)
        try:
            chain_in = _chain(Y, [T.comp1[a] for a in p.ins])
            chain_out = _chain(Y, [T.comp1[b] for b in p.outs])
            left = Y.merge(f.cell(p), (1, m), chain_out, (1, m), strict=False)
            right = Y.merge(chain_in, (2, n + 1), g.cell(p), (1, n), strict=False)
        except (IllegalMerge, ConstructionError, KeyError):
            yield p
            continue
        if left != right:
            yield p


def modification_failures(M, budget):
    """merge(S_a, [1,n], μ_x, [1,n]) = merge(μ_y, [1,m], T_a, [2,m+1]) для всех 1-клеток a"""
    first = M.source[0]
    X, Y = first.source.source, first.codomain
    n, m = len(M.source), len(M.target)
    for a in X.one_cells():
        x, y = X.src(a), X.tgt(a)
        try:
            stack_in = _stack(Y, [sigma.comp1[a] for sigma in M.source])
            stack_out = _stack(Y, [tau.comp1[a] for tau in M.target])
            left = Y.merge(stack_in, (1, n), M.comp0[x], (1, n), strict=False)
            right = Y.merge(M.comp0[y], (1, m), stack_out, (2, m + 1), strict=False)
        except (IllegalMerge, ConstructionError, KeyError):
            yield a
            continue
        if left != right:
            yield a


def _boundary_ok(T):
    f, g = T.source, T.target
    X, Y = f.source, f.target
    for x in X.zero_cells():
        sigma = T.comp0.get(x)
        if sigma is None or Y.src(sigma) != f.zero(x) or Y.tgt(sigma) != g.zero(x):
            return False
    for a in X.one_cells():
        cell = T.comp1.get(a)
        expected = ((f.one(a), T.comp0[X.tgt(a)]), (T.comp0[X.src(a)], g.one(a)))
        if cell is None or (cell.ins, cell.outs) != expected:
            return False
    return True


def _full_divisible(Y, cell, budget):
    return is_divisible_interval(Y, cell, SIDE_OUTPUT, (1, len(cell.outs)), budget).holds


def validate_transfor(T, budget=None):
    """
    Проверка и классификация трансфора

    Returns:
        Report: Флаги valid, а для oplax также fair, pseudo_natural,
        pseudo_equivalence; для модификации - divisible
    """
    if T.kind == TRANSFOR_MODIFICATION:
        return _validate_modification(T, budget)
    f = T.source
    X, Y = f.source, f.target
    budget = budget or X.budget
    report = Report(f'transfor {T}', budget)
    if not _boundary_ok(T):
        report.flag('valid', Certificate.failed('valid', str(T), budget, {'reason': 'missing or mistyped component'}))
        return report
    failures = [X.cell_label(p) for p in oplax_naturality_failures(T, budget)]
    for label in failures:
        report.add('oplax_natural', label)
    if failures:
        report.flag('valid', Certificate.failed('valid', str(T), budget, {'cell': failures[0]}))
        return report
    report.flag('valid', Certificate.passed('valid', str(T), budget))
    report.flag('fair', _fairness(T, budget, report))
    divisible = {a: _full_divisible(Y, T.comp1[a], budget) for a in sorted(X.one_cells(), key=X.label)}
    bad = [X.label(a) for a, ok in divisible.items() if not ok]
    if bad:
        report.flag('pseudo_natural', Certificate.failed('pseudo_natural', str(T), budget, {'one_cell': bad[0]}))
    else:
        report.flag('pseudo_natural', Certificate.passed('pseudo_natural', str(T), budget))
    if bad:
        cert = Certificate.failed('pseudo_equivalence', str(T), budget, {'reason': 'not pseudo-natural'})
    else:
        cert = Certificate.passed('pseudo_equivalence', str(T), budget)
        for x in sorted(X.zero_cells(), key=str):
            if not is_divisible1(Y, T.comp0[x], KIND_TENSOR, budget).holds:
                cert = Certificate.failed('pseudo_equivalence', str(T), budget, {'zero_cell': x})
                break
    report.flag('pseudo_equivalence', cert)
    return report


def _fairness(T, budget, report):
    """
    Справедливость: компоненты на делимых 1-клетках делимы

    Сначала проверяются только компоненты на тензорных единицах,
    затем вердикт подтверждается на всех делимых 1-клетках.
    """
    X, Y = T.source.source, T.source.target
    units = [u for u, _ in find_tensor_units(X, budget).values()]
    shortcut = all(_full_divisible(Y, T.comp1[u], budget) for u in units)
    divisible = [a for a in X.one_cells() if is_divisible1(X, a, KIND_TENSOR, budget).holds]
    failing = [X.label(a) for a in divisible if not _full_divisible(Y, T.comp1[a], budget)]
    report.meta['fair.shortcut'] = 'holds' if shortcut else 'fails'
    if shortcut != (not failing):
        report.add('fair_shortcut', str(T), shortcut=shortcut, full=not failing)
    if failing:
        return Certificate.failed('fair', str(T), budget, {'one_cell': failing[0]})
    return Certificate.passed('fair', str(T), budget, {X.label(a): 'divisible' for a in divisible})


def _validate_modification(M, budget):
    first = M.source[0]
    X, Y = first.source.source, first.codomain
    budget = budget or X.budget
    report = Report(f'modification {M}', budget)
    failures = [X.label(a) for a in modification_failures(M, budget)]
    for label in failures:
        report.add('modification', label)
    if failures:
        report.flag('valid', Certificate.failed('valid', str(M), budget, {'one_cell': failures[0]}))
        return report
    report.flag('valid', Certificate.passed('valid', str(M), budget))
    bad = [str(x) for x, cell in sorted(M.comp0.items(), key=lambda item: str(item[0]))
           if not _full_divisible(Y, cell, budget)]
    if bad:
        report.flag('divisible', Certificate.failed('divisible', str(M), budget, {'zero_cell': bad[0]}))
    else:
        report.flag('divisible', Certificate.passed('divisible', str(M), budget))
    return report


def identity_transfor(f, family=None):
    """
    Тождественная oplax-трансформация f => f

    σ_x - тензорная единица на f(x), σ_a = cut(r_{f(a)}, 1, l⁻¹_{f(a)}, 1).
    Для структур без семейства свидетелей берется первая клетка нужной границы.

    Raises:
        ConstructionError: Если у цели нет тензорных единиц
    """
    X, Y = f.source, f.target
    units = {x: u for x, (u, _) in find_tensor_units(Y).items()}
    comp0, comp1 = {}, {}
    try:
        for x in X.zero_cells():
            comp0[x] = units[f.zero(x)]
        for a in X.one_cells():
            fa = f.one(a)
            if family is not None:
                comp1[a] = Y.cut(family.right[fa], 1, invert2(Y, family.left[fa]), 1, strict=False)
            else:
                comp1[a] = Y.hom((fa, comp0[X.tgt(a)]), (comp0[X.src(a)], fa))[0]
    except (KeyError, IndexError, NotDivisible) as exc:
        raise ConstructionError(f'Нет тождественной трансформации для {f.name}: {exc}') from exc
    return Transfor(TRANSFOR_OPLAX, f, f, comp0, comp1, name=f'id({f.name})')


def enumerate_morphisms(X, Y, budget=None, max_morphisms=DEFAULT_MAX_MORPHISMS):
    """
    Все морфизмы X -> Y в пределах бюджета

    Перебор 0-клеток, затем 1-клеток, затем 2-клеток с отсечением
    по каждой композиции, все три клетки которой уже назначены.

    Raises:
        BudgetExceeded: Если морфизмов больше max_morphisms
    """
    budget = budget or X.budget
    cells = X.all_cells(budget)
    index = {cell: k for k, cell in enumerate(cells)}
    checks = {}
    for t in cells:
        for s in cells:
            for interval_t, interval_s in merge_intervals(X, t, s):
                try:
                    r = X.merge(t, interval_t, s, interval_s)
                except (BudgetExceeded, ConstructionError, IllegalMerge):
                    continue
                if r not in index:
                    continue
                last = max(index[t], index[s], index[r])
                checks.setdefault(last, []).append((t, interval_t, s, interval_s, r))
    zeros, ones = list(X.zero_cells()), sorted(X.one_cells(), key=X.label)
    targets1 = sorted(Y.one_cells(), key=Y.label)
    found = []
    for images0 in product(sorted(Y.zero_cells(), key=str), repeat=len(zeros)):
        map0 = dict(zip(zeros, images0))
        options = [
            [b for b in targets1 if Y.src(b) == map0[X.src(a)] and Y.tgt(b) == map0[X.tgt(a)]]
            for a in ones
        ]
        for images1 in product(*options):
            map1 = dict(zip(ones, images1))
            for map2 in _assign_cells(X, Y, cells, map1, checks):
                found.append(Morphism(X, Y, map0, map1, map2, name=f'm{len(found)}'))
                if len(found) > max_morphisms:
                    raise BudgetExceeded(f'Больше {max_morphisms} морфизмов {X.name} -> {Y.name}')
    logger.info(f'Найдено {len(found)} морфизмов {X.name} -> {Y.name}')
    return found


def _assign_cells(X, Y, cells, map1, checks):
    assigned = {}

    def image(seq):
        return tuple(map1[a] for a in seq)

    def consistent(k):
        for t, interval_t, s, interval_s, r in checks.get(k, []):
            try:
                merged = Y.merge(assigned[t], interval_t, assigned[s], interval_s, strict=False)
            except (IllegalMerge, ConstructionError):
                return False
            if merged != assigned[r]:
                return False
        return True

    def search(k):
        if k == len(cells):
            yield dict(assigned)
            return
        cell = cells[k]
        for candidate in Y.hom(image(cell.ins), image(cell.outs)):
            assigned[cell] = candidate
            if consistent(k):
                yield from search(k + 1)
            del assigned[cell]

    yield from search(0)


class HomObject(BaseStructure):
    """
    Merge-бикатегория [X, Y]

    0-клетки - морфизмы, 1-клетки - oplax-трансформации,
    2-клетки - модификации; слияния и единицы поточечные в Y.
    """

    def __init__(self, X, Y, budget=None, max_morphisms=DEFAULT_MAX_MORPHISMS, name=None):
        super().__init__(name or f'[{X.name},{Y.name}]', budget or X.budget.meet(Y.budget))
        self.X, self.Y = X, Y
        self.morphisms = enumerate_morphisms(X, Y, self.budget, max_morphisms)
        self.one_object = len(self.morphisms) == 1
        self._transfors = None

    def zero_cells(self):
        return tuple(self.morphisms)

    def one_cells(self):
        if self._transfors is None:
            self._transfors = sorted(
                (T for f in self.morphisms for g in self.morphisms for T in self._transfors_between(f, g)),
                key=str,
            )
        return tuple(self._transfors)

    def _transfors_between(self, f, g):
        X, Y = self.X, self.Y
        zeros = sorted(X.zero_cells(), key=str)
        ones = sorted(X.one_cells(), key=X.label)
        options0 = [[b for b in Y.one_cells() if Y.src(b) == f.zero(x) and Y.tgt(b) == g.zero(x)] for x in zeros]
        for images0 in product(*options0):
            comp0 = dict(zip(zeros, images0))
            options1 = [
                Y.hom((f.one(a), comp0[X.tgt(a)]), (comp0[X.src(a)], g.one(a)))
                for a in ones
            ]
            for images1 in product(*options1):
                T = Transfor(TRANSFOR_OPLAX, f, g, comp0, dict(zip(ones, images1)))
                if next(oplax_naturality_failures(T, self.budget), None) is None:
                    yield T

    def src(self, a):
        return a.source

    def tgt(self, a):
        return a.target

    def label(self, item):
        return str(item)

    def hom(self, ins, outs):
        ins, outs = tuple(ins), tuple(outs)
        if not ins or not outs or not (self.composable(ins) and self.composable(outs)):
            return []
        if ins[0].source != outs[0].source or ins[-1].target != outs[-1].target:
            return []
        zeros = sorted(self.X.zero_cells(), key=str)
        options = [
            self.Y.hom(tuple(T.comp0[x] for T in ins), tuple(T.comp0[x] for T in outs))
            for x in zeros
        ]
        found = []
        for images in product(*options):
            M = Transfor(TRANSFOR_MODIFICATION, ins, outs, dict(zip(zeros, images)))
            if next(modification_failures(M, self.budget), None) is None:
                found.append(Cell(ins, outs, M))
        return found

    def _compose(self, t, interval_t, s, interval_s, case, ins, outs):
        comp0 = {}
        for x, component in t.core.comp0.items():
            comp0[x] = self.Y.merge(component, interval_t, s.core.comp0[x], interval_s, strict=False)
        return Cell(ins, outs, Transfor(TRANSFOR_MODIFICATION, ins, outs, comp0))

    def unit_on(self, seq):
        seq = tuple(seq)
        comp0 = {}
        for x in self.X.zero_cells():
            unit = self.Y.unit_on(tuple(T.comp0[x] for T in seq))
            if unit is None:
                return None
            comp0[x] = unit
        M = Transfor(TRANSFOR_MODIFICATION, seq, seq, comp0)
        return Cell(seq, seq, M)

    def cell_label(self, cell):
        return str(cell.core)


def hom_object(X, Y, budget=None, max_morphisms=DEFAULT_MAX_MORPHISMS):
    """
    Строит [X, Y]

    Raises:
        BudgetExceeded: Если перечисление морфизмов превышает max_morphisms
    """
    return HomObject(X, Y, budget, max_morphisms)


def is_equivalence_1cell(T, budget=None):
    """
    Критерий обратной пары, поточечно

    Для каждой 0-клетки x ищется τ_x: g(x) -> f(x) с обратимыми
    клетками (σ_x, τ_x) -> (1_{f(x)}) и (τ_x, σ_x) -> (1_{g(x)}).

    Returns:
        Certificate
    """
    f = T.source
    X, Y = f.source, f.target
    budget = budget or X.budget
    units = {x: u for x, (u, _) in find_tensor_units(Y, budget).items()}
    witnesses = {}
    for x in sorted(X.zero_cells(), key=str):
        sigma = T.comp0[x]
        found = None
        for tau in sorted(Y.one_cells(), key=Y.label):
            if Y.src(tau) != Y.tgt(sigma) or Y.tgt(tau) != Y.src(sigma):
                continue
            if _has_invertible(Y, (sigma, tau), units.get(Y.src(sigma))) and \
                    _has_invertible(Y, (tau, sigma), units.get(Y.tgt(sigma))):
                found = tau
                break
        if found is None:
            return Certificate.failed('equivalence_1cell', str(T), budget, {'zero_cell': x}, witnesses)
        witnesses[str(x)] = Y.label(found)
    return Certificate.passed('equivalence_1cell', str(T), budget, witnesses)


def _has_invertible(Y, pair, unit):
    if unit is None:
        return False
    for cell in Y.hom(pair, (unit,)):
        try:
            invert2(Y, cell)
            return True
        except NotDivisible:
            continue
    return False


def same_morphism(f, g, budget=None):
    """Поточечное совпадение морфизмов на всех клетках в пределах бюджета"""
    X = f.source
    if any(f.zero(x) != g.zero(x) for x in X.zero_cells()):
        return False
    if any(f.one(a) != g.one(a) for a in X.one_cells()):
        return False
    return all(f.cell(p) == g.cell(p) for p in X.all_cells(budget or X.budget))


@dataclass
class EquivalenceData:
    """
    Данные эквивалентности

    Attributes:
        f: X -> Y
        g: Y -> X
        eta: oplax id_X => g∘f
        eps: oplax id_Y => f∘g
    """

    f: object
    g: object
    eta: object
    eps: object


def verify_equivalence(E, budget=None):
    """
    Эквивалентность выполнена, если η: id_X => g∘f и ε: id_Y => f∘g -
    псевдоестественные эквивалентности

    Returns:
        Certificate
    """
    subject = f'{E.f.name}~{E.g.name}'
    shown = budget or E.f.source.budget
    witnesses = {}
    for name, T in (('eta', E.eta), ('eps', E.eps)):
        report = validate_transfor(T, budget or T.source.source.budget)
        verdict = report.flags.get('pseudo_equivalence')
        if verdict is None or not verdict.holds:
            failing = verdict.counterexample if verdict is not None else report.flags['valid'].counterexample
            return Certificate.failed('equivalence', subject, shown, {'transfor': name, **failing}, witnesses)
        witnesses[name] = 'pseudo_equivalence'
    for name, T, first, second in (('eta', E.eta, E.f, E.g), ('eps', E.eps, E.g, E.f)):
        if not same_morphism(T.source, identity_morphism(first.source), budget):
            return Certificate.failed('equivalence', subject, shown, {'transfor': name, 'reason': 'source'}, witnesses)
        if not same_morphism(T.target, compose_morphisms(first, second), budget):
            return Certificate.failed('equivalence', subject, shown, {'transfor': name, 'reason': 'target'}, witnesses)
    return Certificate.passed('equivalence', subject, shown, witnesses)
