"""
Сервис извлечения бикатегорий

Отвечает за:
- Выбор тензоров, единиц и когерентных свидетелей
- Извлечение бикатегории из представимой структуры
- Извлечение функтора из тензорно строгого морфизма
- Извлечение линейной бикатегории (тензор, пар и дистрибуторы)
- Сравнение структуры с ∫ извлеченной бикатегории
"""

import logging
from dataclasses import dataclass, field

from structures.constants import DUAL_CO, KIND_PAR, KIND_TENSOR, SIDE_INPUT, SIDE_OUTPUT
from structures.exceptions import ConstructionError, DivisionError, IllegalMerge, NotDivisible
from structures.services.bicat import FiniteBicategory, check_bicategory_axioms
from structures.services.certificates import Report
from structures.services.coherence import coherentize_witnesses, find_tensor_units, raw_witnesses
from structures.services.divisibility import divide
from structures.services.hom_object import validate_transfor
from structures.services.morphisms import Morphism
from structures.services.polybicat import Cell, dual
from structures.services.representability import representations
from structures.services.units import inverse2

logger = logging.getLogger(__name__)


@dataclass
class ExtractionChoices:
    """
    Выбор структурных данных для извлечения

    Attributes:
        tensors: (a, b) -> (a⊗b, t_{a,b})
        units: 0-клетка -> тензорная единица
        family: Когерентное семейство свидетелей единичности
        pars: (a, b) -> (a⅋b, π_{a,b}), если структура пар-представима
    """

    tensors: dict
    units: dict
    family: object
    pars: dict = field(default_factory=dict)


def choose(structure, budget=None, with_pars=False):
    """
    Выбирает тензоры, единицы и когерентизированных свидетелей

    Raises:
        ConstructionError: Если структура не представима в пределах бюджета
    """
    budget = budget or structure.budget
    tensors = representations(structure, KIND_TENSOR, budget)
    if not tensors.holds:
        raise ConstructionError(f'{structure.name}: нет тензора для {tensors.counterexample}')
    units = find_tensor_units(structure, budget)
    family = coherentize_witnesses(structure, raw_witnesses(structure, budget, units))
    pars = {}
    if with_pars:
        found = representations(structure, KIND_PAR, budget)
        if not found.holds:
            raise ConstructionError(f'{structure.name}: нет пара для {found.counterexample}')
        pars = found.data['table']
    return ExtractionChoices(dict(tensors.data['table']), {x: u for x, (u, _) in units.items()}, family, pars)


def _labeler(structure):
    def label(item):
        return structure.cell_label(item) if isinstance(item, Cell) else structure.label(item)
    return label


def _cut(structure, t, j, s, i):
    return structure.cut(t, j, s, i, strict=False)


def extract_bicategory(structure, choices=None, budget=None, name=None):
    """
    Бикатегория на глобулярной части представимой структуры

    Вертикальная композиция - cut по 1,1; p⊗q, α, λ, ρ получаются
    единственными решениями делений на выбранные тензоры.

    Returns:
        FiniteBicategory

    Raises:
        ConstructionError: Если деление не имеет единственного решения
    """
    X = structure
    choices = choices or choose(X, budget)
    tensors = choices.tensors
    ones = sorted(X.one_cells(), key=X.label)
    two_cells = {p: (a, b) for a in ones for b in ones for p in X.hom((a,), (b,))}
    try:
        vcomp = {
            (p, q): _cut(X, p, 1, q, 1)
            for p, (_, b) in two_cells.items() for q, (c, _) in two_cells.items() if b == c
        }
        hcomp2 = {}
        for p, (a, c) in two_cells.items():
            for q, (b, d) in two_cells.items():
                if X.tgt(a) != X.src(b):
                    continue
                target = _cut(X, q, 1, _cut(X, p, 1, tensors[(c, d)][1], 1), 2)
                hcomp2[(p, q)] = divide(X, tensors[(a, b)][1], SIDE_OUTPUT, 1, target)
        assoc = {}
        for a in ones:
            for b in ones:
                for c in ones:
                    if X.tgt(a) != X.src(b) or X.tgt(b) != X.src(c):
                        continue
                    ab, bc = tensors[(a, b)][0], tensors[(b, c)][0]
                    divisor = _cut(X, tensors[(a, b)][1], 1, tensors[(ab, c)][1], 1)
                    target = _cut(X, tensors[(b, c)][1], 1, tensors[(a, bc)][1], 2)
                    assoc[(a, b, c)] = divide(X, divisor, SIDE_OUTPUT, 1, target)
        lunit, runit = {}, {}
        for a in ones:
            left_unit, right_unit = choices.units[X.src(a)], choices.units[X.tgt(a)]
            lunit[a] = divide(X, tensors[(left_unit, a)][1], SIDE_OUTPUT, 1, choices.family.left[a])
            runit[a] = divide(X, tensors[(a, right_unit)][1], SIDE_OUTPUT, 1, choices.family.right[a])
    except (DivisionError, IllegalMerge, KeyError) as exc:
        logger.error(f'{X.name}: извлечение бикатегории не удалось: {exc}')
        raise ConstructionError(f'Некорректный выбор для извлечения из {X.name}: {exc}') from exc
    bicategory = FiniteBicategory(
        name or f'G({X.name})',
        X.zero_cells(),
        {a: (X.src(a), X.tgt(a)) for a in ones},
        two_cells,
        vcomp,
        {a: X.unit_on((a,)) for a in ones},
        {key: value[0] for key, value in tensors.items()},
        hcomp2,
        dict(choices.units),
        assoc,
        lunit,
        runit,
        labeler=_labeler(X),
    )
    logger.info(f'Извлечена {bicategory!r}')
    return bicategory


@dataclass
class FunctorData:
    """
    Функтор между извлеченными бикатегориями

    Attributes:
        morphism: Исходный морфизм структур
        source, target: FiniteBicategory
        comp2: (a, b) -> f_{a,b}: f(a)⊗f(b) -> f(a⊗b)
        unitc: 0-клетка -> f_x: 1_{f(x)} -> f(1_x)
    """

    morphism: object
    source: object
    target: object
    comp2: dict
    unitc: dict


def extract_functor(f, source_choices=None, target_choices=None, budget=None):
    """
    Функтор по тензорно строгому морфизму

    Returns:
        tuple: (FunctorData, Report с проверкой шестиугольника и единиц)

    Raises:
        ConstructionError: Если f не тензорно строг
    """
    X, Y = f.source, f.target
    source_choices = source_choices or choose(X, budget)
    target_choices = target_choices or choose(Y, budget)
    GX = extract_bicategory(X, source_choices)
    GY = extract_bicategory(Y, target_choices)
    comp2, unitc = {}, {}
    try:
        for (a, b), (_, t) in source_choices.tensors.items():
            t_image = target_choices.tensors[(f.one(a), f.one(b))][1]
            comp2[(a, b)] = divide(Y, t_image, SIDE_OUTPUT, 1, f.cell(t))
        for x, u in source_choices.units.items():
            fu = f.one(u)
            r_image = target_choices.family.right[fu]
            bar = divide(Y, r_image, SIDE_INPUT, 2, f.cell(source_choices.family.left[u]))
            unitc[x] = inverse2(Y, bar)
    except (DivisionError, NotDivisible, KeyError) as exc:
        logger.error(f'{f.name}: извлечение функтора не удалось: {exc}')
        raise ConstructionError(f'Морфизм {f.name} не тензорно строг: {exc}') from exc
    functor = FunctorData(f, GX, GY, comp2, unitc)
    return functor, check_functor(functor)


def check_functor(functor):
    """Шестиугольник композиции и обе диаграммы единиц"""
    f, GX, GY = functor.morphism, functor.source, functor.target
    report = Report(f'functor {f.name}', None)
    label = GY.label

    def compare(kind, subject, left, right):
        report.count(kind)
        try:
            if left() != right():
                report.add(kind, subject)
        except (ConstructionError, KeyError) as exc:
            report.add('partial', subject, scheme=kind, reason=exc)

    for a, b, c in GX.composable_triples():
        fa, fb, fc = f.one(a), f.one(b), f.one(c)
        ab, bc = GX.tensor1(a, b), GX.tensor1(b, c)
        compare(
            'hexagon', f'{GX.label(a)},{GX.label(b)},{GX.label(c)}',
            lambda: GY.chain(GY.tensor2(functor.comp2[(a, b)], GY.vunit[fc]),
                             functor.comp2[(ab, c)], f.cell(GX.assoc[(a, b, c)])),
            lambda: GY.chain(GY.assoc[(fa, fb, fc)], GY.tensor2(GY.vunit[fa], functor.comp2[(b, c)]),
                             functor.comp2[(a, bc)]),
        )
    for a in GX.sorted_ones():
        x, y = GX.src(a), GX.tgt(a)
        fa = f.one(a)
        compare('left_unit', label(fa),
                lambda: GY.chain(GY.tensor2(functor.unitc[x], GY.vunit[fa]),
                                 functor.comp2[(GX.hunit[x], a)], f.cell(GX.lunit[a])),
                lambda: GY.lunit[fa])
        compare('right_unit', label(fa),
                lambda: GY.chain(GY.tensor2(GY.vunit[fa], functor.unitc[y]),
                                 functor.comp2[(a, GX.hunit[y])], f.cell(GX.runit[a])),
                lambda: GY.runit[fa])
    logger.info(f'{f.name}: функтор, {len(report.findings)} нарушений')
    return report


@dataclass
class LinearBicatData:
    """
    Линейная бикатегория

    Attributes:
        tensor: Бикатегория (⊗, 1)
        par: Бикатегория (⅋, ⊥) на тех же вертикальных данных
        dist_left: (a, b, c) -> δ^L: a⊗(b⅋c) -> (a⊗b)⅋c
        dist_right: (a, b, c) -> δ^R: (a⅋b)⊗c -> a⅋(b⊗c)
    """

    tensor: object
    par: object
    dist_left: dict
    dist_right: dict


def _read_backwards(structure, co_bicategory):
    """Бикатегория co-двойственной структуры, записанная в клетках исходной"""
    B = co_bicategory

    def down(cell):
        return cell.core

    two_cells = {down(p): (b, a) for p, (a, b) in B.two_cells.items()}
    forward = FiniteBicategory(
        f'{structure.name}^par',
        B.zero_cells,
        B.one_cells,
        two_cells,
        {(down(q), down(p)): down(r) for (p, q), r in B.vcomp.items()},
        {a: down(p) for a, p in B.vunit.items()},
        B.hcomp1,
        {(down(p), down(q)): down(r) for (p, q), r in B.hcomp2.items()},
        B.hunit,
        {key: down(p) for key, p in B.assoc.items()},
        {key: down(p) for key, p in B.lunit.items()},
        {key: down(p) for key, p in B.runit.items()},
        labeler=_labeler(structure),
    )
    # структурные клетки co-стороны направлены в обратную сторону
    forward.assoc = {key: forward.inverse(p) for key, p in forward.assoc.items()}
    forward.lunit = {key: forward.inverse(p) for key, p in forward.lunit.items()}
    forward.runit = {key: forward.inverse(p) for key, p in forward.runit.items()}
    return forward


def extract_linear(structure, budget=None):
    """
    Линейная бикатегория представимой поли-бикатегории

    Пар-сторона - извлечение из co-двойственной структуры, прочитанное
    в обратную сторону. Дистрибуторы - решения делений на тензоры и пары.

    Returns:
        tuple: (LinearBicatData, Report проверок обеих бикатегорий и форм δ)
    """
    X = structure
    budget = budget or X.budget
    choices = choose(X, budget, with_pars=True)
    tensor = extract_bicategory(X, choices)
    co = dual(X, DUAL_CO)
    par = _read_backwards(X, extract_bicategory(co, choose(co, budget)))
    tensors, pars = choices.tensors, choices.pars
    dist_left, dist_right = {}, {}
    report = Report(f'linear {X.name}', budget)
    report.extend(check_bicategory_axioms(tensor), prefix='tensor.')
    report.extend(check_bicategory_axioms(par), prefix='par.')
    try:
        for a, b, c in tensor.composable_triples():
            b_par_c, pi_bc = pars[(b, c)]
            d = _cut(X, pi_bc, 1, tensors[(a, b)][1], 2)
            y = divide(X, tensors[(a, b_par_c)][1], SIDE_OUTPUT, 1, d)
            ab = tensors[(a, b)][0]
            dist_left[(a, b, c)] = divide(X, pars[(ab, c)][1], SIDE_INPUT, 1, y)
            a_par_b, pi_ab = pars[(a, b)]
            d = _cut(X, pi_ab, 2, tensors[(b, c)][1], 1)
            y = divide(X, tensors[(a_par_b, c)][1], SIDE_OUTPUT, 1, d)
            bc = tensors[(b, c)][0]
            dist_right[(a, b, c)] = divide(X, pars[(a, bc)][1], SIDE_INPUT, 1, y)
    except (DivisionError, IllegalMerge, KeyError) as exc:
        logger.error(f'{X.name}: дистрибуторы не построены: {exc}')
        raise ConstructionError(f'Нет дистрибуторов в {X.name}: {exc}') from exc
    for (a, b, c), cell in dist_left.items():
        report.count('dist_shape')
        expected = ((tensors[(a, pars[(b, c)][0])][0],), (pars[(tensors[(a, b)][0], c)][0],))
        if (cell.ins, cell.outs) != expected:
            report.add('dist_shape', X.cell_label(cell), side='left')
    for (a, b, c), cell in dist_right.items():
        report.count('dist_shape')
        expected = ((tensors[(pars[(a, b)][0], c)][0],), (pars[(a, tensors[(b, c)][0])][0],))
        if (cell.ins, cell.outs) != expected:
            report.add('dist_shape', X.cell_label(cell), side='right')
    logger.info(f'{X.name}: линейная бикатегория, {len(report.findings)} нарушений')
    return LinearBicatData(tensor, par, dist_left, dist_right), report


def comb_tensors(structure, choices, seq):
    """
    Составной тензор T_Γ: (Γ) -> (L(Γ)) по левой гребенке

    T_(a) = единица на a, T_(Γ,a) = cut(T_Γ, 1, t_{L(Γ),a}, 1).

    Returns:
        tuple: (L(Γ), T_Γ)
    """
    seq = tuple(seq)
    value, cell = seq[0], structure.unit_on(seq[:1])
    for a in seq[1:]:
        value, t = choices.tensors[(value, a)]
        cell = _cut(structure, cell, 1, t, 1)
    return value, cell


def comparison_morphisms(structure, groth_structure, choices):
    """
    Взаимно обратные морфизмы X -> ∫G(X) и ∫G(X) -> X

    Клетка p: (Γ)->(Δ) переходит в единственное q: (L(Γ))->(L(Δ)) с
    cut(T_Γ, 1, q, 1) = merge(p, [1,m], T_Δ, [1,m]).

    Returns:
        tuple: (Morphism туда, Morphism обратно)
    """
    X, G = structure, groth_structure

    def forward(p):
        _, t_in = comb_tensors(X, choices, p.ins)
        _, t_out = comb_tensors(X, choices, p.outs)
        m = len(p.outs)
        q = divide(X, t_in, SIDE_OUTPUT, 1, X.merge(p, (1, m), t_out, (1, m), strict=False))
        return Cell(p.ins, p.outs, q)

    def backward(cell):
        _, t_in = comb_tensors(X, choices, cell.ins)
        _, t_out = comb_tensors(X, choices, cell.outs)
        m = len(cell.outs)
        return divide(X, t_out, SIDE_INPUT, (1, m), _cut(X, t_in, 1, cell.core, 1))

    ones = {a: a for a in X.one_cells()}
    zeros = {x: x for x in X.zero_cells()}
    return (
        Morphism(X, G, zeros, ones, forward, name=f'{X.name}->{G.name}'),
        Morphism(G, X, zeros, ones, backward, name=f'{G.name}->{X.name}'),
    )


@dataclass
class OplaxTransferData:
    """
    Oplax-трансформация функторов, полученная из справедливого трансфора

    Attributes:
        transfor: Исходный трансфор σ: f => g
        source, target: FunctorData для f и g
        comp0: 0-клетка -> σ_x
        comp1: 1-клетка a -> σ̂_a: f(a)⊗σ_y -> σ_x⊗g(a)
    """

    transfor: object
    source: object
    target: object
    comp0: dict
    comp1: dict = field(default_factory=dict)


def transfer_oplax(T, source_choices=None, target_choices=None, budget=None):
    """
    Переносит справедливый трансфор между тензорно строгими морфизмами
    в oplax-трансформацию извлеченных функторов

    σ̂_a = divide(t_{f(a),σ_y}, output, 1, merge(σ_a, [1,2], t_{σ_x,g(a)}, [1,2]))

    Returns:
        tuple: (OplaxTransferData, Report)

    Raises:
        ConstructionError: Если трансфор некорректен или несправедлив,
            морфизмы не строги или деление не удалось
    """
    f, g = T.source, T.target
    X, Y = f.source, f.target
    checked = validate_transfor(T, budget)
    for name in ('valid', 'fair'):
        cert = checked.flags.get(name)
        if cert is None or not cert.holds:
            raise ConstructionError(f'Трансфор {T} не прошел проверку {name}')
    source_choices = source_choices or choose(X, budget)
    target_choices = target_choices or choose(Y, budget)
    F, _ = extract_functor(f, source_choices, target_choices, budget)
    G, _ = extract_functor(g, source_choices, target_choices, budget)
    tensors = target_choices.tensors
    comp1 = {}
    try:
        for a in sorted(X.one_cells(), key=X.label):
            sigma_x, sigma_y = T.comp0[X.src(a)], T.comp0[X.tgt(a)]
            fa, ga = f.one(a), g.one(a)
            merged = Y.merge(T.comp1[a], (1, 2), tensors[(sigma_x, ga)][1], (1, 2), strict=False)
            comp1[a] = divide(Y, tensors[(fa, sigma_y)][1], SIDE_OUTPUT, 1, merged)
    except (DivisionError, IllegalMerge, KeyError) as exc:
        raise ConstructionError(f'Перенос {T} не удался: {exc}') from exc
    data = OplaxTransferData(T, F, G, dict(T.comp0), comp1)
    return data, check_oplax_transfer(data)


def restore_oplax(data, target_choices):
    """
    Обратный перенос: σ_a = divide(t_{σ_x,g(a)}, input, [1,2], cut(t_{f(a),σ_y}, 1, σ̂_a, 1))
    """
    f, g = data.transfor.source, data.transfor.target
    X, Y = f.source, f.target
    tensors = target_choices.tensors
    restored = {}
    for a, hat in data.comp1.items():
        sigma_x, sigma_y = data.comp0[X.src(a)], data.comp0[X.tgt(a)]
        merged = Y.cut(tensors[(f.one(a), sigma_y)][1], 1, hat, 1, strict=False)
        restored[a] = divide(Y, tensors[(sigma_x, g.one(a))][1], SIDE_INPUT, (1, 2), merged)
    return restored


def check_oplax_transfer(data):
    """Естественность относительно композиции и единиц"""
    f, g = data.transfor.source, data.transfor.target
    F, G = data.source, data.target
    GX, GY = F.source, F.target
    report = Report(f'oplax {data.transfor}', None)

    def compare(kind, subject, left, right):
        report.count(kind)
        try:
            if left() != right():
                report.add(kind, subject)
        except (ConstructionError, KeyError, NotDivisible) as exc:
            report.add('partial', subject, scheme=kind, reason=exc)

    hat, sigma = data.comp1, data.comp0
    for a, b in GX.composable_pairs():
        x, y, z = GX.src(a), GX.tgt(a), GX.tgt(b)
        fa, fb, ga, gb = f.one(a), f.one(b), g.one(a), g.one(b)
        compare(
            'oplax_composition', f'{GX.label(a)},{GX.label(b)}',
            lambda: GY.chain(GY.tensor2(F.comp2[(a, b)], GY.vunit[sigma[z]]), hat[GX.tensor1(a, b)]),
            lambda: GY.chain(
                GY.assoc[(fa, fb, sigma[z])],
                GY.tensor2(GY.vunit[fa], hat[b]),
                GY.inverse(GY.assoc[(fa, sigma[y], gb)]),
                GY.tensor2(hat[a], GY.vunit[gb]),
                GY.assoc[(sigma[x], ga, gb)],
                GY.tensor2(GY.vunit[sigma[x]], G.comp2[(a, b)]),
            ),
        )
    for x in GX.zero_cells:
        compare(
            'oplax_unit', str(x),
            lambda: GY.chain(GY.tensor2(F.unitc[x], GY.vunit[sigma[x]]), hat[GX.hunit[x]]),
            lambda: GY.chain(GY.lunit[sigma[x]], GY.inverse(GY.runit[sigma[x]]),
                             GY.tensor2(GY.vunit[sigma[x]], G.unitc[x])),
        )
    logger.info(f'{data.transfor}: перенос, {len(report.findings)} нарушений')
    return report
