"""
Сервис полустрогификации

Отвечает за:
- T-алгебру β = M(α) ∘ ν_I ∘ M(σ) на M(X) и проверку ее законов
- Конвейер semi_strictify: Y = M(X), эквивалентность ζ: X -> Y
  с явными g, η и ε
- Проверку строгой ассоциативности результата
"""

import logging
from dataclasses import dataclass

from structures.constants import SIDE_OUTPUT, TRANSFOR_OPLAX
from structures.exceptions import ConstructionError, DivisionError, IllegalMerge, NotDivisible
from structures.services.certificates import Certificate, Report
from structures.services.divisibility import divide
from structures.services.extraction import choose, comb_tensors
from structures.services.hom_object import EquivalenceData, Transfor, identity_transfor, verify_equivalence
from structures.services.inflate import eta_inflate, i_algebra_from_choices, inflate, inflate_map, sample
from structures.services.merge_monad import (
    MO,
    composite_monad,
    merge_map,
    merge_monad,
    nu_merge,
    sigma_law,
    zeta_merge,
)
from structures.services.morphisms import Morphism, compose_morphisms, identity_morphism
from structures.services.polybicat import Cell
from structures.services.units import invert2, is_seq_unit

logger = logging.getLogger(__name__)


@dataclass
class TAlgebraData:
    """
    T-алгебра на M(X)

    Attributes:
        carrier: M(X)
        structure_map: β: T(M(X)) -> M(X)
        report: Законы алгебры на выборке
    """

    carrier: object
    structure_map: object
    report: object


@dataclass
class StrictificationResult:
    """Итог полустрогификации: Y = M(X) и данные эквивалентности"""

    Y: object
    beta: object
    zeta: object
    g: object
    eta: object
    eps: object
    certificate: object


def t_algebra_on_merge(alpha, MX=None, budget=None, sample_size=0, check_multiplication=False):
    """
    β = M(α) ∘ ν_{I X} ∘ M(σ_X)

    Законы: β∘η̃ = id на выборке клеток M(X) и, по запросу,
    β∘T(β) = β∘μ̃ на выборке клеток T(T(M(X))).

    Returns:
        TAlgebraData
    """
    IX, X = alpha.source, alpha.target
    budget = budget or X.budget
    MX = MX or merge_monad(X, budget)
    IMX = inflate(MX, budget)
    TMX = merge_monad(IMX, budget)
    MIX = merge_monad(IX, budget)
    MMIX = merge_monad(MIX, budget)
    beta = compose_morphisms(
        compose_morphisms(merge_map(sigma_law(IMX, MIX), TMX, MMIX), nu_merge(MMIX, MIX)),
        merge_map(alpha, MIX, MX),
    )
    beta.name = f'beta({X.name})'
    report = Report(f't-algebra {MX.name}', budget)
    unit = compose_morphisms(eta_inflate(MX, IMX), zeta_merge(IMX, TMX))
    cells = MX.all_cells(budget)
    checked = sample(cells, sample_size)
    for p in checked:
        try:
            if beta.cell(unit.cell(p)) != p:
                report.add('algebra_unit', MX.cell_label(p))
        except ConstructionError as exc:
            report.add('partial', MX.cell_label(p), scheme='algebra_unit', reason=exc)
    report.meta['algebra_unit.coverage'] = f'{len(checked)}/{len(cells)}'
    if check_multiplication:
        monad = composite_monad(MX, budget, with_multiplication=True)
        ITMX = inflate(TMX, budget)
        TTMX = merge_monad(ITMX, budget)
        lifted = merge_map(inflate_map(beta, ITMX, IMX), TTMX, TMX)
        cells = TTMX.all_cells(budget)
        checked = sample(cells, sample_size)
        for p in checked:
            try:
                if beta.cell(lifted.cell(p)) != beta.cell(monad.multiplication.cell(p)):
                    report.add('algebra_mult', TTMX.cell_label(p))
            except ConstructionError as exc:
                report.add('partial', TTMX.cell_label(p), scheme='algebra_mult', reason=exc)
        report.meta['algebra_mult.coverage'] = f'{len(checked)}/{len(cells)}'
    logger.info(f'{MX.name}: T-алгебра, {len(report.findings)} нарушений')
    return TAlgebraData(MX, beta, report)


def _blocks_merge(X, core, blocks_in, blocks_out, choices):
    """Заменяет блоки входов на L(Γ_i) через T_Γ⁻¹, блоки выходов - на L(Δ_j) через T_Δ"""
    bounds, start = [], 1
    for block in blocks_out:
        bounds.append((start, start + len(block) - 1))
        start += len(block)
    for block, (first, last) in reversed(list(zip(blocks_out, bounds))):
        _, tensor = comb_tensors(X, choices, block)
        core = X.merge(core, (first, last), tensor, (1, len(block)), strict=False)
    bounds, start = [], 1
    for block in blocks_in:
        bounds.append((start, start + len(block) - 1))
        start += len(block)
    for block, (first, last) in reversed(list(zip(blocks_in, bounds))):
        _, tensor = comb_tensors(X, choices, block)
        back = invert2(X, tensor)
        core = X.merge(back, (1, len(block)), core, (first, last), strict=False)
    return core


def strict_inverse(X, MX, choices):
    """
    g: M(X) -> X

    ⟨Γ⟩ ↦ L(Γ); клетка над p переходит в p с блоками, свернутыми
    выбранными тензорами.
    """

    def cell(p):
        try:
            return _blocks_merge(X, p.core, [b.seq for b in p.ins], [b.seq for b in p.outs], choices)
        except (IllegalMerge, NotDivisible, KeyError) as exc:
            raise ConstructionError(f'g не определен на {MX.cell_label(p)}: {exc}') from exc

    return Morphism(
        MX, X,
        {x: x for x in MX.zero_cells()},
        {a: comb_tensors(X, choices, a.seq)[0] for a in MX.one_cells()},
        cell,
        name=f'g({X.name})',
    )


def merge_counit(X, MX, g, zeta, choices):
    """
    ε: id_{M(X)} => ζ∘g

    ε_x = ⟨1_x⟩, ε_⟨Γ⟩ - клетка над cut(cut(r_{Γ_k}, 1, T_Γ, k), 1, l⁻¹_{L(Γ)}, 1)
    """
    family = choices.family
    comp0 = {x: MO((family.unit1[x],)) for x in MX.zero_cells()}
    comp1 = {}
    for a in MX.one_cells():
        seq = a.seq
        value, tensor = comb_tensors(X, choices, seq)
        core = X.cut(family.right[seq[-1]], 1, tensor, len(seq), strict=False)
        core = X.cut(core, 1, invert2(X, family.left[value]), 1, strict=False)
        x, y = MX.src(a), MX.tgt(a)
        comp1[a] = Cell((a, comp0[y]), (comp0[x], MO((value,))), core)
    target = compose_morphisms(g, zeta)
    return Transfor(TRANSFOR_OPLAX, identity_morphism(MX), target, comp0, comp1, name=f'eps({X.name})')


def semi_strictify(X, budget=None, choices=None, sample_size=0):
    """
    Полустрогификация представимой merge-бикатегории

    Returns:
        StrictificationResult

    Raises:
        ConstructionError: Если X не представима или конвейер не удался
    """
    budget = budget or X.budget
    choices = choices or choose(X, budget)
    IX = inflate(X, budget)
    alpha = i_algebra_from_choices(X, choices.family, IX)
    MX = merge_monad(X, budget)
    beta = t_algebra_on_merge(alpha, MX, budget, sample_size)
    zeta = zeta_merge(X, MX)
    try:
        g = strict_inverse(X, MX, choices)
        eps = merge_counit(X, MX, g, zeta, choices)
    except (IllegalMerge, NotDivisible, KeyError) as exc:
        logger.error(f'{X.name}: построение ε не удалось: {exc}')
        raise ConstructionError(f'{X.name}: нет данных эквивалентности: {exc}') from exc
    eta = identity_transfor(identity_morphism(X), choices.family)
    certificate = verify_equivalence(EquivalenceData(zeta, g, eta, eps), budget)
    logger.info(f'{X.name}: полустрогификация, эквивалентность {certificate.verdict}')
    return StrictificationResult(MX, beta, zeta, g, eta, eps, certificate)


def _associator(Y, a, b, c):
    ab, t_ab = Y.chosen_tensor((a, b))
    bc, t_bc = Y.chosen_tensor((b, c))
    _, t_ab_c = Y.chosen_tensor((ab, c))
    _, t_a_bc = Y.chosen_tensor((a, bc))
    left = Y.merge(t_ab, (1, 1), t_ab_c, (1, 1), strict=False)
    right = Y.merge(t_bc, (1, 1), t_a_bc, (2, 2), strict=False)
    return divide(Y, left, SIDE_OUTPUT, 1, right)


def verify_strict_associativity(Y, budget=None, family=None):
    """
    (a⊗b)⊗c = a⊗(b⊗c) буквально и каждый ассоциатор - единица

    Returns:
        Report: Флаг strict_associativity; meta содержит число троек
        и, при заданном family, число 1-клеток a с ⟨1_x⟩⊗a ≠ a
    """
    budget = budget or Y.budget
    report = Report(f'strict associativity {Y.name}', budget)
    ones = sorted(Y.one_cells(), key=Y.label)
    triples = [
        (a, b, c) for a in ones for b in ones for c in ones
        if Y.tgt(a) == Y.src(b) and Y.tgt(b) == Y.src(c)
        and Y.weight(a) + Y.weight(b) + Y.weight(c) <= budget.max_seq_len
    ]
    for a, b, c in triples:
        subject = f'{a},{b},{c}'
        left = Y.chosen_tensor((Y.chosen_tensor((a, b))[0], c))[0]
        right = Y.chosen_tensor((a, Y.chosen_tensor((b, c))[0]))[0]
        if left != right:
            report.add('tensor_assoc', subject, left=left, right=right)
            continue
        try:
            associator = _associator(Y, a, b, c)
        except (DivisionError, IllegalMerge) as exc:
            report.add('associator', subject, reason=exc)
            continue
        if not is_seq_unit(Y, associator, budget).holds:
            report.add('associator_unit', subject, cell=Y.cell_label(associator))
    report.meta['triples'] = len(triples)
    if family is not None:
        report.meta['unitors.non_unit'] = sum(
            1 for a in ones
            if Y.chosen_tensor((MO((family.unit1[Y.src(a)],)), a))[0] != a
        )
    if report.findings:
        report.flag('strict_associativity', Certificate.failed(
            'strict_associativity', Y.name, budget, {'finding': report.findings[0].subject}))
    else:
        report.flag('strict_associativity', Certificate.passed(
            'strict_associativity', Y.name, budget, {'triples': len(triples)}))
    return report
