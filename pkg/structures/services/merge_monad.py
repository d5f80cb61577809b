"""
Сервис монады слияния M и дистрибутивного закона σ

Отвечает за:
- Merge-бикатегорию M(X): 1-клетки - последовательности ⟨Γ⟩,
  2-клетки - клетки X на уплощенных границах
- Отображения монады ζ, ν и функториальность M(f)
- Дистрибутивный закон σ: I∘M -> M∘I и составную монаду T = M∘I
- Проверку законов монад и аксиом дистрибутивного закона на выборках
"""

import logging
from dataclasses import dataclass

from structures.constants import METHOD_EXHAUSTIVE, METHOD_SAMPLED
from structures.exceptions import ConstructionError, IllegalMerge
from structures.services.certificates import Report
from structures.services.inflate import (
    ITEM_CELL,
    ITEM_WIRE,
    eta_inflate,
    inflate,
    inflate_map,
    mu_inflate,
    sample,
)
from structures.services.morphisms import Morphism, compose_morphisms
from structures.services.polybicat import BaseStructure, Cell
from structures.utils import seq_label

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MO:
    """1-клетка ⟨Γ⟩ структуры M(X)"""

    seq: tuple

    def __str__(self):
        return '<' + ','.join(map(str, self.seq)) + '>'


def flatten(seq):
    return tuple(a for block in seq for a in block.seq)


def _blocks(seq):
    """Границы блоков уплощенной последовательности, с единицы"""
    bounds, start = [], 1
    for block in seq:
        bounds.append((start, start + len(block.seq) - 1))
        start += len(block.seq)
    return bounds


class MergeMonadStructure(BaseStructure):
    """
    M(X)

    Слияние: интервалы из блоков переводятся в интервалы уплощенной
    границы, ядра сливаются в X.
    """

    def __init__(self, base, budget=None, name=None):
        super().__init__(name or f'M({base.name})', budget or base.budget)
        self.base = base
        self.inflate_depth = getattr(base, 'inflate_depth', 0)
        self.one_object = base.one_object

    def zero_cells(self):
        return self.base.zero_cells()

    def one_cells(self):
        return tuple(MO(seq) for seq in self.base.sequences(max_weight=self.budget.max_seq_len))

    def src(self, a):
        return self.base.src(a.seq[0])

    def tgt(self, a):
        return self.base.tgt(a.seq[-1])

    def weight(self, a):
        return self.base.seq_weight(a.seq)

    def label(self, item):
        return str(item)

    def hom(self, ins, outs):
        ins, outs = tuple(ins), tuple(outs)
        if not ins or not outs or not (self.composable(ins) and self.composable(outs)):
            return []
        if self.src(ins[0]) != self.src(outs[0]) or self.tgt(ins[-1]) != self.tgt(outs[-1]):
            return []
        # уплощенная граница может выходить за бюджет базы
        return [Cell(ins, outs, p) for p in self.base.hom(flatten(ins), flatten(outs))]

    def _compose(self, t, interval_t, s, interval_s, case, ins, outs):
        bounds_t, bounds_s = _blocks(t.outs), _blocks(s.ins)
        flat_t = (bounds_t[interval_t[0] - 1][0], bounds_t[interval_t[1] - 1][1])
        flat_s = (bounds_s[interval_s[0] - 1][0], bounds_s[interval_s[1] - 1][1])
        core = self.base.merge(t.core, flat_t, s.core, flat_s, strict=False)
        return Cell(ins, outs, core)

    def unit_on(self, seq):
        seq = tuple(seq)
        core = self.base.unit_on(flatten(seq))
        return None if core is None else Cell(seq, seq, core)

    def chosen_tensor(self, seq):
        """⟨Γ_1⟩⊗..⊗⟨Γ_n⟩ = ⟨Γ_1..Γ_n⟩ со свидетелем-единицей"""
        seq = tuple(seq)
        unit = self.base.unit_on(flatten(seq))
        if unit is None:
            return None
        merged = MO(flatten(seq))
        return merged, Cell(seq, (merged,), unit)

    def cell_label(self, cell):
        return f'{seq_label(cell.ins)}->{seq_label(cell.outs)}[{self.base.cell_label(cell.core)}]'


def merge_monad(X, budget=None):
    """Строит M(X)"""
    return MergeMonadStructure(X, budget)


def zeta_merge(X, MX):
    """ζ_X: X -> M(X), a ↦ ⟨a⟩"""
    return Morphism(
        X, MX,
        {x: x for x in X.zero_cells()},
        {a: MO((a,)) for a in X.one_cells()},
        lambda p: Cell(tuple(MO((a,)) for a in p.ins), tuple(MO((b,)) for b in p.outs), p),
        name=f'zeta({X.name})',
    )


def nu_merge(MMX, MX):
    """ν_X: M(M(X)) -> M(X), ⟨⟨Γ_1⟩..⟨Γ_k⟩⟩ ↦ ⟨Γ_1..Γ_k⟩"""

    def one(a):
        return MO(flatten(a.seq))

    return Morphism(
        MMX, MX,
        {x: x for x in MMX.zero_cells()},
        {a: one(a) for a in MMX.one_cells()},
        lambda p: Cell(tuple(map(one, p.ins)), tuple(map(one, p.outs)), p.core.core),
        name=f'nu({MX.base.name})',
    )


def merge_map(f, MX, MY):
    """M(f): M(X) -> M(Y)"""

    def one(a):
        return MO(f.seq(a.seq))

    def cell(p):
        image = f.cell(p.core)
        if image is None:
            return None
        return Cell(tuple(map(one, p.ins)), tuple(map(one, p.outs)), image)

    return Morphism(
        MX, MY,
        {x: f.zero(x) for x in MX.zero_cells()},
        {a: one(a) for a in MX.one_cells()},
        cell,
        name=f'M({f.name})',
    )


def sigma_law(IMX, MIX):
    """
    σ_X: I(M(X)) -> M(I(X))

    ε_x ↦ ⟨ε_x⟩, ⟨Γ⟩ ↦ ⟨Γ⟩; ряд уплощается в ряд I(X),
    провод ⟨Γ⟩ - в провода Γ.
    """
    IX = MIX.base

    def one(a):
        return MO((IX.eps(a.x),)) if IMX.is_eps(a) else MO(a.seq)

    def cell(p):
        row = []
        for kind, value in p.core:
            if kind == ITEM_CELL:
                row.append((ITEM_CELL, value.core))
            else:
                row.extend((ITEM_WIRE, a) for a in value.seq)
        ins, outs = tuple(map(one, p.ins)), tuple(map(one, p.outs))
        return Cell(ins, outs, Cell(flatten(ins), flatten(outs), tuple(row)))

    return Morphism(
        IMX, MIX,
        {x: x for x in IMX.zero_cells()},
        {a: one(a) for a in IMX.one_cells()},
        cell,
        name=f'sigma({IX.base.name})',
    )


@dataclass
class CompositeMonad:
    """
    T = M∘I с единицей η̃ = ζ_I ∘ η и умножением
    μ̃ = M(μ) ∘ ν_{II} ∘ M(σ_I)
    """

    X: object
    IX: object
    TX: object
    unit: object
    multiplication: object = None


def composite_monad(X, budget=None, with_multiplication=False):
    """Строит T(X) = M(I(X)) и η̃; μ̃ строится по запросу, так как требует T(T(X))"""
    budget = budget or X.budget
    IX = inflate(X, budget)
    TX = merge_monad(IX, budget)
    unit = compose_morphisms(eta_inflate(X, IX), zeta_merge(IX, TX))
    monad = CompositeMonad(X, IX, TX, unit)
    if with_multiplication:
        ITX = inflate(TX, budget)
        TTX = merge_monad(ITX, budget)
        IIX = inflate(IX, budget)
        MIIX = merge_monad(IIX, budget)
        step1 = merge_map(sigma_law(ITX, MIIX), TTX, merge_monad(MIIX, budget))
        step2 = nu_merge(step1.target, MIIX)
        step3 = merge_map(mu_inflate(IIX, IX), MIIX, TX)
        monad.multiplication = compose_morphisms(compose_morphisms(step1, step2), step3)
    return monad


def _law(report, name, cells, left, right, label, total):
    coverage = len(cells)
    report.meta[f'{name}.coverage'] = f'{coverage}/{total}'
    report.meta[f'{name}.method'] = METHOD_SAMPLED if coverage < total else METHOD_EXHAUSTIVE
    for p in cells:
        try:
            if left(p) != right(p):
                report.add(name, label(p))
        except (ConstructionError, IllegalMerge, AttributeError) as exc:
            report.add('partial', label(p), scheme=name, reason=exc)


def verify_monad_laws(X, sample_size=0, budget=None):
    """
    Законы монад I, M и четыре аксиомы дистрибутивного закона на выборке

    Args:
        X: Merge-бикатегория
        sample_size: Размер выборки на закон (0 - полный перебор в бюджете)
        budget: Бюджет перечисления доменов

    Returns:
        Report: Находки по законам; meta содержит покрытие каждого закона
    """
    budget = budget or X.budget
    report = Report(f'monad laws {X.name}', budget)
    IX, MX = inflate(X, budget), merge_monad(X, budget)
    IIX, MMX = inflate(IX, budget), merge_monad(MX, budget)
    eta_X, zeta_X = eta_inflate(X, IX), zeta_merge(X, MX)
    mu_X, nu_X = mu_inflate(IIX, IX), nu_merge(MMX, MX)

    def run(name, domain, left, right):
        cells = domain.all_cells(budget)
        _law(report, name, sample(cells, sample_size), left, right, domain.cell_label, len(cells))

    eta_IX, lifted_eta = eta_inflate(IX, IIX), inflate_map(eta_X, IX, IIX)
    zeta_MX, lifted_zeta = zeta_merge(MX, MMX), merge_map(zeta_X, MX, MMX)
    run('inflate_left_unit', IX, lambda p: mu_X.cell(eta_IX.cell(p)), lambda p: p)
    run('inflate_right_unit', IX, lambda p: mu_X.cell(lifted_eta.cell(p)), lambda p: p)
    run('merge_left_unit', MX, lambda p: nu_X.cell(zeta_MX.cell(p)), lambda p: p)
    run('merge_right_unit', MX, lambda p: nu_X.cell(lifted_zeta.cell(p)), lambda p: p)

    IIIX, MMMX = inflate(IIX, budget), merge_monad(MMX, budget)
    mu_IX = mu_inflate(IIIX, IIX)
    run('inflate_assoc', IIIX, lambda p: mu_X.cell(mu_IX.cell(p)),
        lambda p: mu_X.cell(inflate_map(mu_X, IIIX, IIX).cell(p)))
    nu_MX = nu_merge(MMMX, MMX)
    run('merge_assoc', MMMX, lambda p: nu_X.cell(nu_MX.cell(p)),
        lambda p: nu_X.cell(merge_map(nu_X, MMMX, MMX).cell(p)))

    IMX, MIX = inflate(MX, budget), merge_monad(IX, budget)
    sigma_X = sigma_law(IMX, MIX)
    run('sigma_inflate_unit', MX, lambda p: sigma_X.cell(eta_inflate(MX, IMX).cell(p)),
        lambda p: merge_map(eta_X, MX, MIX).cell(p))
    run('sigma_merge_unit', IX, lambda p: sigma_X.cell(inflate_map(zeta_X, IX, IMX).cell(p)),
        lambda p: zeta_merge(IX, MIX).cell(p))

    IIMX = inflate(IMX, budget)
    MIIX = merge_monad(IIX, budget)
    sigma_IX = sigma_law(inflate(MIX, budget), MIIX)
    lifted_sigma = inflate_map(sigma_X, IIMX, inflate(MIX, budget))
    run('sigma_inflate_mult', IIMX, lambda p: sigma_X.cell(mu_inflate(IIMX, IMX).cell(p)),
        lambda p: merge_map(mu_X, MIIX, MIX).cell(sigma_IX.cell(lifted_sigma.cell(p))))

    IMMX = inflate(MMX, budget)
    MIMX = merge_monad(IMX, budget)
    sigma_MX = sigma_law(IMMX, MIMX)
    MMIX = merge_monad(MIX, budget)
    run('sigma_merge_mult', IMMX, lambda p: sigma_X.cell(inflate_map(nu_X, IMMX, IMX).cell(p)),
        lambda p: nu_merge(MMIX, MIX).cell(merge_map(sigma_X, MIMX, MMIX).cell(sigma_MX.cell(p))))
    logger.info(f'{X.name}: законы монад, {len(report.findings)} нарушений')
    return report


def naturality_of_sigma(f, budget=None, sample_size=0):
    """σ_Y ∘ I(M f) = M(I f) ∘ σ_X на выборке"""
    X, Y = f.source, f.target
    budget = budget or X.budget
    report = Report(f'sigma naturality {f.name}', budget)
    MX, MY, IX, IY = merge_monad(X, budget), merge_monad(Y, budget), inflate(X, budget), inflate(Y, budget)
    IMX, IMY = inflate(MX, budget), inflate(MY, budget)
    MIX, MIY = merge_monad(IX, budget), merge_monad(IY, budget)
    sigma_X, sigma_Y = sigma_law(IMX, MIX), sigma_law(IMY, MIY)
    left_map = inflate_map(merge_map(f, MX, MY), IMX, IMY)
    right_map = merge_map(inflate_map(f, IX, IY), MIX, MIY)
    cells = IMX.all_cells(budget)
    _law(report, 'sigma_natural', sample(cells, sample_size),
         lambda p: sigma_Y.cell(left_map.cell(p)), lambda p: right_map.cell(sigma_X.cell(p)),
         IMX.cell_label, len(cells))
    return report
