"""
Реестр встроенных фикстур

Содержит:
- b4: тонкая поликатегория булевой алгебры {0, p, ~p, 1}
- x2: тонкая merge-бикатегория четности над 1-клетками {0, 1}
- x2m: мультикатегория четности (один выход)
- yn: мультикатегория натуральных чисел, обрезанная до значений <= 6 и арности <= 4
- s1: мультикатегория с единственной 1-клеткой a
- zg: табличная merge-бикатегория ∫ 2-группы Z/2 с нетривиальным коциклом
- z2: сама 2-группа Z/2 как конечная бикатегория
"""

import logging

from django.conf import settings

from structures.constants import FIXTURE_NAMES, KIND_TENSOR, YN_ARITY_CAP, YN_VALUE_CAP
from structures.exceptions import StructureParseError
from structures.services.bicat import z2_two_group
from structures.services.groth import groth
from structures.services.polybicat import TabularStructure, ThinStructure
from structures.utils import ArityBudget

logger = logging.getLogger(__name__)

POINT = '*'

# элементы булевой алгебры как множества атомов
BOOLEAN_ATOMS = {
    '0': frozenset(),
    'p': frozenset({'p'}),
    '~p': frozenset({'q'}),
    '1': frozenset({'p', 'q'}),
}


def default_budget():
    return ArityBudget.parse(settings.POLYWEAVE_CONFIG['DEFAULT_BUDGET'])


def _endo(labels):
    return {label: (POINT, POINT) for label in labels}


def _boolean_holds(ins, outs):
    meet = frozenset.intersection(*(BOOLEAN_ATOMS[a] for a in ins))
    join = frozenset.union(*(BOOLEAN_ATOMS[b] for b in outs))
    return meet <= join


def _parity_holds(ins, outs):
    return sum(int(a) for a in ins) % 2 == sum(int(b) for b in outs) % 2


def _naturals_holds(ins, outs):
    total, value = sum(int(a) for a in ins), int(outs[0])
    return len(ins) <= YN_ARITY_CAP and total >= value and (total - value) % 2 == 0


class CappedThinStructure(ThinStructure):
    """Тонкая структура с потолком значений: тензоры выше потолка отсутствуют"""

    def __init__(self, *args, value_cap, **kwargs):
        super().__init__(*args, **kwargs)
        self.value_cap = value_cap

    def beyond_cap(self, kind, a, b):
        return kind == KIND_TENSOR and int(a) + int(b) > self.value_cap


def build_b4(budget):
    return ThinStructure('B4', [POINT], _endo(BOOLEAN_ATOMS), _boolean_holds, budget, allows_intervals=False)


def build_x2(budget):
    return ThinStructure('X2', [POINT], _endo(('0', '1')), _parity_holds, budget)


def build_x2m(budget):
    return ThinStructure('X2m', [POINT], _endo(('0', '1')), _parity_holds, budget,
                         allows_intervals=False, multi=True)


def build_yn(budget):
    labels = [str(k) for k in range(YN_VALUE_CAP + 1)]
    return CappedThinStructure('YN', [POINT], _endo(labels), _naturals_holds, budget,
                               allows_intervals=False, multi=True, value_cap=YN_VALUE_CAP)


def build_s1(budget):
    return ThinStructure('S1', [POINT], _endo(('a',)), lambda ins, outs: True, budget,
                         allows_intervals=False, multi=True)


def build_z2(budget=None):
    return z2_two_group()


def build_zg(budget):
    return TabularStructure.from_structure(groth(z2_two_group(), budget), budget, name='ZG')


BUILDERS = {
    'b4': build_b4,
    'x2': build_x2,
    'x2m': build_x2m,
    'yn': build_yn,
    's1': build_s1,
    'zg': build_zg,
    'z2': build_z2,
}


def load_fixture(name, budget=None):
    """
    Загружает встроенную фикстуру по имени

    Args:
        name: Одно из FIXTURE_NAMES
        budget: ArityBudget (по умолчанию DEFAULT_BUDGET из настроек)

    Raises:
        StructureParseError: Неизвестное имя фикстуры
    """
    key = str(name).lower()
    if key not in FIXTURE_NAMES:
        raise StructureParseError(f'Неизвестная фикстура {name!r}; доступны {", ".join(FIXTURE_NAMES)}', 'fixture')
    budget = budget or default_budget()
    logger.debug(f'Загрузка фикстуры {key} при бюджете {budget}')
    return BUILDERS[key](budget)
