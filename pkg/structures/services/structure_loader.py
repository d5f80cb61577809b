"""
Сервис загрузки и выгрузки документов структур

Отвечает за:
- Разбор JSON-документа и его валидацию serializer'ами
- Построение структуры, бикатегории, морфизма или трансформации
- Поиск фикстур: сначала каталог FIXTURES_DIR, затем встроенный реестр
- Выгрузку любой конечной структуры в табличный или тонкий документ
- Каноническую сериализацию документа

Методы:
- parse_structure(): байты -> StructureDoc
- load_structure(): имя фикстуры или путь к файлу -> StructureDoc
- dump_structure(): структура -> документ (dict)
- emit_document(): документ -> байты
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from django.conf import settings

from structures.constants import (
    DOC_BICATEGORY,
    DOC_FIXTURE,
    DOC_MORPHISM,
    DOC_TABULAR_MERGE,
    DOC_TABULAR_POLY,
    DOC_THIN_MERGE,
    DOC_THIN_POLY,
    DOC_TRANSFOR,
    FIXTURE_NAMES,
)
from structures.exceptions import StructureParseError
from structures.fixtures import default_budget, load_fixture
from structures.serializers import SERIALIZERS
from structures.services.axioms import merge_intervals
from structures.services.bicat import FiniteBicategory
from structures.services.hom_object import Transfor
from structures.services.morphisms import Morphism
from structures.services.polybicat import TabularStructure, ThinStructure

logger = logging.getLogger(__name__)


@dataclass
class StructureDoc:
    """
    Разобранный документ

    Attributes:
        kind: Вид документа
        name: Имя результата
        budget: ArityBudget документа или переданный явно
        value: Построенный объект
        document: Исходный dict
    """

    kind: str
    name: str
    budget: object
    value: object
    document: dict


def _flatten(errors, prefix=''):
    """Ошибки DRF -> список (путь ключей, сообщение)"""
    if isinstance(errors, dict):
        for key, value in errors.items():
            path = f'{prefix}.{key}' if prefix else str(key)
            yield from _flatten(value, path)
    elif isinstance(errors, list):
        if errors and all(isinstance(item, str) for item in errors):
            yield prefix, str(errors[0])
            return
        for k, value in enumerate(errors):
            if value:
                yield from _flatten(value, f'{prefix}[{k}]')
    else:
        yield prefix, str(errors)


def _validated(data, path=''):
    if not isinstance(data, dict):
        raise StructureParseError('Документ должен быть объектом', path.rstrip('.') or 'root')
    kind = data.get('kind')
    if kind not in SERIALIZERS:
        raise StructureParseError(f'Неизвестный вид документа {kind!r}', f'{path}kind')
    serializer = SERIALIZERS[kind](data=data)
    if not serializer.is_valid():
        position, message = next(_flatten(serializer.errors))
        position = f'{path}{position}'
        logger.warning(f'Документ {kind} не прошел валидацию: {position}: {message}')
        raise StructureParseError(message, position)
    return serializer.validated_data


def parse_structure(data, budget=None):
    """
    Разбирает документ структуры

    Args:
        data: bytes или str с JSON
        budget: ArityBudget, перекрывающий бюджет документа

    Returns:
        StructureDoc

    Raises:
        StructureParseError: Синтаксическая ошибка или нарушение схемы
    """
    if isinstance(data, bytes):
        try:
            data = data.decode('utf-8')
        except UnicodeDecodeError as exc:
            raise StructureParseError(f'Документ не в UTF-8: {exc}', f'byte {exc.start}') from exc
    try:
        document = json.loads(data)
    except json.JSONDecodeError as exc:
        raise StructureParseError(exc.msg, f'line {exc.lineno} col {exc.colno}') from exc
    return _build(document, budget)


def _build(document, budget, path=''):
    attrs = _validated(document, path)
    kind = attrs['kind']
    budget = budget or attrs.get('budget') or default_budget()
    name = attrs.get('name') or attrs.get('fixture') or kind
    builder = BUILDERS[kind]
    value = builder(attrs, name, budget, path)
    logger.debug(f'Построен {kind} {name} при бюджете {budget}')
    return StructureDoc(kind, str(getattr(value, 'name', name)), budget, value, document)


def _thin(attrs, name, budget, path):
    relation = frozenset((tuple(b['ins']), tuple(b['outs'])) for b in attrs['relation'])
    return ThinStructure(
        name,
        attrs['zero_cells'],
        attrs['one_cells'],
        lambda ins, outs: (ins, outs) in relation,
        budget,
        allows_intervals=attrs['kind'] == DOC_THIN_MERGE,
        multi=attrs['multi'],
    )


def _table(attrs):
    return {
        (entry['t'], entry['interval_t'], entry['s'], entry['interval_s']): entry['result']
        for entry in attrs['table']
    }


def _tabular(attrs, name, budget, path):
    cells = {cid: (tuple(b['ins']), tuple(b['outs'])) for cid, b in attrs['cells'].items()}
    units = {tuple(entry['seq']): entry['cell'] for entry in attrs['units']}
    table = _table(attrs)
    if 'source' in attrs:
        base = TabularStructure.from_structure(load_fixture(attrs['source'], budget), budget)
        known = set(base.cells) | set(base.source_cells) | set(cells)
        for k, entry in enumerate(attrs['table']):
            for key in ('t', 's', 'result'):
                if entry[key] not in known:
                    raise StructureParseError(f'Необъявленная 2-клетка {entry[key]!r}', f'{path}table[{k}].{key}')
        return base.overlay(name=name, cells=cells, table=table, units=units)
    return TabularStructure(
        name,
        attrs['zero_cells'],
        attrs['one_cells'],
        cells,
        table,
        budget,
        allows_intervals=attrs['kind'] == DOC_TABULAR_MERGE,
        multi=attrs['multi'],
        units=units,
    )


def _bicategory(attrs, name, budget, path):
    return FiniteBicategory(
        name,
        attrs['zero_cells'],
        attrs['one_cells'],
        {p: tuple(ends) for p, ends in attrs['two_cells'].items()},
        {(p, q): r for p, q, r in attrs['vcomp']},
        attrs['vunit'],
        {(a, b): c for a, b, c in attrs['hcomp1']},
        {(p, q): r for p, q, r in attrs['hcomp2']},
        attrs['hunit'],
        {(a, b, c): p for a, b, c, p in attrs['assoc']},
        attrs['lunit'],
        attrs['runit'],
    )


def _fixture(attrs, name, budget, path):
    return resolve_fixture(attrs['fixture'], budget)


def _structure(reference, budget, path):
    """Вложенный документ или имя фикстуры"""
    if isinstance(reference, str):
        if reference.lower() not in FIXTURE_NAMES:
            raise StructureParseError(f'Неизвестная фикстура {reference!r}', path)
        return resolve_fixture(reference, budget)
    return _build(reference, budget, path + '.').value


def _lookup(items, label_of, label, position):
    for item in items:
        if label_of(item) == label:
            return item
    raise StructureParseError(f'Неизвестная клетка {label!r}', position)


def _morphism(attrs, name, budget, path):
    X = _structure(attrs['source'], budget, f'{path}source')
    Y = _structure(attrs['target'], budget, f'{path}target')
    map0 = {
        _lookup(X.zero_cells(), str, x, f'{path}map0.{x}'): _lookup(Y.zero_cells(), str, y, f'{path}map0.{x}')
        for x, y in attrs['map0'].items()
    }
    map1 = {
        _lookup(X.one_cells(), X.label, a, f'{path}map1.{a}'): _lookup(Y.one_cells(), Y.label, b, f'{path}map1.{a}')
        for a, b in attrs['map1'].items()
    }
    map2 = None
    if 'map2' in attrs:
        source_cells, target_cells = X.all_cells(budget), Y.all_cells(budget)
        map2 = {
            _lookup(source_cells, X.cell_label, p, f'{path}map2.{p}'):
                _lookup(target_cells, Y.cell_label, q, f'{path}map2.{p}')
            for p, q in attrs['map2'].items()
        }
    return Morphism(X, Y, map0, map1, map2, name=name)


def _transfor(attrs, name, budget, path):
    f = _build(attrs['source'], budget, f'{path}source.').value
    g = _build(attrs['target'], budget, f'{path}target.').value
    if not isinstance(f, Morphism) or not isinstance(g, Morphism):
        raise StructureParseError('Концы трансформации должны быть морфизмами', f'{path}source')
    X, Y = f.source, f.target
    comp0 = {
        _lookup(X.zero_cells(), str, x, f'{path}comp0.{x}'): _lookup(Y.one_cells(), Y.label, a, f'{path}comp0.{x}')
        for x, a in attrs['comp0'].items()
    }
    comp1 = {}
    for a, component in attrs['comp1'].items():
        position = f'{path}comp1.{a}'
        source_one = _lookup(X.one_cells(), X.label, a, position)
        ins = tuple(_lookup(Y.one_cells(), Y.label, b, f'{position}.ins') for b in component['ins'])
        outs = tuple(_lookup(Y.one_cells(), Y.label, b, f'{position}.outs') for b in component['outs'])
        candidates = Y.hom(ins, outs)
        if 'cell' in component:
            candidates = [cell for cell in candidates if Y.cell_label(cell) == component['cell']]
        if not candidates:
            raise StructureParseError('Нет 2-клетки с такой границей', position)
        comp1[source_one] = candidates[0]
    return Transfor(attrs['transfor'], f, g, comp0, comp1, name=name)


BUILDERS = {
    DOC_THIN_POLY: _thin,
    DOC_THIN_MERGE: _thin,
    DOC_TABULAR_POLY: _tabular,
    DOC_TABULAR_MERGE: _tabular,
    DOC_BICATEGORY: _bicategory,
    DOC_FIXTURE: _fixture,
    DOC_MORPHISM: _morphism,
    DOC_TRANSFOR: _transfor,
}


def resolve_fixture(name, budget=None):
    """Фикстура из FIXTURES_DIR/<name>.json или из встроенного реестра"""
    directory = settings.POLYWEAVE_CONFIG['FIXTURES_DIR']
    if directory:
        candidate = Path(directory) / f'{name}.json'
        if candidate.is_file():
            logger.info(f'Фикстура {name} загружается из {candidate}')
            return parse_structure(candidate.read_bytes(), budget).value
    return load_fixture(name, budget)


def load_structure(reference, budget=None):
    """
    Загружает структуру по имени фикстуры или пути к файлу

    Raises:
        StructureParseError: Нет такой фикстуры или файла, или документ некорректен
    """
    if str(reference).lower() in FIXTURE_NAMES:
        budget = budget or default_budget()
        value = resolve_fixture(str(reference).lower(), budget)
        return StructureDoc(DOC_FIXTURE, str(value.name), budget, value, {'kind': DOC_FIXTURE, 'fixture': reference})
    path = Path(reference)
    if not path.is_file():
        raise StructureParseError(f'Нет фикстуры или файла {reference!r}', 'input')
    return parse_structure(path.read_bytes(), budget)


def _dump_bicategory(B):
    return {
        'kind': DOC_BICATEGORY,
        'name': B.name,
        'zero_cells': [str(x) for x in B.zero_cells],
        'one_cells': {str(a): [str(x), str(y)] for a, (x, y) in B.one_cells.items()},
        'two_cells': {str(p): [str(a), str(b)] for p, (a, b) in B.two_cells.items()},
        'vcomp': sorted([str(p), str(q), str(r)] for (p, q), r in B.vcomp.items()),
        'vunit': {str(a): str(p) for a, p in B.vunit.items()},
        'hcomp1': sorted([str(a), str(b), str(c)] for (a, b), c in B.hcomp1.items()),
        'hcomp2': sorted([str(p), str(q), str(r)] for (p, q), r in B.hcomp2.items()),
        'hunit': {str(x): str(a) for x, a in B.hunit.items()},
        'assoc': sorted([str(a), str(b), str(c), str(p)] for (a, b, c), p in B.assoc.items()),
        'lunit': {str(a): str(p) for a, p in B.lunit.items()},
        'runit': {str(a): str(p) for a, p in B.runit.items()},
    }


def _labels(structure, seq):
    return [structure.label(a) for a in seq]


def dump_structure(structure, budget=None):
    """
    Документ конечной структуры в пределах бюджета

    Тонкие структуры выгружаются списком границ, остальные - клетками,
    таблицей слияний и единицами.
    """
    if isinstance(structure, FiniteBicategory):
        return _dump_bicategory(structure)
    budget = budget or structure.budget
    header = {
        'name': structure.name,
        'budget': str(budget),
        'multi': structure.multi,
        'zero_cells': [str(x) for x in structure.zero_cells()],
        'one_cells': {
            structure.label(a): [str(structure.src(a)), str(structure.tgt(a))] for a in structure.one_cells()
        },
    }
    cells = structure.all_cells(budget)
    if isinstance(structure, ThinStructure):
        kind = DOC_THIN_MERGE if structure.allows_intervals else DOC_THIN_POLY
        relation = [{'ins': _labels(structure, c.ins), 'outs': _labels(structure, c.outs)} for c in cells]
        return {'kind': kind, **header, 'relation': relation}
    ids = {cell: structure.cell_label(cell) for cell in cells}
    table = []
    for t in cells:
        for s in cells:
            for interval_t, interval_s in merge_intervals(structure, t, s):
                result = structure.merge(t, interval_t, s, interval_s, strict=False)
                if result in ids:
                    table.append({'t': ids[t], 'interval_t': list(interval_t), 's': ids[s],
                                  'interval_s': list(interval_s), 'result': ids[result]})
    units = []
    for seq in structure.sequences(max_weight=min(budget.max_in, budget.max_out)):
        unit = structure.unit_on(seq)
        if unit in ids:
            units.append({'seq': _labels(structure, seq), 'cell': ids[unit]})
    kind = DOC_TABULAR_MERGE if structure.allows_intervals else DOC_TABULAR_POLY
    logger.info(f'{structure.name}: выгружено {len(ids)} клеток, {len(table)} записей таблицы')
    return {
        'kind': kind,
        **header,
        'cells': {ids[c]: {'ins': _labels(structure, c.ins), 'outs': _labels(structure, c.outs)} for c in cells},
        'table': sorted(table, key=lambda e: (e['t'], e['interval_t'], e['s'], e['interval_s'])),
        'units': units,
    }


def emit_document(document):
    """Каноническая сериализация: отсортированные ключи, отступ 2, перевод строки в конце"""
    return (json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + '\n').encode('utf-8')
