"""
Serializers документов структур

Используются для валидации JSON-документов перед построением
структур: по одному serializer на вид документа. Ссылки на
объявленные 0-, 1- и 2-клетки проверяются здесь же, ошибки
возвращаются с путем ключей.
"""

from rest_framework import serializers

from structures.constants import (
    DOC_BICATEGORY,
    DOC_FIXTURE,
    DOC_KIND_CHOICES,
    DOC_MORPHISM,
    DOC_TABULAR_MERGE,
    DOC_TABULAR_POLY,
    DOC_THIN_MERGE,
    DOC_THIN_POLY,
    DOC_TRANSFOR,
    FIXTURE_NAMES,
    TRANSFOR_OPLAX,
)
from structures.utils import ArityBudget
from structures.exceptions import StructureParseError


def _unknown(name, kind):
    return f'Ссылка на необъявленную {kind} {name!r}'


class BudgetField(serializers.CharField):
    """Бюджет "I,O,L" -> ArityBudget"""

    def to_internal_value(self, data):
        text = super().to_internal_value(data)
        try:
            return ArityBudget.parse(text)
        except StructureParseError as exc:
            raise serializers.ValidationError(str(exc)) from exc

    def to_representation(self, value):
        return str(value)


class Sequence(serializers.ListField):
    """Непустая последовательность меток 1-клеток"""

    def __init__(self, **kwargs):
        kwargs.setdefault('child', serializers.CharField())
        kwargs.setdefault('allow_empty', False)
        super().__init__(**kwargs)


class BoundarySerializer(serializers.Serializer):
    ins = Sequence()
    outs = Sequence()


class IntervalField(serializers.ListField):
    """Интервал [начало, конец] с нумерацией от 1"""

    def __init__(self, **kwargs):
        super().__init__(child=serializers.IntegerField(min_value=1), min_length=2, max_length=2, **kwargs)

    def to_internal_value(self, data):
        first, last = super().to_internal_value(data)
        if first > last:
            raise serializers.ValidationError(f'Пустой интервал [{first}, {last}]')
        return (first, last)


class TableEntrySerializer(serializers.Serializer):
    t = serializers.CharField()
    interval_t = IntervalField()
    s = serializers.CharField()
    interval_s = IntervalField()
    result = serializers.CharField()


class UnitEntrySerializer(serializers.Serializer):
    seq = Sequence()
    cell = serializers.CharField()


class GlobularSerializer(serializers.Serializer):
    """
    Общая часть документов структур

    Проверяет, что источники и цели 1-клеток объявлены, а границы
    ссылаются только на объявленные 1-клетки.
    """

    kind = serializers.ChoiceField(choices=[kind for kind, _ in DOC_KIND_CHOICES])
    name = serializers.CharField(required=False)
    budget = BudgetField(required=False)
    zero_cells = serializers.ListField(child=serializers.CharField(), allow_empty=False)
    one_cells = serializers.DictField(
        child=serializers.ListField(child=serializers.CharField(), min_length=2, max_length=2),
        allow_empty=False,
    )

    def validate_one_cells(self, value):
        zeros = set(self.initial_data.get('zero_cells') or [])
        for label, ends in value.items():
            for end in ends:
                if end not in zeros:
                    raise serializers.ValidationError({label: [f'Необъявленная 0-клетка {end!r}']})
        return {label: tuple(ends) for label, ends in value.items()}

    def _check_sequence(self, seq, path, errors):
        for k, a in enumerate(seq):
            if a not in self.initial_data.get('one_cells', {}):
                errors[f'{path}[{k}]'] = [_unknown(a, '1-клетку')]


class ThinSerializer(GlobularSerializer):
    """Тонкая структура: явный список границ, у которых есть клетка"""

    relation = BoundarySerializer(many=True)
    multi = serializers.BooleanField(required=False, default=False)

    def validate(self, attrs):
        errors = {}
        for k, boundary in enumerate(attrs['relation']):
            self._check_sequence(boundary['ins'], f'relation[{k}].ins', errors)
            self._check_sequence(boundary['outs'], f'relation[{k}].outs', errors)
        if errors:
            raise serializers.ValidationError(errors)
        return attrs


class TabularSerializer(GlobularSerializer):
    """
    Табличная структура: клетки, таблица слияний, единицы

    Недостающие записи дополняются из фикстуры source, если она указана.
    """

    cells = serializers.DictField(child=BoundarySerializer(), required=False, default=dict)
    table = TableEntrySerializer(many=True, required=False, default=list)
    units = UnitEntrySerializer(many=True, required=False, default=list)
    source = serializers.ChoiceField(choices=FIXTURE_NAMES, required=False)
    multi = serializers.BooleanField(required=False, default=False)
    zero_cells = serializers.ListField(child=serializers.CharField(), required=False)
    one_cells = serializers.DictField(child=serializers.ListField(child=serializers.CharField()), required=False)

    def validate(self, attrs):
        if 'source' not in attrs and not ('zero_cells' in attrs and 'one_cells' in attrs and attrs['cells']):
            raise serializers.ValidationError({'cells': ['Без source нужны zero_cells, one_cells и cells']})
        if 'source' in attrs:
            return attrs
        errors = {}
        for cid, boundary in attrs['cells'].items():
            self._check_sequence(boundary['ins'], f'cells.{cid}.ins', errors)
            self._check_sequence(boundary['outs'], f'cells.{cid}.outs', errors)
        for k, entry in enumerate(attrs['table']):
            for key in ('t', 's', 'result'):
                if entry[key] not in attrs['cells']:
                    errors[f'table[{k}].{key}'] = [_unknown(entry[key], '2-клетку')]
        for k, entry in enumerate(attrs['units']):
            self._check_sequence(entry['seq'], f'units[{k}].seq', errors)
            if entry['cell'] not in attrs['cells']:
                errors[f'units[{k}].cell'] = [_unknown(entry['cell'], '2-клетку')]
        if errors:
            raise serializers.ValidationError(errors)
        return attrs


class BicategorySerializer(GlobularSerializer):
    """Конечная бикатегория: все таблицы в виде списков строк"""

    two_cells = serializers.DictField(child=serializers.ListField(child=serializers.CharField(), min_length=2,
                                                                  max_length=2))
    vcomp = serializers.ListField(child=serializers.ListField(child=serializers.CharField(), min_length=3,
                                                             max_length=3))
    vunit = serializers.DictField(child=serializers.CharField())
    hcomp1 = serializers.ListField(child=serializers.ListField(child=serializers.CharField(), min_length=3,
                                                              max_length=3))
    hcomp2 = serializers.ListField(child=serializers.ListField(child=serializers.CharField(), min_length=3,
                                                              max_length=3))
    hunit = serializers.DictField(child=serializers.CharField())
    assoc = serializers.ListField(child=serializers.ListField(child=serializers.CharField(), min_length=4,
                                                             max_length=4))
    lunit = serializers.DictField(child=serializers.CharField())
    runit = serializers.DictField(child=serializers.CharField())

    def validate(self, attrs):
        ones, twos = attrs['one_cells'], attrs['two_cells']
        errors = {}
        for p, (a, b) in twos.items():
            for end in (a, b):
                if end not in ones:
                    errors[f'two_cells.{p}'] = [_unknown(end, '1-клетку')]
        for key in ('vcomp', 'hcomp2'):
            for k, row in enumerate(attrs[key]):
                for cell in row:
                    if cell not in twos:
                        errors[f'{key}[{k}]'] = [_unknown(cell, '2-клетку')]
        for key in ('vunit', 'lunit', 'runit'):
            for a, p in attrs[key].items():
                if a not in ones or p not in twos:
                    errors[f'{key}.{a}'] = ['Необъявленная клетка']
        if errors:
            raise serializers.ValidationError(errors)
        return attrs


class FixtureSerializer(serializers.Serializer):
    kind = serializers.ChoiceField(choices=[DOC_FIXTURE])
    fixture = serializers.ChoiceField(choices=FIXTURE_NAMES)
    budget = BudgetField(required=False)


class MorphismSerializer(serializers.Serializer):
    """
    Морфизм между фикстурами или вложенными документами

    Образы 2-клеток выводятся из границ; map2 задает их явно для
    табличных целей.
    """

    kind = serializers.ChoiceField(choices=[DOC_MORPHISM])
    name = serializers.CharField(required=False)
    budget = BudgetField(required=False)
    source = serializers.JSONField()
    target = serializers.JSONField()
    map0 = serializers.DictField(child=serializers.CharField())
    map1 = serializers.DictField(child=serializers.CharField())
    map2 = serializers.DictField(child=serializers.CharField(), required=False)


class ComponentSerializer(BoundarySerializer):
    cell = serializers.CharField(required=False)


class TransforSerializer(serializers.Serializer):
    """Oplax-трансформация между морфизмами"""

    kind = serializers.ChoiceField(choices=[DOC_TRANSFOR])
    name = serializers.CharField(required=False)
    budget = BudgetField(required=False)
    transfor = serializers.ChoiceField(choices=[TRANSFOR_OPLAX], default=TRANSFOR_OPLAX)
    source = serializers.JSONField()
    target = serializers.JSONField()
    comp0 = serializers.DictField(child=serializers.CharField())
    comp1 = serializers.DictField(child=ComponentSerializer(), required=False, default=dict)


SERIALIZERS = {
    DOC_THIN_POLY: ThinSerializer,
    DOC_THIN_MERGE: ThinSerializer,
    DOC_TABULAR_POLY: TabularSerializer,
    DOC_TABULAR_MERGE: TabularSerializer,
    DOC_BICATEGORY: BicategorySerializer,
    DOC_FIXTURE: FixtureSerializer,
    DOC_MORPHISM: MorphismSerializer,
    DOC_TRANSFOR: TransforSerializer,
}
