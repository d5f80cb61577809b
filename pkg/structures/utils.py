"""
Утилиты модуля структур

Вспомогательные функции и классы:
- Бюджет арности и его разбор
- Раскладка границ при слиянии (случаи (a)-(d))
- Работа с помеченными последовательностями
"""

from dataclasses import dataclass

from structures.exceptions import IllegalMerge, StructureParseError


@dataclass(frozen=True)
class ArityBudget:
    """
    Бюджет арности: ограничивает все кванторы "для всех 2-клеток"

    Attributes:
        max_in: Максимальный вес входной границы
        max_out: Максимальный вес выходной границы
        max_seq_len: Максимальная длина перечисляемых последовательностей
    """

    max_in: int
    max_out: int
    max_seq_len: int

    def __post_init__(self):
        if min(self.max_in, self.max_out, self.max_seq_len) < 1:
            raise ValueError(f'Все компоненты бюджета должны быть >= 1: {self}')

    @classmethod
    def parse(cls, text):
        """
        Разбирает бюджет из строки вида "I,O,L"

        Raises:
            StructureParseError: Если строка не является тройкой натуральных чисел
        """
        parts = [part.strip() for part in str(text).split(',')]
        if len(parts) != 3 or not all(part.isdigit() for part in parts):
            raise StructureParseError(f'Ожидался бюджет вида I,O,L, получено {text!r}', 'budget')
        try:
            return cls(*(int(part) for part in parts))
        except ValueError as exc:
            raise StructureParseError(str(exc), 'budget') from exc

    def meet(self, other):
        """Покомпонентный минимум двух бюджетов"""
        return ArityBudget(
            min(self.max_in, other.max_in),
            min(self.max_out, other.max_out),
            min(self.max_seq_len, other.max_seq_len),
        )

    def admits(self, in_weight, out_weight):
        return 1 <= in_weight <= self.max_in and 1 <= out_weight <= self.max_out

    def __str__(self):
        return f'{self.max_in},{self.max_out},{self.max_seq_len}'


def merge_layout(t_ins, t_outs, interval_t, s_ins, s_outs, interval_s):
    """
    Вычисляет границу результата слияния t и s

    t стоит сверху: его выходы t_outs[j1..j2] совпадают со входами
    s_ins[i1..i2] (индексы с единицы, интервалы включительно).
    Последовательности могут быть любыми, в том числе помеченными.

    Returns:
        tuple: (случай, входы, выходы)

    Raises:
        IllegalMerge: Если ни один из случаев (a)-(d) не применим
    """
    j1, j2 = interval_t
    i1, i2 = interval_s
    n, m = len(t_ins), len(t_outs)
    p = len(s_ins)
    length = j2 - j1 + 1
    if length != i2 - i1 + 1 or length < 1:
        raise IllegalMerge(f'Интервалы разной длины: [{j1},{j2}] и [{i1},{i2}]')
    if not (1 <= j1 <= j2 <= m and 1 <= i1 <= i2 <= p):
        raise IllegalMerge(f'Интервалы вне границ: [{j1},{j2}] из {m}, [{i1},{i2}] из {p}')
    t_ins, t_outs, s_ins, s_outs = tuple(t_ins), tuple(t_outs), tuple(s_ins), tuple(s_outs)
    if i1 == 1 and i2 == p:
        return 'a', t_ins, t_outs[:j1 - 1] + s_outs + t_outs[j2:]
    if i1 == 1 and j2 == m:
        return 'b', t_ins + s_ins[length:], t_outs[:m - length] + s_outs
    if j1 == 1 and j2 == m:
        return 'c', s_ins[:i1 - 1] + t_ins + s_ins[i2:], s_outs
    if i2 == p and j1 == 1:
        return 'd', s_ins[:p - length] + t_ins, s_outs + t_outs[length:]
    raise IllegalMerge(f'Недопустимое слияние [{j1},{j2}] / [{i1},{i2}] при m={m}, p={p}')


def tag(sequence, origin):
    """Помечает элементы последовательности происхождением и позицией"""
    return tuple((origin, index) for index in range(1, len(sequence) + 1))


def find_interval(tags, wanted):
    """
    Находит непрерывный интервал позиций помеченных элементов

    Returns:
        tuple | None: (k1, k2) с единицы или None, если элементы не подряд
    """
    positions = [tags.index(item) + 1 for item in wanted if item in tags]
    if len(positions) != len(wanted) or not positions:
        return None
    if positions != list(range(positions[0], positions[0] + len(positions))):
        return None
    return positions[0], positions[-1]


def seq_label(seq):
    return '(' + ','.join(str(item) for item in seq) + ')'
