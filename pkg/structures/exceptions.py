"""
Исключения модуля структур

Нарушения свойств не бросают исключений: они попадают в отчёты
и сертификаты. Исключения означают неверное использование или вход.
"""


class PolyweaveError(Exception):
    """Базовое исключение polyweave"""


class IllegalCut(PolyweaveError, ValueError):
    """Индексы композиции не удовлетворяют ни одному из случаев (a)-(d)"""


class IllegalMerge(IllegalCut):
    """Интервалы слияния несовместимы"""


class BudgetExceeded(PolyweaveError):
    """Результат выходит за бюджет арности"""


class DivisionError(PolyweaveError):
    """Уравнение деления не имеет единственного решения"""


class NoSolution(DivisionError):
    """У уравнения деления нет решений"""


class NonUniqueSolution(DivisionError):
    """У уравнения деления больше одного решения"""


class NotDivisible(PolyweaveError):
    """Клетка не делима там, где требуется делимость"""


class ConstructionError(PolyweaveError):
    """Конструкция не может быть выполнена на данных входах"""


class StructureParseError(PolyweaveError):
    """
    Ошибка разбора документа структуры

    Attributes:
        position: Позиция ошибки (строка/столбец JSON или путь ключей)
    """

    def __init__(self, message, position=''):
        self.position = position
        super().__init__(f'{position}: {message}' if position else message)
