"""
Константы модуля структур

Содержит константы, используемые в различных частях модуля:
- Стороны границы 2-клетки
- Виды двойственности
- Виды представляющих 1-клеток
- Вердикты сертификатов
- Виды документов структур
- Команды CLI и коды возврата
"""

# Стороны границы
SIDE_INPUT = 'input'
SIDE_OUTPUT = 'output'

# Двойственности
DUAL_OP = 'op'
DUAL_CO = 'co'

# Виды представляющих 1-клеток
KIND_TENSOR = 'tensor'
KIND_PAR = 'par'
KIND_RHOM = 'rhom'
KIND_LHOM = 'lhom'
KIND_RCOHOM = 'rcohom'
KIND_LCOHOM = 'lcohom'

# Вердикты сертификатов
VERDICT_HOLDS = 'holds'
VERDICT_FAILS = 'fails'

# Методы сертификации
METHOD_EXHAUSTIVE = 'exhaustive'
METHOD_SAMPLED = 'sampled'

# Виды документов структур
DOC_THIN_POLY = 'thin-poly'
DOC_THIN_MERGE = 'thin-merge'
DOC_TABULAR_POLY = 'tabular-poly'
DOC_TABULAR_MERGE = 'tabular-merge'
DOC_BICATEGORY = 'bicategory'
DOC_MORPHISM = 'morphism'
DOC_TRANSFOR = 'transfor'
DOC_FIXTURE = 'fixture'

DOC_KIND_CHOICES = [
    (DOC_THIN_POLY, 'Тонкая поли-бикатегория'),
    (DOC_THIN_MERGE, 'Тонкая merge-бикатегория'),
    (DOC_TABULAR_POLY, 'Табличная поли-бикатегория'),
    (DOC_TABULAR_MERGE, 'Табличная merge-бикатегория'),
    (DOC_BICATEGORY, 'Конечная бикатегория'),
    (DOC_MORPHISM, 'Морфизм'),
    (DOC_TRANSFOR, 'Трансфор'),
    (DOC_FIXTURE, 'Встроенная фикстура'),
]

# Виды трансфоров
TRANSFOR_OPLAX = 'oplax'
TRANSFOR_MODIFICATION = 'modification'

# Команды CLI
CMD_CHECK = 'check'
CMD_REPORT = 'report'
CMD_EXTRACT_BICAT = 'extract-bicat'
CMD_EXTRACT_LINEAR = 'extract-linear'
CMD_GROTH = 'groth'
CMD_HOM = 'hom'
CMD_EQUIV = 'equiv'
CMD_CHU = 'chu'
CMD_STRICTIFY = 'strictify'
CMD_COHERENTIZE = 'coherentize'
CMD_DUMP = 'dump'

COMMANDS = (
    CMD_CHECK,
    CMD_REPORT,
    CMD_EXTRACT_BICAT,
    CMD_EXTRACT_LINEAR,
    CMD_GROTH,
    CMD_HOM,
    CMD_EQUIV,
    CMD_CHU,
    CMD_STRICTIFY,
    CMD_COHERENTIZE,
    CMD_DUMP,
)

# Коды возврата
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

# Имена встроенных фикстур
FIXTURE_NAMES = ('b4', 'x2', 'x2m', 'yn', 's1', 'zg', 'z2')

# Потолок значений и арности для фикстуры YN
YN_VALUE_CAP = 6
YN_ARITY_CAP = 4
