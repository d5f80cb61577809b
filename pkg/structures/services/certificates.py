"""
Сертификаты и отчеты

Содержит:
- Certificate: итог исчерпывающей проверки свойства в пределах бюджета
- Finding: одна находка отчета (нарушение, пропуск, контрпример)
- Report: набор сертификатов, находок и метаданных
"""

from dataclasses import dataclass, field

from structures.constants import METHOD_EXHAUSTIVE, VERDICT_FAILS, VERDICT_HOLDS


@dataclass
class Certificate:
    """
    Итог проверки свойства

    Attributes:
        property: Имя свойства
        subject: Метка клетки или 1-клетки
        verdict: holds / fails
        budget: Бюджет, при котором получен вердикт
        witnesses: Экземпляр -> решение (метки)
        counterexample: Экземпляр-контрпример при fails
        method: Способ сертификации
        data: Сырые объекты для дальнейших вычислений (не сериализуются)
    """

    property: str
    subject: str
    verdict: str
    budget: object
    witnesses: dict = field(default_factory=dict)
    counterexample: dict = None
    method: str = METHOD_EXHAUSTIVE
    data: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.verdict not in (VERDICT_HOLDS, VERDICT_FAILS):
            raise ValueError(f'Неизвестный вердикт: {self.verdict}')
        if self.verdict == VERDICT_FAILS and not self.counterexample:
            raise ValueError(f'Сертификат {self.property} без контрпримера')

    @property
    def holds(self):
        return self.verdict == VERDICT_HOLDS

    def __bool__(self):
        return self.holds

    @classmethod
    def passed(cls, prop, subject, budget, witnesses=None, method=METHOD_EXHAUSTIVE, data=None):
        return cls(prop, str(subject), VERDICT_HOLDS, budget, dict(witnesses or {}), None, method, dict(data or {}))

    @classmethod
    def failed(cls, prop, subject, budget, counterexample, witnesses=None, method=METHOD_EXHAUSTIVE, data=None):
        return cls(prop, str(subject), VERDICT_FAILS, budget, dict(witnesses or {}), dict(counterexample), method,
                   dict(data or {}))

    def fields(self):
        """Поля для строки отчета"""
        result = {
            'property': self.property,
            'subject': self.subject,
            'verdict': self.verdict,
            'budget': str(self.budget),
            'method': self.method,
            'witnesses': str(len(self.witnesses)),
        }
        for key, value in sorted((self.counterexample or {}).items()):
            result[f'cx.{key}'] = str(value)
        return result


@dataclass
class Finding:
    """Находка отчета"""

    kind: str
    subject: str
    fields: dict = field(default_factory=dict)


@dataclass
class Report:
    """
    Отчет проверки

    Attributes:
        title: Заголовок отчета
        budget: Бюджет проверки
        findings: Нарушения и контрпримеры
        flags: Имя флага -> Certificate
        meta: Служебные счетчики
    """

    title: str
    budget: object
    findings: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def add(self, kind, subject, **fields):
        self.findings.append(Finding(kind, str(subject), {k: str(v) for k, v in fields.items()}))

    def flag(self, name, certificate):
        self.flags[name] = certificate
        return certificate

    def count(self, key, amount=1):
        self.meta[key] = int(self.meta.get(key, 0)) + amount

    def extend(self, other, prefix=''):
        """Переносит находки, флаги и метаданные другого отчета"""
        self.findings.extend(other.findings)
        for name, certificate in other.flags.items():
            self.flags[f'{prefix}{name}'] = certificate
        for key, value in other.meta.items():
            self.meta[f'{prefix}{key}'] = value

    @property
    def ok(self):
        return not self.findings and all(cert.holds for cert in self.flags.values())

    def __bool__(self):
        return self.ok
