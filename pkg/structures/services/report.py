"""
Сервис вывода отчетов

Формат построчный, ключ=значение, с детерминированным порядком:
заголовок, бюджет, метаданные, флаги, вердикты, находки, итог.
"""

import logging

logger = logging.getLogger(__name__)

HEADER = '# polyweave report'
CERTIFIED = 'certified'
REFUTED = 'refuted'


def _value(value):
    return str(value).replace('\n', ' ').replace(' ', '_') or '-'


def _pairs(fields):
    return ' '.join(f'{key}={_value(value)}' for key, value in sorted(fields.items()))


def report_lines(report):
    """
    Строки отчета без перевода строки в конце

    Args:
        report: Report

    Returns:
        list: Строки в порядке вывода
    """
    lines = [HEADER, f'report={_value(report.title)}', f'budget={report.budget}']
    for key in sorted(report.meta, key=str):
        lines.append(f'meta {key}={_value(report.meta[key])}')
    for name in sorted(report.flags):
        cert = report.flags[name]
        lines.append(f'flag name={_value(name)} {_pairs(cert.fields())}')
    for name in sorted(report.flags):
        verdict = CERTIFIED if report.flags[name].holds else REFUTED
        lines.append(f'{name.replace("_", " ")}: {verdict}')
    for finding in report.findings:
        extra = _pairs(finding.fields)
        line = f'finding kind={_value(finding.kind)} subject={_value(finding.subject)}'
        lines.append(f'{line} {extra}' if extra else line)
    lines.append(f'findings: {len(report.findings)}')
    return lines


def emit_report(report):
    """
    Сериализует отчет в байты UTF-8

    Находки сохраняют порядок обнаружения: сами проверки перебирают
    экземпляры в детерминированном порядке.
    """
    text = '\n'.join(report_lines(report)) + '\n'
    logger.debug(f'Отчет {report.title}: {len(report.findings)} находок, {len(report.flags)} флагов')
    return text.encode('utf-8')
