"""
Сервис выполнения команд polyweave

Отвечает за:
- Загрузку входа (фикстура или файл) и целевой структуры
- Диспетчеризацию команд check, report, extract-bicat, extract-linear,
  groth, hom, equiv, chu, strictify, coherentize, dump
- Сборку единого отчета и выбор кода возврата

Методы:
- run_command(): команда + аргументы -> CommandResult
"""

import logging
from dataclasses import dataclass

from django.conf import settings

from structures.constants import (
    CMD_CHECK,
    CMD_CHU,
    CMD_COHERENTIZE,
    CMD_DUMP,
    CMD_EQUIV,
    CMD_EXTRACT_BICAT,
    CMD_EXTRACT_LINEAR,
    CMD_GROTH,
    CMD_HOM,
    CMD_REPORT,
    CMD_STRICTIFY,
    EXIT_CHECK_FAILED,
    EXIT_INPUT_ERROR,
    EXIT_OK,
)
from structures.exceptions import BudgetExceeded, ConstructionError, StructureParseError
from structures.services.axioms import check_cut_axioms, check_merge_axioms
from structures.services.bicat import FiniteBicategory, check_bicategory_axioms
from structures.services.certificates import Certificate, Report
from structures.services.chu import (
    check_bands,
    chu_adjunction_witness,
    chu_build,
    chu_involution_check,
    chu_unit_synthesize,
)
from structures.services.coherence import check_coherence, coherentize_witnesses, raw_witnesses
from structures.services.extraction import (
    choose,
    comparison_morphisms,
    extract_bicategory,
    extract_linear,
    restore_oplax,
    transfer_oplax,
)
from structures.services.groth import groth
from structures.services.hom_object import (
    Transfor,
    enumerate_morphisms,
    hom_object,
    identity_transfor,
    same_morphism,
    validate_transfor,
)
from structures.services.merge_monad import naturality_of_sigma, verify_monad_laws
from structures.services.mergebicat import merge_representability_report
from structures.services.morphisms import Morphism, compose_morphisms, identity_morphism, validate_morphism
from structures.services.polygraph import polygraph_of, validate_globularity
from structures.services.report import emit_report
from structures.services.representability import representability_report
from structures.services.strictify import semi_strictify, verify_strict_associativity
from structures.services.structure_loader import dump_structure, emit_document, load_structure
from structures.utils import ArityBudget

logger = logging.getLogger(__name__)


@dataclass
class CommandResult:
    """
    Итог команды

    Attributes:
        exit_code: 0 - все сертификаты выполнены, 1 - проверка не прошла, 2 - ошибка входа
        output: Байты отчета или документа
        report: Report (None для dump и ошибок входа)
    """

    exit_code: int
    output: bytes
    report: object = None


def _structure(value, command):
    if isinstance(value, (Morphism, Transfor, FiniteBicategory)):
        raise StructureParseError(f'Команда {command} ожидает поли- или merge-бикатегорию', 'input')
    return value


def _check(value, budget):
    report = Report(f'check {getattr(value, "name", value)}', budget)
    if isinstance(value, FiniteBicategory):
        report.extend(check_bicategory_axioms(value))
    elif isinstance(value, Morphism):
        report.flag('valid', validate_morphism(value, budget))
    elif isinstance(value, Transfor):
        report.flag('valid', validate_transfor(value, budget).flags['valid'])
    else:
        report.extend(validate_globularity(polygraph_of(value, budget)), prefix='globularity.')
        axioms = check_merge_axioms(value) if value.allows_intervals else check_cut_axioms(value)
        report.extend(axioms, prefix='axioms.')
    return report


def _report(X, budget):
    report = representability_report(X, budget)
    if X.allows_intervals:
        report.extend(merge_representability_report(X, budget), prefix='merge.')
    return report


def _extract_bicat(X, budget):
    B = extract_bicategory(X, budget=budget)
    report = check_bicategory_axioms(B)
    report.budget = budget
    report.meta['one_cells'] = len(B.one_cells)
    report.meta['two_cells'] = len(B.two_cells)
    return report


def _extract_linear(X, budget):
    data, report = extract_linear(X, budget)
    report.meta['dist_left'] = len(data.dist_left)
    report.meta['dist_right'] = len(data.dist_right)
    return report


def _groth(value, budget):
    B = value if isinstance(value, FiniteBicategory) else extract_bicategory(value, budget=budget)
    G = groth(B, budget)
    report = Report(f'groth {B.name}', budget)
    report.extend(check_bicategory_axioms(B), prefix='bicategory.')
    report.extend(check_merge_axioms(G), prefix='axioms.')
    report.meta['cells'] = len(G.all_cells(budget))
    return report


def _hom(X, Y, budget):
    H = hom_object(X, Y, budget, settings.POLYWEAVE_CONFIG['HOM_MAX_MORPHISMS'])
    report = Report(f'hom {H.name}', budget)
    report.meta['morphisms'] = len(H.zero_cells())
    report.meta['transfors'] = len(H.one_cells())
    for f in H.zero_cells():
        identity = identity_transfor(f)
        report.flag(f'identity.{f.name}', validate_transfor(identity, budget).flags['valid'])
    try:
        source_choices, target_choices = choose(X, budget), choose(Y, budget)
    except ConstructionError:
        report.meta['oplax'] = 'not representable'
        return report
    transferred = 0
    for f in H.zero_cells():
        identity = identity_transfor(f)
        try:
            data, oplax = transfer_oplax(identity, source_choices, target_choices, budget)
        except ConstructionError as exc:
            logger.debug(f'{f.name}: перенос пропущен: {exc}')
            continue
        transferred += 1
        report.extend(oplax, prefix=f'oplax.{f.name}.')
        if restore_oplax(data, target_choices) != identity.comp1:
            report.add('oplax_restore', f.name)
    report.meta['oplax'] = transferred
    return report


def _mutually_inverse(f, g, budget):
    return same_morphism(compose_morphisms(f, g), identity_morphism(f.source), budget) and \
        same_morphism(compose_morphisms(g, f), identity_morphism(g.source), budget)


def _equiv(X, Y, budget):
    if Y is None:
        choices = choose(X, budget)
        G = groth(extract_bicategory(X, choices), budget)
        f, g = comparison_morphisms(X, G, choices)
        report = Report(f'equiv {X.name} {G.name}', budget)
        report.flag('valid.forward', validate_morphism(f, budget))
        report.flag('valid.backward', validate_morphism(g, budget))
        pairs = [(f, g)]
    else:
        report = Report(f'equiv {X.name} {Y.name}', budget)
        cap = settings.POLYWEAVE_CONFIG['HOM_MAX_MORPHISMS']
        forward, backward = enumerate_morphisms(X, Y, budget, cap), enumerate_morphisms(Y, X, budget, cap)
        report.meta['pairs'] = len(forward) * len(backward)
        pairs = [(f, g) for f in forward for g in backward]
    for f, g in pairs:
        if _mutually_inverse(f, g, budget):
            report.flag('isomorphism', Certificate.passed('isomorphism', f'{f.name}~{g.name}', budget,
                                                          {'forward': f.name, 'backward': g.name}))
            return report
    report.flag('isomorphism', Certificate.failed('isomorphism', X.name, budget, {'pairs': len(pairs)}))
    return report


def _chu(M, budget):
    budget = budget.meet(ArityBudget.parse(settings.POLYWEAVE_CONFIG['CHU_BUDGET']))
    chu = chu_build(M, budget)
    report = Report(f'chu {M.name}', budget)
    report.meta['bands'] = check_bands(chu, budget)
    report.extend(check_cut_axioms(chu, budget), prefix='axioms.')
    family = coherentize_witnesses(M, raw_witnesses(M))
    for zero in chu.zero_cells():
        _, unit_report = chu_unit_synthesize(chu, zero, family, budget)
        report.extend(unit_report, prefix=f'unit.{zero}.')
    report.flag('involution', chu_involution_check(chu, budget))
    for A in chu.one_cells():
        _, certificate = chu_adjunction_witness(chu, A, family, budget)
        report.flag(f'linear_adjoint.{A}', certificate)
    return report


def _strictify(X, budget):
    sample_size = settings.POLYWEAVE_CONFIG['MONAD_SAMPLE_SIZE']
    choices = choose(X, budget)
    result = semi_strictify(X, budget, choices, sample_size)
    report = Report(f'strictify {X.name}', budget)
    report.flag('equivalence', result.certificate)
    report.extend(result.beta.report, prefix='t_algebra.')
    laws_budget = budget.meet(ArityBudget.parse(settings.POLYWEAVE_CONFIG['AXIOM_BUDGET']))
    report.extend(verify_monad_laws(X, sample_size, laws_budget), prefix='monad.')
    report.extend(naturality_of_sigma(identity_morphism(X), laws_budget, sample_size), prefix='monad.')
    associativity = verify_strict_associativity(result.Y, budget, choices.family)
    report.extend(associativity)
    non_unit = associativity.meta.get('unitors.non_unit', 0)
    if non_unit:
        report.flag('semi_strict', Certificate.passed('semi_strict', result.Y.name, budget, {'non_unit': non_unit}))
    else:
        report.flag('semi_strict', Certificate.failed('semi_strict', result.Y.name, budget,
                                                      {'reason': 'all unitors are units'}))
    return report


def _coherentize(X, budget):
    raw = raw_witnesses(X, budget)
    report = Report(f'coherentize {X.name}', budget)
    report.meta['raw_violations'] = len(check_coherence(X, raw, budget).findings)
    family = coherentize_witnesses(X, raw)
    checked = check_coherence(X, family, budget)
    report.extend(checked)
    if checked.findings:
        report.flag('coherent', Certificate.failed('coherent', X.name, budget,
                                                   {'finding': checked.findings[0].subject}))
    else:
        report.flag('coherent', Certificate.passed('coherent', X.name, budget, dict(checked.meta)))
    return report


def _dispatch(command, value, target, budget):
    if command == CMD_CHECK:
        return _check(value, budget)
    if command == CMD_GROTH:
        if isinstance(value, (Morphism, Transfor)):
            raise StructureParseError(f'Команда {command} ожидает бикатегорию или структуру', 'input')
        return _groth(value, budget)
    X = _structure(value, command)
    handlers = {
        CMD_REPORT: lambda: _report(X, budget),
        CMD_EXTRACT_BICAT: lambda: _extract_bicat(X, budget),
        CMD_EXTRACT_LINEAR: lambda: _extract_linear(X, budget),
        CMD_EQUIV: lambda: _equiv(X, target, budget),
        CMD_CHU: lambda: _chu(X, budget),
        CMD_STRICTIFY: lambda: _strictify(X, budget),
        CMD_COHERENTIZE: lambda: _coherentize(X, budget),
    }
    if command == CMD_HOM:
        if target is None:
            raise StructureParseError('Команда hom требует --target', 'target')
        return _hom(X, _structure(target, command), budget)
    if command not in handlers:
        raise StructureParseError(f'Неизвестная команда {command!r}', 'command')
    return handlers[command]()


def run_command(command, reference, budget=None, target=None):
    """
    Выполняет команду CLI

    Args:
        command: Одна из COMMANDS
        reference: Имя фикстуры или путь к документу
        budget: ArityBudget или строка "I,O,L" (по умолчанию из документа или DEFAULT_BUDGET)
        target: Вторая структура для hom и equiv

    Returns:
        CommandResult
    """
    try:
        if isinstance(budget, str):
            budget = ArityBudget.parse(budget)
        doc = load_structure(reference, budget)
        budget = budget or doc.budget
        second = load_structure(target, budget).value if target else None
        if command == CMD_DUMP:
            value = doc.value
            if isinstance(value, (Morphism, Transfor)):
                raise StructureParseError('dump выгружает только структуры и бикатегории', 'input')
            return CommandResult(EXIT_OK, emit_document(dump_structure(value, budget)))
        report = _dispatch(command, doc.value, second, budget)
    except StructureParseError as exc:
        logger.error(f'{command} {reference}: ошибка входа: {exc}')
        return CommandResult(EXIT_INPUT_ERROR, f'error position={exc.position or "-"} {exc}\n'.encode('utf-8'))
    except (ConstructionError, BudgetExceeded) as exc:
        logger.error(f'{command} {reference}: конструкция не выполнена: {exc}')
        report = Report(f'{command} {reference}', budget)
        report.add('construction', reference, reason=exc)
    code = EXIT_OK if report.ok else EXIT_CHECK_FAILED
    logger.info(f'{command} {reference}: код {code}, {len(report.findings)} находок')
    return CommandResult(code, emit_report(report), report)
