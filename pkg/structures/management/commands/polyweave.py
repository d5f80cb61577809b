"""
Django management команда polyweave

Использование:
    python manage.py polyweave <cmd> <input|fixture> [--budget I,O,L] [--out path] [--target input]

Команды:
    check, report, extract-bicat, extract-linear, groth, hom, equiv,
    chu, strictify, coherentize, dump

Коды возврата:
    0 - все сертификаты выполнены
    1 - проверка не прошла
    2 - ошибка входа (документ, фикстура, бюджет)
"""

import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from structures.constants import COMMANDS, EXIT_OK
from structures.services.runner import run_command

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Проверки и конструкции поли- и merge-бикатегорий'

    def add_arguments(self, parser):
        parser.add_argument('cmd', choices=COMMANDS, help='Команда')
        parser.add_argument('input', help='Имя встроенной фикстуры или путь к JSON-документу')
        parser.add_argument(
            '--budget',
            default=None,
            help=f'Бюджет I,O,L (по умолчанию {settings.POLYWEAVE_CONFIG["DEFAULT_BUDGET"]})',
        )
        parser.add_argument('--out', default=None, help='Записать отчет в файл')
        parser.add_argument('--target', default=None, help='Вторая структура для hom и equiv')

    def handle(self, *args, **options):
        result = run_command(
            options['cmd'],
            options['input'],
            budget=options['budget'],
            target=options['target'],
        )
        if options['out']:
            Path(options['out']).write_bytes(result.output)
            self.stdout.write(self.style.SUCCESS(f'Отчет записан в {options["out"]}'))
        else:
            self.stdout.write(result.output.decode('utf-8'), ending='')
        if result.exit_code != EXIT_OK:
            raise CommandError(f'{options["cmd"]} {options["input"]}: код {result.exit_code}',
                               returncode=result.exit_code)
