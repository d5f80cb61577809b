"""
Настройки Django проекта "polyweave"

Содержит конфигурацию:
- Приложений Django
- Бюджетов арности для исчерпывающих проверок
- Каталога пользовательских фикстур
- Логирования
"""

import os
from pathlib import Path
import environ

BASE_DIR = Path(__file__).resolve().parent.parent

# Инициализация переменных окружения
env = environ.Env(
    DEBUG=(bool, False)
)

# Чтение .env файла
environ.Env.read_env(os.path.join(BASE_DIR, '.env'))

SECRET_KEY = env('SECRET_KEY', default='polyweave-local-only')

DEBUG = env('DEBUG')

ALLOWED_HOSTS = env.list('ALLOWED_HOSTS', default=[])

INSTALLED_APPS = [
    'django.contrib.contenttypes',

    # Third party apps
    'rest_framework',

    # Local apps
    'structures',  # Поли- и merge-бикатегории, конструкции, CLI
]

# Моделей нет, база нужна только тестовому раннеру Django
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

LANGUAGE_CODE = 'ru-ru'
TIME_ZONE = 'Europe/Moscow'
USE_I18N = True
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Настройки polyweave
POLYWEAVE_CONFIG = {
    # Бюджет по умолчанию: maxIn,maxOut,maxSeqLen
    'DEFAULT_BUDGET': env('POLYWEAVE_DEFAULT_BUDGET', default='3,3,4'),
    # Потолок бюджета для кубических проверок схем ассоциативности
    'AXIOM_BUDGET': env('POLYWEAVE_AXIOM_BUDGET', default='2,2,3'),
    # Бюджет 2-клеток конструкции Чу
    'CHU_BUDGET': env('POLYWEAVE_CHU_BUDGET', default='2,2,3'),
    # Каталог с пользовательскими фикстурами <name>.json
    'FIXTURES_DIR': env('POLYWEAVE_FIXTURES', default=''),
    # Размер выборки для законов монад (0 = полный перебор)
    'MONAD_SAMPLE_SIZE': env.int('POLYWEAVE_MONAD_SAMPLE_SIZE', default=0),
    # Максимум морфизмов при построении [X,Y]
    'HOM_MAX_MORPHISMS': env.int('POLYWEAVE_HOM_MAX_MORPHISMS', default=64),
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'structures': {
            'handlers': ['console'],
            'level': env('POLYWEAVE_LOG_LEVEL', default='WARNING'),
            'propagate': False,
        },
    },
}
