from os import environ, path

from dotenv import load_dotenv

basedir = path.abspath(path.dirname(__file__))
load_dotenv(path.join(basedir, '.env'))


class BaseConfig:

    SIMAPP = 'simapp.py'
    WORKERS = int(environ.get('ANYONSIM_WORKERS', 1))
    OUTPUT_DIR = environ.get('ANYONSIM_OUTPUT_DIR', path.join(basedir, 'output'))
    LOG_LEVEL = environ.get('ANYONSIM_LOG_LEVEL', 'INFO')
    MASTER_SEED = int(environ.get('ANYONSIM_MASTER_SEED', 2024))
