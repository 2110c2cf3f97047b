from . import constants  # noqa: F401
from .common import *  # noqa
