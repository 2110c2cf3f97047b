from .json_summary import Json  # noqa: F401
from .table import Table  # noqa: F401
