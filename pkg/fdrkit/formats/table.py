import pandas as pd

from ..utils.common import format_number
from ..utils.constants import DEFAULT_PRECISION, FALSE_TEXT, MISSING_TEXT, TRUE_TEXT
from .base import BaseFormatter


class Table(BaseFormatter):
    """``# key: value`` summary lines followed by a delimited table.

    The table body is written by pandas, so cells holding the delimiter, a
    quote or a line break are quoted and read back intact.
    """

    def __init__(self, summary, columns, delimiter=",", precision=DEFAULT_PRECISION):
        super().__init__(summary, columns)
        self.delimiter = delimiter
        self.precision = precision

    def render(self, value):
        kind = self.kind(value)
        if kind == "none":
            return MISSING_TEXT
        if kind == "bool":
            return TRUE_TEXT if value else FALSE_TEXT
        if kind == "int":
            return str(int(value))
        if kind == "float":
            return format_number(value, self.precision)
        if kind == "seq":
            return ";".join(self.render(v) for v in value)
        return str(value)

    def generate(self):
        text = "".join(
            "# {}: {}\n".format(key, self.render(value)) for key, value in self.summary
        )
        if self.columns:
            frame = pd.DataFrame(
                {
                    name: [self.render(v) for v in cells]
                    for name, cells in self.columns.items()
                },
                columns=list(self.columns),
            )
            text += frame.to_csv(sep=self.delimiter, index=False, lineterminator="\n")
        return text
