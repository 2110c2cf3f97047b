import json

from ..utils.common import json_number
from .base import BaseFormatter


class Json(BaseFormatter):
    def __init__(self, summary, columns, indent=2):
        super().__init__(summary, columns)
        self.indent = indent

    def convert(self, value):
        kind = self.kind(value)
        if kind == "bool":
            return bool(value)
        if kind == "int":
            return int(value)
        if kind == "float":
            return json_number(value)
        if kind == "seq":
            return [self.convert(v) for v in value]
        return value

    def generate(self):
        output = {
            "summary": {key: self.convert(value) for key, value in self.summary},
            "rows": [
                {name: self.convert(value) for name, value in row}
                for row in self.rows()
            ],
        }
        return json.dumps(output, indent=self.indent) + "\n"
