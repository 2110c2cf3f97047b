import numpy as np


class BaseFormatter:
    """Renders a summary block and a column-oriented table.

    Args:
        summary: sequence of (key, value) pairs
        columns: mapping of column name to a sequence of cells, all of one length
    """

    def __init__(self, summary, columns):
        self.summary = list(summary)
        self.columns = dict(columns)
        lengths = {len(cells) for cells in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError("columns differ in length: {}".format(sorted(lengths)))

    @property
    def n_rows(self):
        if not self.columns:
            return 0
        return len(next(iter(self.columns.values())))

    def rows(self):
        names = list(self.columns)
        for k in range(self.n_rows):
            yield [(name, self.columns[name][k]) for name in names]

    @staticmethod
    def kind(value):
        if value is None:
            return "none"
        if isinstance(value, (bool, np.bool_)):
            return "bool"
        if isinstance(value, (int, np.integer)):
            return "int"
        if isinstance(value, (float, np.floating)):
            return "float"
        if isinstance(value, (list, tuple)):
            return "seq"
        return "text"

    def generate(self):
        raise NotImplementedError("generate method not implemented in child class")
