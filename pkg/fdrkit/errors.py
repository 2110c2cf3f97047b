"""Exception hierarchy shared by the library and the command line."""


class FdrkitError(Exception):
    pass


class DomainError(FdrkitError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(FdrkitError, ValueError):
    pass


class InputError(FdrkitError):
    """A cell of an input table could not be used.

    Args:
        message: what went wrong
        row: 1-based data row, or None when the problem is table-wide
        column: column name, or None
    """

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        self.message = message
        super().__init__(self._render())

    def _render(self):
        where = []
        if self.row is not None:
            where.append("row {}".format(self.row))
        if self.column is not None:
            where.append("column '{}'".format(self.column))
        if not where:
            return self.message
        return "{}: {}".format(", ".join(where), self.message)
