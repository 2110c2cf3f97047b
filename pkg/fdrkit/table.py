"""Delimited input tables for the command line."""
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import InputError


def sniff_delimiter(header_line):
    return "\t" if "\t" in header_line else ","


@dataclass(eq=False)
class InputTable:
    """A table read with every cell kept as text.

    Columns are converted on demand so that a malformed cell can be reported
    with its row and column.
    """

    frame: pd.DataFrame
    delimiter: str = ","
    source: str = "<input>"

    @classmethod
    def read(cls, path):
        path = Path(path)
        if not path.is_file():
            raise InputError("file does not exist: {}".format(path))
        with open(path, encoding="utf-8") as f:
            header = f.readline()
        if not header.strip():
            raise InputError("{} has no header line".format(path))
        delimiter = sniff_delimiter(header)
        try:
            frame = pd.read_csv(
                path,
                sep=delimiter,
                dtype=str,
                keep_default_na=False,
                skipinitialspace=True,
            )
        except pd.errors.ParserError as e:
            raise InputError("cannot parse {}: {}".format(path, e))
        frame.columns = [str(c).strip() for c in frame.columns]
        if frame.empty:
            raise InputError("{} has no data rows".format(path))
        return cls(frame, delimiter, str(path))

    def __len__(self):
        return len(self.frame)

    @property
    def columns(self):
        return list(self.frame.columns)

    def has(self, column):
        return column in self.frame.columns

    def require(self, column):
        if not self.has(column):
            raise InputError("missing '{}' column".format(column), column=column)

    def numeric(self, column):
        self.require(column)
        text = self.frame[column].str.strip()
        values = pd.to_numeric(text, errors="coerce")
        # "inf"/"nan" parse as numbers but are not usable values
        bad = values.isna() | ~np.isfinite(values.to_numpy(dtype=float))
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            raise InputError(
                "cannot use '{}' as a number".format(text.iloc[row]),
                row=row + 1,
                column=column,
            )
        return values.to_numpy(dtype=float)

    def text(self, column):
        self.require(column)
        return self.frame[column].str.strip().to_numpy(dtype=object)
