import csv
import io
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from WeakTime.conf import get_setting
from .exceptions import OutputFailure

# empty CSV field for a value that is undefined at this row
SENTINEL = None


def format_value(value, digits=None):
    digits = get_setting('CSV_SIGNIFICANT_DIGITS', digits)
    if value is SENTINEL or (isinstance(value, float) and math.isnan(value)):
        return ''
    return format(float(value), f'.{digits}g')


@dataclass
class TimeSeries:
    """
    Sampled rows for CSV output; ``header`` names the columns in order.

    A value of ``None`` is written as an empty field.
    """
    header: Tuple[str, ...]
    rows: List[Sequence[Optional[float]]] = field(default_factory=list)

    def append(self, row):
        if len(row) != len(self.header):
            raise ValueError(f"row has {len(row)} values for {len(self.header)} columns")
        self.rows.append(tuple(row))

    def column(self, name):
        index = self.header.index(name)
        return [row[index] for row in self.rows]

    def is_time_ordered(self):
        """True when the first column is strictly increasing."""
        first = [row[0] for row in self.rows]
        return all(later > earlier for earlier, later in zip(first, first[1:]))

    def write_csv(self, stream):
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([format_value(value) for value in row])

    def to_csv(self):
        buffer = io.StringIO()
        self.write_csv(buffer)
        return buffer.getvalue()

    def save(self, path):
        try:
            with open(path, 'w', newline='', encoding='utf-8') as handle:
                self.write_csv(handle)
        except OSError as exc:
            raise OutputFailure(f"cannot write {path}: {exc.strerror or exc}", field='out') from exc
