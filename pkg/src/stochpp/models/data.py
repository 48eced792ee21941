import csv

from ..errors import DomainError

_BOOLS = {"true": True, "false": False}


def _parse(cell):
    c = cell.strip()
    if c.lower() in _BOOLS:
        return _BOOLS[c.lower()]
    return float(c)


def load_column(path):
    """Read a single-column CSV of reals or ``true``/``false`` literals.

    A header line is optional and detected by failing to parse the first
    row.  Returns a list of bools or a list of floats; mixing the two is an
    error.
    """
    with open(path, newline="", encoding="utf-8-sig") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise DomainError(f"{path}: no data")
    values = []
    for lineno, row in enumerate(rows):
        if len(row) != 1:
            raise DomainError(f"{path}: expected one column, got {len(row)} in row {lineno + 1}")
        try:
            values.append(_parse(row[0]))
        except ValueError:
            if lineno == 0:
                continue
            raise DomainError(f"{path}: cannot parse {row[0]!r} in row {lineno + 1}") from None
    if not values:
        raise DomainError(f"{path}: no data")
    kinds = {type(v) for v in values}
    if len(kinds) > 1:
        raise DomainError(f"{path}: mixes boolean and real values")
    return values
