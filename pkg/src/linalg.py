"""Sparse exact Gaussian elimination.

Rows are dictionaries column -> coefficient over any exact field (RatQ or
Fraction). Columns are compared by a caller-supplied key; the basis kept is
semi-echelon: every stored row has a distinct pivot, its largest column,
with coefficient one.
"""

from __future__ import annotations

import logging
from typing import Any, Callable, Hashable, Iterable, Mapping

logger = logging.getLogger(__name__)

Row = dict[Hashable, Any]


class SparseEchelon:
    """Incrementally maintained semi-echelon basis of a row space."""

    def __init__(self, key: Callable[[Hashable], Any] | None = None):
        self._key = key
        self._key_cache: dict[Hashable, Any] = {}
        self.rows: dict[Hashable, Row] = {}

    def column_key(self, col: Hashable) -> Any:
        if self._key is None:
            return col
        cached = self._key_cache.get(col)
        if cached is None:
            cached = self._key_cache[col] = self._key(col)
        return cached

    def leading(self, row: Mapping[Hashable, Any]) -> Hashable:
        return max(row, key=self.column_key)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> set[Hashable]:
        return set(self.rows)

    @staticmethod
    def _axpy(row: Row, scale: Any, pivot_row: Row) -> None:
        """row -= scale * pivot_row, dropping cancelled entries."""
        for col, value in pivot_row.items():
            delta = scale * value
            if col in row:
                updated = row[col] - delta
                if updated:
                    row[col] = updated
                else:
                    del row[col]
            else:
                row[col] = -delta

    def reduce(self, row: Mapping[Hashable, Any]) -> Row:
        """Eliminate pivots from the top until the leading column is free.

        The result is zero exactly when the row lies in the span.
        """
        work = {c: v for c, v in row.items() if v}
        while work:
            lead = self.leading(work)
            pivot_row = self.rows.get(lead)
            if pivot_row is None:
                break
            self._axpy(work, work[lead], pivot_row)
        return work

    def normal_form(self, row: Mapping[Hashable, Any]) -> Row:
        """Fully reduced remainder: no column of the result is a pivot."""
        work = {c: v for c, v in row.items() if v}
        result: Row = {}
        while work:
            lead = self.leading(work)
            pivot_row = self.rows.get(lead)
            if pivot_row is None:
                result[lead] = work.pop(lead)
            else:
                self._axpy(work, work[lead], pivot_row)
        return result

    def add(self, row: Mapping[Hashable, Any]) -> bool:
        """Add a row; return True when it enlarged the span."""
        rest = self.reduce(row)
        if not rest:
            return False
        lead = self.leading(rest)
        inv = 1 / rest[lead]
        self.rows[lead] = {c: v * inv for c, v in rest.items()}
        return True

    def extend(self, rows: Iterable[Mapping[Hashable, Any]]) -> int:
        """Add many rows, returning how many were independent."""
        return sum(1 for row in rows if self.add(row))

    def contains(self, row: Mapping[Hashable, Any]) -> bool:
        return not self.reduce(row)


def rank_of(rows: Iterable[Mapping[Hashable, Any]], key: Callable[[Hashable], Any] | None = None) -> int:
    """Rank of a family of sparse rows."""
    echelon = SparseEchelon(key)
    echelon.extend(rows)
    return echelon.rank
