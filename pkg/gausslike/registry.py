# -*- coding: utf-8 -*-
from typing import Any, Dict, Iterator, List, Sequence, Tuple


Row = Dict[str, Any]


class ResultRegistry(object):
    """
    Result rows keyed by their position on a grid. Rows may be added in any
    order (e.g. as a thread pool finishes them); iteration and `rows` always
    follow the grid order.

    Parameters
    ------------
    columns : Sequence[str]
        Column names, in output order. Every row must provide exactly these
        keys.
    """
    def __init__(self, columns: Sequence[str]) -> None:
        self.columns: Tuple[str, ...] = tuple(columns)
        self._key_to_row: Dict[Tuple[int, ...], Row] = {}

    def __contains__(self, key: Any) -> bool:
        return self._as_key(key) in self._key_to_row

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        for key in sorted(self._key_to_row):
            yield key

    def __len__(self) -> int:
        return len(self._key_to_row)

    def __str__(self) -> str:
        return 'ResultRegistry @ length {}'.format(len(self))

    @staticmethod
    def _as_key(key: Any) -> Tuple[int, ...]:
        if isinstance(key, int):
            return (key,)
        return tuple(key)

    def add_row(self, key: Any, row: Row) -> None:
        key = self._as_key(key)
        if key in self._key_to_row:
            raise ValueError('Grid point {} already has a row.'.format(key))
        if set(row) != set(self.columns):
            raise ValueError(
                'Row columns {} do not match {}.'.format(
                    sorted(row), list(self.columns)))
        self._key_to_row[key] = dict(row)

    def rows(self) -> List[Row]:
        return [self._key_to_row[key] for key in self]
