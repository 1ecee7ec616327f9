"""Size-fair enumeration of grammar programs.

Programs of size k are produced only after every program of size k-1 has
been produced. Within a layer the order is constructor declaration order,
then child-size composition order, then the order of the child layers.
"""

from __future__ import annotations

import enum
import itertools
from typing import Callable, Hashable, Iterator, Protocol

from .grammar import GrammarSpec, ProgramTerm


class Stop(enum.Enum):
    EXHAUSTED = "exhausted"
    CAP_REACHED = "cap reached"


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of ``parts`` non-negative ints summing to ``total``, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


class Layers:
    """Materialized layers for child positions; the requested layer itself streams."""

    def __init__(self, grammar: GrammarSpec):
        self.grammar = grammar
        self._cache: dict[tuple[str, int], list[ProgramTerm]] = {}

    def get(self, datatype: str, k: int) -> list[ProgramTerm]:
        key = (datatype, k)
        if key not in self._cache:
            self._cache[key] = list(self.stream(datatype, k))
        return self._cache[key]

    def stream(self, datatype: str, k: int) -> Iterator[ProgramTerm]:
        if k < 0:
            return
        g = self.grammar
        for c in g.by_name[datatype].constructors:
            if not c.args:
                if k == 0:
                    yield ProgramTerm(c.name, (), datatype)
                continue
            if k == 0:
                continue
            for sizes in _compositions(k - 1, len(c.args)):
                if any(g.least_size(a) > s for a, s in zip(c.args, sizes)):
                    continue
                pools = [self.get(a, s) for a, s in zip(c.args, sizes)]
                if any(not p for p in pools):
                    continue
                for kids in itertools.product(*pools):
                    yield ProgramTerm(c.name, kids, datatype)


def enumerate_layer(g: GrammarSpec, datatype: str, k: int) -> Iterator[ProgramTerm]:
    """Every program of ``datatype`` with size exactly ``k``, each once."""
    return Layers(g).stream(datatype, k)


class CandidateFilter(Protocol):
    epoch: int

    def passes(self, p: ProgramTerm) -> bool: ...

    def signature(self, p: ProgramTerm) -> Hashable | None: ...


class Enumerator:
    """Cursor over the start datatype, returning programs accepted by a filter."""

    def __init__(
        self,
        grammar: GrammarSpec,
        max_size: int = 8,
        prune: bool = False,
        on_visit: Callable[[ProgramTerm, int], None] | None = None,
    ):
        self.grammar = grammar
        self.max_size = max_size
        self.prune = prune
        self.current_size = 0
        self.layers = Layers(grammar)
        self.layer_counts: dict[int, int] = {}
        self.equivalence_cache: dict[Hashable, ProgramTerm] = {}
        self.pruned = 0
        self.examined = 0
        self._cache_epoch = -1
        self._stream: Iterator[ProgramTerm] | None = None
        self._seen_in_layer = 0
        self._on_visit = on_visit
        self._bound = grammar.max_program_size()

    def next_candidate(self, filt: CandidateFilter) -> ProgramTerm | Stop:
        start = self.grammar.start
        while True:
            if self._stream is None:
                if self._bound is not None and self.current_size > self._bound:
                    return Stop.EXHAUSTED
                if self.current_size > self.max_size:
                    return Stop.CAP_REACHED
                self._stream = self.layers.stream(start, self.current_size)
                self._seen_in_layer = 0
            for p in self._stream:
                self._seen_in_layer += 1
                self.examined += 1
                if self._on_visit is not None:
                    self._on_visit(p, self.current_size)
                if self.prune:
                    if filt.epoch != self._cache_epoch:
                        self.equivalence_cache.clear()
                        self._cache_epoch = filt.epoch
                    key = filt.signature(p)
                    if key is not None:
                        if key in self.equivalence_cache:
                            self.pruned += 1
                            continue
                        self.equivalence_cache[key] = p
                if filt.passes(p):
                    return p
            self.layer_counts[self.current_size] = self._seen_in_layer
            self._stream = None
            self.current_size += 1
