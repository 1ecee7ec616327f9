"""Bytecode compilation and backend selection for candidate filtering.

The compiled backend is used when the ``_ckernel`` extension imports and
``SYGUS_FORGE_PURE`` is unset; otherwise the pure-Python machine runs.
"""

from __future__ import annotations

import os
from array import array
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import _pykernel
from . import terms as T
from .grammar import ConstDenotation, GrammarSpec, ProgramTerm, VarDenotation
from .terms import Op, Term

try:
    if os.environ.get("SYGUS_FORGE_PURE"):
        raise ImportError("pure backend requested")
    from . import _ckernel as _native
except ImportError:
    _native = None

BACKEND = "cython" if _native is not None else "python"

CONST, VAR, ADD, SUB, LEQ, EQ, AND, OR, NOT, ITE, CALL = range(11)

_OPCODE = {
    Op.ADD: ADD,
    Op.SUB: SUB,
    Op.LEQ: LEQ,
    Op.EQ: EQ,
    Op.AND: AND,
    Op.OR: OR,
    Op.NOT: NOT,
    Op.ITE: ITE,
}


@dataclass
class Code:
    ops: list[int]
    args: list[int]
    _packed: tuple | None = None

    def packed(self) -> tuple[array, array]:
        if self._packed is None:
            self._packed = (array("q", self.ops), array("q", self.args))
        return self._packed


def compile_term(t: Term, var_index: Mapping[str, int], fun_name: str | None = None) -> Code:
    """Postfix code for ``t``; calls to ``fun_name`` become CALL instructions."""
    ops: list[int] = []
    args: list[int] = []

    def go(node: Term) -> None:
        if isinstance(node, T.Var):
            ops.append(VAR)
            args.append(var_index[node.name])
        elif isinstance(node, (T.IntConst, T.BoolConst)):
            ops.append(CONST)
            args.append(int(node.value))
        elif isinstance(node, T.Call):
            if node.name != fun_name:
                raise ValueError(f"unexpected call to {node.name}")
            for a in node.args:
                go(a)
            ops.append(CALL)
            args.append(len(node.args))
        else:
            for a in node.args:
                go(a)
            ops.append(_OPCODE[node.op])
            args.append(0)

    go(t)
    return Code(ops, args)


def compile_program(p: ProgramTerm, g: GrammarSpec, param_index: Mapping[str, int]) -> Code:
    ops: list[int] = []
    args: list[int] = []

    def go(q: ProgramTerm) -> None:
        den = g.constructor(q.datatype, q.constructor).denotation
        if isinstance(den, VarDenotation):
            ops.append(VAR)
            args.append(param_index[den.name])
        elif isinstance(den, ConstDenotation):
            ops.append(CONST)
            args.append(int(den.value))
        else:
            for c in q.children:
                go(c)
            ops.append(_OPCODE[den.op])
            args.append(0)

    go(p)
    return Code(ops, args)


class PointMatrix:
    """Counterexample points as a flat row-major buffer, one column per variable."""

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        self.stride = max(1, len(self.names))
        self.rows: list[list[int]] = []
        self._flat: list[int] = []
        self._packed: array | None = None

    def __len__(self) -> int:
        return len(self.rows)

    def append(self, point: Mapping[str, int | bool]) -> None:
        row = [int(point[n]) for n in self.names] or [0]
        self.rows.append(row)
        self._flat.extend(row)
        self._packed = None

    def packed(self) -> array | None:
        if self._packed is None:
            try:
                self._packed = array("q", self._flat)
            except OverflowError:
                return None
        return self._packed


def first_failure(prop: Code, prog: Code, points: PointMatrix, backend: str | None = None) -> int:
    """Index of the first stored point at which ``prop`` fails for ``prog``, else -1."""
    if not len(points):
        return -1
    if _native is not None and backend != "python":
        flat = points.packed()
        if flat is not None:
            try:
                return _native.first_failure(*prop.packed(), *prog.packed(), flat, points.stride)
            except OverflowError:
                pass
    return _pykernel.first_failure(prop.ops, prop.args, prog.ops, prog.args, points._flat, points.stride)


def run_many(prog: Code, points: PointMatrix, backend: str | None = None) -> list[int]:
    if not len(points):
        return []
    if _native is not None and backend != "python":
        flat = points.packed()
        if flat is not None:
            try:
                return _native.run_many(*prog.packed(), flat, points.stride)
            except OverflowError:
                pass
    return _pykernel.run_many(prog.ops, prog.args, points._flat, points.stride)
