# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled stack machine for filtering candidates against stored points.

Values are 64-bit; any overflow raises OverflowError so the caller can retry
on the arbitrary-precision Python path.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    bint add_overflow "__builtin_add_overflow" (long long a, long long b, long long *res) nogil
    bint sub_overflow "__builtin_sub_overflow" (long long a, long long b, long long *res) nogil

cdef enum:
    CONST = 0
    VAR = 1
    ADD = 2
    SUB = 3
    LEQ = 4
    EQ = 5
    AND = 6
    OR = 7
    NOT = 8
    ITE = 9
    CALL = 10


cdef int _run(const long long[:] ops, const long long[:] args, const long long *env,
              const long long[:] pops, const long long[:] pargs,
              long long *stack, long long *result) noexcept nogil:
    # 0 on success, 1 on overflow
    cdef Py_ssize_t n = ops.shape[0]
    cdef Py_ssize_t pc
    cdef Py_ssize_t sp = 0
    cdef Py_ssize_t k
    cdef long long op, a, b, r
    for pc in range(n):
        op = ops[pc]
        if op == CONST:
            stack[sp] = args[pc]
            sp += 1
        elif op == VAR:
            stack[sp] = env[args[pc]]
            sp += 1
        elif op == CALL:
            k = args[pc]
            sp -= k
            # program runs above its arguments; it never contains CALL
            if _run(pops, pargs, &stack[sp], pops, pargs, &stack[sp + k], &r):
                return 1
            stack[sp] = r
            sp += 1
        elif op == NOT:
            stack[sp - 1] = 0 if stack[sp - 1] else 1
        elif op == ITE:
            sp -= 2
            stack[sp - 1] = stack[sp] if stack[sp - 1] else stack[sp + 1]
        else:
            sp -= 1
            a = stack[sp - 1]
            b = stack[sp]
            if op == ADD:
                if add_overflow(a, b, &r):
                    return 1
                stack[sp - 1] = r
            elif op == SUB:
                if sub_overflow(a, b, &r):
                    return 1
                stack[sp - 1] = r
            elif op == LEQ:
                stack[sp - 1] = a <= b
            elif op == EQ:
                stack[sp - 1] = a == b
            elif op == AND:
                stack[sp - 1] = (a != 0) and (b != 0)
            else:
                stack[sp - 1] = (a != 0) or (b != 0)
    result[0] = stack[sp - 1]
    return 0


def first_failure(const long long[:] pops, const long long[:] pargs,
                  const long long[:] gops, const long long[:] gargs,
                  const long long[:] points, Py_ssize_t nvars):
    """Index of the first point where the property is false, or -1."""
    cdef Py_ssize_t npoints = points.shape[0] // nvars if nvars else 0
    cdef Py_ssize_t depth = pops.shape[0] + gops.shape[0] + 2
    cdef long long *stack = <long long *> malloc(depth * sizeof(long long))
    cdef long long r = 0
    cdef Py_ssize_t i
    cdef int rc = 0
    cdef Py_ssize_t found = -1
    if stack == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(npoints):
                rc = _run(pops, pargs, &points[i * nvars], gops, gargs, stack, &r)
                if rc:
                    break
                if r == 0:
                    found = i
                    break
    finally:
        free(stack)
    if rc:
        raise OverflowError("64-bit overflow in kernel")
    return found


def run_many(const long long[:] ops, const long long[:] args,
             const long long[:] points, Py_ssize_t nvars):
    """Value of a call-free program at every point."""
    cdef Py_ssize_t npoints = points.shape[0] // nvars if nvars else 0
    cdef long long *stack = <long long *> malloc((ops.shape[0] + 2) * sizeof(long long))
    cdef long long r = 0
    cdef Py_ssize_t i
    out = []
    if stack == NULL:
        raise MemoryError()
    try:
        for i in range(npoints):
            if _run(ops, args, &points[i * nvars], ops, args, stack, &r):
                raise OverflowError("64-bit overflow in kernel")
            out.append(r)
    finally:
        free(stack)
    return out
