"""Pure-Python stack machine; mirrors ``_ckernel.pyx`` opcode for opcode."""

CONST, VAR, ADD, SUB, LEQ, EQ, AND, OR, NOT, ITE, CALL = range(11)


def _run(ops, args, env, pops, pargs):
    stack = []
    push = stack.append
    pop = stack.pop
    for pc in range(len(ops)):
        op = ops[pc]
        if op == CONST:
            push(args[pc])
        elif op == VAR:
            push(env[args[pc]])
        elif op == CALL:
            k = args[pc]
            sub = stack[len(stack) - k:]
            del stack[len(stack) - k:]
            push(_run(pops, pargs, sub, pops, pargs))
        elif op == NOT:
            stack[-1] = 0 if stack[-1] else 1
        elif op == ITE:
            b = pop()
            a = pop()
            stack[-1] = a if stack[-1] else b
        else:
            b = pop()
            a = stack[-1]
            if op == ADD:
                stack[-1] = a + b
            elif op == SUB:
                stack[-1] = a - b
            elif op == LEQ:
                stack[-1] = 1 if a <= b else 0
            elif op == EQ:
                stack[-1] = 1 if a == b else 0
            elif op == AND:
                stack[-1] = 1 if (a and b) else 0
            else:
                stack[-1] = 1 if (a or b) else 0
    return stack[-1]


def first_failure(pops, pargs, gops, gargs, points, nvars):
    """Index of the first point where the property is false, or -1."""
    npoints = len(points) // nvars if nvars else 0
    for i in range(npoints):
        env = points[i * nvars:(i + 1) * nvars]
        if not _run(pops, pargs, env, gops, gargs):
            return i
    return -1


def run_many(ops, args, points, nvars):
    """Value of a call-free program at every point."""
    npoints = len(points) // nvars if nvars else 0
    return [_run(ops, args, points[i * nvars:(i + 1) * nvars], ops, args) for i in range(npoints)]
