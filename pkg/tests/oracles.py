"""Independent decision procedures the lattice tests check against.

These evaluate raw expressions directly, without touching the normal-form
machinery under test.

* Interval oracle: an expression over n names denotes a monotone Boolean
  function of 2n independent variables, one for each literal i / -i
  (the free distributive lattice criterion).  Negation is pushed to the
  leaves on the fly by tracking polarity.
* Face oracle: a name can be in one of three states: (i=0) holds, (i=1)
  holds, or neither; a formula denotes its truth table over all 3^n
  assignments.
"""

import itertools
import random


def interval_eval(expr, assignment, neg=False):
    """assignment maps (name, polarity) -> bool for independent literals."""
    match expr:
        case ("zero",):
            return neg
        case ("one",):
            return not neg
        case ("var", n):
            return assignment[(n, not neg)]
        case ("neg", e):
            return interval_eval(e, assignment, not neg)
        case ("and", a, b) if not neg:
            return interval_eval(a, assignment) and interval_eval(b, assignment)
        case ("and", a, b):
            return interval_eval(a, assignment, True) or interval_eval(b, assignment, True)
        case ("or", a, b) if not neg:
            return interval_eval(a, assignment) or interval_eval(b, assignment)
        case ("or", a, b):
            return interval_eval(a, assignment, True) and interval_eval(b, assignment, True)
    raise ValueError(expr)


def interval_table(expr, names):
    """Truth table over all assignments of the 2n literal variables, as a bitmask."""
    lits = [(n, pol) for n in names for pol in (True, False)]
    table = 0
    for bits in itertools.product((False, True), repeat=len(lits)):
        table <<= 1
        if interval_eval(expr, dict(zip(lits, bits))):
            table |= 1
    return table


def face_eval(expr, assignment):
    """assignment maps name -> 0, 1, or None (neither side holds)."""
    match expr:
        case ("bot",):
            return False
        case ("top",):
            return True
        case ("atom", n, side):
            return assignment[n] == side
        case ("and", a, b):
            return face_eval(a, assignment) and face_eval(b, assignment)
        case ("or", a, b):
            return face_eval(a, assignment) or face_eval(b, assignment)
    raise ValueError(expr)


def face_table(expr, names):
    table = 0
    for states in itertools.product((0, 1, None), repeat=len(names)):
        table <<= 1
        if face_eval(expr, dict(zip(names, states))):
            table |= 1
    return table


def random_interval_expr(rng: random.Random, names, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice([("zero",), ("one",)] + [("var", n) for n in names])
    op = rng.choice(["and", "or", "neg"])
    if op == "neg":
        return ("neg", random_interval_expr(rng, names, depth - 1))
    return (op, random_interval_expr(rng, names, depth - 1),
            random_interval_expr(rng, names, depth - 1))


def random_face_expr(rng: random.Random, names, depth):
    if depth == 0 or rng.random() < 0.3:
        atoms = [("bot",), ("top",)]
        atoms += [("atom", n, s) for n in names for s in (0, 1)]
        return rng.choice(atoms)
    op = rng.choice(["and", "or"])
    return (op, random_face_expr(rng, names, depth - 1),
            random_face_expr(rng, names, depth - 1))
