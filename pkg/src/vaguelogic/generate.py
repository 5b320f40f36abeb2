"""Seeded random formulas and axiom-schema instances for fuzzing."""

from __future__ import annotations

import random

from .formula import (
    FALSE,
    TRUE,
    And,
    Def,
    Formula,
    Implies,
    Not,
    Or,
    Prop,
    Report,
    disjoin,
    is_nec_agent_independent,
    is_prop_tautology,
)

AXIOM_NAMES = ("Taut", "R1", "R2", "R3", "R4", "D1", "D2", "D3", "D4", "D5", "D6")


def random_formula(rng: random.Random, props=("p", "q"), n: int = 1, depth: int = 3) -> Formula:
    """A random formula of modal depth at most ``depth`` over the surface connectives."""
    if depth <= 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.06:
            return TRUE
        if roll < 0.12:
            return FALSE
        return Prop(rng.choice(props))
    kind = rng.choice(("not", "and", "or", "implies", "report", "def", "report", "def"))
    if kind == "not":
        return Not(random_formula(rng, props, n, depth))
    if kind in ("and", "or", "implies"):
        cls = {"and": And, "or": Or, "implies": Implies}[kind]
        return cls(random_formula(rng, props, n, depth - 1), random_formula(rng, props, n, depth - 1))
    cls = Report if kind == "report" else Def
    return cls(rng.randint(1, n), random_formula(rng, props, n, depth - 1))


def random_nec_agent_independent(rng: random.Random, props=("p", "q"), n: int = 1, depth: int = 3) -> Formula:
    """A Boolean combination of ``R_j``/``D_j`` formulas."""
    if depth <= 1 or rng.random() < 0.4:
        cls = rng.choice((Report, Def))
        return cls(rng.randint(1, n), random_formula(rng, props, n, max(depth - 1, 0)))
    kind = rng.choice(("not", "and", "or", "implies"))
    if kind == "not":
        return Not(random_nec_agent_independent(rng, props, n, depth))
    cls = {"and": And, "or": Or, "implies": Implies}[kind]
    return cls(
        random_nec_agent_independent(rng, props, n, depth - 1),
        random_nec_agent_independent(rng, props, n, depth - 1),
    )


def formula_pool(size: int, seed=0, props=("p", "q"), n: int = 1, depth: int = 3) -> list:
    rng = random.Random(f"pool/{seed}/{n}")
    return [random_formula(rng, props, n, rng.randint(0, depth)) for _ in range(size)]


# Propositional tautology schemas over placeholders a, b, c.
TAUTOLOGY_TEMPLATES = (
    lambda a, b, c: Implies(a, a),
    lambda a, b, c: Or(a, Not(a)),
    lambda a, b, c: Implies(And(a, b), a),
    lambda a, b, c: Implies(a, Implies(b, a)),
    lambda a, b, c: Implies(Implies(a, Implies(b, c)), Implies(Implies(a, b), Implies(a, c))),
    lambda a, b, c: Implies(Implies(Not(b), Not(a)), Implies(a, b)),
    lambda a, b, c: Implies(Implies(Implies(a, b), a), a),
    lambda a, b, c: Implies(And(Implies(a, b), Implies(b, c)), Implies(a, c)),
    lambda a, b, c: Implies(Not(Not(a)), a),
    lambda a, b, c: Or(Implies(a, b), Implies(b, a)),
    lambda a, b, c: Implies(And(a, Not(a)), c),
)


def axiom_instance(name: str, rng: random.Random, pool, n: int, props=("p", "q")) -> Formula:
    """Instantiate schema ``name`` with formulas drawn from ``pool``."""
    phi, psi, chi = rng.choice(pool), rng.choice(pool), rng.choice(pool)
    j = rng.randint(1, n)
    if name == "Taut":
        inst = rng.choice(TAUTOLOGY_TEMPLATES)(phi, psi, chi)
        assert is_prop_tautology(inst)
        return inst
    if name in ("R1", "D1"):
        op = Report if name[0] == "R" else Def
        return Implies(op(j, Implies(phi, psi)), Implies(op(j, phi), op(j, psi)))
    if name in ("R2", "D2"):
        op = Report if name[0] == "R" else Def
        return Implies(op(j, phi), op(j, op(j, phi)))
    if name in ("R3", "D3"):
        op = Report if name[0] == "R" else Def
        return Implies(Not(op(j, phi)), op(j, Not(op(j, phi))))
    if name in ("R4", "D4"):
        op = Report if name[0] == "R" else Def
        return Not(op(j, FALSE))
    if name == "D5":
        body = random_nec_agent_independent(rng, props, n, rng.randint(1, 3))
        assert is_nec_agent_independent(body)
        return Implies(Def(j, body), body)
    if name == "D6":
        bodies = [rng.choice(pool) for _ in range(n)]
        return disjoin(*(Implies(Def(k + 1, b), b) for k, b in enumerate(bodies)))
    raise ValueError(f"unknown axiom {name!r}")
