"""Independent reference implementations used to compute expected values.

Nothing here imports the checker or the decision procedures: truth is
computed straight from the semantic clauses over the raw structure fields,
and small structures are enumerated without any symmetry pruning.
"""

from __future__ import annotations

from itertools import chain, combinations, product

from vaguelogic.formula import And, Def, FalseLit, Implies, Not, Or, Prop, Report, TrueLit
from vaguelogic.structures import VagueStructure, World


def naive_eval(M, w, i, phi):
    """Truth of ``phi`` at world index ``w`` for agent ``i``, by direct recursion."""
    if isinstance(phi, TrueLit):
        return True
    if isinstance(phi, FalseLit):
        return False
    if isinstance(phi, Prop):
        return w in M.valuation[phi.name][i - 1]
    if isinstance(phi, Not):
        return not naive_eval(M, w, i, phi.arg)
    if isinstance(phi, And):
        return naive_eval(M, w, i, phi.left) and naive_eval(M, w, i, phi.right)
    if isinstance(phi, Or):
        return naive_eval(M, w, i, phi.left) or naive_eval(M, w, i, phi.right)
    if isinstance(phi, Implies):
        return (not naive_eval(M, w, i, phi.left)) or naive_eval(M, w, i, phi.right)
    here = M.worlds[w]
    j = phi.agent
    if isinstance(phi, Report):
        targets = [
            v for v in M.plausible[j - 1] if M.worlds[v].s[j - 1] == here.s[j - 1]
        ]
    elif isinstance(phi, Def):
        targets = [v for v, other in enumerate(M.worlds) if other.o == here.o]
    else:
        raise TypeError(phi)
    return all(naive_eval(M, v, j, phi.body) for v in targets)


def naive_valid_in_model(M, phi):
    return all(naive_eval(M, w, i, phi) for w in range(len(M.worlds)) for i in range(1, M.n + 1))


def _subsets(items):
    items = list(items)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def all_structures(n, n_obj, n_subj, props, objective=(), max_worlds=None):
    """Every valid structure whose worlds use states ``< n_obj`` / ``< n_subj``.

    Valuations range over all local assignments; plausibility over all sets
    meeting every subjective class.  Exponential; only for tiny bounds.
    """
    cells = list(product(range(n_obj), *[range(n_subj)] * n))
    for chosen in _subsets(cells):
        if not chosen or (max_worlds is not None and len(chosen) > max_worlds):
            continue
        worlds = [World(c[0], tuple(c[1:])) for c in chosen]
        idx = range(len(worlds))
        plaus_options = []
        for j in range(n):
            classes = {}
            for k, w in enumerate(worlds):
                classes.setdefault(w.s[j], set()).add(k)
            opts = [set(ps) for ps in _subsets(idx) if all(set(ps) & c for c in classes.values())]
            plaus_options.append(opts)
        local_keys = []
        for p in props:
            if p in objective:
                local_keys.append([(p, w.o) for w in worlds])
            else:
                local_keys.append([(p, i, w.o, w.s[i - 1]) for i in range(1, n + 1) for w in worlds])
        keys = sorted({k for ks in local_keys for k in ks}, key=repr)
        for plausible in product(*plaus_options):
            for bits in product((False, True), repeat=len(keys)):
                truth = dict(zip(keys, bits))
                valuation = {}
                for p in props:
                    if p in objective:
                        ws = {k for k, w in enumerate(worlds) if truth[(p, w.o)]}
                        valuation[p] = [ws] * n
                    else:
                        valuation[p] = [
                            {k for k, w in enumerate(worlds) if truth[(p, i, w.o, w.s[i - 1])]}
                            for i in range(1, n + 1)
                        ]
                yield VagueStructure(
                    n=n,
                    objective_labels=[f"o{k}" for k in range(n_obj)],
                    subjective_labels=[[f"s{k}" for k in range(n_subj)] for _ in range(n)],
                    worlds=worlds,
                    plausible=plausible,
                    valuation=valuation,
                    objective_props=frozenset(objective),
                )


def brute_satisfiable(phi, n, n_obj, n_subj, props, objective=(), max_worlds=None):
    """First ``(M, w, i)`` among :func:`all_structures` with ``phi`` true, else ``None``."""
    for M in all_structures(n, n_obj, n_subj, props, objective, max_worlds):
        for w in range(len(M.worlds)):
            for i in range(1, n + 1):
                if naive_eval(M, w, i, phi):
                    return M, w, i
    return None


def floor_readings(n, g=10, delta=4, clamp=True):
    """Readings allowed by the floor formula, listed one by one."""
    lo = (n - delta) // g
    hi = (n + delta) // g
    values = [r for r in range(lo, hi + 1)]
    return [max(r, 0) for r in values] if clamp else values


def brute_threshold(g, delta, cap, tolerance=1):
    """Smallest k such that every pair in [0, cap] at distance >= k is inequivalent for every reading choice."""
    for k in range(1, cap + 1):
        good = True
        for a in range(cap + 1):
            for b in range(a + k, cap + 1):
                ra, rb = set(floor_readings(a, g, delta)), set(floor_readings(b, g, delta))
                if any(abs(x - y) <= tolerance for x in ra for y in rb):
                    good = False
                    break
            if not good:
                break
        if good:
            return k
    return None
