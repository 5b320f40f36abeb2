import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from vaguelogic.formula import FALSE, TRUE, And, Def, Implies, Not, Or, Prop, Report
from vaguelogic.structures import random_structure

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def formulas(n=2, props=("p", "q", "c"), max_leaves=12):
    leaves = st.one_of(st.sampled_from([TRUE, FALSE]), st.sampled_from(props).map(Prop))
    agent = st.integers(1, n)

    def extend(inner):
        return st.one_of(
            inner.map(Not),
            st.builds(And, inner, inner),
            st.builds(Or, inner, inner),
            st.builds(Implies, inner, inner),
            st.builds(Report, agent, inner),
            st.builds(Def, agent, inner),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def structures(draw, n=None, props=("p", "q", "c"), objective=("c",), max_states=3):
    n = draw(st.integers(1, 3)) if n is None else n
    seed = draw(st.integers(0, 2**32 - 1))
    return random_structure(n, max_states, max_states, props, seed=seed, objective_props=objective)


@st.composite
def model_and_formula(draw, props=("p", "q", "c")):
    M = draw(structures(props=props))
    phi = draw(formulas(M.n, props))
    return M, phi


def rng(seed=0):
    return random.Random(seed)
