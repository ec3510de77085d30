import pytest
from hypothesis import HealthCheck, settings

from minmod.semantics import Interpretation
from minmod.syntax import parse_concept, parse_kb

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

EXAMPLE2_TBOX = """
Fan [= exists likes. Movie
Critic [= exists dislikes. TOP
"""


@pytest.fixture
def scandinavia():
    return parse_kb("""
ScandCountry(no)
ScandCountry(se)
ScandCountry(dk)
NatoMember(no)
NatoMember(se)
NatoMember(dk)
""")


@pytest.fixture
def fans_k1():
    return parse_kb(EXAMPLE2_TBOX + "Fan(ann)\n")


@pytest.fixture
def fans_k2():
    return parse_kb(EXAMPLE2_TBOX + "Fan(ann)\nCritic(bob)\n")


@pytest.fixture
def fans_goal():
    return parse_concept("(Movie and exists dislikes^-. TOP)")


@pytest.fixture
def fans_k2_model():
    # ann likes an anonymous movie m that bob dislikes
    return Interpretation(
        ("ann", "bob", "m"), {"ann": 0, "bob": 1},
        {"Fan": {0}, "Critic": {1}, "Movie": {2}},
        {"likes": {(0, 2)}, "dislikes": {(1, 2)}},
    )


@pytest.fixture
def loop_kb():
    return parse_kb("exists r. A [= A\nr(a, b)\nr(b, a)\n")


@pytest.fixture
def loop_model():
    return Interpretation(("d", "e"), {"a": 0, "b": 1}, {"A": {0, 1}}, {"r": {(0, 1), (1, 0)}})


@pytest.fixture
def loop_model_empty(loop_model):
    return Interpretation(loop_model.domain, loop_model.individuals, {}, loop_model.roles)
