import hypothesis
import pytest

from cliquecascade import ModelParams, Threshold

hypothesis.settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    max_examples=60,
)
hypothesis.settings.load_profile("ci")


def model(p: dict, q: dict, theta: str) -> ModelParams:
    return ModelParams.create(p, q, Threshold.from_string(theta))


@pytest.fixture
def triangle_model():
    """Three communities of three per individual; every closed form is tiny."""
    return model({3: 1.0}, {3: 1.0}, "1/10")


@pytest.fixture
def path_model():
    """The degenerate two-by-two model whose graph is an infinite path."""
    return model({2: 1.0}, {2: 1.0}, "2/5")


@pytest.fixture
def mixed_model():
    """Half the individuals join one community, half join three."""
    return model({1: 0.5, 3: 0.5}, {2: 1.0}, "1/10")
