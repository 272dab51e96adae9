import pytest

from fraisse.classes import builtin
from fraisse.limits import build_generic_model, build_order_box_model


@pytest.fixture(scope="session")
def graph_model():
    """Level-3 generic graph approximation shared across the suite."""
    return build_generic_model(builtin("G"), level=3, size_cap=200)


@pytest.fixture(scope="session")
def order_box_4():
    """Side-4 box of four stacked orders."""
    return build_order_box_model(4, 4, budget=4096)
