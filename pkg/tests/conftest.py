import json
from pathlib import Path

import pytest

from qcontext.model_io import ModelSpec, parse_model

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def non_ds_witness() -> ModelSpec:
    """Stored model whose transition matrix is stochastic but not doubly
    stochastic; Born's rule fails in any fixed a-basis on it."""
    return parse_model((DATA / "non_double_stochastic_witness.json").read_text())


@pytest.fixture(scope="session")
def hyperbolic_witness() -> ModelSpec:
    """Stored five-point model with a fully hyperbolic context."""
    return parse_model((DATA / "hyperbolic_witness.json").read_text())


@pytest.fixture(scope="session")
def cover_witness() -> dict:
    """Stored seven-point pair of covering families: no mutual inclusions yet
    one empty pairwise intersection."""
    return json.loads((DATA / "cover_families_witness.json").read_text())
