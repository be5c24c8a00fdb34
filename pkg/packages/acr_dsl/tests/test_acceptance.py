from __future__ import annotations

import pytest

from acr_dsl.acceptance import (
    CRITERIA,
    ac_counterexample,
    converse_bound,
    enclosure_soundness,
    ftc_coherence,
    lattice_property,
    set_a_application,
    theorem1_on_sqrt_periodic,
    theorem2_on_identity,
    venn_reproduction,
)
from acr_spaces.settings import DEFAULT_SETTINGS


def test_every_criterion_is_registered():
    assert len(CRITERIA) == 9
    assert len({c.__name__ for c in CRITERIA}) == 9


@pytest.mark.parametrize(
    "criterion",
    [
        venn_reproduction,
        ac_counterexample,
        set_a_application,
        ftc_coherence,
        converse_bound,
        enclosure_soundness,
    ],
)
def test_light_criteria_pass(criterion):
    result = criterion(DEFAULT_SETTINGS)
    assert result.passed, result.detail


@pytest.mark.slow
@pytest.mark.parametrize("criterion", [theorem2_on_identity, theorem1_on_sqrt_periodic, lattice_property])
def test_heavy_criteria_pass(criterion):
    result = criterion(DEFAULT_SETTINGS)
    assert result.passed, result.detail
