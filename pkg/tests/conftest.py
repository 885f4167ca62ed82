"""Shared test configuration and Hypothesis strategies for hds-fallcast testing.

This module provides common fixtures (small hand-built datasets, a
synthetic cohort, an event tracker on the package's pub/sub scope) and
Hypothesis strategies used across the unit, property and integration
suites.
"""

from collections.abc import Callable, Iterator
from typing import Any

import pytest
from hypothesis import strategies as st
from splurge_pub_sub import Message, PubSubSolo

from hds_fallcast.constants import EVENT_SCOPE
from hds_fallcast.hds_core import Dataset, Encounter, HdsSeries, ScaleConfig
from hds_fallcast.synth import SynthConfig, generate


def make_encounter(encounter_id: str, scores: tuple[int, ...], outcome: int = 0, origin: int | None = None) -> Encounter:
    """Build an encounter; ``origin`` defaults to the last score."""
    return Encounter(HdsSeries(encounter_id, tuple(scores)), outcome, len(scores) if origin is None else origin)


@pytest.fixture
def encounter_factory() -> Callable[..., Encounter]:
    return make_encounter


@pytest.fixture
def small_dataset() -> Dataset:
    """Three well-formed encounters on the default 0..30 scale."""
    return Dataset.of(
        [
            make_encounter("a", (4, 9, 15), 1, 3),
            make_encounter("b", (7,), 0),
            make_encounter("c", (10, 10, 12, 11), 0),
        ]
    )


@pytest.fixture(scope="session")
def cohort() -> Dataset:
    """40 fall / 400 non-fall synthetic encounters with a planted trend."""
    return generate(SynthConfig(n_fall=40, n_nofall=400, seed=11))


@pytest.fixture
def event_tracker() -> Iterator[dict[str, Any]]:
    """Capture every event published on the package scope while the test runs.

    Call ``tracker["drain"]()`` before asserting on ``tracker["events"]``.
    """
    tracker: dict[str, Any] = {"events": [], "count_by_topic": {}}

    def callback(message: Message) -> None:
        tracker["events"].append(
            {"topic": message.topic, "data": message.data, "correlation_id": message.correlation_id}
        )
        tracker["count_by_topic"][message.topic] = tracker["count_by_topic"].get(message.topic, 0) + 1

    subscriber_id = PubSubSolo.subscribe(topic="*", callback=callback, correlation_id="*", scope=EVENT_SCOPE)
    tracker["drain"] = lambda: PubSubSolo.drain(2000, scope=EVENT_SCOPE)
    yield tracker
    PubSubSolo.drain(2000, scope=EVENT_SCOPE)
    PubSubSolo.unsubscribe("*", subscriber_id, scope=EVENT_SCOPE)


@st.composite
def scale_strategy(draw) -> ScaleConfig:
    """Generate small integer score scales."""
    s_min = draw(st.integers(min_value=-5, max_value=5))
    span = draw(st.integers(min_value=1, max_value=40))
    return ScaleConfig(s_min=s_min, s_max=s_min + span)


@st.composite
def encounter_strategy(
    draw, scale: ScaleConfig | None = None, encounter_id: str = "e", max_length: int = 12
) -> Encounter:
    """Generate a valid encounter on ``scale``."""
    scale = scale or ScaleConfig()
    scores = draw(
        st.lists(st.integers(min_value=scale.s_min, max_value=scale.s_max), min_size=1, max_size=max_length)
    )
    origin = draw(st.integers(min_value=1, max_value=len(scores)))
    outcome = draw(st.sampled_from([0, 1]))
    return make_encounter(encounter_id, tuple(scores), outcome, origin)


@st.composite
def dataset_strategy(draw, min_size: int = 0, max_size: int = 10) -> Dataset:
    """Generate a valid dataset with unique ids."""
    scale = draw(scale_strategy())
    size = draw(st.integers(min_value=min_size, max_value=max_size))
    encounters = [draw(encounter_strategy(scale, encounter_id=f"enc-{i}")) for i in range(size)]
    return Dataset.of(encounters, scale)


@st.composite
def scored_labels_strategy(draw, max_size: int = 200) -> tuple[list[float], list[int]]:
    """Generate ``(scores, truth)`` holding at least one example of each class.

    Scores come from a small grid so that ties are common.
    """
    size = draw(st.integers(min_value=2, max_value=max_size))
    truth = draw(st.lists(st.sampled_from([0, 1]), min_size=size, max_size=size))
    truth[0], truth[1] = 0, 1
    scores = draw(
        st.lists(st.integers(min_value=0, max_value=20).map(lambda v: v / 20), min_size=size, max_size=size)
    )
    return scores, truth


@st.composite
def cohort_strategy(draw, k: int = 10) -> Dataset:
    """Generate a labelled cohort large enough for ``k`` balanced folds."""
    n_fall = draw(st.integers(min_value=k, max_value=4 * k))
    n_nofall = draw(st.integers(min_value=k, max_value=12 * k))
    outcomes = [1] * n_fall + [0] * n_nofall
    return Dataset.of(make_encounter(f"enc-{i}", (5, 6), outcome) for i, outcome in enumerate(outcomes))
