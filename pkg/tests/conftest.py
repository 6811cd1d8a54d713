import numpy as np
import pytest

from loewner_mor.analysis import log_grid, sample
from loewner_mor.beam import BeamParams, eval_H_orig
from loewner_mor.fem import assemble_second_order, eval_H_fem, to_first_order
from loewner_mor.loewner import (
    build_pencil,
    close_under_conjugation,
    partition_samples,
    realify,
    reduce,
    sv_analysis,
)


class Pipeline:
    """Grid, samples, pencils and the order-32 model for one plant."""

    def __init__(self, evaluator, order=32):
        self.grid = log_grid(1.0, 4.5, 400)
        self.samples = sample(evaluator, self.grid)
        self.values = np.array([smp.value for smp in self.samples])
        self.data = partition_samples(self.samples, "alternating")
        self.closed = close_under_conjugation(self.data)
        self.complex_pencil = build_pencil(self.closed)
        self.pencil = realify(self.complex_pencil)
        self.svs = sv_analysis(self.pencil)
        self.model = reduce(self.pencil, order=order)


@pytest.fixture(scope="session")
def beam_params():
    return BeamParams.default()


@pytest.fixture(scope="session")
def beam_pipeline(beam_params):
    return Pipeline(lambda s: eval_H_orig(s, beam_params))


@pytest.fixture(scope="session")
def fem_system(beam_params):
    return to_first_order(assemble_second_order(1000, beam_params))


@pytest.fixture(scope="session")
def fem_pipeline(beam_params, fem_system):
    return Pipeline(lambda s: eval_H_fem(s, fem_system, beam_params))


ACCEPTANCE = {}


@pytest.fixture
def acceptance(request):
    """Record ``(passed, detail)`` for one numbered criterion."""

    def record(number, passed, detail):
        ACCEPTANCE[number] = (bool(passed), detail)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
