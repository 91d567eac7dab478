import pytest

from jcrevival import CalibrationProblem, ResonantSystem, solve_coupling


@pytest.fixture(scope="session")
def default_system():
    return ResonantSystem()


@pytest.fixture(scope="session", params=[0.85, 1.77], ids=["nbar0.85", "nbar1.77"])
def calibrated(request, default_system):
    problem = CalibrationProblem.from_constants(default_system, request.param)
    return default_system, problem.loss, problem.drive, solve_coupling(problem)


@pytest.fixture(scope="session")
def calibrated_085(default_system):
    problem = CalibrationProblem.from_constants(default_system, 0.85)
    return default_system, problem.loss, problem.drive, solve_coupling(problem)
