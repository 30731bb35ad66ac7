import numpy as np
import pytest
from scipy.linalg import eigvalsh_tridiagonal

from spiked_qes.exceptions import InvalidGridError
from spiked_qes.models.problem import Parity, QESProblem
from spiked_qes.models.spectrum import SpectrumRequest
from spiked_qes.services import qes_core, spectral_verify


class TestRequest:
    def test_n_forced_odd(self):
        req = SpectrumRequest(d=0.0, L=10.0, n=100, k=4)
        assert req.n_used == 101
        assert req.h == pytest.approx(20.0 / 102)

    @pytest.mark.parametrize("kwargs", [
        {"d": 0.0, "L": 0.0, "n": 101, "k": 1},
        {"d": 0.0, "L": -1.0, "n": 101, "k": 1},
        {"d": 0.0, "L": 5.0, "n": 15, "k": 1},
        {"d": 0.0, "L": 5.0, "n": 101, "k": 0},
        {"d": 0.0, "L": 5.0, "n": 101, "k": 102},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidGridError):
            SpectrumRequest(**kwargs)


def test_discretization_puts_origin_on_a_node():
    op = spectral_verify.discretize(SpectrumRequest(d=1.5, L=8.0, n=200, k=1))
    mid = op.size // 2
    assert op.size == 201
    assert op.xs[mid] == 0.0
    assert np.array_equal(op.xs, -op.xs[::-1])
    assert op.xs[0] == pytest.approx(-8.0 + op.h)
    assert op.diagonal[mid] == pytest.approx(2.0 / op.h**2 + 1.5**2)
    assert np.all(op.off_diagonal == -1.0 / op.h**2)


class TestAgainstScipy:
    @pytest.mark.parametrize("d", [-1.0, 0.0, 2.0])
    def test_lowest_eigenvalues(self, d):
        req = SpectrumRequest(d=d, L=abs(d) + 8.0, n=401, k=6)
        op = spectral_verify.discretize(req)
        reference = eigvalsh_tridiagonal(op.diagonal, op.off_diagonal, select="i", select_range=(0, 5))
        report = spectral_verify.lowest_eigenvalues(req, rtol=1e-12)
        assert report.eigenvalues == pytest.approx(list(reference), rel=1e-9)

    def test_inertia_count(self):
        op = spectral_verify.discretize(SpectrumRequest(d=1.0, L=9.0, n=301, k=1))
        values = eigvalsh_tridiagonal(op.diagonal, op.off_diagonal)
        for lam in (0.5, 2.0, 4.3, 9.9, 20.0):
            assert spectral_verify.inertia_count(op, lam) == int(np.sum(values < lam))


def test_harmonic_oscillator_levels():
    report = spectral_verify.lowest_eigenvalues(SpectrumRequest(d=0.0, L=10.0, n=4000, k=4))
    assert report.eigenvalues == pytest.approx([1.0, 3.0, 5.0, 7.0], abs=5e-3)
    assert report.n_used == 4001


def test_single_well_ground_level():
    report = spectral_verify.lowest_eigenvalues(SpectrumRequest.around(-1.0, k=1))
    assert report.eigenvalues[0] == pytest.approx(3.0, abs=5e-3)


def test_double_well_contains_qes_level():
    report = spectral_verify.lowest_eigenvalues(SpectrumRequest.around(1.5811388, k=6))
    assert min(abs(v - 5.0) for v in report.eigenvalues) < 5e-3


def test_window_count_and_nearest():
    req = SpectrumRequest.around(-1.0, k=1)
    assert spectral_verify.eigenvalues_in_window(req, 2.5, 3.5) == 1
    index, value = spectral_verify.nearest_eigenvalue(req, 3.0)
    assert index == 0
    assert value == pytest.approx(3.0, abs=5e-3)


def test_nearest_eigenvalue_empty_window():
    req = SpectrumRequest(d=0.0, L=10.0, n=1001, k=1)
    assert spectral_verify.nearest_eigenvalue(req, 2.0, window=0.5) is None


@pytest.mark.slow
@pytest.mark.parametrize("parity", [Parity.EVEN, Parity.ODD])
@pytest.mark.parametrize("N", range(1, 9))
def test_every_solution_up_to_N8_is_confirmed(N, parity):
    for sol in qes_core.solve(QESProblem(N, parity)):
        match = spectral_verify.validate_solution(sol).matched
        assert match.gap < 5e-3, (sol.d, match.gap)
        assert match.index_matches_nodes, (sol.d, match.eigenindex, match.node_count)
        study = spectral_verify.convergence_ratios(sol, sizes=(2000, 4000, 8000))
        assert all(3.4 <= r <= 4.6 for r in study.ratios), (sol.d, study.ratios)


@pytest.mark.parametrize("N,parity", [(1, Parity.EVEN), (2, Parity.ODD), (3, Parity.EVEN)])
def test_validate_solution_matches_energy_and_nodes(N, parity):
    for sol in qes_core.solve(QESProblem(N, parity)):
        report = spectral_verify.validate_solution(sol)
        match = report.matched
        assert match.target_energy == 2 * N + 1
        assert match.gap < 5e-3
        assert match.index_matches_nodes
        assert match.eigenindex == match.node_count


def test_grid_doubling_is_second_order(ground_state):
    study = spectral_verify.convergence_ratios(ground_state, sizes=(2000, 4000, 8000))
    assert len(study.ratios) == 2
    assert all(3.4 <= r <= 4.6 for r in study.ratios)
    assert study.gaps[0] > study.gaps[1] > study.gaps[2]


def test_box_is_large_enough(ground_state):
    assert spectral_verify.box_sensitivity(ground_state) < 1e-8


def test_report_serializes(ground_state):
    report = spectral_verify.validate_solution(ground_state)
    data = report.to_dict()
    assert data["matched"]["eigenindex"] == 0
    assert data["n_used"] % 2 == 1


def test_bisection_agrees_with_inertia_count():
    req = SpectrumRequest(d=1.0, L=10.0, n=801, k=8)
    op = spectral_verify.discretize(req)
    values = spectral_verify.lowest_eigenvalues(req).eigenvalues
    assert list(values) == sorted(values)
    for i, value in enumerate(values):
        assert spectral_verify.inertia_count(op, value - 1e-6) == i
        assert spectral_verify.inertia_count(op, value + 1e-6) == i + 1
