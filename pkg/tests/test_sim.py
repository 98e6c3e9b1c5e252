import math

import numpy as np
import pytest

from telefid.core import (BellDiagonal, PolarCap, PureSchmidt, Uniform,
                          VonMisesFisher, Werner, correlation_tensor)
from telefid.fidelity import classical_fidelity, fidelity_stats
from telefid.qutrit import (QutritSharedState, qutrit_average_fidelity)
from telefid.resources import bell_probabilities_averaged
from telefid.sim import (density_matrix, qubit_runs, qutrit_runs,
                         simulate_classical, simulate_qubit, simulate_qutrit)

_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
_I2 = np.eye(2)


def _z_score(estimate, truth, se):
    assert se > 0.0
    return abs(estimate - truth) / se


class TestDensityMatrix:
    @pytest.mark.parametrize("state", [
        PureSchmidt(0.2),
        Werner(0.7),
        BellDiagonal((0.5, 0.3, 0.15, 0.05)),
    ])
    def test_valid_density_matrix(self, state):
        rho = density_matrix(state)
        assert rho.shape == (4, 4)
        assert math.isclose(np.trace(rho).real, 1.0, abs_tol=1e-14)
        assert np.allclose(rho, rho.conj().T, atol=1e-14)
        assert np.linalg.eigvalsh(rho).min() > -1e-14

    @pytest.mark.parametrize("state", [
        PureSchmidt(0.2),
        Werner(0.45),
        BellDiagonal((0.4, 0.3, 0.2, 0.1)),
    ])
    def test_correlation_tensor_match(self, state):
        rho = density_matrix(state)
        expected = correlation_tensor(state).as_tuple()
        for sigma, t in zip((_X, _Y, _Z), expected):
            val = np.trace(rho @ np.kron(sigma, sigma)).real
            assert math.isclose(val, t, abs_tol=1e-12)

    def test_pure_state_local_polarization(self):
        # the Schmidt state is not maximally mixed locally: <Z_A> = 2 alpha - 1
        alpha = 0.15
        rho = density_matrix(PureSchmidt(alpha))
        za = np.trace(rho @ np.kron(_Z, _I2)).real
        assert math.isclose(za, 2 * alpha - 1, abs_tol=1e-14)

    def test_werner_equals_bell_diagonal_form(self):
        p = 0.6
        r = 0.25 * (1 - p)
        got = density_matrix(Werner(p))
        want = density_matrix(BellDiagonal((p + r, r, r, r)))
        assert np.allclose(got, want, atol=1e-15)


class TestDeterminism:
    def test_same_seed_same_report(self):
        args = (PureSchmidt.from_concurrence(0.6), PolarCap(1.5), 20000, 9)
        r1 = simulate_qubit(*args)
        r2 = simulate_qubit(*args)
        assert r1 == r2

    def test_thread_count_invariance(self):
        fam = BellDiagonal((0.55, 0.25, 0.12, 0.08))
        base = simulate_qubit(fam, VonMisesFisher(2.0), 300000, 3, threads=1)
        multi = simulate_qubit(fam, VonMisesFisher(2.0), 300000, 3, threads=4)
        assert base == multi


class TestQubitAgainstClosedForm:
    @pytest.mark.parametrize("fam,dist", [
        (PureSchmidt.from_concurrence(0.8), PolarCap(2 * math.pi / 5)),
        (BellDiagonal((0.5, 0.25, 0.15, 0.1)), VonMisesFisher(3.0)),
        (BellDiagonal.rank3(0.5, 0.3), Uniform()),
    ])
    @pytest.mark.filterwarnings("ignore::telefid.fidelity.SubclassicalFidelityWarning")
    def test_mean_and_deviation(self, fam, dist):
        n = 2 * 10 ** 5
        rep = simulate_qubit(fam, dist, n, seed=21)
        closed = fidelity_stats(fam, dist)
        assert _z_score(rep.mean, closed.mean, rep.mean_std_error) < 4.0
        assert _z_score(rep.deviation, closed.deviation,
                        rep.deviation_std_error) < 4.0

    def test_werner_deviation_is_flat(self):
        rep = simulate_qubit(Werner(0.8), PolarCap(1.0), 10 ** 5, seed=2)
        closed = fidelity_stats(Werner(0.8), PolarCap(1.0))
        # per-input fidelity is constant, so only fp noise remains
        assert abs(rep.mean - closed.mean) < 1e-12
        assert rep.deviation < 1e-6

    def test_outcome_frequencies(self):
        alpha = 0.2
        n = 10 ** 5
        rep = simulate_qubit(PureSchmidt(alpha), PolarCap(1.0), n, seed=17)
        expected = bell_probabilities_averaged(alpha, PolarCap(1.0)).as_tuple()
        for f_hat, p in zip(rep.outcome_frequencies, expected):
            se = math.sqrt(p * (1 - p) / n)
            assert abs(f_hat - p) < 4.0 * se
        assert math.isclose(sum(rep.outcome_frequencies), 1.0, abs_tol=1e-12)


class TestClassicalSim:
    @pytest.mark.parametrize("dist", [Uniform(), PolarCap(0.8),
                                      VonMisesFisher(4.0)])
    def test_matches_benchmark(self, dist):
        rep = simulate_classical(dist, 10 ** 5, seed=5)
        assert _z_score(rep.mean, classical_fidelity(dist),
                        rep.mean_std_error) < 4.0

    def test_two_outcomes(self):
        rep = simulate_classical(VonMisesFisher(10.0), 10 ** 4, seed=1)
        assert len(rep.outcome_frequencies) == 2
        # concentrated near the pole, the +z result dominates
        assert rep.outcome_frequencies[0] > 0.9


class TestQutritSim:
    def test_matches_exact_average(self):
        shared = QutritSharedState(0.5, 0.3)
        theta4 = math.pi / 4
        rep = simulate_qutrit(shared, theta4, 10 ** 5, seed=11)
        exact = qutrit_average_fidelity(shared, theta4).estimate
        assert _z_score(rep.mean, exact, rep.mean_std_error) < 4.0
        assert len(rep.outcome_frequencies) == 9

    def test_determinism(self):
        shared = QutritSharedState(0.6, 0.2)
        r1 = simulate_qutrit(shared, 1.0, 20000, seed=8)
        r2 = simulate_qutrit(shared, 1.0, 20000, seed=8)
        assert r1 == r2


class TestRunRecords:
    def test_qubit_run_invariants(self):
        runs = qubit_runs(PureSchmidt(0.3), PolarCap(1.2), 500, seed=13)
        assert len(runs) == 500
        for run in runs:
            assert 0 <= run.bell_outcome < 4
            assert -1e-12 <= run.output_fidelity <= 1.0 + 1e-12
            assert run.input_direction.theta <= 1.2 + 1e-12

    def test_qutrit_run_invariants(self):
        shared = QutritSharedState(0.5, 0.25)
        runs = qutrit_runs(shared, math.pi / 3, 300, seed=4)
        for run in runs:
            assert 0 <= run.bell_outcome < 9
            assert -1e-12 <= run.output_fidelity <= 1.0 + 1e-12
            norm = sum(abs(a) ** 2 for a in run.input_amplitudes)
            assert abs(norm - 1.0) < 1e-12

    def test_maximal_qutrit_resource_always_perfect(self):
        shared = QutritSharedState(1 / 3, 1 / 3)
        runs = qutrit_runs(shared, math.pi, 200, seed=6)
        for run in runs:
            assert abs(run.output_fidelity - 1.0) < 1e-12


class TestValidation:
    def test_sample_count(self):
        with pytest.raises(ValueError):
            simulate_qubit(Werner(0.5), Uniform(), 0)
        with pytest.raises(ValueError):
            simulate_classical(Uniform(), -3)
