"""Monte Carlo protocol simulators.

Each simulator draws inputs from the ensemble, runs the teleportation
circuit in full (Bell or Weyl measurement probabilities, conditional
output states, correction unitaries), and accumulates the per-input
fidelity averaged over measurement outcomes.  Means and spreads are
returned with standard errors so closed-form predictions can be checked
at a stated significance.

Chunked accumulation: each chunk gets its own child generator from
SeedSequence.spawn, and partial sums merge in chunk-index order, so
results for a given (n_samples, seed) are identical for any thread
count.  Thread count defaults to the TELEFID_THREADS env var, else 1.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import BlochDirection, CorrelationTensor, InputDistribution, StateFamily
from .distributions import sample_directions, sample_qutrit_inputs
from .fidelity import _components

_CHUNK = 1 << 17

_S2 = 1.0 / math.sqrt(2.0)
# Bell basis rows in outcome order (phi+, phi-, psi+, psi-); BELL[k, i, a]
# has i the input-qubit index and a the Alice-half index.
BELL = np.array([
    [[_S2, 0.0], [0.0, _S2]],
    [[_S2, 0.0], [0.0, -_S2]],
    [[0.0, _S2], [_S2, 0.0]],
    [[0.0, _S2], [-_S2, 0.0]],
], dtype=complex)

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
# Correction unitaries per outcome for a psi- (singlet-convention) resource
CORR = np.stack([_X @ _Z, _X, _Z, _I2])

_W3 = complex(math.cos(2.0 * math.pi / 3.0), math.sin(2.0 * math.pi / 3.0))


def _weyl(m: int, n: int) -> np.ndarray:
    u = np.zeros((3, 3), dtype=complex)
    for j in range(3):
        u[(j + m) % 3, j] = _W3 ** (j * n)
    return u


WEYL = np.stack([_weyl(m, n) for m in range(3) for n in range(3)])


@dataclass(frozen=True)
class ProtocolRun:
    """One shot: sampled input, measurement record, conditional fidelity."""

    bell_outcome: int
    output_fidelity: float
    input_direction: BlochDirection | None = None
    input_amplitudes: tuple[complex, ...] | None = None


@dataclass(frozen=True)
class SimReport:
    """Moments of the per-input fidelity with standard errors."""

    mean: float
    deviation: float
    mean_std_error: float
    deviation_std_error: float
    outcome_frequencies: tuple[float, ...]
    n_samples: int
    seed: int


# Bell projectors keyed by the outcome order above; the BELL rows double
# as state vectors when flattened.
_BELL_VECS = BELL.reshape(4, 4)


def density_matrix(state) -> np.ndarray:
    """4x4 two-qubit density matrix of the shared resource.

    Pure Schmidt and Bell-diagonal families are built directly (the
    Schmidt state carries local polarization that the correlation tensor
    alone cannot encode, and the Bell outcome statistics depend on it).
    A bare CorrelationTensor falls back to the unique maximally-mixed-
    marginal state (I + sum_i t_i sigma_i x sigma_i)/4.
    """
    from .core import BellDiagonal, PureSchmidt, Werner
    if isinstance(state, PureSchmidt):
        a = state.alpha
        v = np.zeros(4, dtype=complex)
        v[1] = math.sqrt(a)
        v[2] = -math.sqrt(1.0 - a)
        return np.outer(v, v.conj())
    if isinstance(state, Werner):
        p = state.p
        r = 0.25 * (1.0 - p)
        state = BellDiagonal((p + r, r, r, r))
    if isinstance(state, BellDiagonal):
        # weights attach to (psi-, psi+, phi+, phi-), the outcome rows 3, 2, 0, 1
        vecs = _BELL_VECS[[3, 2, 0, 1]]
        return np.einsum('k,ka,kb->ab', np.asarray(state.weights, dtype=complex),
                         vecs, vecs.conj())
    t1, t2, t3 = _components(state)
    y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    return 0.25 * (np.kron(_I2, _I2) + t1 * np.kron(_X, _X)
                   + t2 * np.kron(y, y) + t3 * np.kron(_Z, _Z))


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    return max(1, int(os.environ.get("TELEFID_THREADS", "1") or "1"))


def _chunk_sizes(n: int) -> list[int]:
    sizes = [_CHUNK] * (n // _CHUNK)
    if n % _CHUNK:
        sizes.append(n % _CHUNK)
    return sizes


def _run_chunks(worker, n_samples: int, seed: int, threads: int | None,
                n_outcomes: int) -> tuple:
    sizes = _chunk_sizes(n_samples)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, children))
    if _thread_count(threads) > 1:
        with ThreadPoolExecutor(max_workers=_thread_count(threads)) as pool:
            parts = list(pool.map(lambda j: worker(j[0], np.random.default_rng(j[1])),
                                  jobs))
    else:
        parts = [worker(m, np.random.default_rng(ss)) for m, ss in jobs]
    s1 = s2 = s3 = s4 = 0.0
    counts = np.zeros(n_outcomes)
    for p1, p2, p3, p4, c in parts:
        s1 += p1
        s2 += p2
        s3 += p3
        s4 += p4
        counts += c
    return s1, s2, s3, s4, counts


def _finalize(s1, s2, s3, s4, counts, n: int, seed: int) -> SimReport:
    mean = s1 / n
    e2 = s2 / n
    var = max(e2 - mean * mean, 0.0)
    dev = math.sqrt(var)
    se_mean = math.sqrt(var / n)
    # sampling error of the deviation via the fourth central moment
    m4 = s4 / n - 4.0 * mean * (s3 / n) + 6.0 * mean * mean * e2 - 3.0 * mean ** 4
    var_var = max(m4 - var * var, 0.0) / n
    se_dev = math.sqrt(var_var) / (2.0 * dev) if dev > 1e-12 else 0.0
    return SimReport(mean, dev, se_mean, se_dev,
                     tuple(counts / n), n, seed)


def _sample_outcomes(p: np.ndarray, rng) -> np.ndarray:
    cum = np.cumsum(p, axis=1)
    r = rng.random(p.shape[0]) * cum[:, -1]
    k = (r[:, None] > cum).sum(axis=1)
    return np.minimum(k, p.shape[1] - 1)


def _qubit_kernel(rho4: np.ndarray, ra: np.ndarray, dist: InputDistribution,
                  n: int, rng):
    """Per-input outcome probabilities p[n, k] and fidelity terms num[n, k]."""
    tp = sample_directions(dist, n, rng)
    half = 0.5 * tp[:, 0]
    chi = np.empty((n, 2), dtype=complex)
    chi[:, 0] = np.cos(half)
    chi[:, 1] = np.exp(1j * tp[:, 1]) * np.sin(half)
    w = np.einsum('kia,ni->nka', BELL.conj(), chi)
    v = np.einsum('kib,ni->nkb', CORR.conj(), chi)
    m = np.einsum('nka,nkb,abcd->nkcd', w, v.conj(), rho4)
    num = np.einsum('nkcd,nkc,nkd->nk', m, w.conj(), v).real
    p = np.einsum('nka,ac,nkc->nk', w, ra, w.conj()).real
    return tp, num, p


def simulate_qubit(shared: CorrelationTensor | StateFamily, dist: InputDistribution,
                   n_samples: int, seed: int = 0,
                   threads: int | None = None) -> SimReport:
    """Simulate the qubit protocol; report fidelity mean and spread.

    The accumulated statistic per input is the outcome-averaged fidelity
    sum_k p_k f_k, so `deviation` estimates the spread over inputs that
    the closed-form moments describe, not shot noise of outcomes.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rho = density_matrix(shared)
    rho4 = rho.reshape(2, 2, 2, 2)
    ra = np.einsum('abcb->ac', rho4)

    def worker(m: int, rng):
        _, num, p = _qubit_kernel(rho4, ra, dist, m, rng)
        fbar = num.sum(axis=1)
        k = _sample_outcomes(p, rng)
        c = np.bincount(k, minlength=4).astype(float)
        return (fbar.sum(), (fbar ** 2).sum(), (fbar ** 3).sum(),
                (fbar ** 4).sum(), c)

    parts = _run_chunks(worker, n_samples, seed, threads, 4)
    return _finalize(*parts, n_samples, seed)


def qubit_runs(shared: CorrelationTensor | StateFamily, dist: InputDistribution,
               n_runs: int, seed: int = 0) -> list[ProtocolRun]:
    """Shot-level records: sampled outcome and its conditional fidelity."""
    rho = density_matrix(shared)
    rho4 = rho.reshape(2, 2, 2, 2)
    ra = np.einsum('abcb->ac', rho4)
    rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(1)[0])
    tp, num, p = _qubit_kernel(rho4, ra, dist, n_runs, rng)
    k = _sample_outcomes(p, rng)
    rows = np.arange(n_runs)
    fid = num[rows, k] / p[rows, k]
    return [ProtocolRun(int(k[i]), float(fid[i]),
                        input_direction=BlochDirection(float(tp[i, 0]), float(tp[i, 1])))
            for i in range(n_runs)]


def simulate_classical(dist: InputDistribution, n_samples: int, seed: int = 0,
                       threads: int | None = None) -> SimReport:
    """Measure-and-prepare baseline: z-basis measurement, basis re-prepare.

    Per-input outcome-averaged fidelity is 1 - sin^2(theta)/2; outcome
    frequencies are the two z results.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")

    def worker(m: int, rng):
        tp = sample_directions(dist, m, rng)
        u = np.cos(tp[:, 0])
        fbar = 0.5 * (1.0 + u * u)
        p0 = 0.5 * (1.0 + u)
        k = (rng.random(m) >= p0).astype(int)
        c = np.bincount(k, minlength=2).astype(float)
        return (fbar.sum(), (fbar ** 2).sum(), (fbar ** 3).sum(),
                (fbar ** 4).sum(), c)

    parts = _run_chunks(worker, n_samples, seed, threads, 2)
    return _finalize(*parts, n_samples, seed)


def _qutrit_ops(weights: tuple[float, float, float]):
    root = np.sqrt(np.asarray(weights))
    m_ops = np.einsum('kij,j,klj->kil', WEYL, root, WEYL.conj())
    p_ops = np.einsum('kij,j,klj->kil', WEYL, np.asarray(weights), WEYL.conj())
    return m_ops, p_ops


def _qutrit_kernel(m_ops, p_ops, theta4_max: float, n: int, rng):
    amps = sample_qutrit_inputs(theta4_max, n, rng)
    t = np.einsum('ni,kij,nj->nk', amps.conj(), m_ops, amps)
    num = (t.real ** 2 + t.imag ** 2) / 3.0
    p = np.einsum('ni,kij,nj->nk', amps.conj(), p_ops, amps).real / 3.0
    return amps, num, p


def simulate_qutrit(shared, theta4_max: float, n_samples: int, seed: int = 0,
                    threads: int | None = None) -> SimReport:
    """Simulate the qutrit protocol with a Weyl-operator measurement."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    m_ops, p_ops = _qutrit_ops(shared.weights())

    def worker(m: int, rng):
        _, num, p = _qutrit_kernel(m_ops, p_ops, theta4_max, m, rng)
        fbar = num.sum(axis=1)
        k = _sample_outcomes(p, rng)
        c = np.bincount(k, minlength=9).astype(float)
        return (fbar.sum(), (fbar ** 2).sum(), (fbar ** 3).sum(),
                (fbar ** 4).sum(), c)

    parts = _run_chunks(worker, n_samples, seed, threads, 9)
    return _finalize(*parts, n_samples, seed)


def qutrit_runs(shared, theta4_max: float, n_runs: int,
                seed: int = 0) -> list[ProtocolRun]:
    """Shot-level qutrit records, one Weyl outcome per run."""
    m_ops, p_ops = _qutrit_ops(shared.weights())
    rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(1)[0])
    amps, num, p = _qutrit_kernel(m_ops, p_ops, theta4_max, n_runs, rng)
    k = _sample_outcomes(p, rng)
    rows = np.arange(n_runs)
    fid = num[rows, k] / p[rows, k]
    return [ProtocolRun(int(k[i]), float(fid[i]),
                        input_amplitudes=tuple(amps[i]))
            for i in range(n_runs)]
