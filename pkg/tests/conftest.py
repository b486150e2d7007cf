"""Shared fixtures and independent oracles for the test suite."""

import numpy as np
import pytest

from qstrobe.qstate import dagger


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_unitary(rng, dim):
    """Haar-ish random unitary via QR with phase normalization."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, dim, rank=None):
    """Random mixed state from a Ginibre factor of the given rank."""
    rank = rank or dim
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho)


def random_pure_density(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v = v / np.linalg.norm(v)
    return np.outer(v, np.conj(v))


def random_hermitian(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + dagger(g)) / 2


def ptrace_naive(rho, n, keep):
    """Index-summation partial trace, independent of any reshape tricks."""
    keep = sorted(keep)
    traced = [i for i in range(n) if i not in keep]
    d_out = 2 ** len(keep)
    out = np.zeros((d_out, d_out), dtype=complex)

    def full_index(kept_bits, traced_bits):
        bits = [0] * n
        for pos, b in zip(keep, kept_bits):
            bits[pos] = b
        for pos, b in zip(traced, traced_bits):
            bits[pos] = b
        idx = 0
        for b in bits:
            idx = 2 * idx + b
        return idx

    def bit_tuple(value, width):
        return tuple((value >> (width - 1 - i)) & 1 for i in range(width))

    for row in range(d_out):
        for col in range(d_out):
            acc = 0.0 + 0.0j
            for t in range(2 ** len(traced)):
                tb = bit_tuple(t, len(traced))
                acc += rho[full_index(bit_tuple(row, len(keep)), tb),
                           full_index(bit_tuple(col, len(keep)), tb)]
            out[row, col] = acc
    return out
