"""Shared builders and fixtures for the test suite.

The magic-angle kicked two-level system (pi/2-strength kicks about axis 1)
is the workhorse: its Floquet problem is solvable by hand, so tests can
pin harmonic coefficients and decay rates against closed-form numbers.
Two assembled generators are session fixtures because building them at
tight tolerance is the most expensive setup step.
"""

import math
from types import SimpleNamespace

import numpy as np
import pytest

from floqlind.bath import Lorentzian, PhononCutoff
from floqlind.floquet import KickedModel, harmonic_decomposition
from floqlind.lindblad import (
    build_generator,
    rate_parallel_closed,
    rate_perp_closed,
)
from floqlind.operators import PAULI_X, PAULI_Y, PAULI_Z


def rand_herm(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2.0


def rand_density(rng, dim=2):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def magic_model(delta=0.0, period=1.0, strength=math.pi / 2.0):
    """Kicked TLS: detuning splitting along axis 3, kicks about axis 1."""
    return KickedModel(
        h0=0.5 * delta * PAULI_Z, kick=PAULI_X, strength=strength, period=period
    )


def analytic_floquet_pair(delta, period):
    """Hand-derived Floquet eigenvectors of the magic-angle TLS.

    The one-period operator is -i [[0, e^{i d}], [e^{-i d}, 0]] with
    d = delta * period / 2; these two vectors diagonalize it with
    quasienergies +pi/(2T) and -pi/(2T) respectively.  The numerical
    basis agrees only up to column phases, so tests contract dyads with
    this pair instead of comparing eigenvector entries.
    """
    phase = np.exp(0.5j * delta * period)
    phi_plus = np.array([phase, 1.0]) / math.sqrt(2.0)
    phi_minus = np.array([-phase, 1.0]) / math.sqrt(2.0)
    return phi_plus, phi_minus


def eta_from_generator(generator):
    """Coherence decay rate read off the Floquet-basis generator.

    In the Floquet basis the generator block-diagonalizes; the diagonal
    entry on the first off-diagonal matrix unit is -eta.
    """
    basis = generator.basis
    change = np.kron(basis.conj(), basis)
    in_basis = change.conj().T @ generator.superop @ change
    return -float(in_basis[1, 1].real)


LONGITUDINAL = SimpleNamespace(delta=0.6, period=1.3, t2=2.0, tau_c=3.0)
TRANSVERSE = SimpleNamespace(period=math.pi, coupling=0.8, cutoff=1.0)


@pytest.fixture(scope="session")
def longitudinal():
    """Dephasing-coupled magic-angle TLS with its assembled generator."""
    p = LONGITUDINAL
    model = magic_model(p.delta, p.period)
    harmonics = harmonic_decomposition(
        model, [PAULI_Z / math.sqrt(2.0)], q_max=64
    )
    density = Lorentzian(t2=p.t2, tau_c=p.tau_c)
    generator = build_generator(harmonics, (density,), rel_tol=1e-10)
    eta = rate_parallel_closed(p.period, p.t2, p.tau_c).eta
    return SimpleNamespace(
        model=model,
        harmonics=harmonics,
        density=density,
        generator=generator,
        eta=eta,
        delta=p.delta,
        period=p.period,
        t2=p.t2,
        tau_c=p.tau_c,
    )


@pytest.fixture(scope="session")
def transverse():
    """Resonant transverse-coupled TLS at zero temperature."""
    p = TRANSVERSE
    model = magic_model(0.0, p.period)
    harmonics = harmonic_decomposition(model, [PAULI_X, PAULI_Y], q_max=64)
    density = PhononCutoff(coupling=p.coupling, cutoff=p.cutoff)
    generator = build_generator(harmonics, (density, density), rel_tol=1e-10)
    omega = 2.0 * math.pi / p.period
    eta = rate_perp_closed(omega, p.coupling, p.cutoff).eta
    return SimpleNamespace(
        model=model,
        harmonics=harmonics,
        density=density,
        generator=generator,
        eta=eta,
        period=p.period,
        coupling=p.coupling,
        cutoff=p.cutoff,
        omega=omega,
    )
