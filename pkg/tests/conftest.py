import pytest

from speclab.spectral import RationalDecay, solve_spectrum


@pytest.fixture(scope="session")
def q1_spec_10():
    """Shared rational-decay spectrum at omega=10 (the slowest solve reused
    by the spectral, WKB, and acceptance suites)."""
    return solve_spectrum(RationalDecay(), 10.0)
