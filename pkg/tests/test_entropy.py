import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from capbound.channels import erasure, identity_channel
from capbound.entropy import (
    EntropyDomainError,
    LabeledState,
    binary_entropy,
    channel_coherent_information,
    channel_output_state,
    coherent_information,
    conditional_mutual_information,
    entropy,
    mutual_information,
    relative_entropy,
)
from capbound.linalg import random_density


def bell_state():
    v = np.zeros(4, complex)
    v[0] = v[3] = 1 / np.sqrt(2)
    return np.outer(v, v.conj())


def ghz_state():
    v = np.zeros(8, complex)
    v[0] = v[7] = 1 / np.sqrt(2)
    return np.outer(v, v.conj())


def test_entropy_basics():
    assert entropy(np.eye(2) / 2) == pytest.approx(1.0)
    assert entropy(np.diag([1.0, 0.0]).astype(complex)) == pytest.approx(0.0)
    assert entropy(np.eye(8) / 8) == pytest.approx(3.0)


def test_binary_entropy():
    assert binary_entropy(0.5) == pytest.approx(1.0)
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.11) == pytest.approx(0.499916, abs=1e-5)


def test_bell_state_information():
    s = LabeledState(("A", "B"), (2, 2), bell_state())
    assert mutual_information(s, "A", "B") == pytest.approx(2.0)
    assert coherent_information(s, "A", "B") == pytest.approx(1.0)


def test_ghz_conditional_mutual_information():
    s = LabeledState(("A", "B", "C"), (2, 2, 2), ghz_state())
    # H(AC) + H(BC) - H(ABC) - H(C) = 1 + 1 - 0 - 1 = 1
    assert conditional_mutual_information(s, "A", "B", "C") == pytest.approx(1.0)
    assert mutual_information(s, "A", "B") == pytest.approx(1.0)


def test_label_errors():
    s = LabeledState(("A", "B"), (2, 2), bell_state())
    with pytest.raises(EntropyDomainError):
        mutual_information(s, "A", "A")
    with pytest.raises(EntropyDomainError):
        s.marginal(["Z"])


@given(st.integers(min_value=0, max_value=10**6))
def test_strong_subadditivity(seed):
    """I(A:B|C) >= 0 on random tripartite states."""
    rng = np.random.default_rng(seed)
    rho = random_density(rng, 8)
    s = LabeledState(("A", "B", "C"), (2, 2, 2), rho)
    assert conditional_mutual_information(s, "A", "B", "C") >= -1e-9


def test_relative_entropy_properties():
    rng = np.random.default_rng(1)
    rho = random_density(rng, 3)
    sigma = random_density(rng, 3)
    assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-9)
    assert relative_entropy(rho, sigma) >= -1e-10
    # support violation -> +inf
    pure = np.diag([1.0, 0.0, 0.0]).astype(complex)
    low_rank = np.diag([0.0, 0.5, 0.5]).astype(complex)
    assert relative_entropy(pure, low_rank) == float("inf")


def test_relative_entropy_known_value():
    rho = np.diag([0.75, 0.25]).astype(complex)
    sigma = np.eye(2, dtype=complex) / 2
    expected = 1.0 - entropy(rho)
    assert relative_entropy(rho, sigma) == pytest.approx(expected, abs=1e-10)


def test_erasure_shrinks_relative_entropy_linearly():
    """D(E_p(rho) || E_p(sigma)) = (1-p) D(rho || sigma)."""
    rng = np.random.default_rng(2)
    rho = random_density(rng, 2)
    sigma = random_density(rng, 2) + 0.2 * np.eye(2)
    sigma /= np.trace(sigma).real
    base = relative_entropy(rho, sigma)
    for p in (0.0, 0.3, 0.6, 1.0):
        ch = erasure(2, p)
        val = relative_entropy(ch.apply(rho), ch.apply(sigma))
        assert val == pytest.approx((1 - p) * base, abs=1e-9)


def test_channel_output_state_consistency():
    rng = np.random.default_rng(3)
    rho = random_density(rng, 2)
    ch = erasure(2, 0.3)
    s = channel_output_state(ch, rho)
    # global state pure: H(R) = H(BE), H(B) = H(RE)
    assert s.subsystem_entropy(["R"]) == pytest.approx(
        s.subsystem_entropy(["B", "E"]), abs=1e-9)
    assert np.allclose(s.marginal(["B"]), ch.apply(rho), atol=1e-10)
    ic = s.subsystem_entropy(["B"]) - s.subsystem_entropy(["R", "B"])
    assert channel_coherent_information(ch, rho) == pytest.approx(ic, abs=1e-9)


def test_channel_coherent_information_identity():
    rho = np.eye(2, dtype=complex) / 2
    assert channel_coherent_information(identity_channel(2), rho) == pytest.approx(1.0)
