import numpy as np
import pytest

from capbound.channels import BipartiteState, amplitude_damping, choi_state
from capbound.distill import (
    ClassicalPostChannel,
    Instrument,
    _kraus_from_params,
    d1_arrow,
    d1_value,
    k1_arrow,
    k1_value,
    state_bounds,
    state_order_epsilons,
    weaker_condition_eps,
)
from capbound.entropy import binary_entropy
from capbound.optimize import OptOptions

OPTS = OptOptions(restarts=4, max_iter=200)


def pure_state(amp0: float) -> BipartiteState:
    v = np.zeros(4, complex)
    v[0] = np.sqrt(amp0)
    v[3] = np.sqrt(1 - amp0)
    return BipartiteState(2, 2, np.outer(v, v.conj()))


def test_instrument_validation():
    with pytest.raises(ValueError):
        Instrument((np.array([[1.0, 0.0], [0.0, 0.5]]),))  # sum K^2 != I
    with pytest.raises(ValueError):
        Instrument((np.array([[0.0, 1.0], [0.0, 0.0]]),))  # not Hermitian
    inst = Instrument.trivial(3)
    assert inst.outcomes == 1 and inst.dim == 3


def test_instrument_from_povm():
    povm = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    inst = Instrument.from_povm(povm)
    assert np.allclose(inst.kraus[0], np.diag([1.0, 0.0]))


def test_post_channel_validation():
    with pytest.raises(ValueError):
        ClassicalPostChannel(np.array([[0.5, 0.2], [0.4, 0.8]]))
    r = ClassicalPostChannel.trivial(3)
    assert r.matrix.shape == (1, 3)


def test_parameterization_always_feasible():
    """Every parameter vector maps to a feasible instrument (sum K^2 = I)."""
    rng = np.random.default_rng(0)
    for _ in range(10):
        x = rng.standard_normal(4 * 2 * 2 * 2)
        kraus = _kraus_from_params(x, 2, 4)
        Instrument(tuple(kraus))  # raises if infeasible


def test_trivial_instrument_gives_coherent_information():
    """With the trivial instrument, H(B|X) - H(E|X) is the state's coherent
    information I(A>B)."""
    rng = np.random.default_rng(1)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    state = BipartiteState(2, 2, rho)
    val = d1_value(state, Instrument.trivial(2))
    rb = state.marginal_b()
    vb = np.linalg.eigvalsh(rb); vb = vb[vb > 1e-12]
    vab = np.linalg.eigvalsh(rho); vab = vab[vab > 1e-12]
    ic = float(-(vb * np.log2(vb)).sum() + (vab * np.log2(vab)).sum())
    assert val == pytest.approx(ic, abs=1e-9)


def test_maximally_entangled_distillation():
    v = np.zeros(4, complex); v[0] = v[3] = 1 / np.sqrt(2)
    me = BipartiteState(2, 2, np.outer(v, v.conj()))
    assert d1_arrow(me, OPTS).value == pytest.approx(1.0, abs=1e-6)
    assert k1_arrow(me, OPTS).value == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("lam", [0.8, 0.95])
def test_pure_state_values(lam):
    state = pure_state(lam)
    h = binary_entropy(1 - lam)
    d1 = d1_arrow(state, OPTS).value
    k1 = k1_arrow(state, OPTS).value
    assert d1 == pytest.approx(h, abs=1e-4)
    assert k1 == pytest.approx(h, abs=1e-4)
    assert abs(d1 - k1) <= 2e-4


def test_product_state_gives_zero():
    v = np.zeros(4, complex); v[0] = 1.0
    prod = BipartiteState(2, 2, np.outer(v, v.conj()))
    assert abs(d1_arrow(prod, OPTS).value) <= 1e-6
    assert abs(k1_arrow(prod, OPTS).value) <= 1e-6


def test_k1_direct_evaluation_basis_measurement():
    """Computational-basis measurement on the maximally entangled state:
    I(X:B) = 1, I(X:E) = 0."""
    v = np.zeros(4, complex); v[0] = v[3] = 1 / np.sqrt(2)
    me = BipartiteState(2, 2, np.outer(v, v.conj()))
    inst = Instrument.from_povm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    val = k1_value(me, inst, ClassicalPostChannel.trivial(2))
    assert val == pytest.approx(1.0, abs=1e-9)
    # announcing X itself leaves no residual correlations inside each group
    assert k1_value(me, inst, ClassicalPostChannel(np.eye(2))) == pytest.approx(0.0, abs=1e-12)


def test_state_order_epsilons_pure():
    out = state_order_epsilons(pure_state(0.8), OPTS)
    assert abs(out["more_secret_eps"]) <= 1e-6
    assert abs(out["more_informative_eps"]) <= 1e-6
    assert out["certainty"] == "heuristic-lower-bound"


def test_degradable_choi_state_secrecy():
    """The Choi state of a degradable channel is (approximately) more secret:
    the key estimator on its complement stays near zero."""
    state = choi_state(amplitude_damping(0.3))
    out = state_order_epsilons(state, OptOptions(restarts=3, max_iter=150))
    assert out["more_secret_eps"] <= 5e-3


def test_weaker_condition_diagnostic_pure():
    assert abs(weaker_condition_eps(pure_state(0.8), OPTS)) <= 1e-6


def test_state_bounds_pure_collapse():
    reports = state_bounds(pure_state(0.8), OPTS)
    h = binary_entropy(0.2)
    for key in ("K1", "D", "K_two_term", "K"):
        rep = reports[key]
        assert rep.upper - rep.lower <= 2e-4
        assert abs(rep.lower - h) <= 2e-4
        assert rep.upper_provenance == "heuristic-chain"
    est = reports["estimates"]
    assert abs(est["d1"] - est["k1"]) <= 2e-4
