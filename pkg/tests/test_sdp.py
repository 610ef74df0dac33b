import json

import numpy as np
import pytest

from capbound.channels import (
    amplitude_damping,
    completely_depolarizing,
    complementary_channel,
    depolarizing,
    erasure,
    identity_channel,
    kraus_to_choi,
    random_channel,
)
from capbound.optimize import OptOptions, q1
from capbound.sdp import (
    channel_distance,
    diamond_norm,
    eps_antidegradable,
    eps_degradable,
    f1,
    f2,
    ppt_check,
    ppt_distance,
    transpose_q_upper,
)

SDP_TOL = 5e-7


def test_diamond_norm_identity_vs_depolarizing():
    # 1/2 ||id - fully depolarizing||_diamond = 3/4 for qubits
    assert channel_distance(identity_channel(2), completely_depolarizing(2)) / 2 \
        == pytest.approx(0.75, abs=SDP_TOL)


def test_diamond_norm_of_channel_is_one():
    rng = np.random.default_rng(0)
    ch = random_channel(rng, 2, 2, 2)
    j = kraus_to_choi(ch).mat
    assert diamond_norm(j, 2, 2) == pytest.approx(1.0, abs=SDP_TOL)


def test_diamond_norm_homogeneity():
    rng = np.random.default_rng(1)
    a = kraus_to_choi(random_channel(rng, 2, 2, 2)).mat
    b = kraus_to_choi(random_channel(rng, 2, 2, 2)).mat
    base = diamond_norm(a - b, 2, 2)
    assert diamond_norm(2.5 * (a - b), 2, 2) == pytest.approx(2.5 * base, abs=1e-5)


def test_diamond_distance_triangle_inequality():
    rng = np.random.default_rng(2)
    chans = [random_channel(rng, 2, 2, 2) for _ in range(3)]
    d01 = channel_distance(chans[0], chans[1])
    d12 = channel_distance(chans[1], chans[2])
    d02 = channel_distance(chans[0], chans[2])
    assert d02 <= d01 + d12 + 1e-6


def test_depolarizing_distance_grid():
    """||id - depol_p||_diamond/2 = 3p/4 for qubit depolarizing channels."""
    for p in (0.2, 0.5, 1.0):
        val = channel_distance(identity_channel(2), depolarizing(2, p)) / 2
        assert val == pytest.approx(0.75 * p, abs=1e-5)


def test_eps_degradable_amplitude_damping():
    eps, witness = eps_degradable(amplitude_damping(0.3))
    assert eps <= 1e-6
    # the degrading-map witness is a valid Choi operator
    assert np.linalg.eigvalsh(witness.mat).min() >= -1e-7


def test_eps_antidegradable_amplitude_damping_above_half():
    eps, _ = eps_antidegradable(amplitude_damping(0.7))
    assert eps <= 1e-6
    eps_deg, _ = eps_degradable(amplitude_damping(0.7))
    assert eps_deg > 0.1


def test_erasure_half_is_antidegradable_not_ppt():
    ch = erasure(2, 0.5)
    eps, _ = eps_antidegradable(ch)
    assert eps <= 1e-6
    # the Choi partial transpose keeps a -(1-p) eigenvalue for every p < 1
    assert not ppt_check(kraus_to_choi(ch))
    assert transpose_q_upper(ch) == pytest.approx(np.log2(1.5), abs=1e-6)


def test_ppt_examples():
    assert ppt_check(kraus_to_choi(completely_depolarizing(2)))
    assert ppt_check(kraus_to_choi(completely_depolarizing(3)))
    assert not ppt_check(kraus_to_choi(identity_channel(2)))
    assert ppt_check(kraus_to_choi(depolarizing(2, 0.8)))  # PPT for p >= 2/3
    assert not ppt_check(kraus_to_choi(depolarizing(2, 0.5)))


def test_ppt_distance_values():
    assert ppt_distance(kraus_to_choi(completely_depolarizing(2))) <= 1e-7
    # maximally entangled Choi state of id_2: distance 1/2 to the PPT set
    # (optimal Werner state at p = 1/3 gives (3/4)(1-p) = 1/2)
    assert ppt_distance(kraus_to_choi(identity_channel(2))) == pytest.approx(0.5, abs=1e-5)


def test_transpose_bound_identity_and_ppt():
    assert transpose_q_upper(identity_channel(2)) == pytest.approx(1.0, abs=1e-6)
    assert transpose_q_upper(completely_depolarizing(2)) <= 1e-6
    assert transpose_q_upper(depolarizing(2, 0.8)) <= 1e-6


def test_transpose_bound_dominates_q1(channel_corpus):
    opts = OptOptions(restarts=5)
    for ch in channel_corpus[:3]:
        assert transpose_q_upper(ch) >= q1(ch, opts).value - 1e-5


def test_continuity_functions():
    assert f1(2, 1.0) == pytest.approx(1.0)  # h(1/2) = 1, log2(1) = 0
    assert f1(2, 0.0) == 0.0 and f2(2, 0.0) == 0.0
    for env in range(2, 7):
        for eps in np.linspace(0.0, 1.0, 11):
            assert f1(env, float(eps)) <= f2(env, float(eps)) + 1e-12
    with pytest.raises(ValueError):
        f1(2, -0.1)
    with pytest.raises(ValueError):
        f2(0, 0.5)


def test_dump_problem_schema(tmp_path):
    import cvxpy as cp
    path = tmp_path / "problem.json"
    j = kraus_to_choi(identity_channel(2)).mat
    diamond_norm(j, 2, 2, dump_path=str(path))
    data = json.loads(path.read_text())
    assert data["schema"] == 1
    assert set(data["A"]) == {"rows", "cols", "values", "shape"}
    assert len(data["A"]["rows"]) == len(data["A"]["values"])
