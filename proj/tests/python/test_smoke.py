"""End-to-end smoke tests for the Python bindings."""

import math

import numpy as np
import pytest

import qpac


def z_projective():
    p0 = np.array([[1, 0], [0, 0]], dtype=complex)
    p1 = np.array([[0, 0], [0, 1]], dtype=complex)
    return qpac.Povm([0, 1], [p0, p1])


def test_linalg_surface():
    z = np.diag([1.0, -1.0]).astype(complex)
    h = qpac.HermitianOperator(z)
    assert qpac.max_eigenvalue(h) == pytest.approx(1.0)
    kron = qpac.tensor_product(z, np.eye(2, dtype=complex))
    assert kron.shape == (4, 4)
    assert qpac.trace_product(z, z) == pytest.approx(2.0)


def test_states_and_born_rule():
    plus = qpac.PureState(np.array([1, 1], dtype=complex) / math.sqrt(2))
    rho = qpac.DensityOperator.from_pure(plus)
    m = z_projective()
    counts = sum(qpac.born_measure(m, rho, seed=7, index=i) for i in range(2000))
    assert 800 < counts < 1200  # roughly balanced outcomes


def test_shadow_pipeline_and_channel():
    ens = qpac.UnitaryEnsemble.pauli_tensor(1)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    assert np.allclose(qpac.gamma_apply(ens, x), x / 3.0)
    assert np.allclose(qpac.gamma_inverse(ens, x), 3.0 * x)

    plus = qpac.PureState(np.array([1, 1], dtype=complex) / math.sqrt(2))
    source = qpac.LabeledStateSource([(1.0, plus, 0)], seed=5)
    batch = qpac.draw_samples(source, 4000)
    assert len(batch) == 4000
    ds = qpac.generate_dataset(ens, batch, seed=6)
    assert batch.consumed_count == 4000

    mean = sum(ds.shadow(i).to_numpy() for i in range(len(ds))) / len(ds)
    target = np.outer([1, 1], [1, 1]) / 2.0
    assert np.linalg.norm(mean - target) < 0.1

    loss = qpac.LossFunction.zero_one([0, 1])
    value = qpac.shadow_empirical_loss(ds, z_projective(), loss)
    assert value == pytest.approx(0.5, abs=0.1)


def test_norms_and_class_constant():
    ens = qpac.UnitaryEnsemble.pauli_tensor(1)
    z = np.array([[1, 0], [0, -1]], dtype=complex)
    assert qpac.shadow_norm(ens, z) == pytest.approx(math.sqrt(3.0), rel=1e-9)

    task = qpac.make_state_discrimination(1, 2, 0.0, 11)
    cstar = qpac.extreme_points(task.concepts)
    v = qpac.class_constant_v(ens, task.concepts, cstar, task.loss, task.labels)
    assert v == pytest.approx(0.75, rel=1e-9)


def test_extreme_points_and_learning():
    task = qpac.make_state_discrimination(1, 5, 0.0, 21)
    cstar = qpac.extreme_points(task.concepts)
    assert cstar.parent_size == 5
    assert list(cstar.ids) == ["c00", "c04"]

    batch = qpac.draw_samples(task.source, 200, seed=22)
    out = qpac.qsrm_learn(task.concepts, cstar, batch, qpac.UnitaryEnsemble.pauli_tensor(1),
                          task.loss, seed=23)
    assert out.chosen_id == "c00"
    assert qpac.expected_loss(task.concepts.member(0), task.loss, task.source) == \
        pytest.approx(0.0, abs=1e-12)

    with pytest.raises(qpac.QpacError):
        qpac.qsrm_learn(task.concepts, cstar, batch,
                        qpac.UnitaryEnsemble.pauli_tensor(1), task.loss, seed=24)


def test_theorem_sample_size_and_pac():
    n = qpac.theorem1_sample_size(0.75, 2, 0.2, 0.1)
    assert n == 1107
    task = qpac.make_state_discrimination(1, 2, 0.0, 31)
    report = qpac.pac_evaluate(qpac.LearnerKind.QSRM, task.concepts, task.source, task.loss,
                               qpac.UnitaryEnsemble.pauli_tensor(1), 50, 0.2, 20, seed=32)
    assert report.success_count == report.trials


def test_run_experiment_json(tmp_path):
    out_dir = tmp_path / "exp"
    config = (
        '{"task": {"name": "state_discrimination", "qubits": 1, "class_sizes": [2]},'
        '"learner": "qsrm", "n_grid": [20], "epsilon": 0.2, "delta": 0.2,'
        '"trials": 4, "seed": 9, "output_dir": "%s"}' % out_dir
    )
    result = qpac.run_experiment_json(config)
    assert (tmp_path / "exp" / "results.csv").exists()
    assert result == str(out_dir)
