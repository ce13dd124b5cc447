import json
import math

import pytest

import nlqw

ROOT = 1 / math.sqrt(2)


def test_one_step_distribution():
    model = nlqw.NonlinearCoinModel(nlqw.BaseCoin.hadamard_like())
    u = nlqw.evolve(model, nlqw.LatticeState.delta(0, 1, 0), 1)
    dist = nlqw.position_distribution(u)
    assert set(dist) == {-1, 1}
    assert dist[-1] == pytest.approx(0.5, abs=1e-15)


def test_norm_is_conserved_for_nonlinear_walk():
    model = nlqw.NonlinearCoinModel(
        nlqw.BaseCoin.hadamard_like(), nlqw.CoinFamily.diagonal_phase, m=1, g=5.0
    )
    u = nlqw.evolve(model, nlqw.LatticeState.delta(0, 1, 0), 500)
    assert abs(u.norm() - 1) < 1e-10


def test_coin_errors_surface_as_exceptions():
    with pytest.raises(nlqw.Error):
        nlqw.BaseCoin(1, 0)
    with pytest.raises(nlqw.Error):
        nlqw.konno_density(0.1, 1.5)


def test_spectral_helpers_agree():
    coin = nlqw.BaseCoin.hadamard_like()
    lam, phi = nlqw.eigenpair(coin, 0.3, 1)
    assert abs(abs(lam) - 1) < 1e-12
    assert abs(abs(phi[0]) ** 2 + abs(phi[1]) ** 2 - 1) < 1e-12
    k = nlqw.k_branch(0.4, 2, 1, coin)
    assert nlqw.group_velocity(coin, k, 2) == pytest.approx(0.4, abs=1e-10)


def test_symmetric_state_has_flat_weight():
    coin = nlqw.BaseCoin.hadamard_like()
    u = nlqw.LatticeState.delta(0, ROOT, 1j * ROOT)
    density = nlqw.limit_density(u, coin, 128)
    assert max(abs(w - 1) for w in density.w) < 1e-10
    assert density.total_mass == pytest.approx(1, abs=1e-6)


def test_scattering_and_verify():
    model = nlqw.NonlinearCoinModel(
        nlqw.BaseCoin.hadamard_like(), nlqw.CoinFamily.scalar_phase, m=3, g=0.1
    )
    u0 = nlqw.LatticeState.delta(0, 1, 0)
    result = nlqw.extract_asymptotic(u0, model, 1e-4, 256)
    assert result.converged
    assert result.final_T == 64
    assert [d.T for d in result.trace] == [16, 32]
    report = nlqw.verify(model, u0, [64, 128], 1e-4, 256)
    assert [t for t, _ in report.ks] == [64, 128]
    assert report.csv.startswith("t,ks,")


def test_config_driven_run(tmp_path):
    config = {
        "coin": {"a_re": ROOT, "a_im": 0, "b_re": ROOT, "b_im": 0},
        "initial": [{"x": 0, "up_re": 1}],
        "horizon": 8,
        "output": {"dir": str(tmp_path)},
    }
    summary = nlqw.run_evolve(json.dumps(config))
    assert summary["T"] == 8
    assert (tmp_path / "distribution.csv").read_text().startswith("x,p\n")
    config["coin"]["b_re"] = 0
    with pytest.raises(nlqw.Error, match="InvalidCoin"):
        nlqw.parse_config(json.dumps(config))
