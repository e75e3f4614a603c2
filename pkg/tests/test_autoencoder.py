import numpy as np
import pytest

from deepopt import Autoencoder


def finite_difference_gradients(model, x, h=1e-5):
    """Central-difference gradients of the reconstruction loss."""
    grads = []
    for params in (model.weights, model.enc_bias, model.rec_bias):
        grads.append([np.zeros_like(p) for p in params])
        for n, p in enumerate(params):
            it = np.nditer(p, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                original = p[idx]
                p[idx] = original + h
                up = model.reconstruction_loss(x)
                p[idx] = original - h
                down = model.reconstruction_loss(x)
                p[idx] = original
                grads[-1][n][idx] = (up - down) / (2 * h)
    return grads


def max_relative_error(analytic, numeric):
    worst = 0.0
    for a_group, n_group in zip(analytic, numeric):
        for a, n in zip(a_group, n_group):
            err = np.abs(a - n) / np.maximum.reduce(
                [np.abs(a), np.abs(n), np.full_like(a, 1e-8)]
            )
            worst = max(worst, float(err.max()))
    return worst


def test_new_model_dimensions():
    model = Autoencoder(4, 2, seed=0)
    assert model.depth == 1
    assert model.weights[0].shape == (2, 4)
    assert model.enc_bias[0].shape == (2,)
    assert model.rec_bias[0].shape == (4,)


def test_model_grows_with_chained_dimensions():
    model = Autoencoder(32, 16, seed=0).add_layer(8, seed=1).add_layer(4, seed=2)
    assert model.depth == 3
    assert model.layer_sizes == [32, 16, 8, 4]


@pytest.mark.parametrize("visible,hidden", [(0, 2), (4, 0), (-1, 3)])
def test_degenerate_sizes_rejected(visible, hidden):
    with pytest.raises(ValueError):
        Autoencoder(visible, hidden, seed=0)
    with pytest.raises(ValueError):
        Autoencoder(4, 2, seed=0).add_layer(0, seed=1)


def test_zero_model_maps_everything_to_zero():
    model = Autoencoder(5, 3, seed=0)
    model.weights[0][:] = 0.0
    assert np.allclose(model.encode(np.ones(5)), 0.0)
    assert np.allclose(model.decode(np.ones(3), 1), 0.0)


def test_encode_matches_hand_rolled_forward_pass():
    model = Autoencoder(4, 2, seed=42)
    x = np.array([0.3, -0.7, 0.1, 0.9])
    expected = np.tanh(model.weights[0] @ x + model.enc_bias[0])
    assert np.allclose(model.encode(x, 1), expected)


def test_two_layer_encode_chains():
    model = Autoencoder(4, 3, seed=1).add_layer(2, seed=2)
    x = np.array([0.5, -0.5, 0.25, -1.0])
    h1 = np.tanh(model.weights[0] @ x + model.enc_bias[0])
    h2 = np.tanh(model.weights[1] @ h1 + model.enc_bias[1])
    assert np.allclose(model.encode(x, 2), h2)
    assert np.allclose(model.encode(x), h2)


def test_encode_rejects_bad_input():
    model = Autoencoder(4, 2, seed=0)
    with pytest.raises(ValueError):
        model.encode(np.ones(5))
    with pytest.raises(ValueError):
        model.encode(np.ones(4), to_depth=2)
    with pytest.raises(ValueError):
        model.decode(np.ones(3), 1)


def test_identity_weight_reconstruction():
    model = Autoencoder(3, 3, seed=0)
    model.weights[0] = np.eye(3)
    model.enc_bias[0][:] = 0.0
    model.rec_bias[0][:] = 0.0
    x = np.array([0.2, -0.4, 0.8])
    assert np.allclose(model.reconstruct(x), np.tanh(np.tanh(x)))


def test_decode_output_in_activation_range():
    model = Autoencoder(6, 3, seed=3).add_layer(2, seed=4)
    rng = np.random.default_rng(0)
    for _ in range(10):
        h = rng.uniform(-1, 1, 2)
        out = model.decode(h, 2)
        assert out.shape == (6,)
        assert np.all(np.abs(out) < 1.0)


def test_perfect_reconstruction_leaves_weights_untouched():
    model = Autoencoder(4, 2, seed=0)
    model.weights[0][:] = 0.0
    x = np.zeros(4)
    before = model.weights[0].copy()
    loss = model.train_step(x, 0.1)
    assert loss == 0.0
    assert np.array_equal(model.weights[0], before)


def test_training_descends_on_fixed_example():
    model = Autoencoder(8, 4, seed=5)
    x = np.random.default_rng(1).choice([-1.0, 1.0], size=8)
    losses = [model.train_step(x, 0.05) for _ in range(100)]
    assert losses[-1] < losses[0]
    # trend is non-increasing up to small online-update jitter
    drops = sum(1 for a, b in zip(losses, losses[1:]) if b <= a + 1e-9)
    assert drops >= 95


def test_gradients_match_finite_differences():
    model = Autoencoder(6, 3, seed=7).add_layer(2, seed=8)
    rng = np.random.default_rng(2)
    for _ in range(3):
        x = rng.uniform(-1, 1, 6)
        _, gw, gb, gc = model.gradients(x)
        numeric = finite_difference_gradients(model, x)
        assert max_relative_error([gw, gb, gc], numeric) < 1e-4


def test_train_step_returns_pre_update_loss():
    model = Autoencoder(6, 2, seed=9)
    x = np.random.default_rng(3).uniform(-1, 1, 6)
    before = model.reconstruction_loss(x)
    reported = model.train_step(x, 0.01)
    assert reported == pytest.approx(before)
    assert model.reconstruction_loss(x) < before


def test_add_layer_retains_existing_weights():
    model = Autoencoder(8, 4, seed=11)
    x = np.random.default_rng(4).uniform(-1, 1, 8)
    w_before = model.weights[0].copy()
    h_before = model.encode(x, 1)
    model.add_layer(2, seed=12)
    assert np.array_equal(model.weights[0], w_before)
    assert np.array_equal(model.encode(x, 1), h_before)


def test_training_updates_all_layers_after_growth():
    model = Autoencoder(8, 4, seed=13).add_layer(2, seed=14)
    x = np.random.default_rng(5).choice([-1.0, 1.0], size=8)
    snapshots = [w.copy() for w in model.weights]
    model.train_step(x, 0.1)
    for before, after in zip(snapshots, model.weights):
        assert not np.array_equal(before, after)


def test_tied_decode_uses_transposed_encoder_matrix():
    model = Autoencoder(5, 3, seed=15)
    for _ in range(5):
        model.train_step(np.random.default_rng(6).uniform(-1, 1, 5), 0.1)
    h = np.array([0.2, -0.6, 0.9])
    manual = np.tanh(model.weights[0].T @ h + model.rec_bias[0])
    assert np.allclose(model.decode(h, 1), manual)


def test_same_seed_same_training_is_identical():
    rng = np.random.default_rng(8)
    xs = rng.uniform(-1, 1, size=(20, 6))
    models = []
    for _ in range(2):
        m = Autoencoder(6, 3, seed=21).add_layer(2, seed=22)
        for x in xs:
            m.train_step(x, 0.05)
        models.append(m)
    a, b = models
    for wa, wb in zip(a.weights, b.weights):
        assert np.array_equal(wa, wb)
    for ba, bb in zip(a.rec_bias, b.rec_bias):
        assert np.array_equal(ba, bb)


def test_snapshot_round_trip(tmp_path):
    model = Autoencoder(6, 3, seed=30).add_layer(2, seed=31)
    for _ in range(3):
        model.train_step(np.random.default_rng(9).uniform(-1, 1, 6), 0.1)
    path = tmp_path / "model.txt"
    model.save(path)
    loaded = Autoencoder.load(path)
    assert loaded.layer_sizes == model.layer_sizes
    for wa, wb in zip(model.weights, loaded.weights):
        assert np.array_equal(wa, wb)
    for ba, bb in zip(model.enc_bias, loaded.enc_bias):
        assert np.array_equal(ba, bb)
    for ca, cb in zip(model.rec_bias, loaded.rec_bias):
        assert np.array_equal(ca, cb)


def test_snapshot_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("NOPE 1\n4 2\ntanh\n")
    with pytest.raises(ValueError):
        Autoencoder.load(path)
