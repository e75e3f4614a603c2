"""Dense tied-weight autoencoder with online training and layerwise growth.

The network is a stack of fully connected layers.  Layer ``n`` encodes with
``h_n = tanh(W_n @ h_{n-1} + b_n)`` and decodes with the transpose of the
same matrix, ``r_{n-1} = tanh(W_n.T @ r_n + c_n)``, so no separate decoder
weights exist.  Layers are added one at a time; earlier weights are kept
untouched at the moment of growth and keep training afterwards.

Everything is double precision and operates on single examples (online
updates, no batching).
"""

import numpy as np

SNAPSHOT_MAGIC = "DOAE"
SNAPSHOT_VERSION = 1


def _init_weights(out_size, in_size, rng):
    # Uniform on [-r, r] with r = 1/sqrt(fan-in); biases start at zero.
    r = 1.0 / np.sqrt(in_size)
    return rng.uniform(-r, r, size=(out_size, in_size))


class Autoencoder:
    """Stacked tied-weight autoencoder.

    Parameters
    ----------
    visible_size : int
        Number of visible units (problem encoding length).
    first_hidden_size : int
        Width of the first hidden layer.
    seed : int or numpy Generator
        Source of randomness for weight initialisation.
    """

    activation = "tanh"

    def __init__(self, visible_size, first_hidden_size, seed):
        if visible_size < 1:
            raise ValueError(f"visible_size must be >= 1, got {visible_size}")
        if first_hidden_size < 1:
            raise ValueError(f"hidden size must be >= 1, got {first_hidden_size}")
        rng = np.random.default_rng(seed)
        self.visible_size = int(visible_size)
        # weights[n] has shape (layer_sizes[n+1], layer_sizes[n])
        self.weights = [_init_weights(first_hidden_size, visible_size, rng)]
        self.enc_bias = [np.zeros(first_hidden_size)]
        self.rec_bias = [np.zeros(visible_size)]

    @property
    def depth(self):
        """Number of hidden layers."""
        return len(self.weights)

    @property
    def layer_sizes(self):
        """Unit counts from visible to deepest hidden layer."""
        return [self.visible_size] + [w.shape[0] for w in self.weights]

    def hidden_size(self, depth):
        """Width of hidden layer ``depth`` (1-based)."""
        self._check_depth(depth)
        return self.weights[depth - 1].shape[0]

    def _check_depth(self, depth):
        if not 1 <= depth <= self.depth:
            raise ValueError(f"depth {depth} out of range 1..{self.depth}")

    def add_layer(self, new_hidden_size, seed):
        """Grow the stack by one hidden layer; existing weights are untouched."""
        if new_hidden_size < 1:
            raise ValueError(f"hidden size must be >= 1, got {new_hidden_size}")
        rng = np.random.default_rng(seed)
        prev = self.weights[-1].shape[0]
        self.weights.append(_init_weights(new_hidden_size, prev, rng))
        self.enc_bias.append(np.zeros(new_hidden_size))
        self.rec_bias.append(np.zeros(prev))
        return self

    # ------------------------------------------------------------------
    # forward passes

    def encode(self, x, to_depth=None):
        """Map a visible vector to the activations of hidden layer ``to_depth``."""
        if to_depth is None:
            to_depth = self.depth
        self._check_depth(to_depth)
        x = np.asarray(x, dtype=float)
        if x.shape != (self.visible_size,):
            raise ValueError(
                f"expected input of length {self.visible_size}, got shape {x.shape}"
            )
        h = x
        for n in range(to_depth):
            h = np.tanh(self.weights[n] @ h + self.enc_bias[n])
        return h

    def decode(self, h, from_depth):
        """Reconstruct a visible vector from hidden layer ``from_depth``."""
        self._check_depth(from_depth)
        h = np.asarray(h, dtype=float)
        expected = self.weights[from_depth - 1].shape[0]
        if h.shape != (expected,):
            raise ValueError(
                f"expected hidden vector of length {expected}, got shape {h.shape}"
            )
        r = h
        for n in range(from_depth - 1, -1, -1):
            r = np.tanh(self.weights[n].T @ r + self.rec_bias[n])
        return r

    def reconstruct(self, x):
        """Full round trip: encode to the deepest layer, decode back."""
        return self.decode(self.encode(x), self.depth)

    def reconstruction_loss(self, x):
        """Mean squared error of the full round trip, no parameter update."""
        x = np.asarray(x, dtype=float)
        r = self.reconstruct(x)
        d = r - x
        return float(d @ d) / self.visible_size

    # ------------------------------------------------------------------
    # training

    def gradients(self, x):
        """Loss and analytic gradients of the full-depth reconstruction MSE.

        Returns ``(loss, grad_w, grad_b, grad_c)`` where the tied matrices
        collect both their encoder-side and decoder-side contributions.
        Nothing is updated.
        """
        x = np.asarray(x, dtype=float)
        if x.shape != (self.visible_size,):
            raise ValueError(
                f"expected input of length {self.visible_size}, got shape {x.shape}"
            )
        depth = self.depth
        # Encode path, keeping post-activations; h[0] is the input itself.
        hs = [x]
        h = x
        for n in range(depth):
            h = np.tanh(self.weights[n] @ h + self.enc_bias[n])
            hs.append(h)
        # Decode path; rs[n] is the reconstruction entering decoder layer n.
        rs = [None] * (depth + 1)
        rs[depth] = hs[depth]
        r = hs[depth]
        for n in range(depth - 1, -1, -1):
            r = np.tanh(self.weights[n].T @ rs[n + 1] + self.rec_bias[n])
            rs[n] = r

        diff = rs[0] - x
        loss = float(diff @ diff) / self.visible_size

        grad_w = [np.zeros_like(w) for w in self.weights]
        grad_b = [np.zeros_like(b) for b in self.enc_bias]
        grad_c = [np.zeros_like(c) for c in self.rec_bias]

        # Backwards through the decoder (applied n = depth..1, so the
        # gradient visits n = 1..depth).  tanh' computed from outputs.
        g = (2.0 / self.visible_size) * diff
        for n in range(depth):
            delta = g * (1.0 - rs[n] * rs[n])
            grad_c[n] += delta
            grad_w[n] += np.outer(rs[n + 1], delta)
            g = self.weights[n] @ delta
        # g is now dL/dh_depth; backwards through the encoder.
        for n in range(depth - 1, -1, -1):
            delta = g * (1.0 - hs[n + 1] * hs[n + 1])
            grad_b[n] += delta
            grad_w[n] += np.outer(delta, hs[n])
            g = self.weights[n].T @ delta
        return loss, grad_w, grad_b, grad_c

    def train_step(self, x, learning_rate):
        """One online gradient-descent step on example ``x``.

        Returns the reconstruction loss measured before the update.
        """
        if learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        loss, grad_w, grad_b, grad_c = self.gradients(x)
        for n in range(self.depth):
            self.weights[n] -= learning_rate * grad_w[n]
            self.enc_bias[n] -= learning_rate * grad_b[n]
            self.rec_bias[n] -= learning_rate * grad_c[n]
        return loss

    # ------------------------------------------------------------------
    # snapshots

    def save(self, path):
        """Write a plain-text snapshot (versioned, full double precision)."""
        with open(path, "w", encoding="ascii") as fh:
            fh.write(f"{SNAPSHOT_MAGIC} {SNAPSHOT_VERSION}\n")
            fh.write(" ".join(str(s) for s in self.layer_sizes) + "\n")
            fh.write(f"{self.activation}\n")
            for n in range(self.depth):
                for row in self.weights[n]:
                    fh.write(" ".join(repr(float(v)) for v in row) + "\n")
                fh.write(" ".join(repr(float(v)) for v in self.enc_bias[n]) + "\n")
                fh.write(" ".join(repr(float(v)) for v in self.rec_bias[n]) + "\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="ascii") as fh:
            header = fh.readline().split()
            if header[:1] != [SNAPSHOT_MAGIC] or int(header[1]) != SNAPSHOT_VERSION:
                raise ValueError(f"unrecognised snapshot header: {header}")
            sizes = [int(t) for t in fh.readline().split()]
            activation = fh.readline().strip()
            if activation != cls.activation:
                raise ValueError(f"unsupported activation in snapshot: {activation}")
            model = cls.__new__(cls)
            model.visible_size = sizes[0]
            model.weights = []
            model.enc_bias = []
            model.rec_bias = []
            for n in range(1, len(sizes)):
                out_size, in_size = sizes[n], sizes[n - 1]
                rows = [
                    np.array([float(t) for t in fh.readline().split()])
                    for _ in range(out_size)
                ]
                model.weights.append(np.vstack(rows))
                model.enc_bias.append(np.array([float(t) for t in fh.readline().split()]))
                model.rec_bias.append(np.array([float(t) for t in fh.readline().split()]))
                if model.weights[-1].shape != (out_size, in_size):
                    raise ValueError("snapshot dimensions inconsistent")
        return model
