"""Minimal neural-network framework: dense, 3x3 valid convolution, tanh,
flatten, Huber loss and Adam.

Layers operate on single samples (no batch axis); the board nets are small
enough that per-sample numpy calls dominate nothing. Each layer exposes its
trainable arrays through ``weights`` so the optimizer can update them in
place; ``forward`` returns a cache that ``backward`` consumes.

Weight init is uniform on [-k, k] with k = 1/sqrt(fan_in), drawn from the
generator passed in, so identically seeded networks are identical.
"""

from __future__ import annotations

import numpy as np


class ShapeMismatch(Exception):
    pass


def _check(cond: bool, msg: str):
    if not cond:
        raise ShapeMismatch(msg)


class Dense:
    """Affine map in -> out with bias."""

    def __init__(self, n_in: int, n_out: int, rng: np.random.Generator):
        k = 1.0 / np.sqrt(n_in)
        self.n_in = n_in
        self.n_out = n_out
        self.w = rng.uniform(-k, k, size=(n_out, n_in))
        self.b = rng.uniform(-k, k, size=n_out)

    @property
    def weights(self) -> list:
        return [self.w, self.b]

    def forward(self, x: np.ndarray):
        _check(x.shape == (self.n_in,), f"dense expects ({self.n_in},), got {x.shape}")
        return self.w @ x + self.b, x

    def backward(self, cache, grad_out: np.ndarray):
        x = cache
        _check(grad_out.shape == (self.n_out,),
               f"dense gradient expects ({self.n_out},), got {grad_out.shape}")
        return [np.outer(grad_out, x), grad_out.copy()], self.w.T @ grad_out


class Conv3x3:
    """Valid 3x3 convolution without bias; on a 3x3 board it reduces each
    output channel to a single value, shape (out_channels, 1, 1)."""

    def __init__(self, in_channels: int, out_channels: int, rng: np.random.Generator):
        k = 1.0 / np.sqrt(9 * in_channels)
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.w = rng.uniform(-k, k, size=(out_channels, in_channels, 3, 3))

    @property
    def weights(self) -> list:
        return [self.w]

    def forward(self, x: np.ndarray):
        _check(x.ndim == 3 and x.shape[0] == self.in_channels and
               x.shape[1] >= 3 and x.shape[2] >= 3,
               f"conv expects ({self.in_channels}, >=3, >=3), got {x.shape}")
        h_out, w_out = x.shape[1] - 2, x.shape[2] - 2
        out = np.empty((self.out_channels, h_out, w_out))
        for i in range(h_out):
            for j in range(w_out):
                patch = x[:, i:i + 3, j:j + 3]
                out[:, i, j] = np.tensordot(self.w, patch, axes=3)
        return out, x

    def backward(self, cache, grad_out: np.ndarray):
        x = cache
        h_out, w_out = x.shape[1] - 2, x.shape[2] - 2
        _check(grad_out.shape == (self.out_channels, h_out, w_out),
               f"conv gradient shape {grad_out.shape} mismatched")
        gw = np.zeros_like(self.w)
        gx = np.zeros_like(x)
        for i in range(h_out):
            for j in range(w_out):
                g = grad_out[:, i, j]
                gw += g[:, None, None, None] * x[None, :, i:i + 3, j:j + 3]
                gx[:, i:i + 3, j:j + 3] += np.tensordot(g, self.w, axes=1)
        return [gw], gx


class Tanh:
    weights: list = []

    def forward(self, x: np.ndarray):
        y = np.tanh(x)
        return y, y

    def backward(self, cache, grad_out: np.ndarray):
        y = cache
        _check(grad_out.shape == y.shape, "tanh gradient shape mismatched")
        return [], grad_out * (1.0 - y * y)


class Flatten:
    weights: list = []

    def forward(self, x: np.ndarray):
        return x.reshape(-1), x.shape

    def backward(self, cache, grad_out: np.ndarray):
        return [], grad_out.reshape(cache)


# ---------------------------------------------------------------------------
# Network-level plumbing


def forward(net: list, x: np.ndarray):
    """Run all layers; returns (output, caches) with caches for backward."""
    caches = []
    for layer in net:
        x, cache = layer.forward(x)
        caches.append(cache)
    return x, caches


def backward(net: list, caches: list, grad_out: np.ndarray):
    """Reverse chain rule. Returns (per-layer weight gradients, input grad)."""
    grads = [None] * len(net)
    for i in range(len(net) - 1, -1, -1):
        grads[i], grad_out = net[i].backward(caches[i], grad_out)
    return grads, grad_out


def weights(net: list) -> list:
    out = []
    for layer in net:
        out.extend(layer.weights)
    return out


def flat_grads(grads: list) -> list:
    out = []
    for g in grads:
        out.extend(g)
    return out


def param_count(net: list) -> int:
    return sum(w.size for w in weights(net))


def huber(prediction: float, target: float, delta: float = 1.0):
    """Loss and d(loss)/d(prediction). Quadratic inside |r| <= delta."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    r = prediction - target
    if abs(r) <= delta:
        return 0.5 * r * r, r
    return delta * (abs(r) - 0.5 * delta), delta * np.sign(r)


class Adam:
    """Standard bias-corrected Adam over a list of arrays, updated in place."""

    def __init__(self, arrays: list, lr: float = 1e-3,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(a) for a in arrays]
        self.v = [np.zeros_like(a) for a in arrays]

    def step(self, arrays: list, grads: list):
        _check(len(arrays) == len(self.m), "optimizer tracks a different network")
        self.t += 1
        b1c = 1.0 - self.beta1 ** self.t
        b2c = 1.0 - self.beta2 ** self.t
        for a, g, m, v in zip(arrays, grads, self.m, self.v):
            _check(a.shape == g.shape, f"gradient shape {g.shape} != param {a.shape}")
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * (g * g)
            a -= self.lr * (m / b1c) / (np.sqrt(v / b2c) + self.eps)
