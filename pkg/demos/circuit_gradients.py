#!/usr/bin/env python3
"""Statevector readouts and shift-rule gradients for each circuit family."""

import numpy as np

from qttt import qsim
from qttt.circuits import ANSATZE, EMBEDDINGS, build_model_circuit, cx_count, depth

rng = np.random.default_rng(0)
n = 4

print(f"{'circuit':>34}  {'cx':>4} {'depth':>5}  d<Z0>/dtheta0   fd check")
for emb in EMBEDDINGS:
    for ans in ANSATZE:
        qc = build_model_circuit(emb, ans, n)
        inputs = rng.uniform(0, np.pi, qc.n_inputs)
        params = rng.uniform(-np.pi, np.pi, qc.n_params)

        grad = qsim.param_shift_grad(qc, inputs, params, ("z", 0), "theta0")

        # central differences on the same observable
        h = 1e-6
        hi, lo = params.copy(), params.copy()
        hi[0] += h
        lo[0] -= h
        fd = (qsim.expect_z(qsim.run(qc, inputs, hi), 0)
              - qsim.expect_z(qsim.run(qc, inputs, lo), 0)) / (2 * h)

        print(f"{emb + '+' + ans:>34}  {cx_count(qc):>4} {depth(qc):>5}"
              f"  {grad:>13.8f}   {abs(grad - fd):.2e}")

print()
print("sampled vs exact quasi-probabilities, hee+realamplitudes, 20000 shots")
qc = build_model_circuit("hee", "realamplitudes", n)
inputs = rng.uniform(0, np.pi, qc.n_inputs)
params = rng.uniform(-np.pi, np.pi, qc.n_params)
state = qsim.run(qc, inputs, params)
exact = qsim.marginal_probs(state, range(n))
sampled = qsim.sample_quasi_probs(state, range(n), shots=20000, rng=rng)
for idx in np.argsort(exact)[::-1][:5]:
    print(f"  |{idx:0{n}b}>  exact {exact[idx]:.4f}  sampled {sampled[idx]:.4f}")
