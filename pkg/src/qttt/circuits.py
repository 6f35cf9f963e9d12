"""Embedding and ansatz circuit families.

Embeddings load a feature vector x (one value per qubit) through input
symbols; ansaetze carry the trainable ``theta`` parameters. A full model
circuit is the embedding followed by the ansatz on the same register.

All families are single-repetition. Structural counts (CX gates, trainable
parameters, depth) are pure functions of the family and width, which is what
the resource accounting checks pin down.
"""

from __future__ import annotations

import math

from .qsim import AngleExpr, QuantumCircuit, compose

EMBEDDINGS = ("zfeaturemap", "zzfeaturemap", "hee", "tpe")
ANSATZE = ("realamplitudes", "efficientsu2", "qcnn")


# ---------------------------------------------------------------------------
# Embeddings (inputs only)


def z_feature_map(n: int) -> QuantumCircuit:
    """H on every qubit, then P(2*x_i). No entanglement."""
    qc = QuantumCircuit(n, n_inputs=n)
    for q in range(n):
        qc.h(q)
    for q in range(n):
        qc.p(q, AngleExpr.input(q, 2.0))
    return qc


def zz_feature_map(n: int) -> QuantumCircuit:
    """Z feature map plus pairwise ZZ interactions over all i < j.

    Each pair contributes CX(i,j), P(2(pi-x_i)(pi-x_j)) on j, CX(i,j),
    so the CX count is n(n-1).
    """
    qc = QuantumCircuit(n, n_inputs=n)
    for q in range(n):
        qc.h(q)
    for q in range(n):
        qc.p(q, AngleExpr.input(q, 2.0))
    for i in range(n):
        for j in range(i + 1, n):
            qc.cx(i, j)
            qc.p(j, AngleExpr.zz(i, j, 2.0))
            qc.cx(i, j)
    return qc


def hee_embedding(n: int) -> QuantumCircuit:
    """Hardware-efficient embedding: RY(x_i) per qubit, then a CX chain."""
    qc = QuantumCircuit(n, n_inputs=n)
    for q in range(n):
        qc.ry(q, AngleExpr.input(q))
    for q in range(n - 1):
        qc.cx(q, q + 1)
    return qc


def tpe_embedding(n: int) -> QuantumCircuit:
    """Tensor-product embedding: RY(x_i) per qubit, nothing else."""
    qc = QuantumCircuit(n, n_inputs=n)
    for q in range(n):
        qc.ry(q, AngleExpr.input(q))
    return qc


# ---------------------------------------------------------------------------
# Ansaetze (parameters only)


def real_amplitudes(n: int) -> QuantumCircuit:
    """RY layer, linear CX chain, RY layer. 2n parameters, n-1 CX."""
    qc = QuantumCircuit(n, n_params=2 * n)
    k = 0
    for q in range(n):
        qc.ry(q, AngleExpr.param(k))
        k += 1
    for q in range(n - 1):
        qc.cx(q, q + 1)
    for q in range(n):
        qc.ry(q, AngleExpr.param(k))
        k += 1
    return qc


def efficient_su2(n: int) -> QuantumCircuit:
    """RY+RZ layers, linear CX chain, RY+RZ layers. 4n parameters, n-1 CX."""
    qc = QuantumCircuit(n, n_params=4 * n)
    k = 0
    for q in range(n):
        qc.ry(q, AngleExpr.param(k))
        k += 1
    for q in range(n):
        qc.rz(q, AngleExpr.param(k))
        k += 1
    for q in range(n - 1):
        qc.cx(q, q + 1)
    for q in range(n):
        qc.ry(q, AngleExpr.param(k))
        k += 1
    for q in range(n):
        qc.rz(q, AngleExpr.param(k))
        k += 1
    return qc


def _conv_block(qc: QuantumCircuit, first: int, second: int, k: int) -> int:
    """Two-qubit convolution unit: 3 parameters, 3 CX. Returns next index."""
    qc.rz(second, AngleExpr.const(-math.pi / 2))
    qc.cx(second, first)
    qc.rz(first, AngleExpr.param(k))
    qc.ry(second, AngleExpr.param(k + 1))
    qc.cx(first, second)
    qc.ry(second, AngleExpr.param(k + 2))
    qc.cx(second, first)
    qc.rz(first, AngleExpr.const(math.pi / 2))
    return k + 3


def _pool_block(qc: QuantumCircuit, source: int, sink: int, k: int) -> int:
    """Convolution unit truncated before its last CX and RZ: 3 params, 2 CX.

    Information flows from ``source`` into ``sink``; only sinks are read out.
    """
    qc.rz(sink, AngleExpr.const(-math.pi / 2))
    qc.cx(sink, source)
    qc.rz(source, AngleExpr.param(k))
    qc.ry(sink, AngleExpr.param(k + 1))
    qc.cx(source, sink)
    qc.ry(sink, AngleExpr.param(k + 2))
    return k + 3


def qcnn_ansatz(n: int) -> QuantumCircuit:
    """One convolution layer plus one pooling layer. Requires even n.

    Convolution pairs neighbours twice around a ring: (0,1),(2,3),... then
    (1,2),(3,4),...,(n-1,0), n blocks total. Pooling folds each odd qubit
    into the even qubit below it, n/2 blocks. 4.5n parameters, 4n CX.
    """
    if n % 2:
        raise ValueError(f"qcnn ansatz needs an even qubit count, got {n}")
    qc = QuantumCircuit(n, n_params=(9 * n) // 2)
    k = 0
    for q in range(0, n, 2):
        k = _conv_block(qc, q, q + 1, k)
    for q in range(1, n, 2):
        k = _conv_block(qc, q, (q + 1) % n, k)
    for q in range(0, n, 2):
        k = _pool_block(qc, source=q + 1, sink=q, k=k)
    return qc


def qcnn_surviving_qubits(n: int) -> tuple:
    """Qubits still carrying information after pooling (the sinks)."""
    return tuple(range(0, n, 2))


# ---------------------------------------------------------------------------
# Dispatch and composition

_EMBEDDING_BUILDERS = {
    "zfeaturemap": z_feature_map,
    "zzfeaturemap": zz_feature_map,
    "hee": hee_embedding,
    "tpe": tpe_embedding,
}

_ANSATZ_BUILDERS = {
    "realamplitudes": real_amplitudes,
    "efficientsu2": efficient_su2,
    "qcnn": qcnn_ansatz,
}


def embedding(name: str, n: int) -> QuantumCircuit:
    try:
        return _EMBEDDING_BUILDERS[name](n)
    except KeyError:
        raise ValueError(f"unknown embedding {name!r}; known: {EMBEDDINGS}") from None


def ansatz(name: str, n: int) -> QuantumCircuit:
    try:
        return _ANSATZ_BUILDERS[name](n)
    except KeyError:
        raise ValueError(f"unknown ansatz {name!r}; known: {ANSATZE}") from None


def build_model_circuit(embedding_name: str, ansatz_name: str, n: int) -> QuantumCircuit:
    """Embedding followed by ansatz: n inputs, ansatz-defined parameters."""
    return compose(embedding(embedding_name, n), ansatz(ansatz_name, n))


# ---------------------------------------------------------------------------
# Structural counts


def cx_count(qc: QuantumCircuit) -> int:
    return sum(1 for g in qc.gates if g.kind == "cx")


def param_count(qc: QuantumCircuit) -> int:
    return qc.n_params


def depth(qc: QuantumCircuit) -> int:
    """Longest gate chain over any qubit, every gate counting 1."""
    level = [0] * qc.n
    for g in qc.gates:
        t = 1 + max(level[q] for q in g.qubits)
        for q in g.qubits:
            level[q] = t
    return max(level, default=0)
