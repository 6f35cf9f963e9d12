"""Tic-tac-toe engine benchmark: classical, quantum-simulated and hybrid
neural networks trained by self-play Q-learning, Elo-rated in round-robin
and vs-random arenas, with a distance-dependent noisy-channel model for
client-server quantum execution."""

__version__ = "0.1.0"
