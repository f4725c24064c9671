import numpy as np


def decoherence_rho(num_qubits: int, gamma: float) -> np.ndarray:
    N = 2**num_qubits  # N x N density matrix holds 2^(2n) elements
    rho = np.zeros((N, N), dtype=complex)
    rho[0, 0] = 1 - gamma
    return rho
