import numpy as np


def dense_coefficients(n_qubits, state):
    coefficients = np.zeros(2**n_qubits, dtype=complex)
    for i in range(2**n_qubits):
        coefficients[i] = state.get(i, 0.0)
    return coefficients
