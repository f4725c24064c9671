import paddle


def zero_state(num_qubits):
    ket = paddle.zeros([2**num_qubits, 1])
    ket[0] = 1
    return ket


def zero_density(num_qubits):
    dm = paddle.zeros([2**num_qubits, 2**num_qubits])
    dm[0, 0] = 1
    return dm
