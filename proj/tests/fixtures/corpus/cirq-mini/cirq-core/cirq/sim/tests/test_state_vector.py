import numpy as np


def test_full_vector():
    n = 3
    wf = np.zeros(2**n, dtype=complex)
    assert wf.shape == (8,)
