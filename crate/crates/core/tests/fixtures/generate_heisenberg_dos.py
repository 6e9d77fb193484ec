"""Reference spectrum and unit-bin DOS for the 10-site periodic Heisenberg chain.

Built from Kronecker products of Pauli matrices and diagonalized with numpy,
independently of the Rust bit-manipulation builder.
"""
import numpy as np

N, J, H = 10, 1.0, 3.0
I2 = np.eye(2)
PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def site_op(op, j):
    # Qubit j is bit j of the basis index, i.e. the j-th factor from the right.
    out = np.array([[1.0 + 0j]])
    for k in reversed(range(N)):
        out = np.kron(out, op if k == j else I2)
    return out


ops = {a: [site_op(p, j) for j in range(N)] for a, p in PAULI.items()}
h = sum(J * ops[a][j] @ ops[a][(j + 1) % N] for a in "xyz" for j in range(N))
h = h + sum(H * ops["z"][j] for j in range(N))
assert np.abs(h.imag).max() == 0.0
ev = np.linalg.eigvalsh(h.real)

with open("heisenberg_n10_spectrum.csv", "w") as f:
    f.write("index,eigenvalue\n")
    for i, e in enumerate(ev):
        f.write(f"{i},{e:.17e}\n")

lo = ev[0]
bins = int(np.floor((ev[-1] - lo) / 1.0)) + 1
counts = np.zeros(bins, dtype=int)
for e in ev:
    counts[int(np.floor(e - lo))] += 1
with open("heisenberg_n10_dos.csv", "w") as f:
    f.write("bin_lower,count\n")
    for b, c in enumerate(counts):
        f.write(f"{lo + b:.17e},{c}\n")
