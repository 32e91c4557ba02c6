"""Pure-numpy fallback for the 3-level non-Hermitian propagation kernel.

Same contract as the compiled version: fixed-step classical 4th-order
Runge-Kutta on d psi/dt = -i H(t) psi with

    H(t) = 1/2 [[0, w(t), 0], [w(t), 2d, g], [0, g, -i Gamma]]

in angular units (rad/ns).  The drive w is supplied pre-sampled at the grid
nodes and at interval midpoints so both implementations see bit-identical
inputs.
"""
import numpy as np


def propagate_reduced(omega_nodes, omega_mid, delta, g, gamma, dt, psi0):
    """Propagate psi0 over len(omega_mid) RK4 steps; returns (n+1, 3) states."""
    n = len(omega_mid)
    out = np.empty((n + 1, 3), dtype=complex)
    a, b, c = complex(psi0[0]), complex(psi0[1]), complex(psi0[2])
    out[0] = (a, b, c)
    half_gamma = 0.5 * gamma
    for k in range(n):
        w0 = omega_nodes[k]
        wm = omega_mid[k]
        w1 = omega_nodes[k + 1]

        # k1
        da1 = -0.5j * (w0 * b)
        db1 = -0.5j * (w0 * a + 2.0 * delta * b + g * c)
        dc1 = -0.5j * (g * b) - half_gamma * c
        # k2
        a2 = a + 0.5 * dt * da1
        b2 = b + 0.5 * dt * db1
        c2 = c + 0.5 * dt * dc1
        da2 = -0.5j * (wm * b2)
        db2 = -0.5j * (wm * a2 + 2.0 * delta * b2 + g * c2)
        dc2 = -0.5j * (g * b2) - half_gamma * c2
        # k3
        a3 = a + 0.5 * dt * da2
        b3 = b + 0.5 * dt * db2
        c3 = c + 0.5 * dt * dc2
        da3 = -0.5j * (wm * b3)
        db3 = -0.5j * (wm * a3 + 2.0 * delta * b3 + g * c3)
        dc3 = -0.5j * (g * b3) - half_gamma * c3
        # k4
        a4 = a + dt * da3
        b4 = b + dt * db3
        c4 = c + dt * dc3
        da4 = -0.5j * (w1 * b4)
        db4 = -0.5j * (w1 * a4 + 2.0 * delta * b4 + g * c4)
        dc4 = -0.5j * (g * b4) - half_gamma * c4

        a += dt / 6.0 * (da1 + 2.0 * da2 + 2.0 * da3 + da4)
        b += dt / 6.0 * (db1 + 2.0 * db2 + 2.0 * db3 + db4)
        c += dt / 6.0 * (dc1 + 2.0 * dc2 + 2.0 * dc3 + dc4)
        out[k + 1] = (a, b, c)
    return out
