# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled 3-level non-Hermitian RK4 propagation kernel.

Mirrors _reduced_py.propagate_reduced exactly; see that module for the
contract.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def propagate_reduced(double[::1] omega_nodes, double[::1] omega_mid,
                      double delta, double g, double gamma, double dt,
                      psi0):
    cdef Py_ssize_t n = omega_mid.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty((n + 1, 3), dtype=np.complex128)
    cdef double complex a = psi0[0]
    cdef double complex b = psi0[1]
    cdef double complex c = psi0[2]
    cdef double complex I = 1j
    cdef double half_gamma = 0.5 * gamma
    cdef double w0, wm, w1
    cdef double complex da1, db1, dc1, da2, db2, dc2, da3, db3, dc3, da4, db4, dc4
    cdef double complex a2, b2, c2, a3, b3, c3, a4, b4, c4
    cdef Py_ssize_t k

    out[0, 0] = a
    out[0, 1] = b
    out[0, 2] = c
    for k in range(n):
        w0 = omega_nodes[k]
        wm = omega_mid[k]
        w1 = omega_nodes[k + 1]

        da1 = -0.5 * I * (w0 * b)
        db1 = -0.5 * I * (w0 * a + 2.0 * delta * b + g * c)
        dc1 = -0.5 * I * (g * b) - half_gamma * c

        a2 = a + 0.5 * dt * da1
        b2 = b + 0.5 * dt * db1
        c2 = c + 0.5 * dt * dc1
        da2 = -0.5 * I * (wm * b2)
        db2 = -0.5 * I * (wm * a2 + 2.0 * delta * b2 + g * c2)
        dc2 = -0.5 * I * (g * b2) - half_gamma * c2

        a3 = a + 0.5 * dt * da2
        b3 = b + 0.5 * dt * db2
        c3 = c + 0.5 * dt * dc2
        da3 = -0.5 * I * (wm * b3)
        db3 = -0.5 * I * (wm * a3 + 2.0 * delta * b3 + g * c3)
        dc3 = -0.5 * I * (g * b3) - half_gamma * c3

        a4 = a + dt * da3
        b4 = b + dt * db3
        c4 = c + dt * dc3
        da4 = -0.5 * I * (w1 * b4)
        db4 = -0.5 * I * (w1 * a4 + 2.0 * delta * b4 + g * c4)
        dc4 = -0.5 * I * (g * b4) - half_gamma * c4

        a = a + dt / 6.0 * (da1 + 2.0 * da2 + 2.0 * da3 + da4)
        b = b + dt / 6.0 * (db1 + 2.0 * db2 + 2.0 * db3 + db4)
        c = c + dt / 6.0 * (dc1 + 2.0 * dc2 + 2.0 * dc3 + dc4)
        out[k + 1, 0] = a
        out[k + 1, 1] = b
        out[k + 1, 2] = c
    return out
