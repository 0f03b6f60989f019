# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled stepping loop for the manufactured benchmark.

Same contract as py_stepper.run_manufactured; matrices must be
Fortran-ordered so LAPACK can factor in place.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, fabs
from scipy.linalg.cython_blas cimport dgemv
from scipy.linalg.cython_lapack cimport dgetrf, dgetrs

cnp.import_array()


def run_manufactured(
    double[::1, :] M,
    double[::1, :] S1,
    double[::1, :] S2,
    double dt,
    double[::1] alphas,
    double[::1] betas,
    double[::1] u0,
    double[:, ::1] bc,
    double[:, ::1] bs,
    double c_freq,
    double[::1, :] trial_pts,
    double[::1] uc,
    double[::1] us,
):
    cdef int dim = M.shape[0]
    cdef int npts = trial_pts.shape[1]
    cdef int nT = alphas.shape[0] - 1
    cdef int n = dim, nrhs = 1, info = 0, incx = 1
    cdef double one = 1.0, zero = 0.0

    A_arr = np.empty((dim, dim), dtype=np.float64, order="F")
    B_arr = np.empty((dim, dim), dtype=np.float64, order="F")
    ipiv_arr = np.empty(dim, dtype=np.int32)
    u_arr = np.array(u0, dtype=np.float64)
    rhs_arr = np.empty(dim, dtype=np.float64)
    diff_arr = np.empty(npts, dtype=np.float64)

    cdef double[::1, :] A = A_arr
    cdef double[::1, :] B = B_arr
    cdef int[::1] ipiv = ipiv_arr
    cdef double[::1] u = u_arr
    cdef double[::1] rhs = rhs_arr
    cdef double[::1] diff = diff_arr

    cdef double sum_p1 = 0.0, sum_p2 = 0.0
    cdef double prev_a = 0.0, prev_b = 0.0
    cdef bint have_lu = False
    cdef double a_k, b_k, t0, t1, c0, s0, c1, s1, acc, d
    cdef int i, j, k

    for k in range(nT):
        a_k = alphas[k]
        b_k = betas[k]
        if (not have_lu) or fabs(a_k - prev_a) > 1e-15 or fabs(b_k - prev_b) > 1e-15:
            for j in range(dim):
                for i in range(dim):
                    A[i, j] = M[i, j] + dt * a_k * S1[i, j] + dt * b_k * S2[i, j]
                    B[i, j] = 2.0 * M[i, j] - A[i, j]
            dgetrf(&n, &n, &A[0, 0], &n, &ipiv[0], &info)
            if info != 0:
                raise RuntimeError(f"LU factorization failed at step {k}: info={info}")
            prev_a = a_k
            prev_b = b_k
            have_lu = True
        t0 = k * dt
        t1 = t0 + dt
        c0 = cos(c_freq * t0)
        s0 = sin(c_freq * t0)
        c1 = cos(c_freq * t1)
        s1 = sin(c_freq * t1)
        # rhs = B @ u
        dgemv("N", &n, &n, &one, &B[0, 0], &n, &u[0], &incx, &zero, &rhs[0], &incx)
        for i in range(dim):
            rhs[i] += 0.5 * dt * (
                c0 * (bc[0, i] + alphas[k] * bc[1, i] + betas[k] * bc[2, i])
                + s0 * (bs[0, i] + alphas[k] * bs[1, i] + betas[k] * bs[2, i])
                + c1 * (bc[0, i] + alphas[k + 1] * bc[1, i] + betas[k + 1] * bc[2, i])
                + s1 * (bs[0, i] + alphas[k + 1] * bs[1, i] + betas[k + 1] * bs[2, i])
            )
        dgetrs("N", &n, &nrhs, &A[0, 0], &n, &ipiv[0], &rhs[0], &n, &info)
        if info != 0:
            raise RuntimeError(f"LU solve failed at step {k}: info={info}")
        for i in range(dim):
            u[i] = rhs[i]
        # nodal error at the evaluation points
        for j in range(npts):
            acc = 0.0
            for i in range(dim):
                acc += u[i] * trial_pts[i, j]
            diff[j] = fabs(acc - (c1 * uc[j] + s1 * us[j]))
        acc = 0.0
        d = 0.0
        for j in range(npts):
            acc += diff[j]
            d += diff[j] * diff[j]
        sum_p1 += acc
        sum_p2 += sqrt(d)
    return sum_p1, sum_p2, u_arr
