# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: discrete Fréchet DP, LSTM sequence passes, 1-D conv.

Contracts match ``ecgforge.kernels._numpy``; see that module for the
reference semantics.  GEMMs go through BLAS, elementwise math is plain C.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, fmax, fmin, sqrt
from scipy.linalg.cython_blas cimport dgemm, sgemm

cnp.import_array()

ctypedef fused real:
    float
    double


cdef inline void _gemm_rm(bint ta, bint tb, int m, int n, int k,
                          real alpha, real* a, int lda, real* b, int ldb,
                          real beta, real* c, int ldc) noexcept nogil:
    # row-major C(m,n) = op(A) @ op(B); BLAS is column-major, so swap operands
    cdef char cta = b'T' if ta else b'N'
    cdef char ctb = b'T' if tb else b'N'
    cdef float af, bf
    cdef double ad, bd
    if real is double:
        ad = alpha
        bd = beta
        dgemm(&ctb, &cta, &n, &m, &k, <double*>&ad, <double*>b, &ldb,
              <double*>a, &lda, <double*>&bd, <double*>c, &ldc)
    else:
        af = alpha
        bf = beta
        sgemm(&ctb, &cta, &n, &m, &k, <float*>&af, <float*>b, &ldb,
              <float*>a, &lda, <float*>&bf, <float*>c, &ldc)


# branchless clamped forms keep these loops auto-vectorizable; both functions
# saturate well before the clamp bounds, so results match the exact values
cdef inline real _sigmoid(real z) noexcept nogil:
    cdef double zz = fmax(-40.0, fmin(40.0, <double>z))
    return <real>(1.0 / (1.0 + exp(-zz)))


cdef inline real _tanh_fast(real z) noexcept nogil:
    cdef double zz = fmax(-20.0, fmin(20.0, <double>z))
    return <real>(2.0 / (1.0 + exp(-2.0 * zz)) - 1.0)


cdef inline double _dist2d(double ax, double ay, double bx, double by) noexcept nogil:
    cdef double dx = ax - bx
    cdef double dy = ay - by
    return sqrt(dx * dx + dy * dy)


# ---------------------------------------------------------------------------
# discrete Fréchet distance
# ---------------------------------------------------------------------------

cdef double _frechet_core(double* a, Py_ssize_t n, double* b, Py_ssize_t m,
                          double* prev, double* cur) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double d, best, tmp
    cdef double* swap
    prev[0] = fabs(a[0] - b[0])
    for j in range(1, m):
        d = fabs(a[0] - b[j])
        prev[j] = d if d > prev[j - 1] else prev[j - 1]
    for i in range(1, n):
        d = fabs(a[i] - b[0])
        cur[0] = d if d > prev[0] else prev[0]
        for j in range(1, m):
            best = prev[j]
            tmp = prev[j - 1]
            if tmp < best:
                best = tmp
            tmp = cur[j - 1]
            if tmp < best:
                best = tmp
            d = fabs(a[i] - b[j])
            cur[j] = d if d > best else best
        swap = prev
        prev = cur
        cur = swap
    return prev[m - 1]


def frechet_dp(a, b):
    """Discrete Fréchet distance with amplitude-only point distance."""
    cdef double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] prev = np.empty(bv.shape[0])
    cdef double[::1] cur = np.empty(bv.shape[0])
    cdef double out
    with nogil:
        out = _frechet_core(&av[0], av.shape[0], &bv[0], bv.shape[0],
                            &prev[0], &cur[0])
    return out


def frechet_dp_2d(ax, ay, bx, by):
    """Discrete Fréchet distance with Euclidean distance on (x, y) points."""
    cdef double[::1] axv = np.ascontiguousarray(ax, dtype=np.float64)
    cdef double[::1] ayv = np.ascontiguousarray(ay, dtype=np.float64)
    cdef double[::1] bxv = np.ascontiguousarray(bx, dtype=np.float64)
    cdef double[::1] byv = np.ascontiguousarray(by, dtype=np.float64)
    cdef Py_ssize_t n = axv.shape[0], m = bxv.shape[0], i, j
    cdef double[::1] prev = np.empty(m)
    cdef double[::1] cur = np.empty(m)
    cdef double d, best, tmp, dx, dy
    cdef double[::1] swap
    prev[0] = _dist2d(axv[0], ayv[0], bxv[0], byv[0])
    for j in range(1, m):
        d = _dist2d(axv[0], ayv[0], bxv[j], byv[j])
        prev[j] = d if d > prev[j - 1] else prev[j - 1]
    for i in range(1, n):
        d = _dist2d(axv[i], ayv[i], bxv[0], byv[0])
        cur[0] = d if d > prev[0] else prev[0]
        for j in range(1, m):
            best = prev[j]
            tmp = prev[j - 1]
            if tmp < best:
                best = tmp
            tmp = cur[j - 1]
            if tmp < best:
                best = tmp
            d = _dist2d(axv[i], ayv[i], bxv[j], byv[j])
            cur[j] = d if d > best else best
        swap = prev
        prev = cur
        cur = swap
    return prev[m - 1]


def frechet_dp_batch(a, b):
    """Amplitude-only Fréchet distance for N sequence pairs: (N, n), (N, m) -> (N,)."""
    cdef double[:, ::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[:, ::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    if av.shape[0] != bv.shape[0]:
        raise ValueError("batch sizes differ")
    out_arr = np.empty(av.shape[0])
    cdef double[::1] out = out_arr
    cdef double[::1] prev = np.empty(bv.shape[1])
    cdef double[::1] cur = np.empty(bv.shape[1])
    cdef Py_ssize_t idx, n = av.shape[1], m = bv.shape[1]
    with nogil:
        for idx in range(av.shape[0]):
            out[idx] = _frechet_core(&av[idx, 0], n, &bv[idx, 0], m,
                                     &prev[0], &cur[0])
    return out_arr


# ---------------------------------------------------------------------------
# LSTM sequence kernels (gate order: input, forget, candidate, output)
# ---------------------------------------------------------------------------

def lstm_seq_forward(real[:, :, ::1] x, real[:, ::1] wx, real[:, ::1] wh,
                     real[::1] b, real[:, ::1] h0, real[:, ::1] c0):
    cdef Py_ssize_t T = x.shape[0], B = x.shape[1], I = x.shape[2]
    cdef Py_ssize_t H = wh.shape[0], G = 4 * H
    dtype = np.float64 if real is double else np.float32
    h_arr = np.empty((T, B, H), dtype=dtype)
    c_arr = np.empty((T, B, H), dtype=dtype)
    g_arr = np.empty((T, B, G), dtype=dtype)
    cdef real[:, :, ::1] h_seq = h_arr
    cdef real[:, :, ::1] c_seq = c_arr
    cdef real[:, :, ::1] gates = g_arr
    cdef real* h_prev
    cdef real* c_prev
    cdef real* gr
    cdef real* cr
    cdef real* hr
    cdef Py_ssize_t t, bb, k
    with nogil:
        # input projection for every timestep in one GEMM; activations are
        # applied in place, so `gates` doubles as the pre-activation buffer
        _gemm_rm(False, False, <int>(T * B), <int>G, <int>I, <real>1.0,
                 &x[0, 0, 0], <int>I, &wx[0, 0], <int>G, <real>0.0,
                 &gates[0, 0, 0], <int>G)
        for t in range(T):
            h_prev = &h_seq[t - 1, 0, 0] if t > 0 else &h0[0, 0]
            c_prev = &c_seq[t - 1, 0, 0] if t > 0 else &c0[0, 0]
            _gemm_rm(False, False, <int>B, <int>G, <int>H, <real>1.0,
                     h_prev, <int>H, &wh[0, 0], <int>G, <real>1.0,
                     &gates[t, 0, 0], <int>G)
            for bb in range(B):
                # one tight loop per gate keeps the exp calls vectorizable
                gr = &gates[t, bb, 0]
                cr = &c_seq[t, bb, 0]
                hr = &h_seq[t, bb, 0]
                for k in range(H):
                    gr[k] = _sigmoid(gr[k] + b[k])
                for k in range(H):
                    gr[H + k] = _sigmoid(gr[H + k] + b[H + k])
                for k in range(H):
                    gr[2 * H + k] = _tanh_fast(gr[2 * H + k] + b[2 * H + k])
                for k in range(H):
                    gr[3 * H + k] = _sigmoid(gr[3 * H + k] + b[3 * H + k])
                for k in range(H):
                    cr[k] = gr[H + k] * c_prev[bb * H + k] + gr[k] * gr[2 * H + k]
                for k in range(H):
                    hr[k] = gr[3 * H + k] * _tanh_fast(cr[k])
    return h_arr, c_arr, g_arr


def lstm_seq_backward(real[:, :, ::1] x, real[:, ::1] wx, real[:, ::1] wh,
                      real[:, :, ::1] gates, real[:, :, ::1] c_seq,
                      real[:, :, ::1] h_seq, real[:, ::1] h0, real[:, ::1] c0,
                      real[:, :, ::1] dh_out):
    cdef Py_ssize_t T = x.shape[0], B = x.shape[1], I = x.shape[2]
    cdef Py_ssize_t H = wh.shape[0], G = 4 * H
    dtype = np.float64 if real is double else np.float32
    dz_arr = np.empty((T, B, G), dtype=dtype)
    dwh_arr = np.zeros((H, G), dtype=dtype)
    dhn_arr = np.zeros((B, H), dtype=dtype)
    dcn_arr = np.zeros((B, H), dtype=dtype)
    dwx_arr = np.empty((I, G), dtype=dtype)
    db_arr = np.zeros(G, dtype=dtype)
    dx_arr = np.empty((T, B, I), dtype=dtype)
    cdef real[:, :, ::1] dz = dz_arr
    cdef real[:, ::1] dwh = dwh_arr
    cdef real[:, ::1] dh_next = dhn_arr
    cdef real[:, ::1] dc_next = dcn_arr
    cdef real[:, ::1] dwx = dwx_arr
    cdef real[::1] db = db_arr
    cdef real[:, :, ::1] dx = dx_arr
    tc_scratch = np.empty(H, dtype=dtype)
    cdef real[::1] tc_buf = tc_scratch
    cdef real* c_prev
    cdef real* h_prev
    cdef real* gr
    cdef real* dzr
    cdef Py_ssize_t t, bb, k
    cdef real dh, tc, dc
    with nogil:
        for t in range(T - 1, -1, -1):
            c_prev = &c_seq[t - 1, 0, 0] if t > 0 else &c0[0, 0]
            h_prev = &h_seq[t - 1, 0, 0] if t > 0 else &h0[0, 0]
            for bb in range(B):
                gr = &gates[t, bb, 0]
                dzr = &dz[t, bb, 0]
                for k in range(H):
                    tc_buf[k] = _tanh_fast(c_seq[t, bb, k])
                for k in range(H):
                    tc = tc_buf[k]
                    dh = dh_out[t, bb, k] + dh_next[bb, k]
                    dc = dc_next[bb, k] + dh * gr[3 * H + k] * (<real>1.0 - tc * tc)
                    dzr[k] = dc * gr[2 * H + k] * gr[k] * (<real>1.0 - gr[k])
                    dzr[H + k] = (dc * c_prev[bb * H + k] * gr[H + k]
                                  * (<real>1.0 - gr[H + k]))
                    dzr[2 * H + k] = (dc * gr[k]
                                      * (<real>1.0 - gr[2 * H + k] * gr[2 * H + k]))
                    dzr[3 * H + k] = dh * tc * gr[3 * H + k] * (<real>1.0 - gr[3 * H + k])
                    dc_next[bb, k] = dc * gr[H + k]
            # dwh += h_prev^T @ dz_t ; dh_next = dz_t @ wh^T
            _gemm_rm(True, False, <int>H, <int>G, <int>B, <real>1.0,
                     h_prev, <int>H, &dz[t, 0, 0], <int>G, <real>1.0,
                     &dwh[0, 0], <int>G)
            _gemm_rm(False, True, <int>B, <int>H, <int>G, <real>1.0,
                     &dz[t, 0, 0], <int>G, &wh[0, 0], <int>G, <real>0.0,
                     &dh_next[0, 0], <int>H)
        _gemm_rm(True, False, <int>I, <int>G, <int>(T * B), <real>1.0,
                 &x[0, 0, 0], <int>I, &dz[0, 0, 0], <int>G, <real>0.0,
                 &dwx[0, 0], <int>G)
        _gemm_rm(False, True, <int>(T * B), <int>I, <int>G, <real>1.0,
                 &dz[0, 0, 0], <int>G, &wx[0, 0], <int>G, <real>0.0,
                 &dx[0, 0, 0], <int>I)
        for t in range(T):
            for bb in range(B):
                for k in range(G):
                    db[k] += dz[t, bb, k]
    return dx_arr, dwx_arr, dwh_arr, db_arr, dhn_arr, dcn_arr


# ---------------------------------------------------------------------------
# 1-D convolution (valid, strided)
# ---------------------------------------------------------------------------

def conv1d_forward(real[:, :, ::1] x, real[:, :, ::1] w, real[::1] bias,
                   Py_ssize_t stride):
    cdef Py_ssize_t B = x.shape[0], L = x.shape[1], CI = x.shape[2]
    cdef Py_ssize_t K = w.shape[0], CO = w.shape[2]
    if L < K:
        raise ValueError(f"input length {L} shorter than filter size {K}")
    cdef Py_ssize_t LO = (L - K) // stride + 1
    dtype = np.float64 if real is double else np.float32
    y_arr = np.empty((B, LO, CO), dtype=dtype)
    cdef real[:, :, ::1] y = y_arr
    cdef Py_ssize_t bb, l, k, ci, co
    cdef real acc
    with nogil:
        for bb in range(B):
            for l in range(LO):
                for co in range(CO):
                    acc = bias[co]
                    for k in range(K):
                        for ci in range(CI):
                            acc += x[bb, l * stride + k, ci] * w[k, ci, co]
                    y[bb, l, co] = acc
    return y_arr


def conv1d_backward(real[:, :, ::1] x, real[:, :, ::1] w, Py_ssize_t stride,
                    real[:, :, ::1] dy):
    cdef Py_ssize_t B = x.shape[0], L = x.shape[1], CI = x.shape[2]
    cdef Py_ssize_t K = w.shape[0], CO = w.shape[2]
    cdef Py_ssize_t LO = dy.shape[1]
    dtype = np.float64 if real is double else np.float32
    dx_arr = np.zeros((B, L, CI), dtype=dtype)
    dw_arr = np.zeros((K, CI, CO), dtype=dtype)
    dbias_arr = np.zeros(CO, dtype=dtype)
    cdef real[:, :, ::1] dx = dx_arr
    cdef real[:, :, ::1] dw = dw_arr
    cdef real[::1] dbias = dbias_arr
    cdef Py_ssize_t bb, l, k, ci, co
    cdef real g
    with nogil:
        for bb in range(B):
            for l in range(LO):
                for co in range(CO):
                    g = dy[bb, l, co]
                    dbias[co] += g
                    for k in range(K):
                        for ci in range(CI):
                            dw[k, ci, co] += x[bb, l * stride + k, ci] * g
                            dx[bb, l * stride + k, ci] += w[k, ci, co] * g
    return dx_arr, dw_arr, dbias_arr
