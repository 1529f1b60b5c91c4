"""Path kernels for the Monte Carlo engine.

Both backends consume the same pre-drawn normals and the same per-step rate
tables, so they differ only by floating-point rounding inside the normal CDF.

Step tables (length ``m + 1`` for node quantities, ``m`` for step quantities):

    dt[k]       step length
    h_int[k]    int over step k of the repo rate
    disc[k]     exp(-int_t^{s_k} r_phi)
    rbar[k]     int_{s_k}^T r
    tau[k]      T - s_k
    rhat[k]     r_phi(s_k) - r_c(s_k)
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr

from ._accel import njit

_SQRT1_2 = 1.0 / math.sqrt(2.0)


@njit(cache=True, nogil=True)
def _ncdf(z):
    return 0.5 * math.erfc(-z * _SQRT1_2)


@njit(cache=True, nogil=True)
def _call(x, tau, vbar, sigma, kappa):
    vol = sigma * math.sqrt(tau)
    d1 = (x - kappa + vbar + 0.5 * vol * vol) / vol
    return math.exp(x) * _ncdf(d1) - math.exp(kappa - vbar) * _ncdf(d1 - vol)


@njit(cache=True, nogil=True)
def paths_numba(z, x0, sigma, kappa, cir1, cir2, rho1, rho2, R1, alpha,
                dt, h_int, disc, rbar, tau, rhat, out_pay, out_psi, out_ctrl):
    n_steps = dt.shape[0]
    n_paths = z.shape[2]
    rho3 = math.sqrt(max(0.0, 1.0 - rho1 * rho1 - rho2 * rho2))
    strike = math.exp(kappa)
    l10, g1, th1, e1 = cir1[0], cir1[1], cir1[2], cir1[3]
    l20, g2, th2, e2 = cir2[0], cir2[1], cir2[2], cir2[3]
    # step-major so the normals are read contiguously
    x = np.full(n_paths, x0)
    l1 = np.full(n_paths, l10)
    l2 = np.full(n_paths, l20)
    integ = np.zeros(n_paths)
    psi = np.zeros(n_paths)
    prev = np.empty(n_paths)
    c0 = _call(x0, tau[0], rbar[0], sigma, kappa)
    for p in range(n_paths):
        prev[p] = disc[0] * (R1 * max(l10, 0.0) + max(l20, 0.0) + alpha * rhat[0]) * c0
    h_total = 0.0
    for k in range(n_steps):
        d = dt[k]
        sd = math.sqrt(d)
        drift = h_int[k] - 0.5 * sigma * sigma * d
        h_total += h_int[k]
        last = k == n_steps - 1
        if not last:
            vol = sigma * math.sqrt(tau[k + 1])
            shift = -kappa + rbar[k + 1] + 0.5 * vol * vol
            k_disc = math.exp(kappa - rbar[k + 1])
        for p in range(n_paths):
            z1 = z[k, 0, p]
            z2 = z[k, 1, p]
            lp1 = max(l1[p], 0.0)
            lp2 = max(l2[p], 0.0)
            l1n = l1[p] + g1 * (th1 - lp1) * d + e1 * math.sqrt(lp1) * sd * z1
            l2n = l2[p] + g2 * (th2 - lp2) * d + e2 * math.sqrt(lp2) * sd * z2
            xn = x[p] + drift + sigma * sd * (rho1 * z1 + rho2 * z2 + rho3 * z[k, 2, p])
            lq1 = max(l1n, 0.0)
            lq2 = max(l2n, 0.0)
            ig = integ[p] + 0.5 * (lp1 + lp2 + lq1 + lq2) * d
            if last:
                value = max(math.exp(xn) - strike, 0.0)
            else:
                d1 = (xn + shift) / vol
                value = math.exp(xn) * _ncdf(d1) - k_disc * _ncdf(d1 - vol)
            cur = disc[k + 1] * math.exp(-ig) * (R1 * lq1 + lq2 + alpha * rhat[k + 1]) * value
            psi[p] += 0.5 * (prev[p] + cur) * d
            prev[p] = cur
            x[p] = xn
            l1[p] = l1n
            l2[p] = l2n
            integ[p] = ig
    for p in range(n_paths):
        pay = max(math.exp(x[p]) - strike, 0.0)
        out_pay[p] = disc[n_steps] * math.exp(-integ[p]) * pay
        out_psi[p] = psi[p]
        out_ctrl[p] = math.exp(-h_total) * pay


def _call_np(x, tau, vbar, sigma, kappa):
    vol = sigma * math.sqrt(tau)
    d1 = (x - kappa + vbar + 0.5 * vol * vol) / vol
    return np.exp(x) * ndtr(d1) - math.exp(kappa - vbar) * ndtr(d1 - vol)


def paths_numpy(z, x0, sigma, kappa, cir1, cir2, rho1, rho2, R1, alpha,
                dt, h_int, disc, rbar, tau, rhat, out_pay, out_psi, out_ctrl):
    n_steps = dt.shape[0]
    n_paths = z.shape[2]
    rho3 = math.sqrt(max(0.0, 1.0 - rho1 * rho1 - rho2 * rho2))
    strike = math.exp(kappa)
    l10, g1, th1, e1 = cir1
    l20, g2, th2, e2 = cir2
    x = np.full(n_paths, x0)
    l1 = np.full(n_paths, l10)
    l2 = np.full(n_paths, l20)
    lp1, lp2 = np.maximum(l1, 0.0), np.maximum(l2, 0.0)
    integ = np.zeros(n_paths)
    prev = disc[0] * (R1 * lp1 + lp2 + alpha * rhat[0]) * _call_np(x, tau[0], rbar[0], sigma, kappa)
    psi = np.zeros(n_paths)
    h_total = 0.0
    for k in range(n_steps):
        d = dt[k]
        sd = math.sqrt(d)
        z1, z2, z3 = z[k, 0], z[k, 1], z[k, 2]
        l1n = l1 + g1 * (th1 - lp1) * d + e1 * np.sqrt(lp1) * sd * z1
        l2n = l2 + g2 * (th2 - lp2) * d + e2 * np.sqrt(lp2) * sd * z2
        x = x + h_int[k] - 0.5 * sigma * sigma * d + sigma * sd * (rho1 * z1 + rho2 * z2 + rho3 * z3)
        h_total += h_int[k]
        lq1, lq2 = np.maximum(l1n, 0.0), np.maximum(l2n, 0.0)
        integ = integ + 0.5 * (lp1 + lp2 + lq1 + lq2) * d
        l1, l2, lp1, lp2 = l1n, l2n, lq1, lq2
        if k == n_steps - 1:
            value = np.maximum(np.exp(x) - strike, 0.0)
        else:
            value = _call_np(x, tau[k + 1], rbar[k + 1], sigma, kappa)
        cur = disc[k + 1] * np.exp(-integ) * (R1 * lp1 + lp2 + alpha * rhat[k + 1]) * value
        psi += 0.5 * (prev + cur) * d
        prev = cur
    pay = np.maximum(np.exp(x) - strike, 0.0)
    out_pay[:] = disc[n_steps] * np.exp(-integ) * pay
    out_psi[:] = psi
    out_ctrl[:] = math.exp(-h_total) * pay
