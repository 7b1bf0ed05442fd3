"""Gaussian integrals (overlap, kinetic, nuclear attraction, electron
repulsion) over s/p shells by the McMurchie-Davidson Hermite expansion,
JIT-compiled with numba.

All kernels integrate unnormalized Cartesian primitives; normalization is
folded into the contraction weights by the basis module. Two-electron
integrals are stored 8-fold packed; Schwarz screening prunes negligible
shell quartets.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

SQRT_PI = math.sqrt(math.pi)

ERI_SCREEN = 1e-12


@njit(cache=True)
def boys(n_max, x, out):
    """Boys functions F_0..F_n_max of x into out.

    Small x: alternating series at n_max, then downward recursion (stable).
    Large x: exact F_0 via erf, then upward recursion (stable for x > n).
    """
    if x < 1e-13:
        for n in range(n_max + 1):
            out[n] = 1.0 / (2 * n + 1) - x / (2 * n + 3)
        return
    if x < 12.0:
        # series seed far above n_max, then downward recursion; starting
        # ~30 orders above x makes the downward pass contractive overall
        m = n_max + 30
        total = 0.0
        term = 1.0
        k = 0
        while True:
            total += term / (2 * m + 2 * k + 1)
            k += 1
            term *= -x / k
            if k > 3 and abs(term) < 1e-17:
                break
        ex = math.exp(-x)
        prev = total
        for n in range(m - 1, -1, -1):
            prev = (2.0 * x * prev + ex) / (2 * n + 1)
            if n <= n_max:
                out[n] = prev
        return
    sx = math.sqrt(x)
    out[0] = 0.5 * math.sqrt(math.pi / x) * math.erf(sx)
    ex = math.exp(-x)
    for n in range(n_max):
        out[n + 1] = ((2 * n + 1) * out[n] - ex) / (2.0 * x)


@njit(cache=True)
def e_build(la, lb, a, b, ax, bx, E):
    """1D Hermite expansion coefficients E[i, j, t] for one axis.

    E is (la+1, lb+1, >= la+lb+1), zeroed by the caller.
    """
    p = a + b
    mu = a * b / p
    xab = ax - bx
    E[0, 0, 0] = math.exp(-mu * xab * xab)
    pa = -(b / p) * xab
    pb = (a / p) * xab
    inv2p = 0.5 / p
    for i in range(la):
        for t in range(i + 2):
            val = pa * E[i, 0, t]
            if t > 0:
                val += inv2p * E[i, 0, t - 1]
            if t + 1 <= i:
                val += (t + 1) * E[i, 0, t + 1]
            E[i + 1, 0, t] = val
    for j in range(lb):
        for i in range(la + 1):
            for t in range(i + j + 2):
                val = pb * E[i, j, t]
                if t > 0:
                    val += inv2p * E[i, j, t - 1]
                if t + 1 <= i + j:
                    val += (t + 1) * E[i, j, t + 1]
                E[i, j + 1, t] = val


@njit(cache=True)
def r_build(tmax, umax, vmax, alpha, dx, dy, dz, R):
    """Hermite Coulomb tensor R[n, t, u, v]; R is zeroed by the caller."""
    ntot = tmax + umax + vmax
    fb = np.empty(ntot + 1)
    boys(ntot, alpha * (dx * dx + dy * dy + dz * dz), fb)
    minus2a = -2.0 * alpha
    scale = 1.0
    for n in range(ntot + 1):
        R[n, 0, 0, 0] = scale * fb[n]
        scale *= minus2a
    for t in range(tmax):
        for n in range(ntot - t):
            val = dx * R[n + 1, t, 0, 0]
            if t > 0:
                val += t * R[n + 1, t - 1, 0, 0]
            R[n, t + 1, 0, 0] = val
    for u in range(umax):
        for t in range(tmax + 1):
            for n in range(ntot - t - u):
                val = dy * R[n + 1, t, u, 0]
                if u > 0:
                    val += u * R[n + 1, t, u - 1, 0]
                R[n, t, u + 1, 0] = val
    for v in range(vmax):
        for u in range(umax + 1):
            for t in range(tmax + 1):
                for n in range(ntot - t - u - v):
                    val = dz * R[n + 1, t, u, v]
                    if v > 0:
                        val += v * R[n + 1, t, u, v - 1]
                    R[n, t, u, v + 1] = val


@njit(cache=True)
def _components(l):
    """Cartesian powers per component: s -> (000); p -> x, y, z."""
    if l == 0:
        return np.zeros((1, 3), dtype=np.int64)
    out = np.zeros((3, 3), dtype=np.int64)
    out[0, 0] = 1
    out[1, 1] = 1
    out[2, 2] = 1
    return out


@njit(cache=True)
def pair_overlap_kinetic(la, lb, ea, wa, A, eb, wb, B, S, T):
    """Contracted overlap and kinetic blocks for one shell pair."""
    ca = _components(la)
    cb = _components(lb)
    S[:] = 0.0
    T[:] = 0.0
    emax = la + lb + 4
    E = np.zeros((la + 1, lb + 3, emax, 3))
    for ia in range(ea.shape[0]):
        a = ea[ia]
        for ib in range(eb.shape[0]):
            b = eb[ib]
            w = wa[ia] * wb[ib]
            p = a + b
            root = math.sqrt(math.pi / p)
            E[:] = 0.0
            for ax in range(3):
                e_build(la, lb + 2, a, b, A[ax], B[ax], E[:, :, :, ax])
            for ka in range(ca.shape[0]):
                for kb in range(cb.shape[0]):
                    s1d = np.empty(3)
                    t1d = np.empty(3)
                    for ax in range(3):
                        i = ca[ka, ax]
                        j = cb[kb, ax]
                        s1d[ax] = E[i, j, 0, ax] * root
                        tv = -2.0 * b * b * E[i, j + 2, 0, ax] * root
                        tv += b * (2 * j + 1) * E[i, j, 0, ax] * root
                        if j >= 2:
                            tv -= 0.5 * j * (j - 1) * E[i, j - 2, 0, ax] * root
                        t1d[ax] = tv
                    S[ka, kb] += w * s1d[0] * s1d[1] * s1d[2]
                    T[ka, kb] += w * (
                        t1d[0] * s1d[1] * s1d[2]
                        + s1d[0] * t1d[1] * s1d[2]
                        + s1d[0] * s1d[1] * t1d[2]
                    )


@njit(cache=True)
def pair_nuclear(la, lb, ea, wa, A, eb, wb, B, charges, centers, V):
    """Contracted nuclear-attraction block for one shell pair."""
    ca = _components(la)
    cb = _components(lb)
    V[:] = 0.0
    lsum = la + lb
    E = np.zeros((la + 1, lb + 1, lsum + 2, 3))
    R = np.zeros((3 * lsum + 1, lsum + 1, lsum + 1, lsum + 1))
    for ia in range(ea.shape[0]):
        a = ea[ia]
        for ib in range(eb.shape[0]):
            b = eb[ib]
            w = wa[ia] * wb[ib]
            p = a + b
            px = (a * A[0] + b * B[0]) / p
            py = (a * A[1] + b * B[1]) / p
            pz = (a * A[2] + b * B[2]) / p
            E[:] = 0.0
            for ax in range(3):
                e_build(la, lb, a, b, A[ax], B[ax], E[:, :, :, ax])
            pref = 2.0 * math.pi / p
            for nuc in range(charges.shape[0]):
                R[:] = 0.0
                r_build(
                    lsum,
                    lsum,
                    lsum,
                    p,
                    px - centers[nuc, 0],
                    py - centers[nuc, 1],
                    pz - centers[nuc, 2],
                    R,
                )
                z = charges[nuc]
                for ka in range(ca.shape[0]):
                    for kb in range(cb.shape[0]):
                        ix, iy, iz = ca[ka, 0], ca[ka, 1], ca[ka, 2]
                        jx, jy, jz = cb[kb, 0], cb[kb, 1], cb[kb, 2]
                        acc = 0.0
                        for t in range(ix + jx + 1):
                            for u in range(iy + jy + 1):
                                for v in range(iz + jz + 1):
                                    acc += (
                                        E[ix, jx, t, 0]
                                        * E[iy, jy, u, 1]
                                        * E[iz, jz, v, 2]
                                        * R[0, t, u, v]
                                    )
                        V[ka, kb] -= z * w * pref * acc


@njit(cache=True)
def quartet_eri(
    la, lb, lc, ld,
    ea, wa, A, eb, wb, B, ec, wc, C, ed, wd, D,
    out,
):
    """Contracted (ab|cd) block for one shell quartet (chemist notation)."""
    ca = _components(la)
    cb = _components(lb)
    cc = _components(lc)
    cd = _components(ld)
    out[:] = 0.0
    lab = la + lb
    lcd = lc + ld
    ltot = lab + lcd
    Eab = np.zeros((la + 1, lb + 1, lab + 2, 3))
    Ecd = np.zeros((lc + 1, ld + 1, lcd + 2, 3))
    # r_build walks Boys orders up to 3*ltot before settling the n=0 layer
    R = np.zeros((3 * ltot + 1, ltot + 1, ltot + 1, ltot + 1))
    for ia in range(ea.shape[0]):
        a = ea[ia]
        for ib in range(eb.shape[0]):
            b = eb[ib]
            wab = wa[ia] * wb[ib]
            p = a + b
            px = (a * A[0] + b * B[0]) / p
            py = (a * A[1] + b * B[1]) / p
            pz = (a * A[2] + b * B[2]) / p
            Eab[:] = 0.0
            for ax in range(3):
                e_build(la, lb, a, b, A[ax], B[ax], Eab[:, :, :, ax])
            kab = Eab[0, 0, 0, 0] * Eab[0, 0, 0, 1] * Eab[0, 0, 0, 2]
            if abs(wab) * kab < 1e-16:
                continue
            for ic in range(ec.shape[0]):
                c = ec[ic]
                for idg in range(ed.shape[0]):
                    d = ed[idg]
                    wcd = wc[ic] * wd[idg]
                    q = c + d
                    qx = (c * C[0] + d * D[0]) / q
                    qy = (c * C[1] + d * D[1]) / q
                    qz = (c * C[2] + d * D[2]) / q
                    Ecd[:] = 0.0
                    for ax in range(3):
                        e_build(lc, ld, c, d, C[ax], D[ax], Ecd[:, :, :, ax])
                    kcd = Ecd[0, 0, 0, 0] * Ecd[0, 0, 0, 1] * Ecd[0, 0, 0, 2]
                    pref = (
                        2.0
                        * math.pi**2.5
                        / (p * q * math.sqrt(p + q))
                    )
                    if abs(wab * wcd) * kab * kcd * pref < 1e-15:
                        continue
                    alpha = p * q / (p + q)
                    R[:] = 0.0
                    r_build(ltot, ltot, ltot, alpha, px - qx, py - qy, pz - qz, R)
                    wfull = wab * wcd * pref
                    for ka in range(ca.shape[0]):
                        ix, iy, iz = ca[ka, 0], ca[ka, 1], ca[ka, 2]
                        for kb in range(cb.shape[0]):
                            jx, jy, jz = cb[kb, 0], cb[kb, 1], cb[kb, 2]
                            for kc in range(cc.shape[0]):
                                kx, ky, kz = cc[kc, 0], cc[kc, 1], cc[kc, 2]
                                for kd in range(cd.shape[0]):
                                    lx, ly, lz = cd[kd, 0], cd[kd, 1], cd[kd, 2]
                                    acc = 0.0
                                    for t in range(ix + jx + 1):
                                        for u in range(iy + jy + 1):
                                            for v in range(iz + jz + 1):
                                                eb_prod = (
                                                    Eab[ix, jx, t, 0]
                                                    * Eab[iy, jy, u, 1]
                                                    * Eab[iz, jz, v, 2]
                                                )
                                                if eb_prod == 0.0:
                                                    continue
                                                for tt in range(kx + lx + 1):
                                                    for uu in range(ky + ly + 1):
                                                        for vv in range(kz + lz + 1):
                                                            sign = 1.0 if (tt + uu + vv) % 2 == 0 else -1.0
                                                            acc += (
                                                                eb_prod
                                                                * sign
                                                                * Ecd[kx, lx, tt, 0]
                                                                * Ecd[ky, ly, uu, 1]
                                                                * Ecd[kz, lz, vv, 2]
                                                                * R[0, t + tt, u + uu, v + vv]
                                                            )
                                    out[ka, kb, kc, kd] += wfull * acc


@njit(cache=True, inline="always")
def _pair_index(i, j):
    return i * (i + 1) // 2 + j if i >= j else j * (j + 1) // 2 + i


@njit(cache=True, inline="always")
def eri_index(i, j, k, l):
    a = _pair_index(i, j)
    b = _pair_index(k, l)
    return _pair_index(a, b)


@njit(cache=True)
def build_eri_packed(
    sh_l, sh_center, sh_exp, sh_w, sh_off, n_ao, screen
):
    """All unique (ij|kl) into an 8-fold packed array with Schwarz pruning."""
    nsh = sh_l.shape[0]
    npair = n_ao * (n_ao + 1) // 2
    eri = np.zeros(npair * (npair + 1) // 2)
    block = np.zeros((3, 3, 3, 3))
    # Schwarz factors per shell pair: sqrt(max |(ab|ab)|)
    qfac = np.zeros((nsh, nsh))
    for i in range(nsh):
        for j in range(i + 1):
            quartet_eri(
                sh_l[i], sh_l[j], sh_l[i], sh_l[j],
                sh_exp[i], sh_w[i], sh_center[i],
                sh_exp[j], sh_w[j], sh_center[j],
                sh_exp[i], sh_w[i], sh_center[i],
                sh_exp[j], sh_w[j], sh_center[j],
                block,
            )
            na = 1 if sh_l[i] == 0 else 3
            nb = 1 if sh_l[j] == 0 else 3
            best = 0.0
            for ka in range(na):
                for kb in range(nb):
                    v = abs(block[ka, kb, ka, kb])
                    if v > best:
                        best = v
            qfac[i, j] = math.sqrt(best)
            qfac[j, i] = qfac[i, j]
    for i in range(nsh):
        for j in range(i + 1):
            qij = qfac[i, j]
            if qij == 0.0:
                continue
            pij = i * (i + 1) // 2 + j
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    if qij * qfac[k, l] < screen:
                        continue
                    quartet_eri(
                        sh_l[i], sh_l[j], sh_l[k], sh_l[l],
                        sh_exp[i], sh_w[i], sh_center[i],
                        sh_exp[j], sh_w[j], sh_center[j],
                        sh_exp[k], sh_w[k], sh_center[k],
                        sh_exp[l], sh_w[l], sh_center[l],
                        block,
                    )
                    na = 1 if sh_l[i] == 0 else 3
                    nb = 1 if sh_l[j] == 0 else 3
                    nc = 1 if sh_l[k] == 0 else 3
                    nd = 1 if sh_l[l] == 0 else 3
                    for ka in range(na):
                        mu = sh_off[i] + ka
                        for kb in range(nb):
                            nu = sh_off[j] + kb
                            for kc in range(nc):
                                rho = sh_off[k] + kc
                                for kd in range(nd):
                                    sig = sh_off[l] + kd
                                    eri[eri_index(mu, nu, rho, sig)] = block[
                                        ka, kb, kc, kd
                                    ]
    return eri


@njit(cache=True)
def jk_build(eri, dens, n_ao):
    """Coulomb and exchange matrices from the packed integral list.

    J[p,q] = sum_rs (pq|rs) D[r,s]; K[p,q] = sum_rs (pr|qs) D[r,s].
    """
    J = np.zeros((n_ao, n_ao))
    K = np.zeros((n_ao, n_ao))
    for p in range(n_ao):
        for q in range(p + 1):
            accj = 0.0
            for r in range(n_ao):
                for s in range(n_ao):
                    accj += eri[eri_index(p, q, r, s)] * dens[r, s]
            J[p, q] = accj
            J[q, p] = accj
    for p in range(n_ao):
        for q in range(n_ao):
            acck = 0.0
            for r in range(n_ao):
                for s in range(n_ao):
                    acck += eri[eri_index(p, r, q, s)] * dens[r, s]
            K[p, q] = acck
    return J, K


@njit(cache=True)
def j_batch(eri, dens_batch, n_ao):
    """Coulomb-type contractions for a batch of symmetric densities."""
    nb = dens_batch.shape[0]
    out = np.zeros((nb, n_ao, n_ao))
    for p in range(n_ao):
        for q in range(p + 1):
            for b in range(nb):
                acc = 0.0
                for r in range(n_ao):
                    for s in range(n_ao):
                        acc += eri[eri_index(p, q, r, s)] * dens_batch[b, r, s]
                out[b, p, q] = acc
                out[b, q, p] = acc
    return out


def shells_to_arrays(shells):
    """Pack the Shell list into numba-friendly arrays plus AO offsets."""
    nsh = len(shells)
    sh_l = np.array([s.l for s in shells], dtype=np.int64)
    sh_center = np.array([s.center for s in shells], dtype=float)
    nprim = max(len(s.exps) for s in shells)
    sh_exp = np.zeros((nsh, nprim))
    sh_w = np.zeros((nsh, nprim))
    for i, s in enumerate(shells):
        sh_exp[i, : len(s.exps)] = s.exps
        sh_w[i, : len(s.weights)] = s.weights
    offs = np.zeros(nsh, dtype=np.int64)
    acc = 0
    for i, s in enumerate(shells):
        offs[i] = acc
        acc += s.n_components
    return sh_l, sh_center, sh_exp, sh_w, offs, acc


def one_electron_matrices(shells, charges_centers):
    """Overlap, kinetic and nuclear-attraction matrices."""
    sh_l, sh_center, sh_exp, sh_w, offs, n_ao = shells_to_arrays(shells)
    charges = np.array([float(z) for z, _ in charges_centers])
    centers = np.array([c for _, c in charges_centers], dtype=float)
    S = np.zeros((n_ao, n_ao))
    T = np.zeros((n_ao, n_ao))
    V = np.zeros((n_ao, n_ao))
    bs = np.zeros((3, 3))
    bt = np.zeros((3, 3))
    bv = np.zeros((3, 3))
    nsh = len(shells)
    for i in range(nsh):
        for j in range(i + 1):
            pair_overlap_kinetic(
                sh_l[i], sh_l[j],
                sh_exp[i], sh_w[i], sh_center[i],
                sh_exp[j], sh_w[j], sh_center[j],
                bs, bt,
            )
            pair_nuclear(
                sh_l[i], sh_l[j],
                sh_exp[i], sh_w[i], sh_center[i],
                sh_exp[j], sh_w[j], sh_center[j],
                charges, centers, bv,
            )
            na = 1 if sh_l[i] == 0 else 3
            nb = 1 if sh_l[j] == 0 else 3
            for ka in range(na):
                for kb in range(nb):
                    mu, nu = offs[i] + ka, offs[j] + kb
                    S[mu, nu] = S[nu, mu] = bs[ka, kb]
                    T[mu, nu] = T[nu, mu] = bt[ka, kb]
                    V[mu, nu] = V[nu, mu] = bv[ka, kb]
    return S, T, V


def electron_repulsion_packed(shells, screen: float = ERI_SCREEN):
    sh_l, sh_center, sh_exp, sh_w, offs, n_ao = shells_to_arrays(shells)
    eri = build_eri_packed(sh_l, sh_center, sh_exp, sh_w, offs, n_ao, screen)
    return eri, n_ao
