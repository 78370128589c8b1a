"""Self-contained STO-3G RHF + CASCI(2e,4o) generator for a LiH
fixture Hamiltonian in the fqp coefficient-file format.

McMurchie-Davidson Gaussian integrals (s and p shells), restricted
Hartree-Fock for LiH at 1.45 Angstrom, frozen Li 1s core, active space
of 2 electrons in the 4 lowest virtual+HOMO spatial MOs, interleaved
spin-orbital layout (spatial p -> modes 2p up, 2p+1 down).
"""
import numpy as np
from scipy.special import hyp1f1
from itertools import product

ANG = 1.0 / 0.52917721092  # Angstrom -> Bohr
R_LIH = 1.45 * ANG

# STO-3G
H_1S = ([3.42525091, 0.62391373, 0.16885540],
        [0.15432897, 0.53532814, 0.44463454])
LI_1S = ([16.1195750, 2.9362007, 0.7946505],
         [0.15432897, 0.53532814, 0.44463454])
LI_SP_EXP = [0.6362897, 0.1478601, 0.0480887]
LI_2S = [-0.09996723, 0.39951283, 0.70011547]
LI_2P = [0.15591627, 0.60768372, 0.39195739]


def dfact(n):
    return 1.0 if n <= 1 else n * dfact(n - 2)


class CGF:
    def __init__(self, center, lmn, exps, coefs):
        self.A = np.asarray(center, float)
        self.lmn = lmn
        self.exps = np.asarray(exps, float)
        l, m, n = lmn
        norms = [(2 * a / np.pi) ** 0.75 * (4 * a) ** ((l + m + n) / 2.0)
                 / np.sqrt(dfact(2 * l - 1) * dfact(2 * m - 1) * dfact(2 * n - 1))
                 for a in self.exps]
        self.coefs = np.asarray(coefs, float) * np.asarray(norms)
        s = overlap(self, self)
        self.coefs /= np.sqrt(s)


def E(i, j, t, Qx, a, b):
    """Hermite expansion coefficient."""
    p = a + b
    q = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return np.exp(-q * Qx * Qx)
    if j == 0:
        return (1 / (2 * p) * E(i - 1, j, t - 1, Qx, a, b)
                - q * Qx / a * E(i - 1, j, t, Qx, a, b)
                + (t + 1) * E(i - 1, j, t + 1, Qx, a, b))
    return (1 / (2 * p) * E(i, j - 1, t - 1, Qx, a, b)
            + q * Qx / b * E(i, j - 1, t, Qx, a, b)
            + (t + 1) * E(i, j - 1, t + 1, Qx, a, b))


def overlap_prim(a, lmn1, A, b, lmn2, B):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    S1 = E(l1, l2, 0, A[0] - B[0], a, b)
    S2 = E(m1, m2, 0, A[1] - B[1], a, b)
    S3 = E(n1, n2, 0, A[2] - B[2], a, b)
    return S1 * S2 * S3 * (np.pi / (a + b)) ** 1.5


def overlap(g1, g2):
    s = 0.0
    for a, ca in zip(g1.exps, g1.coefs):
        for b, cb in zip(g2.exps, g2.coefs):
            s += ca * cb * overlap_prim(a, g1.lmn, g1.A, b, g2.lmn, g2.A)
    return s


def kinetic_prim(a, lmn1, A, b, lmn2, B):
    l2, m2, n2 = lmn2
    term0 = b * (2 * (l2 + m2 + n2) + 3) * overlap_prim(a, lmn1, A, b, lmn2, B)
    term1 = -2 * b * b * (
        overlap_prim(a, lmn1, A, b, (l2 + 2, m2, n2), B)
        + overlap_prim(a, lmn1, A, b, (l2, m2 + 2, n2), B)
        + overlap_prim(a, lmn1, A, b, (l2, m2, n2 + 2), B))
    term2 = -0.5 * (
        l2 * (l2 - 1) * overlap_prim(a, lmn1, A, b, (l2 - 2, m2, n2), B)
        + m2 * (m2 - 1) * overlap_prim(a, lmn1, A, b, (l2, m2 - 2, n2), B)
        + n2 * (n2 - 1) * overlap_prim(a, lmn1, A, b, (l2, m2, n2 - 2), B))
    return term0 + term1 + term2


def kinetic(g1, g2):
    t = 0.0
    for a, ca in zip(g1.exps, g1.coefs):
        for b, cb in zip(g2.exps, g2.coefs):
            t += ca * cb * kinetic_prim(a, g1.lmn, g1.A, b, g2.lmn, g2.A)
    return t


def boys(n, T):
    return hyp1f1(n + 0.5, n + 1.5, -T) / (2.0 * n + 1.0)


def R_coul(t, u, v, n, p, PC):
    """Hermite-Coulomb auxiliary integral."""
    T = p * (PC @ PC)
    if t == u == v == 0:
        return (-2 * p) ** n * boys(n, T)
    if t > 0:
        val = R_coul(t - 1, u, v, n + 1, p, PC) * PC[0]
        if t > 1:
            val += (t - 1) * R_coul(t - 2, u, v, n + 1, p, PC)
        return val
    if u > 0:
        val = R_coul(t, u - 1, v, n + 1, p, PC) * PC[1]
        if u > 1:
            val += (u - 1) * R_coul(t, u - 2, v, n + 1, p, PC)
        return val
    val = R_coul(t, u, v - 1, n + 1, p, PC) * PC[2]
    if v > 1:
        val += (v - 1) * R_coul(t, u, v - 2, n + 1, p, PC)
    return val


def nuclear_prim(a, lmn1, A, b, lmn2, B, C):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    p = a + b
    P = (a * A + b * B) / p
    val = 0.0
    for t in range(l1 + l2 + 1):
        for u in range(m1 + m2 + 1):
            for v in range(n1 + n2 + 1):
                val += (E(l1, l2, t, A[0] - B[0], a, b)
                        * E(m1, m2, u, A[1] - B[1], a, b)
                        * E(n1, n2, v, A[2] - B[2], a, b)
                        * R_coul(t, u, v, 0, p, P - C))
    return 2 * np.pi / p * val


def nuclear(g1, g2, C):
    v = 0.0
    for a, ca in zip(g1.exps, g1.coefs):
        for b, cb in zip(g2.exps, g2.coefs):
            v += ca * cb * nuclear_prim(a, g1.lmn, g1.A, b, g2.lmn, g2.A, np.asarray(C, float))
    return v


def eri_prim(a, lmn1, A, b, lmn2, B, c, lmn3, C, d, lmn4, D):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    l3, m3, n3 = lmn3
    l4, m4, n4 = lmn4
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    P = (a * A + b * B) / p
    Q = (c * C + d * D) / q
    val = 0.0
    for t in range(l1 + l2 + 1):
        for u in range(m1 + m2 + 1):
            for v in range(n1 + n2 + 1):
                e1 = (E(l1, l2, t, A[0] - B[0], a, b)
                      * E(m1, m2, u, A[1] - B[1], a, b)
                      * E(n1, n2, v, A[2] - B[2], a, b))
                if e1 == 0.0:
                    continue
                for tau in range(l3 + l4 + 1):
                    for nu in range(m3 + m4 + 1):
                        for phi in range(n3 + n4 + 1):
                            e2 = (E(l3, l4, tau, C[0] - D[0], c, d)
                                  * E(m3, m4, nu, C[1] - D[1], c, d)
                                  * E(n3, n4, phi, C[2] - D[2], c, d))
                            if e2 == 0.0:
                                continue
                            val += (e1 * e2 * (-1) ** (tau + nu + phi)
                                    * R_coul(t + tau, u + nu, v + phi, 0, alpha, P - Q))
    return val * 2 * np.pi ** 2.5 / (p * q * np.sqrt(p + q))


def eri(g1, g2, g3, g4):
    v = 0.0
    for a, ca in zip(g1.exps, g1.coefs):
        for b, cb in zip(g2.exps, g2.coefs):
            for c, cc in zip(g3.exps, g3.coefs):
                for d, cd in zip(g4.exps, g4.coefs):
                    v += ca * cb * cc * cd * eri_prim(
                        a, g1.lmn, g1.A, b, g2.lmn, g2.A,
                        c, g3.lmn, g3.A, d, g4.lmn, g4.A)
    return v


def main():
    li = np.array([0.0, 0.0, 0.0])
    h = np.array([0.0, 0.0, R_LIH])
    basis = [
        CGF(li, (0, 0, 0), *LI_1S),
        CGF(li, (0, 0, 0), LI_SP_EXP, LI_2S),
        CGF(li, (1, 0, 0), LI_SP_EXP, LI_2P),
        CGF(li, (0, 1, 0), LI_SP_EXP, LI_2P),
        CGF(li, (0, 0, 1), LI_SP_EXP, LI_2P),
        CGF(h, (0, 0, 0), *H_1S),
    ]
    nb = len(basis)
    S = np.array([[overlap(a, b) for b in basis] for a in basis])
    T = np.array([[kinetic(a, b) for b in basis] for a in basis])
    V = np.zeros((nb, nb))
    for i in range(nb):
        for j in range(nb):
            V[i, j] = -3.0 * nuclear(basis[i], basis[j], li) - 1.0 * nuclear(basis[i], basis[j], h)
    Hc = T + V
    ERI = np.zeros((nb, nb, nb, nb))
    for i, j, k, l in product(range(nb), repeat=4):
        ERI[i, j, k, l] = eri(basis[i], basis[j], basis[k], basis[l])
    e_nuc = 3.0 * 1.0 / R_LIH

    # RHF, 4 electrons
    sval, svec = np.linalg.eigh(S)
    X = svec @ np.diag(sval ** -0.5) @ svec.T
    D = np.zeros((nb, nb))
    e_old = np.inf
    for it in range(500):
        J = np.einsum("pqrs,rs->pq", ERI, D)
        K = np.einsum("prqs,rs->pq", ERI, D)
        F = Hc + 2 * J - K
        e_el = np.sum(D * (Hc + F))
        if abs(e_el - e_old) < 1e-12 and it > 2:
            break
        e_old = e_el
        Fo = X.T @ F @ X
        eps, Co = np.linalg.eigh(Fo)
        C = X @ Co
        Cocc = C[:, :2]
        D = Cocc @ Cocc.T
    e_rhf = e_el + e_nuc
    print("RHF energy: %.8f Ha (iter %d)" % (e_rhf, it))
    print("orbital energies:", np.round(eps, 5))

    # MO transforms
    h_mo = C.T @ Hc @ C
    eri_mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", C, C, C, C, ERI, optimize=True)

    # frozen core = MO 0; active = MOs 1..4
    core = [0]
    active = [1, 2, 3, 4]
    e_core = e_nuc
    for c in core:
        e_core += 2 * h_mo[c, c]
        for c2 in core:
            e_core += 2 * eri_mo[c, c, c2, c2] - eri_mo[c, c2, c2, c]
    na = len(active)
    h_eff = np.zeros((na, na))
    for a_, p in enumerate(active):
        for b_, q in enumerate(active):
            v = h_mo[p, q]
            for c in core:
                v += 2 * eri_mo[p, q, c, c] - eri_mo[p, c, c, q]
            h_eff[a_, b_] = v
    eri_act = np.array([[[[eri_mo[p, q, r, s] for s in active] for r in active]
                         for q in active] for p in active])

    # spin-orbital coefficients, literal operator c+_i c+_j c_k c_l
    nmo = 2 * na
    one = {}
    for p in range(na):
        for q in range(na):
            if abs(h_eff[p, q]) > 1e-12:
                for s in range(2):
                    one[(2 * p + s, 2 * q + s)] = h_eff[p, q]
    two = {}
    for p, q, r, s in product(range(na), repeat=4):
        v = eri_act[p, q, r, s]  # chemist (pq|rs)
        if abs(v) < 1e-12:
            continue
        for sig in range(2):
            for tau in range(2):
                i, l = 2 * p + sig, 2 * q + sig
                j, k = 2 * r + tau, 2 * s + tau
                if i == j or k == l:
                    continue
                key = (i, j, k, l)
                two[key] = two.get(key, 0.0) + 0.5 * v
    two = {k: v for k, v in two.items() if abs(v) > 1e-14}

    # ED cross-check in N=2 sector (same literal convention, JW signs)
    masks = [m for m in range(1 << nmo) if bin(m).count("1") == 2]
    idx = {m: i for i, m in enumerate(masks)}
    dim = len(masks)
    Hm = np.zeros((dim, dim))

    def apply_ann(m, mode):
        if not (m >> mode) & 1:
            return None
        s = (-1) ** bin(m & ((1 << mode) - 1)).count("1")
        return m ^ (1 << mode), s

    def apply_cre(m, mode):
        if (m >> mode) & 1:
            return None
        s = (-1) ** bin(m & ((1 << mode) - 1)).count("1")
        return m | (1 << mode), s

    for (i, j), v in one.items():
        for m in masks:
            r1 = apply_ann(m, j)
            if r1 is None:
                continue
            r2 = apply_cre(r1[0], i)
            if r2 is None:
                continue
            Hm[idx[r2[0]], idx[m]] += v * r1[1] * r2[1]
    for (i, j, k, l), v in two.items():
        for m in masks:
            st, sg = m, 1.0
            out = None
            for op, mode in [("a", l), ("a", k), ("c", j), ("c", i)]:
                r = apply_ann(st, mode) if op == "a" else apply_cre(st, mode)
                if r is None:
                    out = None
                    break
                st, s = r
                sg *= s
                out = st
            if out is not None:
                Hm[idx[out], idx[m]] += v * sg
    assert np.allclose(Hm, Hm.T, atol=1e-10)
    evals = np.linalg.eigvalsh(Hm)
    e0_active = evals[0]
    print("active-space E0 (electronic, active frame): %.10f Ha" % e0_active)
    print("CASCI(2,4) total energy: %.8f Ha" % (e0_active + e_core))
    print("core+nuclear constant: %.10f Ha" % e_core)
    print("correlation vs RHF: %.6f mHa" % ((e0_active + e_core - e_rhf) * 1e3))

    lines = []
    lines.append("# LiH / STO-3G at 1.45 Angstrom, RHF orbitals, frozen 1s core,")
    lines.append("# active space of 2 electrons in 4 spatial orbitals (8 spin modes,")
    lines.append("# spatial p -> modes 2p spin-up / 2p+1 spin-down).")
    lines.append("# Energies in Hartree. Add the constant below for total energies:")
    lines.append("#   core + nuclear constant = %.12f Ha" % e_core)
    lines.append("#   RHF total               = %.12f Ha" % e_rhf)
    lines.append("#   CASCI(2,4) total        = %.12f Ha" % (e0_active + e_core))
    lines.append("L %d" % nmo)
    for (i, j), v in sorted(one.items()):
        lines.append("1 %d %d %.15e 0.0" % (i, j, v))
    for (i, j, k, l), v in sorted(two.items()):
        lines.append("2 %d %d %d %d %.15e 0.0" % (i, j, k, l, v))
    out = "\n".join(lines) + "\n"
    with open("crates/core/fixtures/lih_sto3g.txt", "w") as f:
        f.write(out)
    print("wrote crates/core/fixtures/lih_sto3g.txt (%d one-body, %d two-body terms)" % (len(one), len(two)))

    # HF determinant in active space should be modes {0,1} with energy h00+h11+...
    hf_mask = 0b11
    e_hf_active = Hm[idx[hf_mask], idx[hf_mask]]
    print("active HF diag: %.10f, + const = %.8f (vs RHF %.8f)" % (
        e_hf_active, e_hf_active + e_core, e_rhf))


main()
