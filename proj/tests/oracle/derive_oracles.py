"""Independent reference values frozen into the C++ unit tests.

Run with numpy, scipy and cvxpy available; prints the values the tests pin.
"""
import itertools

import cvxpy as cp
import numpy as np
from scipy.optimize import minimize

np.set_printoptions(precision=17)

# Fixed Hermitian matrices whose ascending eigenbases define the test pair.
H_A = np.array([[1.0, 0.3 + 0.2j, -0.1], [0.3 - 0.2j, 2.0, 0.5j], [-0.1, -0.5j, 3.5]])
H_B = np.array([[0.5, -0.4j, 0.25], [0.4j, -1.0, 0.1 + 0.3j], [0.25, 0.1 - 0.3j, 1.5]])


def basis(h):
    return np.linalg.eigh(h)[1]


def overlap(va, vb):
    return np.abs(va.conj().T @ vb) ** 2


def mub(d, n):
    if d == 2:
        s = 1 / np.sqrt(2)
        bases = [np.eye(2), np.array([[s, s], [s, -s]]), np.array([[s, s], [1j * s, -1j * s]])]
        return bases[:n]
    w = np.exp(2j * np.pi / d)
    out = [np.eye(d, dtype=complex)]
    for k in range(n - 1):
        out.append(np.array([[w ** ((k * j * j + m * j) % d) for m in range(d)] for j in range(d)]) / np.sqrt(d))
    return out


def sdp(bases):
    states = [b[:, j] for b in bases for j in range(b.shape[0])]
    d = states[0].size
    a = sum(np.kron(np.outer(s, s.conj()), np.outer(s, s.conj())) for s in states) / len(states)
    lam = cp.Variable((d, d), hermitian=True)
    prob = cp.Problem(cp.Minimize(cp.real(cp.trace(lam))), [cp.kron(np.eye(d), lam) - a >> 0])
    prob.solve(solver=cp.SCS, eps=1e-9, max_iters=200000)
    return prob.value


def qp_min(m):
    """Exact minimum of v'Mv over the simplex by enumerating faces."""
    m = 0.5 * (m + m.T)
    n = m.shape[0]
    best = np.inf
    for k in range(1, n + 1):
        for face in itertools.combinations(range(n), k):
            idx = list(face)
            kkt = np.zeros((k + 1, k + 1))
            kkt[:k, :k] = 2 * m[np.ix_(idx, idx)]
            kkt[:k, k] = -1
            kkt[k, :k] = 1
            rhs = np.zeros(k + 1)
            rhs[k] = 1
            sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
            v = sol[:k]
            if np.all(v >= -1e-12) and abs(v.sum() - 1) < 1e-12:
                best = min(best, v @ m[np.ix_(idx, idx)] @ v)
    return best


def qf_directional(va, vb, restarts=400, seed=1):
    """Brute-force sup of 1 - F^2 over density matrices."""
    d = va.shape[0]
    o = overlap(va, vb)
    rng = np.random.default_rng(seed)

    def neg(x):
        l = (x[: d * d] + 1j * x[d * d:]).reshape(d, d)
        rho = l @ l.conj().T
        rho /= np.trace(rho).real
        p = np.real(np.einsum("ij,ik,kj->j", vb.conj(), rho, vb))
        pa = np.real(np.einsum("ij,ik,kj->j", va.conj(), rho, va))
        q = o.T @ pa
        f = np.sum(np.sqrt(np.clip(p * q, 0, None)))
        return -(1 - f * f)

    best = 0.0
    for _ in range(restarts):
        r = minimize(neg, rng.normal(size=2 * d * d), method="Nelder-Mead",
                     options={"maxiter": 20000, "xatol": 1e-12, "fatol": 1e-14})
        best = max(best, -r.fun)
    return best


def t2_min(bases, restarts=200, seed=2):
    d = bases[0].shape[0]
    rng = np.random.default_rng(seed)

    def avg(x):
        phi = x[:d] + 1j * x[d:]
        phi /= np.linalg.norm(phi)
        return np.mean([1 - np.sum(np.abs(b.conj().T @ phi) ** 4) for b in bases])

    return min(minimize(avg, rng.normal(size=2 * d), method="BFGS", options={"gtol": 1e-12}).fun
               for _ in range(restarts))


if __name__ == "__main__":
    va, vb = basis(H_A), basis(H_B)
    o = overlap(va, vb)
    print("overlap(A,B) =", repr(o))
    print("t2_successive(A,B) =", 0.5 * min(1 - np.sum(o ** 2, axis=1)))
    print("t2_successive(B,A) =", 0.5 * min(1 - np.sum(o ** 2, axis=0)))
    print("qp as_stated min =", qp_min(o))
    print("qp derivation min =", qp_min(o @ o.T))
    print("Q_F(A->B) brute =", qf_directional(va, vb))
    print("t2_standard(A,B) =", t2_min([va, vb]))
    print("renyi2(3/4,1/4) =", -np.log2(0.75 ** 2 + 0.25 ** 2))
    v = np.array([1, 1, 1]) / np.sqrt(3)
    print("qubit (1,1,1) overlap =", (1 + v[2]) / 2)
    for name, bases in [("bb84", mub(2, 2)), ("qubit3", mub(2, 3)), ("mub3", mub(3, 2)), ("mub5", mub(5, 2))]:
        print(f"sdp {name} =", sdp(bases))
