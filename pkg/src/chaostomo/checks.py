"""Fast invariant suite behind the ``check`` CLI command.

Each check is a quick, deterministic guard on a core contract; the whole
suite runs in a few seconds and is meant as a smoke test after install
or environment changes, not as a replacement for the test suite.
"""

from __future__ import annotations

import numpy as np

from . import dynamics, krylov, perturbation, phase_space, rmt, tomography
from .operator_space import bloch_encode, gell_mann_basis


def _check_basis():
    for d in (2, 3, 5, 8):
        b = gell_mann_basis(d)
        g = (b.flat.conj() @ b.flat.T).real
        if np.max(np.abs(g - np.eye(len(b)))) > 1e-12:
            return False, f"Gram matrix deviates at d={d}"
    return True, "Gram matrix is the identity for d in {2, 3, 5, 8}"


def _check_parseval():
    rng = np.random.default_rng(7)
    d = 6
    b = gell_mann_basis(d)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    op = (a + a.conj().T) / 2
    op -= np.trace(op) * np.eye(d) / d
    r = bloch_encode(op, b)
    if abs(np.sum(r**2) - np.vdot(op, op).real) > 1e-10:
        return False, "Parseval identity violated"
    return True, "Parseval identity holds for a random traceless operator"


def _check_propagators():
    units = [
        dynamics.kicked_top_floquet(dynamics.KickedTop(j=5, lam=3.0, alpha=1.4)),
        dynamics.tki_floquet(dynamics.KickedIsing(L=3)),
        dynamics.ti_unitary(dynamics.TiltedIsing(L=3)),
        dynamics.xxz_unitary(dynamics.XXZChain(L=3, g=0.5, site=2)),
    ]
    for u in units:
        dev = np.max(np.abs(u.matrix.conj().T @ u.matrix - np.eye(u.dim)))
        if dev > 1e-10:
            return False, f"propagator unitarity deviates by {dev:.1e}"
    return True, "all four propagator families unitary to 1e-10"


def _check_classical_map():
    pt = np.array([0.0, 0.6, 0.8])
    for _ in range(10_000):
        pt = np.array(dynamics.classical_kicked_top_step(*pt, 2.5, np.pi / 2))
    drift = abs(np.linalg.norm(pt) - 1.0)
    return drift < 1e-11, f"unit-sphere drift {drift:.1e} after 1e4 iterates"


def _check_xxz_conservation():
    u = dynamics.xxz_unitary(dynamics.XXZChain(L=4, g=0.94, site=2))
    sz = dynamics.collective_spin("z", 4)
    dev = np.max(np.abs(u.matrix @ sz - sz @ u.matrix))
    return dev < 1e-10, f"[U, S_z] = {dev:.1e}"


def _check_trace_identity():
    jx, jy, _ = dynamics.angular_momentum_ops(3)
    u = dynamics.kicked_top_floquet(dynamics.KickedTop(j=3, lam=3.0, alpha=1.4))
    tl = dynamics.heisenberg_timeline(jy, u, 79)
    basis = gell_mann_basis(7)
    cov = tomography.build_covariance(tl, basis)
    lhs = float(np.trace(cov.inv_cov))
    rhs = len(tl) * float(np.sum(bloch_encode(jy, basis) ** 2))
    rel = abs(lhs - rhs) / abs(rhs)
    return rel < 1e-10, f"Tr(C^-1) = N |O|^2 to relative {rel:.1e}"


def _check_zero_noise():
    rng = np.random.default_rng(3)
    d = 5
    psi = tomography.haar_random_pure(d, rng)
    run = tomography.run_tomography(
        dynamics.HaarSteps(dim=d, seed=9), psi, np.diag(np.arange(d) - 2.0).astype(complex),
        d * d, 0.0, 4, eval_steps=[d * d],
    )
    return run.fidelities[-1] > 1 - 1e-9, f"zero-noise fidelity {run.fidelities[-1]:.12f}"


def _check_psd_projection():
    b2 = gell_mann_basis(2)
    r_ml = np.array([0.9, -0.4, 0.3])
    cov = tomography.CovarianceData(np.eye(3))
    r_bar, _, diag = tomography.psd_project(r_ml, cov, b2)
    want = r_ml / np.linalg.norm(r_ml) / np.sqrt(2)
    ok = np.max(np.abs(r_bar - want)) < 1e-9 and diag.converged
    return ok, "qubit Bloch-ball projection matches the analytic point"


def _check_krylov():
    h = dynamics.ti_hamiltonian(dynamics.TiltedIsing(L=2, hx=1.4, hz=1.4))
    o = dynamics.pauli_site("y", 1, 2) / 2
    kb = krylov.lanczos_full_orth(krylov.liouvillian(h), o)
    g = kb.vectors.conj() @ kb.vectors.T
    orth = np.max(np.abs(g - np.eye(kb.dim_k)))
    amp = krylov.krylov_amplitudes(krylov.evolve_operator(h, o, 1.3), kb)
    norm = abs(np.sum(amp.phi**2) - 1.0)
    ok = orth < 1e-10 and norm < 1e-8
    return ok, f"orthonormality {orth:.1e}, amplitude norm deviation {norm:.1e}"


def _check_husimi():
    j = 8
    grid = phase_space.sphere_grid()
    psi = phase_space.spin_coherent(j, 1.1, 0.7)
    q = phase_space.husimi_q(np.outer(psi, psi.conj()), grid)
    norm = (2 * j + 1) / (4 * np.pi) * np.sum(grid.weights * q)
    return abs(norm - 1) < 1e-3, f"Husimi normalization deviation {abs(norm - 1):.1e}"


def _check_error_scrambling_identity():
    j = 4
    pair = perturbation.perturbed_kicked_top(j, 3.0, 1.4, 0.01)
    jx = dynamics.angular_momentum_ops(j)[0]
    tl_t = dynamics.heisenberg_timeline(jx, pair.u_true, 20)
    tl_m = dynamics.heisenberg_timeline(jx, pair.u_model, 20)
    worst = 0.0
    for n in range(21):
        lhs = perturbation.operator_incompatibility(tl_t.steps[n], tl_m.steps[n], j=j)
        uu = perturbation.error_unitary(pair.u_true, pair.u_model, n)
        rhs = perturbation.operator_incompatibility(jx, uu.conj().T @ jx @ uu, j=j)
        worst = max(worst, abs(lhs - rhs))
    return worst < 1e-10, f"commutator vs error-unitary form differ by {worst:.1e}"


def _check_rmt():
    p = rmt.reflection_operator(4)
    u = dynamics.tki_floquet(dynamics.KickedIsing(L=4)).matrix
    comm = np.max(np.abs(p @ u - u @ p))
    vbasis, dims = rmt.reflection_eigenbasis(4)
    w = rmt.block_diagonal_sample(
        rmt.EnsembleSpec("COE", 16, block_dims=dims, seed=5), vbasis
    )
    bcomm = np.max(np.abs(w @ p - p @ w))
    ok = comm < 1e-10 and bcomm < 1e-10
    return ok, f"[P, U_TKI] = {comm:.1e}, [P, COE block sample] = {bcomm:.1e}"


CHECKS = [
    ("operator basis orthonormality", _check_basis),
    ("Parseval identity", _check_parseval),
    ("propagator unitarity", _check_propagators),
    ("classical map norm preservation", _check_classical_map),
    ("XXZ spin conservation", _check_xxz_conservation),
    ("covariance trace identity", _check_trace_identity),
    ("zero-noise reconstruction", _check_zero_noise),
    ("positivity projection", _check_psd_projection),
    ("Krylov basis hygiene", _check_krylov),
    ("Husimi normalization", _check_husimi),
    ("error-scrambling identity", _check_error_scrambling_identity),
    ("reflection-block ensembles", _check_rmt),
]


def run_checks(echo=print) -> bool:
    """Run every invariant check, print one line each, return overall pass."""
    all_ok = True
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok &= ok
        echo(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
