"""Named verification suites over the representation families.

Each suite replays the invariants of one module at chosen parameters
and fills a VerifyReport: checks are counted in scan order, failures
carry an identity string plus the offending inputs, and the largest
absolute deviation seen by any comparison is tracked (exact-backend
equalities contribute 0.0).  Reports are deterministic for fixed
parameters and seed; checks are independent and could run
concurrently, but assembly order is the scan order either way.

Backends follow the desk-scale rule: exact by default for N = 2^n
with n <= 3, float beyond, and a requested exact backend is never
downgraded silently (unsupported moduli raise instead).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

import numpy as np

from .exactnum import CycNum
from .heisenberg import HWParams, fourier, gamma_p, p_inv_matrix, p_matrix, q_matrix
from .magnetic import j_odd, j_twisted
from .matrixcore import OpMatrix, mat_eq
from .metaplectic import (
    u_a_closed,
    u_general,
    u_of_word,
    u_s,
    u_t,
    verify_metaplectic,
    weil_odd_general,
)
from .report import VerifyReport
from .sl2 import (
    SL2Element,
    TooLarge,
    decompose,
    enumerate_sl2,
    sample_sl2,
    sl2_order,
    sl2_s,
    sl2_t,
)
from .weilmod import (
    IllFormed,
    NotMetaplectic,
    QuadraticModule,
    alpha_q,
    chirp,
    chirp_wrap_sign,
    extract_psi,
    feichtinger_u,
    find_nonhom_witness,
    find_theta_witness,
    generator_defect,
    pi_shift,
    theta_defect,
)

__all__ = ["UnknownSuite", "TooLarge", "SuiteSpec", "SUITE_NAMES", "run_suite"]

SUITE_NAMES = (
    "heisenberg",
    "cocycle-odd",
    "cocycle-twisted",
    "metaplectic",
    "homomorphism",
    "decomposition",
    "weil-odd",
    "quadratic-module",
    "feichtinger-defect",
)

_PAIR_CAP = 10_000_000
_DIM_CAP = 4096


class UnknownSuite(ValueError):
    """Suite name outside SUITE_NAMES."""


@dataclass(frozen=True)
class SuiteSpec:
    """A suite name with its parameter dict (N or n, p, seed, samples...)."""

    suite: str
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.suite not in SUITE_NAMES:
            raise UnknownSuite(f"unknown suite {self.suite!r}; known: {', '.join(SUITE_NAMES)}")


def _even_modulus(params: dict) -> HWParams:
    if "n" in params and params["n"] is not None:
        N = 2 ** int(params["n"])
    elif "N" in params and params["N"] is not None:
        N = int(params["N"])
    else:
        raise ValueError("suite needs n or N")
    return HWParams(N, int(params.get("p") or 1))


def _odd_modulus(params: dict) -> int:
    N = params.get("N")
    if N is None:
        raise ValueError("suite needs N")
    N = int(N)
    if N < 3 or N % 2 == 0:
        raise ValueError(f"suite needs an odd modulus >= 3, got {N}")
    return N


def _default_backend(pr: HWParams) -> str:
    return "exact" if pr.is_even and pr.N <= 8 else "float"


def _backend_of(params: dict, pr: HWParams) -> str:
    backend = params.get("backend") or _default_backend(pr)
    if backend not in ("exact", "float"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def _guard_pairs(count: int) -> None:
    if count > _PAIR_CAP:
        raise TooLarge(f"{count} pairs exceed the exhaustive cap {_PAIR_CAP}")


def _guard_dim(dim: int) -> None:
    if dim > _DIM_CAP:
        raise TooLarge(f"dimension {dim} exceeds the cap {_DIM_CAP}")


def _record_scaled(rep: VerifyReport, ok, dev, identity, inputs, count: int) -> None:
    # one verified residue class standing for `count` scanned pairs
    rep.record(ok, dev, identity, inputs)
    rep.checks_run += count - 1


def _root_scalar(pr: HWParams, backend: str, e: int):
    if backend == "exact":
        return CycNum.root(pr.N, e)
    return complex(np.exp(2j * np.pi * (e % pr.N) / pr.N))


# -- suites ------------------------------------------------------------------


def _suite_heisenberg(params: dict) -> VerifyReport:
    pr = _even_modulus(params)
    backend = _backend_of(params, pr)
    tol = float(params.get("tol", 1e-9))
    seed = int(params.get("seed", 7))
    samples = int(params.get("samples", 1000))
    N, p = pr.N, pr.p
    _guard_dim(N)
    rep = VerifyReport(
        "heisenberg", {"N": N, "p": p, "backend": backend, "seed": seed}
    )
    eye = OpMatrix.identity(N, backend, order=max(N, 8))
    Q, P, Pinv = q_matrix(pr, backend), p_matrix(pr, backend), p_inv_matrix(pr, backend)
    cmp = mat_eq(Pinv @ Q, (Q @ Pinv).scalar_mul(_root_scalar(pr, backend, p)), tol)
    rep.record(cmp.equal, cmp.max_deviation, "P^-1 Q == omega^p Q P^-1", {})
    cmp = mat_eq(Q**N, eye, tol)
    rep.record(cmp.equal, cmp.max_deviation, "Q^N == I", {})
    cmp = mat_eq(P**N, eye, tol)
    rep.record(cmp.equal, cmp.max_deviation, "P^N == I", {})
    F = fourier(pr, backend)
    cmp = mat_eq(F @ P**p @ F.dagger(), Q, tol)
    rep.record(cmp.equal, cmp.max_deviation, "F P^p F^-1 == Q", {})

    # commutator law over pairs of (m, r, s) triples scanned in [0, 2N)^3;
    # matrices and scalars repeat with period N per slot, so each residue
    # class is multiplied once and counted with multiplicity 2^6
    def check(g, h):
        m1, r1, s1 = g
        m2, r2, s2 = h
        lhs = mats[g] @ mats[h] - mats[h] @ mats[g]
        scalar = _root_scalar(pr, backend, p * r2 * s1)
        scalar = scalar - _root_scalar(pr, backend, p * r1 * s2)
        rhs = gamma_p(pr, m1 + m2, r1 + r2, s1 + s2, backend).scalar_mul(scalar)
        return mat_eq(lhs, rhs, tol)

    exhaustive = bool(params.get("exhaustive", N <= 4))
    if exhaustive:
        _guard_pairs((2 * N) ** 6)
        triples = [(m, r, s) for m in range(N) for r in range(N) for s in range(N)]
        mats = {g: gamma_p(pr, *g, backend) for g in triples}
        for g in triples:
            for h in triples:
                cmp = check(g, h)
                _record_scaled(
                    rep, cmp.equal, cmp.max_deviation,
                    "[Gamma(g), Gamma(h)] == (w^{p r' s} - w^{p r s'}) Gamma(gh)",
                    {"g": list(g), "h": list(h)}, 64,
                )
        rep.params["mode"] = "exhaustive"
    else:
        rng = random.Random(seed)
        mats = {}
        for _ in range(samples):
            g = tuple(rng.randrange(2 * N) for _ in range(3))
            h = tuple(rng.randrange(2 * N) for _ in range(3))
            g_c = tuple(v % N for v in g)
            h_c = tuple(v % N for v in h)
            for key in (g_c, h_c):
                if key not in mats:
                    mats[key] = gamma_p(pr, *key, backend)
            cmp = check(g_c, h_c)
            rep.record(
                cmp.equal, cmp.max_deviation,
                "[Gamma(g), Gamma(h)] == (w^{p r' s} - w^{p r s'}) Gamma(gh)",
                {"g": list(g), "h": list(h)},
            )
        rep.params["mode"] = "sampled"
        rep.params["samples"] = samples
    return rep


def _suite_cocycle_odd(params: dict) -> VerifyReport:
    N = _odd_modulus(params)
    tol = float(params.get("tol", 1e-9))
    _guard_pairs(N**4)
    rep = VerifyReport("cocycle-odd", {"N": N})
    inv2 = pow(2, -1, N)
    mats = {
        (r, s): j_odd(N, (r, s)).to_complex_array()
        for r in range(N)
        for s in range(N)
    }
    for (r, s), m in mats.items():
        dev = float(np.abs(m.conj().T - mats[(-r % N, -s % N)]).max())
        rep.record(dev <= tol, dev, "J[l]^dagger == J[-l]", {"r": r, "s": s})
    for r in range(N):
        for s in range(N):
            left = mats[(r, s)]
            for rp in range(N):
                for sp in range(N):
                    phase = np.exp(2j * np.pi * ((rp * s - r * sp) * inv2 % N) / N)
                    rhs = phase * mats[((r + rp) % N, (s + sp) % N)]
                    dev = float(np.abs(left @ mats[(rp, sp)] - rhs).max())
                    rep.record(
                        dev <= tol, dev,
                        "J[l] J[l'] == omega^{(r' s - r s')/2} J[l+l']",
                        {"l": [r, s], "l'": [rp, sp]},
                    )
    return rep


def _suite_cocycle_twisted(params: dict) -> VerifyReport:
    pr = _even_modulus(params)
    backend = _backend_of(params, pr)
    tol = float(params.get("tol", 1e-9))
    N, p = pr.N, pr.p
    _guard_dim(N * N)
    _guard_pairs(N**4)
    rep = VerifyReport("cocycle-twisted", {"N": N, "p": p, "backend": backend})
    mats = {
        (r, s): j_twisted(pr, (r, s), backend=backend)
        for r in range(N)
        for s in range(N)
    }
    for (r, s), m in mats.items():
        cmp = mat_eq(m.dagger(), mats[(-r % N, -s % N)], tol)
        rep.record(cmp.equal, cmp.max_deviation, "J[l]^dagger == J[-l]", {"r": r, "s": s})
    for r in range(N):
        for s in range(N):
            left = mats[(r, s)]
            for rp in range(N):
                for sp in range(N):
                    rhs = mats[((r + rp) % N, (s + sp) % N)].scalar_mul(
                        _root_scalar(pr, backend, p * (rp * s - sp * r))
                    )
                    cmp = mat_eq(left @ mats[(rp, sp)], rhs, tol)
                    rep.record(
                        cmp.equal, cmp.max_deviation,
                        "J[l] J[l'] == omega^{p(r' s - s' r)} J[l+l']",
                        {"l": [r, s], "l'": [rp, sp]},
                    )
    return rep


def _merge(dst: VerifyReport, sub: VerifyReport, tag: dict) -> None:
    dst.checks_run += sub.checks_run
    dst.max_abs_deviation = max(dst.max_abs_deviation, sub.max_abs_deviation)
    for f in sub.failures:
        f.inputs = {**tag, **f.inputs}
        dst.failures.append(f)


def _suite_metaplectic(params: dict) -> VerifyReport:
    pr = _even_modulus(params)
    tol = float(params.get("tol", 1e-9))
    samples = int(params.get("samples", 0))
    seed = int(params.get("seed", 7))
    N = pr.N
    _guard_dim(N * N)
    rep = VerifyReport("metaplectic", {"N": N, "p": pr.p, "samples": samples, "seed": seed})
    generators = [("S", u_s(pr), sl2_s(N)), ("T", u_t(pr), sl2_t(N))]
    for name, U, A in generators:
        _merge(rep, verify_metaplectic(U, A, "twisted_even", pr, tol), {"element": name})
    for A in sample_sl2(N, samples, seed):
        _merge(
            rep,
            verify_metaplectic(u_general(pr, A), A, "twisted_even", pr, tol),
            {"element": list(A.entries())},
        )
    return rep


def _suite_homomorphism(params: dict) -> VerifyReport:
    pr = _even_modulus(params)
    backend = _backend_of(params, pr)
    tol = float(params.get("tol", 1e-9))
    seed = int(params.get("seed", 7))
    N = pr.N
    _guard_dim(N * N)
    exhaustive = bool(params.get("exhaustive", sl2_order(N) ** 2 <= 10_000))
    rep = VerifyReport(
        "homomorphism",
        {"N": N, "p": pr.p, "backend": backend,
         "mode": "exhaustive" if exhaustive else "sampled"},
    )
    cache: dict[tuple[int, int, int, int], OpMatrix] = {}

    def u_of(A: SL2Element) -> OpMatrix:
        key = A.entries()
        if key not in cache:
            cache[key] = u_general(pr, A, backend)
        return cache[key]

    if exhaustive:
        elems = enumerate_sl2(N)
        _guard_pairs(len(elems) ** 2)
        pairs = ((A, B) for A in elems for B in elems)
    else:
        samples = int(params.get("samples", 500))
        rep.params["samples"] = samples
        rep.params["seed"] = seed
        pairs = zip(sample_sl2(N, samples, seed), sample_sl2(N, samples, seed + 1))
    for A, B in pairs:
        cmp = mat_eq(u_of(A) @ u_of(B), u_of(A * B), tol)
        rep.record(
            cmp.equal, cmp.max_deviation, "U(A) U(B) == U(AB)",
            {"A": list(A.entries()), "B": list(B.entries())},
        )
    return rep


def _suite_decomposition(params: dict) -> VerifyReport:
    pr = _even_modulus(params)
    backend = _backend_of(params, pr)
    tol = float(params.get("tol", 1e-9))
    seed = int(params.get("seed", 7))
    samples = int(params.get("samples", 200))
    _guard_dim(pr.N * pr.N)
    rep = VerifyReport(
        "decomposition",
        {"N": pr.N, "p": pr.p, "backend": backend, "samples": samples, "seed": seed},
    )
    for A in sample_sl2(pr.N, samples, seed):
        try:
            word = decompose(A)  # raises if the even-d sign is not unique
            cmp = mat_eq(u_a_closed(pr, A, backend), u_of_word(pr, word, backend), tol)
            rep.record(
                cmp.equal, cmp.max_deviation,
                "closed form == generator word product", {"A": list(A.entries())},
            )
        except RuntimeError:
            rep.record(
                False, float("inf"),
                "closed form == generator word product", {"A": list(A.entries())},
            )
    return rep


def _suite_weil_odd(params: dict) -> VerifyReport:
    N = _odd_modulus(params)
    tol = float(params.get("tol", 1e-9))
    order = sl2_order(N)
    _guard_pairs(order * N * N)
    rep = VerifyReport("weil-odd", {"N": N})
    elems = enumerate_sl2(N)
    mats: dict[tuple[int, int, int, int], OpMatrix] = {}
    for A in elems:
        U = weil_odd_general(N, A)
        mats[A.entries()] = U
        _merge(
            rep, verify_metaplectic(U, A, "weil_odd", tol=tol),
            {"element": list(A.entries())},
        )
    run_pairs = bool(params.get("pairs", order**2 <= 20_000))
    rep.params["pairs"] = run_pairs
    if run_pairs:
        _guard_pairs(order**2)
        arrays = {k: m.to_complex_array() for k, m in mats.items()}
        for A in elems:
            left = arrays[A.entries()]
            for B in elems:
                dev = float(
                    np.abs(left @ arrays[B.entries()] - arrays[(A * B).entries()]).max()
                )
                rep.record(
                    dev <= tol, dev, "U(A) U(B) == U(AB)",
                    {"A": list(A.entries()), "B": list(B.entries())},
                )
    return rep


def _suite_quadratic_module(params: dict) -> VerifyReport:
    pr = _even_modulus(params)
    N = pr.N
    tol = float(params.get("tol", 1e-9))
    _guard_dim(N * N)
    qm = QuadraticModule(N)
    rep = VerifyReport("quadratic-module", {"N": N})
    for x1 in range(N):
        for x2 in range(N):
            ok = qm.q((-x1 % N, -x2 % N)) == qm.q((x1, x2))
            rep.record(ok, 0.0 if ok else 1.0, "Q(-x) == Q(x)", {"x": [x1, x2]})
    units = list(range(1, N, 2))
    for a in units:
        dev = abs(alpha_q(qm, a) - 1)
        rep.record(dev <= 1e-10, dev, "alpha_Q(a) == 1", {"a": a})
    base = alpha_q(qm, 1)
    for a in units:
        for b in units:
            dev = abs(alpha_q(qm, a) * alpha_q(qm, b) - base * alpha_q(qm, a * b))
            rep.record(
                dev <= 1e-10, dev,
                "alpha(a) alpha(b) == alpha(1) alpha(ab)", {"a": a, "b": b},
            )
    probes = [("T", None), ("Sinv", None)] + [("D", a) for a in units]
    for kind, a in probes:
        out = generator_defect(qm, kind, a)
        dev = max(out["defect"], abs(out["phase"] - 1))
        rep.record(
            dev <= tol, dev,
            f"Gamma({kind}) == {out['partner']}", {"kind": kind, "a": a},
        )
    return rep


def _suite_feichtinger_defect(params: dict) -> VerifyReport:
    N = int(params.get("N") or 0)
    if N < 2:
        raise ValueError("suite needs N >= 2")
    tol = float(params.get("tol", 1e-9))
    seed = int(params.get("seed", 7))
    _guard_pairs(N**4)
    rep = VerifyReport("feichtinger-defect", {"N": N, "seed": seed})
    if N % 2:
        for c1 in range(2 * N):
            for c2 in range(2 * N):
                ok = theta_defect(N, c1, c2) == 1
                rep.record(ok, 0.0 if ok else 1.0, "theta(c1, c2) == +1", {"c": [c1, c2]})
    else:
        witness = find_theta_witness(N)
        ok = witness is not None and theta_defect(N, *witness) == -1
        rep.record(ok, 0.0 if ok else 1.0, "a theta == -1 witness exists", {})
        if witness is not None:
            rep.params["theta_witness"] = list(witness)
    k = np.arange(N)
    for c1 in range(N):
        for c2 in range(N):
            lhs = (chirp(N, c1) @ chirp(N, c2)).to_complex_array()
            sign = float(chirp_wrap_sign(N, c1, c2))
            rhs = (sign ** (k * k))[:, None] * chirp(N, (c1 + c2) % N).to_complex_array()
            dev = float(np.abs(lhs - rhs).max())
            rep.record(
                dev <= tol, dev,
                "R[c1] R[c2] == sign^(k^2) R[c1+c2]", {"c": [c1, c2]},
            )
    pis = {
        (r, s): pi_shift(N, r, s).to_complex_array()
        for r in range(N)
        for s in range(N)
    }
    for (r, s), left in pis.items():
        for (rp, sp), right in pis.items():
            phase = np.exp(2j * np.pi * (s * rp % N) / N)
            dev = float(np.abs(left @ right - phase * pis[((r + rp) % N, (s + sp) % N)]).max())
            rep.record(
                dev <= tol, dev,
                "pi(l) pi(l') == omega^{s r'} pi(l+l')",
                {"l": [r, s], "l'": [rp, sp]},
            )
    elems = enumerate_sl2(N)
    if len(elems) > 60:
        rng = random.Random(seed)
        picks = sorted(rng.sample(range(len(elems)), 48))
        elems = [elems[i] for i in picks]
    ill = 0
    for A in elems:
        try:
            U = feichtinger_u(N, A)
        except IllFormed:
            ill += 1
            continue
        try:
            extract_psi(U, A, tol=tol)
            rep.record(True, 0.0, "U pi(k,l) U^-1 == psi pi((k,l)A)", {"A": list(A.entries())})
        except NotMetaplectic:
            rep.record(False, 1.0, "U pi(k,l) U^-1 == psi pi((k,l)A)", {"A": list(A.entries())})
    if ill:
        rep.params["ill_formed"] = ill
    if N % 2 == 0:
        witness = find_nonhom_witness(N)
        rep.record(
            witness is not None,
            0.0 if witness is not None else 1.0,
            "some product defect survives every global phase", {},
        )
        if witness is not None:
            rep.params["nonhom_pair"] = witness["pair"]
            rep.params["nonhom_defect_norm"] = witness["defect_norm"]
    elif sl2_order(N) ** 2 <= 20_000:
        witness = find_nonhom_witness(N)
        rep.record(
            witness is None,
            0.0 if witness is None else witness["defect_norm"],
            "every product composes up to a global phase", {},
        )
    return rep


_SUITES = {
    "heisenberg": _suite_heisenberg,
    "cocycle-odd": _suite_cocycle_odd,
    "cocycle-twisted": _suite_cocycle_twisted,
    "metaplectic": _suite_metaplectic,
    "homomorphism": _suite_homomorphism,
    "decomposition": _suite_decomposition,
    "weil-odd": _suite_weil_odd,
    "quadratic-module": _suite_quadratic_module,
    "feichtinger-defect": _suite_feichtinger_defect,
}


def run_suite(spec: SuiteSpec) -> VerifyReport:
    """Execute one named suite and return its filled report."""
    t0 = time.perf_counter()
    rep = _SUITES[spec.suite](dict(spec.params))
    rep.runtime_ms = (time.perf_counter() - t0) * 1000.0
    return rep
