"""Named property suites: each check reports a residual against a tolerance.

Suites are deterministic for a fixed seed.  A check is a zero-argument
callable returning ``(residual, tolerance)``; exact checks use tolerance 0
and pass only when the residual is exactly zero.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import circleact as ca
from . import deformation as de
from . import flagspace as fs
from . import grunsky as gr
from . import neretin as ne
from . import virasoro as vi


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool
    wall_time: float

    def as_dict(self):
        return asdict(self)


def _num(x) -> float:
    return float(abs(complex(x)))


def run_checks(checks, jobs=1):
    """Run ``[(name, fn)]`` and return results in the given order."""
    def one(item):
        name, fn = item
        t0 = time.perf_counter()
        residual, tol = fn()
        dt = time.perf_counter() - t0
        r = _num(residual)
        passed = r == 0 if tol == 0 else r <= tol
        return CheckResult(name, r, float(tol), bool(passed), dt)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, checks))
    return [one(c) for c in checks]


# ---------------------------------------------------------------------------
def suite_jacobi(cfg):
    kmax = cfg.get("max", 8)
    V = vi.VirasoroVector.e
    ks = range(-kmax, kmax + 1)

    def jacobi():
        worst = 0
        for i in ks:
            for j in ks:
                for k in ks:
                    worst = max(worst, vi.jacobi_residual(V(i), V(j), V(k)).max_abs())
        return worst, 0

    def antisymmetry():
        worst = 0
        for i in ks:
            for j in ks:
                worst = max(worst, (vi.virasoro_bracket(V(i), V(j)) + vi.virasoro_bracket(V(j), V(i))).max_abs())
        return worst, 0

    def central():
        b = vi.virasoro_bracket(V(2), V(-2))
        return abs(b.central - Fraction(1, 2)) + (b.witt - vi.e(0, 4)).max_abs(), 0

    return [("jacobi", jacobi), ("antisymmetry", antisymmetry), ("central_e2_e-2", central)]


def suite_gf(cfg):
    jmax = cfg.get("max", 6)

    def off_diagonal():
        worst = 0
        for j in range(-jmax, jmax + 1):
            for k in range(-jmax, jmax + 1):
                if j + k != 0:
                    worst = max(worst, abs(vi.gelfand_fuchs(vi.e(j), vi.e(k), per_period=True)))
        return worst, 0

    def profile():
        base = vi.gelfand_fuchs(vi.e(1), vi.e(-1), per_period=True)
        worst = 0
        for j in range(1, jmax + 1):
            ratio = vi.gelfand_fuchs(vi.e(j), vi.e(-j), per_period=True) / base
            worst = max(worst, abs(ratio - j ** 3))
        return worst, 0

    def normalization():
        return vi.central_normalization(jmax)["residual"], 0

    return [("gf_off_diagonal", off_diagonal), ("gf_cubic_profile", profile),
            ("central_normalization", normalization)]


def suite_commutators(cfg):
    N = cfg.get("N", 12)
    mmax = cfg.get("max", 4)
    pairs = [(m, n) for m in range(-mmax, mmax + 1) for n in range(-mmax, mmax + 1)]

    def family(source, with_w):
        def run():
            return max(fs.commutator_residual(m, n, N, source, with_w) for m, n in pairs), 0
        return run

    def agreement():
        lo = min(-3, -2 * mmax)
        ps = range(lo, -2)
        return max(max(fs.oracle_agreement(p, N), fs.oracle_agreement(p, N, True)) for p in ps), 0

    def equivariance():
        return max(de.projection_equivariance_residual(p, N) for p in range(-mmax, mmax + 1)), 0

    return [("commutators_base_residue", family("residue", False)),
            ("commutators_base_ad", family("ad", False)),
            ("commutators_deformation_residue", family("residue", True)),
            ("commutators_deformation_ad", family("ad", True)),
            ("residue_ad_agreement", agreement),
            ("projection_equivariance", equivariance)]


def suite_bott(cfg):
    rng = np.random.default_rng(cfg.get("seed", 0))
    samples = cfg.get("samples", 50)
    grid = cfg.get("grid", 4096)
    tol = cfg.get("tol", {}).get("bott", 1e-7)
    triples = [[ca.random_diffeo(rng, 3, 0.2, grid) for _ in range(3)] for _ in range(samples)]

    def run():
        return max(abs(ca.bott_identity_residual(*t)) for t in triples), tol

    return [("bott_identity", run)]


def suite_coadjoint(cfg):
    rng = np.random.default_rng(cfg.get("seed", 0))
    samples = cfg.get("samples", 20)
    grid = cfg.get("grid", 4096)
    tol = cfg.get("tol", {}).get("coadjoint", 1e-7)
    N = cfg.get("N", 12)

    def mobius():
        worst = 0
        for a, b, cc, d in [(1, 0, 0, 1), (2, 1, 1, 1), (Fraction(1, 2), 3, Fraction(-1, 3), 1)]:
            S = ca.schwarzian(ca.mobius_series(Fraction(a), Fraction(b), Fraction(cc), Fraction(d), N))
            worst = max(worst, S.max_abs_coeff())
        return worst, 0

    items = []
    for _ in range(samples):
        g1 = ca.random_diffeo(rng, 3, 0.1, grid)
        g2 = ca.random_diffeo(rng, 3, 0.1, grid)
        p = ca.FourierFunction.from_cos_sin(float(rng.uniform(-1, 1)), list(rng.uniform(-0.3, 0.3, 2)),
                                            list(rng.uniform(-0.3, 0.3, 2)))
        items.append((g1, g2, ca.CoadjointVector(p, float(rng.uniform(0.5, 2)))))

    def group_law():
        worst = 0.0
        for g1, g2, x in items:
            lhs = ca.coadjoint_act(ca.diffeo_compose(g1, g2), x)
            rhs = ca.coadjoint_act(g1, ca.coadjoint_act(g2, x))
            worst = max(worst, lhs.distance(rhs, grid))
        return worst, tol

    return [("schwarzian_mobius", mobius), ("coadjoint_group_law", group_law)]


def suite_grunsky(cfg):
    N = cfg.get("N", 16)
    tol = cfg.get("tol", {}).get("grunsky", 1e-10)

    def identity():
        G = gr.grunsky_matrix(fs.UnivalentPoint.identity(2 * N), N)
        return max(abs(v) for v in G.b.flat), 0

    def koebe():
        G = gr.grunsky_matrix(fs.koebe_point(0.0, 2 * N), N)
        return float(np.max(np.abs(G.beta + np.eye(N)))), tol

    def milin():
        return gr.milin_defect(fs.koebe_point(np.pi / 3, 2 * N), N), tol

    def siegel():
        res = gr.siegel_check(gr.grunsky_matrix(fs.UnivalentPoint((Fraction(1, 2),) + (Fraction(0),) * (2 * N - 1)), N))
        return (0 if res.region == "interior" else 1), 0

    return [("grunsky_identity", identity), ("grunsky_koebe", koebe),
            ("milin_rotated_koebe", milin), ("siegel_interior", siegel)]


def suite_poisson(cfg):
    rng = np.random.default_rng(cfg.get("seed", 0))
    samples = cfg.get("samples", 10)
    tol = cfg.get("tol", {}).get("poisson", 1e-8)
    M = cfg.get("grid", 512) if cfg.get("grid", 512) <= 4096 else 512
    funcs = [fs.random_functional(rng) for _ in range(samples)]

    def run():
        worst = 0.0
        for F in funcs:
            for r in (0.3, 0.6):
                center, avg = fs.poisson_average(F, r, M)
                worst = max(worst, abs(center - avg))
        return worst, tol

    return [("poisson_mean_value", run)]


def suite_subsym(cfg):
    rng = np.random.default_rng(cfg.get("seed", 0))
    tol = cfg.get("tol", {}).get("subsym", 1e-9)
    N = cfg.get("N", 6)
    thetas = [float(t) for t in rng.uniform(0, np.pi, 5)]
    points = [de.mirror_point(thetas[i % 5], float(rng.uniform(-0.6, 0.6)), float(rng.uniform(0.5, 2)), N)
              for i in range(10)]

    def axioms():
        return de.subsymmetric_axiom_check(points, [de.Subsymmetry(t) for t in thetas]), tol

    def equivariance():
        return max(de.projection_equivariance_residual(p, 8) for p in range(-4, 5)), 0

    return [("subsymmetric_axioms", axioms), ("projection_equivariance", equivariance)]


def suite_neretin(cfg):
    rng = np.random.default_rng(cfg.get("seed", 0))
    samples = cfg.get("samples", 5)
    eps = cfg.get("tol", {}).get("epsilon", 0.05)
    tols = cfg.get("tol", {})
    triples = [[ne.perturbed_scaling(float(rng.uniform(0.2, 1.0)), eps, rng) for _ in range(3)]
               for _ in range(samples)]

    def scaling_law():
        worst = 0.0
        for s, t in [(0.3, 0.5), (0.2, 1.0), (0.7, 0.3)]:
            worst = max(worst, ne.multiply(ne.scaling(s), ne.scaling(t)).distance(ne.scaling(s + t)))
        return worst, tols.get("scaling", 1e-10)

    def associativity():
        worst = 0.0
        for g1, g2, g3 in triples:
            lhs = ne.multiply(ne.multiply(g1, g2), g3)
            rhs = ne.multiply(g1, ne.multiply(g2, g3))
            worst = max(worst, lhs.distance(rhs))
        return worst, tols.get("associativity", 1e-6)

    def cocycle():
        return max(ne.cocycle_identity_residual(*t) for t in triples), tols.get("cocycle", 1e-5)

    return [("scaling_law", scaling_law), ("associativity", associativity),
            ("cocycle_identity", cocycle)]


def suite_maslov(cfg):
    rng = np.random.default_rng(cfg.get("seed", 0))
    samples = cfg.get("samples", 100)
    triples = [rng.uniform(0, 2 * np.pi, 3) for _ in range(samples)]

    def run():
        bad = 0
        for a, b, c in triples:
            m = fs.maslov_index(a, b, c)
            cyc = {fs.maslov_index(b, c, a), fs.maslov_index(c, a, b)}
            swaps = {fs.maslov_index(b, a, c), fs.maslov_index(a, c, b), fs.maslov_index(c, b, a)}
            bad += int(cyc != {m} or swaps != {-m} or m not in (1, -1))
        return bad, 0

    return [("maslov_orbit", run)]


SUITES = {
    "jacobi": suite_jacobi,
    "gf": suite_gf,
    "commutators": suite_commutators,
    "bott": suite_bott,
    "coadjoint": suite_coadjoint,
    "grunsky": suite_grunsky,
    "poisson": suite_poisson,
    "subsym": suite_subsym,
    "neretin": suite_neretin,
    "maslov": suite_maslov,
}


def run_suite(name, cfg, jobs=1):
    if name not in SUITES:
        raise KeyError(name)
    return run_checks(SUITES[name](cfg), jobs)


__all__ = ["CheckResult", "run_checks", "run_suite", "SUITES"]
