"""Command-line front end.

    python -m virgeo <command> [options]

Exit codes: 0 success, 1 domain error or failed suite check, 2 usage
error, 3 numerical divergence.  Results are printed as JSON with sorted
keys; ``--out DIR`` also writes them (and plots) to files.

Settings are resolved as defaults < ``--config FILE`` (``key=value``
lines) < ``VIRGEO_*`` environment variables < command-line flags.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import circleact as ca
from . import deformation as de
from . import flagspace as fs
from . import grunsky as gr
from . import neretin as ne
from . import virasoro as vi
from .errors import DivergenceError, DomainError
from .scalars import format_exact, is_exact, parse_scalar
from .seriescore import FourierFunction
from .suites import SUITES, run_suite
from .virasoro import VirasoroVector

ENV_PREFIX = "VIRGEO_"
EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_DIVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration
@dataclass
class RunConfig:
    N: int | None = None
    mode: str = "rational"
    grid: int = 4096
    tol: dict = field(default_factory=dict)
    seed: int = 0
    out: str | None = None
    jobs: int = 1

    def validate(self):
        if self.mode not in ("rational", "float"):
            raise UsageError(f"mode must be 'rational' or 'float', got {self.mode!r}")
        if self.N is not None and self.N < 1:
            raise UsageError("N must be positive")
        if self.grid < 8:
            raise UsageError("grid must be at least 8")
        if self.jobs < 1:
            raise UsageError("jobs must be at least 1")
        for k, v in self.tol.items():
            if not v > 0:
                raise UsageError(f"tolerance {k} must be positive")
        return self

    def as_dict(self):
        return {"N": self.N, "mode": self.mode, "grid": self.grid, "tol": dict(sorted(self.tol.items())),
                "seed": self.seed, "jobs": self.jobs}


def _apply(cfg: RunConfig, key: str, value: str):
    key = key.strip()
    value = value.strip()
    try:
        if key.lower().startswith("tol.") or key.lower().startswith("tol_"):
            cfg.tol[key[4:].lower()] = float(value)
        elif key in ("N", "n"):
            cfg.N = int(value)
        elif key.lower() in ("grid", "seed", "jobs"):
            setattr(cfg, key.lower(), int(value))
        elif key.lower() == "mode":
            cfg.mode = value
        elif key.lower() == "out":
            cfg.out = value
        else:
            raise UsageError(f"unknown setting {key!r}")
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {value!r}") from exc


def load_config(path=None, env=None, flags=None) -> RunConfig:
    cfg = RunConfig()
    if path:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read config file {path}: {exc}") from exc
        for ln in text.splitlines():
            ln = ln.split("#", 1)[0].strip()
            if not ln:
                continue
            if "=" not in ln:
                raise UsageError(f"config line without '=': {ln!r}")
            k, v = ln.split("=", 1)
            _apply(cfg, k, v)
    env = os.environ if env is None else env
    for k, v in sorted(env.items()):
        if k.startswith(ENV_PREFIX):
            _apply(cfg, k[len(ENV_PREFIX):], v)
    for k, v in (flags or {}).items():
        if v is None:
            continue
        if k == "tol":
            for item in v:
                if "=" not in item:
                    raise UsageError(f"--tol expects KEY=VAL, got {item!r}")
                a, b = item.split("=", 1)
                _apply(cfg, "tol." + a, b)
        else:
            _apply(cfg, k, str(v))
    return cfg.validate()


# ---------------------------------------------------------------------------
# input parsing
def _split_terms(s):
    terms, depth, start = [], 0, 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0 and s[i - 1] not in "*(eE":
            terms.append(s[start:i])
            start = i
    terms.append(s[start:])
    return [t for t in terms if t]


def parse_witt(text) -> vi.VirasoroVector:
    """``e2``, ``3*e-1 + h``, ``(1/2)*s2`` or the JSON form ``{"e": {...}, "c": ...}``."""
    text = text.strip()
    if text.startswith("{"):
        return vi.VirasoroVector.from_json(text)
    out = vi.VirasoroVector()
    for term in _split_terms(text.replace(" ", "")):
        sign = 1
        if term[0] in "+-":
            sign, term = (-1 if term[0] == "-" else 1), term[1:]
        coef, _, name = term.rpartition("*")
        a = parse_scalar(coef.strip("()")) if coef else 1
        if name.startswith("e"):
            vec = vi.e(int(name[1:]))
        elif name == "h":
            vec = vi.h()
        elif name.startswith("s"):
            vec = vi.s(int(name[1:]))
        elif name.startswith("c") and name[1:]:
            vec = vi.c(int(name[1:]))
        elif name == "C":
            out = out + vi.VirasoroVector.c(a * sign)
            continue
        else:
            raise UsageError(f"unknown basis vector {name!r}")
        out = out + vi.VirasoroVector(vec * (a * sign), 0)
    return out


def _read(spec):
    try:
        return Path(spec[1:]).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {spec[1:]}: {exc}") from exc


def parse_point(spec, N, mode="rational") -> fs.UnivalentPoint:
    """``identity``, ``koebe:THETA``, ``disk:RE,IM``, ``coeffs:c1,c2,...`` or ``@file``."""
    spec = spec.strip()
    if spec.startswith("@"):
        x = fs.UnivalentPoint.loads(_read(spec))
    else:
        kind, _, arg = spec.partition(":")
        N = N or 6
        if kind in ("identity", "id"):
            x = fs.UnivalentPoint.identity(N)
        elif kind == "koebe":
            x = fs.koebe_point(float(arg or 0.0), N)
        elif kind == "disk":
            re_, _, im_ = arg.partition(",")
            x = fs.koebe_disk_point(complex(float(re_), float(im_ or 0.0)), N)
        elif kind == "coeffs":
            cs = [parse_scalar(v) for v in arg.split(",") if v.strip()]
            cs += [Fraction(0)] * max(0, N - len(cs))
            x = fs.UnivalentPoint(tuple(cs))
        else:
            raise UsageError(f"unknown point spec {spec!r}")
    return x.to_float() if mode == "float" else x


def parse_fourier(spec) -> FourierFunction:
    """``CONST;COS1,COS2,...;SIN1,SIN2,...`` (missing parts are zero)."""
    parts = (spec.split(";") + ["", ""])[:3]
    const = float(parts[0]) if parts[0].strip() else 0.0
    cos = [float(v) for v in parts[1].split(",") if v.strip()]
    sin = [float(v) for v in parts[2].split(",") if v.strip()]
    return FourierFunction.from_cos_sin(const, cos, sin)


def parse_element(spec) -> ne.NeretinElement:
    """``A:T``, ``neutral``, ``pert:T:EPS:SEED``, ``diffeo:SPEC`` or ``@file``."""
    spec = spec.strip()
    if spec.startswith("@"):
        return ne.NeretinElement.loads(_read(spec))
    kind, _, arg = spec.partition(":")
    if kind == "A":
        return ne.scaling(float(arg))
    if kind == "neutral":
        return ne.neutral()
    if kind == "pert":
        t, eps, seed = arg.split(":")
        return ne.perturbed_scaling(float(t), float(eps), np.random.default_rng(int(seed)))
    if kind == "diffeo":
        return ne.embed_diffeo(ca.CircleDiffeo.parse(arg))
    raise UsageError(f"unknown element spec {spec!r}")


# ---------------------------------------------------------------------------
# output helpers
def _scalar(x):
    if is_exact(x):
        return format_exact(x)
    z = complex(x)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _fourier_json(f: FourierFunction):
    return {str(k): _scalar(f.coeff(k)) for k in range(-f.K, f.K + 1) if abs(complex(f.coeff(k))) > 0}


def _emit(data, cfg: RunConfig, name: str, extra_files=None):
    text = json.dumps(data, sort_keys=True, indent=2)
    if cfg.out:
        _write_atomic(Path(cfg.out) / f"{name}.json", text + "\n")
        for fname, content in (extra_files or {}).items():
            _write_atomic(Path(cfg.out) / fname, content)
    print(text)


def _write_atomic(path: Path, content):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    mode = "wb" if isinstance(content, bytes) else "w"
    with os.fdopen(fd, mode) as fh:
        fh.write(content)
    os.chmod(tmp, 0o644)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# commands
def cmd_bracket(args, cfg):
    vecs = [VirasoroVector.e(int(k)) for k in (args.e or [])] + [parse_witt(t) for t in (args.x or [])]
    if len(vecs) != 2:
        raise UsageError("bracket needs exactly two vectors (--e K or --x VEC)")
    b = vi.virasoro_bracket(*vecs)
    if cfg.mode == "float":
        data = {"c": _scalar(complex(b.central)), "e": {str(k): _scalar(complex(v)) for k, v in sorted(b.witt.modes.items())}}
    else:
        data = json.loads(b.to_json())
    _emit(data, cfg, "bracket")


def cmd_gf(args, cfg):
    u, v = parse_witt(args.u).witt, parse_witt(args.v).witt
    mean = vi.gelfand_fuchs(u, v, per_period=True)
    _emit({"per_period": _scalar(mean), "integral": _scalar(vi.gelfand_fuchs(u, v))}, cfg, "gf-cocycle")


def cmd_bott(args, cfg):
    g1 = ca.CircleDiffeo.parse(args.g1, cfg.grid)
    g2 = ca.CircleDiffeo.parse(args.g2, cfg.grid)
    data = {"cocycle": ca.bott_cocycle(g1, g2)}
    if args.g3:
        data["identity_residual"] = ca.bott_identity_residual(g1, g2, ca.CircleDiffeo.parse(args.g3, cfg.grid))
    _emit(data, cfg, "bott")


def cmd_schwarzian(args, cfg):
    if args.mobius:
        a, b, c, d = [parse_scalar(v) for v in args.mobius.split(",")]
        S = ca.schwarzian(ca.mobius_series(a, b, c, d, cfg.N or 8))
        data = {"series": {str(k): _scalar(S.coeff(k)) for k in range(S.low, S.order + 1)}}
    else:
        g = ca.CircleDiffeo.parse(args.g, cfg.grid)
        data = {"fourier": _fourier_json(ca.schwarzian(g))}
    _emit(data, cfg, "schwarzian")


def cmd_coadjoint(args, cfg):
    g = ca.CircleDiffeo.parse(args.g, cfg.grid)
    x = ca.CoadjointVector(parse_fourier(args.p), float(args.b))
    y = ca.coadjoint_act(g, x, args.convention)
    _emit({"p": _fourier_json(y.p), "b": y.b, "convention": args.convention}, cfg, "coadjoint")


def cmd_density(args, cfg):
    g = ca.CircleDiffeo.parse(args.g, cfg.grid)
    u = parse_fourier(args.u) if args.u else ca.uniform_density()
    v = ca.density_act(g, u)
    _emit({"density": _fourier_json(v), "mass": ca.total_mass(v)}, cfg, "density")


def _tangent_json(dc):
    return [_scalar(d) for d in dc]


def cmd_act(args, cfg):
    x = parse_point(args.point, cfg.N, cfg.mode)
    v = parse_witt(args.field).witt
    _emit({"delta_c": _tangent_json(fs.lv_action(v, x))}, cfg, "act")


def cmd_act_def(args, cfg):
    base = parse_point(args.point, cfg.N, cfg.mode)
    w = parse_scalar(args.w)
    x = de.DeformationPoint(base, complex(w) if cfg.mode == "float" else w)
    if args.validate:
        de.validate_point(x)
    v = parse_witt(args.field).witt
    dc, dw = de.lv_action_def(v, x)
    _emit({"delta_c": _tangent_json(dc), "delta_w": _scalar(dw)}, cfg, "act-def")


def cmd_flow(args, cfg):
    v = parse_witt(args.field).witt
    if args.point:
        x = parse_point(args.point, cfg.N, "float")
        y = fs.flow_on_S(v, float(args.time), x)
        _emit({"c": _tangent_json(y.c)}, cfg, "flow", {"flow.spoint": y.dumps()})
    else:
        g = ca.flow_exp(v, float(args.time), cfg.grid)
        _emit({"periodic": _fourier_json(g.periodic)}, cfg, "flow", {"flow.diffeo": g.dumps()})


def cmd_operators(args, cfg):
    N = cfg.N or 6
    op = de.lp_operator_def(args.p, N, args.source) if args.w else fs.lp_operator(args.p, N, args.source)
    rules = {("w" if k == 0 else f"c{k}"): repr(r) for k, r in sorted(op.rules.items())}
    _emit({"p": args.p, "N": N, "source": op.source, "rules": rules}, cfg, "operators")


def cmd_commutators(args, cfg):
    N = cfg.N or 12
    r = fs.commutator_residual(args.m, args.n, N, args.source, with_w=args.w)
    _emit({"m": args.m, "n": args.n, "N": N, "residual": _scalar(r)}, cfg, "commutators")
    return EXIT_OK if r == 0 else EXIT_DOMAIN


def _grunsky_for(args, cfg):
    x = parse_point(args.point, cfg.N, cfg.mode)
    return gr.grunsky_matrix(x, args.size)


def cmd_grunsky(args, cfg):
    G = _grunsky_for(args, cfg)
    csv = G.to_csv()
    data = {"N": G.N, "beta": [[_scalar(v) for v in row] for row in G.beta]}
    if G.b is not None:
        data["b"] = [[format_exact(v) for v in row] for row in G.b]
    _emit(data, cfg, "grunsky", {"grunsky.csv": csv})


def cmd_milin(args, cfg):
    G = _grunsky_for(args, cfg)
    _emit({"N": G.N, "defect": gr.milin_defect(G)}, cfg, "milin")


def cmd_siegel(args, cfg):
    if args.matrix:
        Z = gr.GrunskyMatrix.from_csv(_read("@" + args.matrix) if not args.matrix.startswith("@")
                                      else _read(args.matrix))
    else:
        Z = _grunsky_for(args, cfg)
    res = gr.siegel_check(Z)
    _emit({"region": res.region, "min_eigenvalue": res.min_eigenvalue}, cfg, "siegel")


def cmd_poisson(args, cfg):
    F = fs.PolyFunctional.parse(args.F)
    center, avg = fs.poisson_average(F, float(args.r), args.M)
    _emit({"center": center, "average": avg, "difference": abs(center - avg)}, cfg, "poisson")


def cmd_maslov(args, cfg):
    m = fs.maslov_index(float(args.a), float(args.b), float(args.c))
    _emit({"maslov": m}, cfg, "maslov")


def cmd_project(args, cfg):
    x = de.DeformationPoint(parse_point(args.point, cfg.N, cfg.mode), parse_scalar(args.w))
    y = de.project(x)
    _emit({"c": _tangent_json(y.c)}, cfg, "project", {"project.spoint": y.dumps()})


def cmd_subsym(args, cfg):
    base = parse_point(args.point, cfg.N, cfg.mode)
    w = parse_scalar(args.w)
    x = de.DeformationPoint(base, w)
    theta = float(args.theta)
    y = de.Subsymmetry(theta)(x)
    _emit({"theta": theta, "c": _tangent_json(y.c), "w": _scalar(y.w)}, cfg, "subsym",
          {"subsym.apoint": y.dumps()})


def cmd_limit(args, cfg):
    F = fs.PolyFunctional.parse(args.F)
    value = de.boundary_limit(F, float(args.a), cfg.N)
    _emit({"a": float(args.a), "limit": value, "slit_end": _scalar(de.cut_end(float(args.a)))}, cfg, "limit")


def cmd_ner_mul(args, cfg):
    g1, g2 = parse_element(args.g1), parse_element(args.g2)
    g3, w = ne.multiply(g1, g2, tol=cfg.tol.get("weld", ne.WELD_TOL), return_weld=True)
    data = {"datum": g3.datum, "seam_residual": w.residual, "modulus": g3.modulus(),
            "plus": {str(g3.plus_low + i): _scalar(v) for i, v in enumerate(g3.plus) if abs(v) > 1e-14},
            "minus": {str(1 - i): _scalar(v) for i, v in enumerate(g3.minus) if abs(v) > 1e-14}}
    extra = {"product.ner": g3.dumps()}
    if args.diagnostics:
        extra["weld_history.csv"] = "iteration,residual\n" + "".join(
            f"{i},{r!r}\n" for i, r in enumerate(w.history))
        data["history"] = w.history
    _emit(data, cfg, "ner-mul", extra)


def cmd_ner_normal(args, cfg):
    x = ne.FormalProduct(ca.CircleDiffeo.parse(args.p, cfg.grid), float(args.t),
                         ca.CircleDiffeo.parse(args.q, cfg.grid))
    y = ne.normal_form(x, float(args.s))
    _emit({"t": y.t, "p": _fourier_json(y.p.periodic), "q": _fourier_json(y.q.periodic)}, cfg, "ner-normal",
          {"normal_p.diffeo": y.p.dumps(), "normal_q.diffeo": y.q.dumps()})


def cmd_ner_cocycle(args, cfg):
    g1, g2 = parse_element(args.g1), parse_element(args.g2)
    _emit({"cocycle": _scalar(ne.neretin_cocycle(g1, g2))}, cfg, "ner-cocycle")


def cmd_suite(args, cfg):
    if not args.name:
        raise UsageError("suite name required: " + ", ".join(sorted(SUITES)))
    if args.name not in SUITES:
        raise UsageError(f"unknown suite {args.name!r}; choose from {', '.join(sorted(SUITES))}")
    scfg = {"seed": cfg.seed, "grid": cfg.grid, "tol": cfg.tol}
    if cfg.N is not None:
        scfg["N"] = cfg.N
    if args.max is not None:
        scfg["max"] = args.max
    if args.samples is not None:
        scfg["samples"] = args.samples
    t0 = time.perf_counter()
    results = run_suite(args.name, scfg, cfg.jobs)
    report = {
        "suite": args.name,
        "config": cfg.as_dict(),
        "options": {"max": args.max, "samples": args.samples},
        "checks": [r.as_dict() for r in results],
        "passed": all(r.passed for r in results),
        "wall_time": time.perf_counter() - t0,
    }
    _emit(report, cfg, f"suite-{args.name}")
    return EXIT_OK if report["passed"] else EXIT_DOMAIN


def cmd_plot(args, cfg):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    matplotlib.rcParams["svg.hashsalt"] = "virgeo"
    fig, ax = plt.subplots(figsize=(5, 5))
    kind = args.kind
    if kind == "boundary":
        g = parse_element(args.element or "A:0.5")
        z = np.exp(2j * np.pi * np.arange(513) / 512)
        for vals, label in ((g.p_plus(z), "p+(S^1)"), (g.p_minus(z), "p-(S^1)")):
            ax.plot(vals.real, vals.imag, label=label)
        ax.set_aspect("equal")
        ax.legend()
    elif kind == "slit":
        x = parse_point(args.point or "koebe:0", cfg.N or 40, "float")
        for r in (0.5, 0.7, 0.8, 0.9, 0.95):
            z = r * np.exp(2j * np.pi * np.arange(1025) / 1024)
            vals = x.evaluate(z)
            ax.plot(vals.real, vals.imag, lw=0.8)
        ax.set_aspect("equal")
        ax.set_title("images of circles |z| = r")
    elif kind == "defect":
        Ns = list(range(2, (cfg.N or 16) + 1))
        for theta, label in ((0.0, "Koebe"), (np.pi / 3, "rotated Koebe")):
            ax.semilogy(Ns, [max(gr.milin_defect(fs.koebe_point(theta, 2 * n), n), 1e-17) for n in Ns],
                        "o-", label=label)
        half = [gr.milin_defect(fs.UnivalentPoint((Fraction(1, 2),) + (Fraction(0),) * (2 * n - 1)), n) for n in Ns]
        ax.semilogy(Ns, half, "s-", label="z + z^2/2")
        ax.set_xlabel("N")
        ax.set_ylabel("||I - beta* beta||")
        ax.legend()
    else:
        raise UsageError(f"unknown plot kind {kind!r}; choose boundary, slit or defect")
    import io
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    svg = buf.getvalue()
    out = Path(cfg.out or ".") / f"plot-{kind}.svg"
    _write_atomic(out, svg)
    print(json.dumps({"plot": str(out)}, sort_keys=True))


# ---------------------------------------------------------------------------
def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=int, help="truncation order")
    common.add_argument("--mode", choices=["rational", "float"])
    common.add_argument("--grid", type=int, help="grid size for circle quadrature")
    common.add_argument("--tol", action="append", metavar="KEY=VAL", help="tolerance override")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output directory")
    common.add_argument("--jobs", type=int)
    common.add_argument("--config", help="key=value configuration file")

    p = argparse.ArgumentParser(prog="virgeo", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", metavar="command")

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("bracket", cmd_bracket, "Virasoro bracket of two vectors")
    sp.add_argument("--e", action="append", help="basis index k for e_k (give twice)")
    sp.add_argument("--x", action="append", help="vector expression, e.g. '2*e1 + h'")
    sp = add("gf-cocycle", cmd_gf, "Gelfand-Fuchs cocycle of two fields")
    sp.add_argument("--u", required=True)
    sp.add_argument("--v", required=True)
    sp = add("bott", cmd_bott, "Bott cocycle of two diffeomorphisms")
    sp.add_argument("--g1", required=True)
    sp.add_argument("--g2", required=True)
    sp.add_argument("--g3")
    sp = add("schwarzian", cmd_schwarzian, "Schwarzian of a diffeomorphism or a Moebius series")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--g")
    grp.add_argument("--mobius", help="a,b,c,d")
    sp = add("coadjoint", cmd_coadjoint, "coadjoint action on (p dt^2, b)")
    sp.add_argument("--g", required=True)
    sp.add_argument("--p", default="0", help="CONST;COS...;SIN...")
    sp.add_argument("--b", default="1")
    sp.add_argument("--convention", choices=["left", "pullback"], default="left")
    sp = add("density", cmd_density, "push forward a probability density")
    sp.add_argument("--g", required=True)
    sp.add_argument("--u")
    sp = add("act", cmd_act, "Kirillov action on a univalent point")
    sp.add_argument("--field", required=True)
    sp.add_argument("--point", default="identity")
    sp = add("act-def", cmd_act_def, "action on a deformation point (f, w)")
    sp.add_argument("--field", required=True)
    sp.add_argument("--point", default="identity")
    sp.add_argument("--w", required=True)
    sp.add_argument("--validate", action="store_true")
    sp = add("flow", cmd_flow, "flow of a real field on the circle or on S")
    sp.add_argument("--field", required=True)
    sp.add_argument("--time", required=True)
    sp.add_argument("--point")
    sp = add("operators", cmd_operators, "symbolic L_p rules")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--source", choices=["residue", "ad"], default="residue")
    sp.add_argument("--w", action="store_true", help="include the fibre coordinate")
    sp = add("commutators", cmd_commutators, "commutator residual of L_m, L_n")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--source", choices=["residue", "ad"], default="residue")
    sp.add_argument("--w", action="store_true")
    for name, func, help_ in (("grunsky", cmd_grunsky, "Grunsky matrix"),
                              ("milin", cmd_milin, "unitarity defect of the Grunsky matrix"),
                              ("siegel", cmd_siegel, "matrix-ball test for a symmetric matrix")):
        sp = add(name, func, help_)
        sp.add_argument("--point", default="koebe:0")
        sp.add_argument("--size", type=int)
        if name == "siegel":
            sp.add_argument("--matrix", help="CSV file of a complex matrix")
    sp = add("poisson", cmd_poisson, "mean value over the Koebe disk family")
    sp.add_argument("--F", required=True)
    sp.add_argument("--r", required=True)
    sp.add_argument("--M", type=int, default=512)
    sp = add("maslov", cmd_maslov, "Maslov index of three absolute points")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("c")
    sp = add("project", cmd_project, "drop the fibre coordinate of (f, w)")
    sp.add_argument("--point", default="identity")
    sp.add_argument("--w", required=True)
    sp = add("subsym", cmd_subsym, "apply a subsymmetry to (f, w)")
    sp.add_argument("--theta", default="0")
    sp.add_argument("--point", default="identity")
    sp.add_argument("--w", required=True)
    sp = add("limit", cmd_limit, "boundary limit along a mirror")
    sp.add_argument("--F", required=True)
    sp.add_argument("--a", default="0")
    sp = add("ner-mul", cmd_ner_mul, "product of two Neretin elements")
    sp.add_argument("--g1", required=True)
    sp.add_argument("--g2", required=True)
    sp.add_argument("--diagnostics", action="store_true", help="write the residual history as CSV")
    sp = add("ner-normal", cmd_ner_normal, "normal form of A(s) p A(t) q")
    sp.add_argument("--p", default="id")
    sp.add_argument("--q", default="id")
    sp.add_argument("--t", required=True)
    sp.add_argument("--s", required=True)
    sp = add("ner-cocycle", cmd_ner_cocycle, "central cocycle of two Neretin elements")
    sp.add_argument("--g1", required=True)
    sp.add_argument("--g2", required=True)
    sp = add("suite", cmd_suite, "run a property suite and write a JSON report")
    sp.add_argument("name", nargs="?", default="")
    sp.add_argument("--max", type=int)
    sp.add_argument("--samples", type=int)
    sp = add("plot", cmd_plot, "write an SVG plot (boundary, slit, defect)")
    sp.add_argument("kind")
    sp.add_argument("--element")
    sp.add_argument("--point")
    return p


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        flags = {k: getattr(args, k) for k in ("N", "mode", "grid", "seed", "out", "jobs", "tol")}
        cfg = load_config(args.config, None, flags)
        code = args.func(args, cfg)
        return EXIT_OK if code is None else code
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, KeyError, IndexError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(dispatch())


__all__ = ["RunConfig", "load_config", "parse_witt", "parse_point", "parse_element", "dispatch", "main"]
