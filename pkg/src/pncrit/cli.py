"""Command-line front end: ``pncrit construct | analyze | verify | report``.

Everything is exchanged as JSON; polynomials are strings in the package's
polynomial grammar.  Exit codes: 0 success, 1 a verification failed,
2 invalid input, 3 a resource cap was hit, 4 an irrational point was met.
"""

import functools
import json
import sys

import click

from . import caps as caps_mod
from .constructions import (BranchWitness, hyperplane_construction, nonpcf_family, p1_map,
                            power_map, random_automorphism, symmetric_power,
                            verify_minimal_branching, verify_roadmap_hypotheses)
from .dynamics import (Hypersurface, Morphism, branch_locus, critical_locus, degree_ratio,
                       fixed_locus, image_hypersurface, pullback)
from .errors import PncritError, StructuralError
from .pcf import detect_pcf_type, orbit_members, orbit_report, postcritical_orbit
from .poly import divides, parse_poly


CAP_OPTIONS = [
    click.option("--seed", type=int, default=None, help="Seed for every randomized choice."),
    click.option("--max-degree", type=int, default=None),
    click.option("--max-bits", type=int, default=None),
    click.option("--K", "K", type=int, default=None, help="Largest period searched."),
    click.option("--L", "L", type=int, default=None, help="Largest tail searched."),
    click.option("--M", "M", type=int, default=None, help="Orbit length budget."),
    click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None),
    click.option("--format", "fmt", type=click.Choice(["json", "text"]), default=None),
]


def config_options(func):
    for option in reversed(CAP_OPTIONS):
        func = option(func)
    return func


class RunConfig:
    def __init__(self):
        self.seed = 0
        self.out = None
        self.fmt = "json"
        self.timings = False
        self.caps = caps_mod.Caps.from_env()

    def update(self, seed=None, max_degree=None, max_bits=None, K=None, L=None, M=None,
               out=None, fmt=None):
        if seed is not None:
            self.seed = seed
        if out is not None:
            self.out = out
        if fmt is not None:
            self.fmt = fmt
        try:
            self.caps = self.caps.replace(max_degree=max_degree, max_bits=max_bits,
                                          K=K, L=L, M=M)
        except ValueError as exc:
            raise click.BadParameter(str(exc))


def _text(value, indent=0):
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(value, list):
        return "\n".join(f"{pad}- {json.dumps(v)}" for v in value)
    return f"{pad}{json.dumps(value)}"


def emit(cfg, payload):
    if cfg.fmt == "text":
        body = _text(payload) + "\n"
    else:
        body = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(body)
    else:
        click.echo(body, nl=False)


def command(func):
    """Apply per-command options, activate caps and translate errors into
    the exit-code contract."""
    @config_options
    @click.pass_obj
    @functools.wraps(func)
    def wrapper(cfg, seed, max_degree, max_bits, K, L, M, out, fmt, **kwargs):
        cfg.update(seed, max_degree, max_bits, K, L, M, out, fmt)
        try:
            with caps_mod.using(cfg.caps):
                code = func(cfg, **kwargs)
        except PncritError as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(exc.exit_code)
        except (ValueError, KeyError) as exc:
            click.echo(f"error: invalid input: {exc}", err=True)
            sys.exit(2)
        sys.exit(code or 0)
    return wrapper


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def load_map(path):
    data = load_json(path)
    if "map" in data and "coords" not in data:
        data = data["map"]
    return Morphism.from_json(data)


@click.group()
@config_options
@click.option("--timings", is_flag=True, help="Include wall-clock timings (not reproducible).")
@click.pass_context
def main(ctx, timings, **opts):
    """Construct, analyze and verify endomorphisms of projective space."""
    cfg = RunConfig()
    cfg.timings = timings
    cfg.update(**opts)
    ctx.obj = cfg


# ---------------------------------------------------------------------------
# construct

@main.group()
def construct():
    """Build a map (power, hyperplane, sympow, family)."""


@construct.command("power")
@click.option("--n", type=int, required=True)
@click.option("--d", type=int, required=True)
@command
def construct_power(cfg, n, d):
    emit(cfg, power_map(n, d).to_json())


@construct.command("hyperplane")
@click.option("--n", type=int, required=True)
@click.option("--d", type=int, required=True)
@click.option("--e", type=int, default=2, show_default=True)
@command
def construct_hyperplane(cfg, n, d, e):
    w = hyperplane_construction(n, d, e, seed=cfg.seed)
    emit(cfg, {"map": w.map.to_json(), "witness": w.to_json(), "seed": cfg.seed})


@construct.command("sympow")
@click.option("--n", type=int, required=True)
@click.option("--p1", "p1", required=True, help='e.g. "z^2-1" or "s^2-t^2, t^2"')
@command
def construct_sympow(cfg, n, p1):
    f1 = p1_map(p1)
    out = symmetric_power(f1, n).to_json()
    out["source"] = {"p1": [str(c) for c in f1.coords]}
    emit(cfg, out)


@construct.command("family")
@click.option("--n", type=int, required=True)
@click.option("--d", type=int, required=True)
@click.option("--t", "t", required=True, help="Rational parameter, e.g. 1 or -3/2.")
@command
def construct_family(cfg, n, d, t):
    f = nonpcf_family(n, d, t)          # validates the parameters
    out = f.to_json()
    out["coords"] = [f"x0^{d} - t*x1^{d}"] + [f"x{i}^{d}" for i in range(1, n + 1)]
    out["params"] = {"t": str(t)}
    emit(cfg, out)


# ---------------------------------------------------------------------------
# analyze

@main.group()
def analyze():
    """Analyses of a map given as JSON."""


def _critical_payload(f):
    raw, reduced = critical_locus(f)
    return {"raw": str(raw), "raw_degree": raw.degree(),
            "reduced": str(reduced.form) if reduced else None,
            "reduced_degree": reduced.degree if reduced else 0}


@analyze.command("critical")
@click.argument("mapfile", type=click.Path(exists=True, dir_okay=False))
@command
def analyze_critical(cfg, mapfile):
    f = load_map(mapfile)
    emit(cfg, {"map_hash": f.map_hash(), **_critical_payload(f)})


def _branch_payload(f):
    _, crit = critical_locus(f)
    branch = branch_locus(f)
    return {"branch": str(branch.form), "degree": branch.degree,
            "degree_ratio": str(degree_ratio(f, crit))}


@analyze.command("branch")
@click.argument("mapfile", type=click.Path(exists=True, dir_okay=False))
@command
def analyze_branch(cfg, mapfile):
    f = load_map(mapfile)
    emit(cfg, {"map_hash": f.map_hash(), **_branch_payload(f)})


@analyze.command("orbit")
@click.argument("mapfile", type=click.Path(exists=True, dir_okay=False))
@command
def analyze_orbit(cfg, mapfile):
    f = load_map(mapfile)
    orbit = postcritical_orbit(f, cfg.caps.M)
    emit(cfg, {"map_hash": f.map_hash(), "critical": str(orbit.critical.form),
               "members": [str(H.form) for H in orbit.members], "degrees": orbit.degrees,
               "stop_reason": orbit.stop_reason, "caps_hit": orbit.caps_hit})


def pcf_certificate(f, K, L):
    """Detected type plus the orbit chain ``f^0(C_f), ..., f^(k+ell)(C_f)``."""
    cert = detect_pcf_type(f, K, L)
    if cert is None:
        return None
    crit, members = orbit_members(f, cert.type.k + cert.type.ell)
    return {"kind": "pcf", "map": f.to_json(), "type": cert.type.as_pair(),
            "chain": [str(H.form) for H in [crit] + members]}


def _pcf_payload(cfg, f):
    report = orbit_report(f, cfg.caps.M, cfg.caps.K, cfg.caps.L, seed=cfg.seed)
    if not cfg.timings:
        report["timings_ms"] = None
    report["certificate"] = (pcf_certificate(f, cfg.caps.K, cfg.caps.L)
                             if report["type"] is not None else None)
    return report


@analyze.command("pcf")
@click.argument("mapfile", type=click.Path(exists=True, dir_okay=False))
@command
def analyze_pcf(cfg, mapfile):
    emit(cfg, _pcf_payload(cfg, load_map(mapfile)))


def _fixed_payload(cfg, f):
    fix = fixed_locus(f, seed=cfg.seed)
    return {"projective_dimension": fix.projective_dimension, "count": fix.count,
            "length": fix.length,
            "rational_points": ([p.to_json() for p in fix.points]
                                if fix.points is not None else None)}


@analyze.command("fixed")
@click.argument("mapfile", type=click.Path(exists=True, dir_okay=False))
@command
def analyze_fixed(cfg, mapfile):
    f = load_map(mapfile)
    emit(cfg, {"map_hash": f.map_hash(), **_fixed_payload(cfg, f)})


# ---------------------------------------------------------------------------
# verify and report

def check_pcf_certificate(data):
    """Re-check a PCF certificate by divisibility only (no elimination).

    Confirms the chain starts at the reduced critical locus, that each
    link satisfies f(V(chain[i])) <= V(chain[i+1]) (chain[i] divides the
    pullback of chain[i+1]) within the degree bound, and the final
    containment chain[k+ell] | chain[ell]; this certifies
    f^(k+ell)(C_f) <= V(chain[ell]).
    """
    f = Morphism.from_json(data["map"])
    k, ell = data["type"]
    chain = [Hypersurface.of(parse_poly(s, f.nvars)) for s in data["chain"]]
    _, crit = critical_locus(f)
    checks = [{"name": "starts_at_critical", "pass": len(chain) == k + ell + 1
               and chain[0] == crit}]
    links = all(divides(a.form, pullback(f, b)) and
                b.degree <= f.d ** (f.n - 1) * a.degree
                for a, b in zip(chain, chain[1:]))
    checks.append({"name": "links", "pass": links})
    checks.append({"name": "containment",
                   "pass": len(chain) > k + ell and divides(chain[k + ell].form,
                                                            chain[ell].form)})
    return {"kind": "pcf", "all_pass": all(c["pass"] for c in checks), "checks": checks}


@main.command()
@click.argument("witnessfile", type=click.Path(exists=True, dir_okay=False))
@click.option("--roadmap", type=click.IntRange(1, 2), default=None,
              help="Also check the roadmap hypotheses for this tail length.")
@click.option("--alpha-seed", type=int, default=None,
              help="Precompose with a seeded automorphism (tail length 2).")
@command
def verify(cfg, witnessfile, roadmap, alpha_seed):
    """Check a branch witness or a PCF certificate; exit 0 iff all pass."""
    data = load_json(witnessfile)
    if data.get("kind") == "pcf":
        result = check_pcf_certificate(data)
        emit(cfg, result)
        return 0 if result["all_pass"] else 1
    w = BranchWitness.from_json(data.get("witness", data))
    report = verify_minimal_branching(w, seed=cfg.seed)
    out = {"kind": "branch_witness", **report.to_json()}
    ok = report.all_pass
    if roadmap is not None:
        alpha = random_automorphism(w.map.n, alpha_seed) if alpha_seed is not None else None
        road = verify_roadmap_hypotheses(w.map, roadmap, witness=w, alpha=alpha, seed=cfg.seed)
        out["roadmap"] = road.to_json()
        ok = ok and road.all_pass
    emit(cfg, out)
    return 0 if ok else 1


@main.command()
@click.argument("mapfile", type=click.Path(exists=True, dir_okay=False))
@command
def report(cfg, mapfile):
    """Critical, branch, orbit/PCF and fixed-point summary of one map."""
    f = load_map(mapfile)
    emit(cfg, {"map": f.to_json(), "map_hash": f.map_hash(),
               "critical": _critical_payload(f), "branch": _branch_payload(f),
               "pcf": _pcf_payload(cfg, f), "fixed": _fixed_payload(cfg, f)})


if __name__ == "__main__":   # pragma: no cover
    main()
