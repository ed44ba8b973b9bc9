"""Command-line front end: reproducible runs wired through JSON artifacts.

Every subcommand prints a short human-readable summary, writes its result as
a content-hash-named JSON artifact under the output directory, and exits
nonzero with a machine-readable error object when a module raises.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import groupring, serialize
from .characters import FiniteOrderCharacter, HowardFamily, howard_check, specialize
from .errors import ThetaForgeError
from .hecke import EigenData, local_eigen_extend, nu_invariant, stabilize
from .measures import check_distribution, lp, synth_system, theta_level, theta_ordinary
from .padic import IntPolynomial, PrecisionInt
from .torus import QuadraticTorus, base_sequence, orbit_table
from .tree import Vertex, distance, geodesic_path, neighbors, origin, sphere, to_dot
from .util import default_nonresidue


@dataclass
class RunConfig:
    p: int = 3
    k: int = 6
    delta: int = 1
    n_max: int = 3
    kind: str = "inert"
    d: int | None = None
    seed: int = 0
    out: str = "artifacts"

    def __post_init__(self):
        # p odd is a torus-side requirement; tree commands accept p = 2
        if self.kind == "inert" and self.p % 2 == 1 and self.d is None:
            self.d = default_nonresidue(self.p)
        if self.k < self.n_max + 2:
            raise ValueError("precision must satisfy k >= n_max + 2")


def load_config(path: str | None) -> dict:
    """Simple key = value text format; '#' starts a comment."""
    if path is None:
        return {}
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def _pick(args, raw, name, default, key=None):
    """Flag value if given, else config-file value, else the default."""
    flag = getattr(args, name, None)
    if flag is not None:
        return flag
    return raw.get(key or name, default)


def build_config(args) -> RunConfig:
    raw = load_config(getattr(args, "config", None))
    d = _pick(args, raw, "d", None)
    return RunConfig(
        p=int(_pick(args, raw, "p", 3)),
        k=int(_pick(args, raw, "k", 6)),
        delta=int(_pick(args, raw, "delta", 1)),
        n_max=int(_pick(args, raw, "n_max", 3)),
        kind=_pick(args, raw, "torus_kind", "inert", key="kind"),
        d=int(d) if d is not None else None,
        seed=int(_pick(args, raw, "seed", 0)),
        out=_pick(args, raw, "out", "artifacts"),
    )


def _parse_vertex(p: int, text: str) -> Vertex:
    a, b, u = (int(x) for x in text.split(","))
    return Vertex(p, a, b, u)


def _emit(args, kind: str, payload, summary: str) -> int:
    cfg = build_config(args)
    path = serialize.write_artifact(cfg.out, kind, payload)
    print(summary)
    print(f"artifact: {path}")
    return 0


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_tree(args) -> int:
    cfg = build_config(args)
    p = cfg.p
    if args.tree_cmd == "neighbors":
        v = _parse_vertex(p, args.vertex)
        nb = neighbors(v)
        payload = {"p": p, "vertex": v.to_json(), "neighbors": [w.to_json() for w in nb]}
        return _emit(args, "neighbors", payload, f"{len(nb)} neighbors of ({v.a},{v.b},{v.u})")
    if args.tree_cmd == "distance":
        v = _parse_vertex(p, args.v)
        w = _parse_vertex(p, args.w)
        d = distance(v, w)
        path = [x.to_json() for x in geodesic_path(v, w)]
        payload = {"p": p, "distance": d, "path": path}
        return _emit(args, "distance", payload, f"distance = {d}")
    if args.tree_cmd == "sphere":
        v = _parse_vertex(p, args.vertex) if args.vertex else origin(p)
        sph = sphere(v, args.r)
        payload = {"p": p, "r": args.r, "count": len(sph),
                   "vertices": [w.to_json() for w in sph]}
        return _emit(args, "sphere", payload, f"{len(sph)} vertices at distance {args.r}")
    if args.tree_cmd == "dot":
        v = _parse_vertex(p, args.vertex) if args.vertex else origin(p)
        text = to_dot(v, args.r)
        print(text, end="")
        return _emit(args, "dot", {"p": p, "r": args.r, "dot": text}, "DOT graph emitted")
    raise ValueError(args.tree_cmd)


def cmd_torus(args) -> int:
    cfg = build_config(args)
    torus = QuadraticTorus(cfg.p, cfg.kind, cfg.d if cfg.kind == "inert" else None)
    if args.torus_cmd == "orbit":
        tab = orbit_table(torus, args.level, args.mode)
        payload = serialize.orbit_table_to_json(tab)
        return _emit(args, "orbit", payload,
                     f"level {args.level}: {len(tab.labels)} cosets, no collisions")
    if args.torus_cmd == "base-seq":
        verts, edges = base_sequence(torus, cfg.n_max)
        payload = {
            "p": cfg.p, "kind": cfg.kind, "d": torus.d,
            "vertices": [v.to_json() for v in verts],
            "edges": [e.to_json() for e in edges],
        }
        return _emit(args, "base-seq", payload, f"base sequence of depth {cfg.n_max}")
    raise ValueError(args.torus_cmd)


def cmd_forms(args) -> int:
    cfg = build_config(args)
    if args.forms_cmd == "eigen-extend":
        f = local_eigen_extend(cfg.p, cfg.k, args.ap, args.radius, cfg.seed)
        payload = serialize.form_to_json(f)
        return _emit(args, "form", payload,
                     f"eigen extension on the radius-{args.radius} ball, a_p = {args.ap}")
    if args.forms_cmd == "stabilize":
        f = serialize.form_from_json(serialize.read_artifact(args.form, "form"))
        eig = EigenData.ordinary(f.p, f.k, args.ap)
        phi = stabilize(f, eig)
        payload = serialize.form_to_json(phi)
        return _emit(args, "form", payload,
                     f"stabilized edge form, alpha = {eig.alpha.residue}")
    if args.forms_cmd == "nu":
        f = serialize.form_from_json(serialize.read_artifact(args.form, "form"))
        nu = nu_invariant(f)
        return _emit(args, "nu", {"nu": nu}, f"nu = {nu}")
    raise ValueError(args.forms_cmd)


def _eigen_from_args(cfg: RunConfig, args) -> EigenData:
    if args.mode == "edge":
        if args.ap is not None:
            return EigenData.ordinary(cfg.p, cfg.k, args.ap)
        alpha = PrecisionInt(cfg.p, cfg.k, args.alpha)
        return EigenData(ap=None, alpha=alpha)
    return EigenData(ap=PrecisionInt(cfg.p, cfg.k, args.ap), alpha=None)


def cmd_synth(args) -> int:
    cfg = build_config(args)
    eig = _eigen_from_args(cfg, args)
    s = synth_system(cfg.p, cfg.k, args.mode, eig, cfg.n_max, delta=cfg.delta,
                     torsion=args.torsion, level_map=args.level_map, seed=cfg.seed)
    payload = serialize.system_to_json(s)
    return _emit(args, "system", payload,
                 f"synthetic {args.mode} tower to depth {cfg.n_max}")


def cmd_check_dist(args) -> int:
    s = serialize.system_from_json(serialize.read_artifact(args.system, "system"))
    report = check_distribution(s)
    if not report.ok:
        print(json.dumps({"error": {"type": "DistributionViolation",
                                    "detail": report.to_json()}}))
        return 1
    return _emit(args, "check-dist", report.to_json(),
                 f"all {report.relations_checked} relations hold exactly")


def cmd_theta(args) -> int:
    s = serialize.system_from_json(serialize.read_artifact(args.system, "system"))
    if args.ordinary:
        th = theta_ordinary(s, args.level)
    else:
        th = theta_level(s, args.level)
    payload = {"level": th.level, "normalization": th.normalization,
               "value": th.value.to_json()}
    if th.value.delta == 1:
        payload["poly"] = [str(c) for c in groupring.poly_view(th.value)]
    return _emit(args, "theta", payload,
                 f"theta at level {args.level}, layer {th.value.n}")


def cmd_lp(args) -> int:
    s = serialize.system_from_json(serialize.read_artifact(args.system, "system"))
    l = lp(s, args.level, args.kind)
    payload = {"kind": l.kind, "level": l.level, "ideal": l.ideal_tag,
               "value": l.value.to_json(), "factor": l.factor_value.to_json()}
    mu = groupring.mu_invariant(l.value)
    return _emit(args, "lp", payload,
                 f"{l.kind} L-element at level {l.level}, mu = {mu}")


def cmd_mu(args) -> int:
    obj = serialize.read_artifact(args.element)
    if isinstance(obj, dict) and "value" in obj:
        obj = obj["value"]
    x = serialize.groupring_from_json(obj)
    mu = groupring.mu_invariant(x)
    payload = {"mu": mu}
    if x.delta == 1:
        payload["lambda"] = groupring.lambda_invariant(x)
    return _emit(args, "mu", payload, f"mu = {mu}")


def cmd_specialize(args) -> int:
    obj = serialize.read_artifact(args.element)
    if isinstance(obj, dict) and "value" in obj:
        obj = obj["value"]
    x = serialize.groupring_from_json(obj)
    rho = FiniteOrderCharacter.from_json(x.p, x.delta, json.loads(args.character))
    val = specialize(x, rho)
    payload = {"character": rho.to_json(), "value": val.to_json(),
               "valuation_units": val.valuation_units(),
               "ramification": val.ramification}
    return _emit(args, "specialize", payload,
                 f"specialized; valuation = {val.valuation_units()}/{val.ramification}")


def cmd_howard_scan(args) -> int:
    raw = serialize.read_artifact(args.family, "family")
    labels = tuple(raw["labels"])
    elements = tuple(serialize.groupring_from_json(e) for e in raw["elements"])
    family = HowardFamily(labels, elements)
    if args.prime == "custom":
        prime = IntPolynomial.from_json(json.loads(args.witness))
    else:
        prime = args.prime
    report = howard_check(family, prime, args.k0)
    verdict = "pass" if report.passed else "fail"
    return _emit(args, "howard", report.to_json(),
                 f"{verdict}: {len(report.nontrivial_labels)} nontrivial member(s)")


# ---------------------------------------------------------------------------


def _add_common(sub):
    sub.add_argument("--config", default=None)
    sub.add_argument("--out", default=None)
    sub.add_argument("--p", type=int, default=None)
    sub.add_argument("--k", type=int, default=None)
    sub.add_argument("--delta", type=int, default=None)
    sub.add_argument("--n-max", dest="n_max", type=int, default=None)
    sub.add_argument("--torus-kind", dest="torus_kind", default=None,
                     choices=("inert", "split"))
    sub.add_argument("--d", type=int, default=None)
    sub.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="thetaforge")
    subs = ap.add_subparsers(dest="cmd", required=True)

    t = subs.add_parser("tree", help="tree combinatorics")
    ts = t.add_subparsers(dest="tree_cmd", required=True)
    tn = ts.add_parser("neighbors")
    tn.add_argument("--vertex", default="0,0,0")
    td = ts.add_parser("distance")
    td.add_argument("--v", required=True)
    td.add_argument("--w", required=True)
    tsp = ts.add_parser("sphere")
    tsp.add_argument("--r", type=int, required=True)
    tsp.add_argument("--vertex", default=None)
    tdot = ts.add_parser("dot")
    tdot.add_argument("--r", type=int, default=2)
    tdot.add_argument("--vertex", default=None)
    for sub in (tn, td, tsp, tdot):
        _add_common(sub)
    t.set_defaults(func=cmd_tree)

    to = subs.add_parser("torus", help="torus orbits and base sequences")
    tos = to.add_subparsers(dest="torus_cmd", required=True)
    orb = tos.add_parser("orbit")
    orb.add_argument("--level", type=int, required=True)
    orb.add_argument("--mode", default="vertex", choices=("vertex", "edge"))
    bs = tos.add_parser("base-seq")
    for sub in (orb, bs):
        _add_common(sub)
    to.set_defaults(func=cmd_torus)

    fo = subs.add_parser("forms", help="forms on the ball")
    fos = fo.add_subparsers(dest="forms_cmd", required=True)
    fe = fos.add_parser("eigen-extend")
    fe.add_argument("--ap", type=int, required=True)
    fe.add_argument("--radius", type=int, required=True)
    fst = fos.add_parser("stabilize")
    fst.add_argument("--form", required=True)
    fst.add_argument("--ap", type=int, required=True)
    fn = fos.add_parser("nu")
    fn.add_argument("--form", required=True)
    for sub in (fe, fst, fn):
        _add_common(sub)
    fo.set_defaults(func=cmd_forms)

    sy = subs.add_parser("synth", help="seeded compatible system")
    sy.add_argument("--mode", required=True, choices=("vertex", "edge"))
    sy.add_argument("--ap", type=int, default=None)
    sy.add_argument("--alpha", type=int, default=None)
    sy.add_argument("--torsion", type=int, default=None)
    sy.add_argument("--level-map", dest="level_map", default="local",
                    choices=("local", "full"))
    _add_common(sy)
    sy.set_defaults(func=cmd_synth)

    cd = subs.add_parser("check-dist", help="exact distribution checker")
    cd.add_argument("--system", required=True)
    _add_common(cd)
    cd.set_defaults(func=cmd_check_dist)

    th = subs.add_parser("theta", help="theta element of a system level")
    th.add_argument("--system", required=True)
    th.add_argument("--level", type=int, required=True)
    th.add_argument("--ordinary", action="store_true")
    _add_common(th)
    th.set_defaults(func=cmd_theta)

    lpp = subs.add_parser("lp", help="L-element theta * theta^*")
    lpp.add_argument("--system", required=True)
    lpp.add_argument("--level", type=int, required=True)
    lpp.add_argument("--kind", default="ordinary",
                     choices=("ordinary", "plus", "minus"))
    _add_common(lpp)
    lpp.set_defaults(func=cmd_lp)

    mu = subs.add_parser("mu", help="mu and lambda invariants")
    mu.add_argument("--element", required=True)
    _add_common(mu)
    mu.set_defaults(func=cmd_mu)

    sp = subs.add_parser("specialize", help="evaluate at a finite-order character")
    sp.add_argument("--element", required=True)
    sp.add_argument("--character", required=True,
                    help='JSON, e.g. {"m":1,"exponents":[1]}')
    _add_common(sp)
    sp.set_defaults(func=cmd_specialize)

    hs = subs.add_parser("howard-scan", help="family nontriviality scan")
    hs.add_argument("--family", required=True)
    hs.add_argument("--prime", default="augmentation",
                    choices=("augmentation", "maximal", "custom"))
    hs.add_argument("--witness", default=None,
                    help="JSON coefficient list for a custom height-one witness")
    hs.add_argument("--k0", type=int, required=True)
    _add_common(hs)
    hs.set_defaults(func=cmd_howard_scan)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ThetaForgeError as exc:
        print(json.dumps({"error": exc.to_json()}))
        return 1
    except (ValueError, KeyError, OSError) as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "detail": str(exc)}}))
        return 1


if __name__ == "__main__":
    sys.exit(main())
