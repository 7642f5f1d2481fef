"""Batch front end: ``mdimlab <command> [--config F] [--seed N] [--out DIR] [--budget N]``.

Exit codes: 0 ok, 1 a check failed, 2 bad configuration.
"""
from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from . import covers, groups, meandim, symbolic, tiling, transport
from .io import (
    ConfigError,
    frac_str,
    load_json,
    measure_from_dict,
    metric_from_dict,
    parse_frac,
    scheme_from_dict,
    scheme_to_dict,
    write_csv,
    write_json,
)
from .simplices import ProductSpec, SimplexError

COMMANDS = ("tile", "folner", "independence", "transport", "lebesgue", "bound", "check")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


@dataclass
class RunConfig:
    raw: dict = field(default_factory=dict)
    base: Path = Path(".")
    seed: int = 0
    out: Path = Path("out")
    budget: int = 2**16

    def section(self, name: str) -> dict:
        v = self.raw.get(name, {})
        if not isinstance(v, Mapping):
            raise ConfigError(f"'{name}' must be an object")
        return dict(v)

    def path(self, p) -> Path:
        p = Path(p)
        return p if p.is_absolute() else self.base / p

    def integer(self, section: dict, key: str, default: int, minimum: int = 0) -> int:
        v = section.get(key, default)
        if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
            raise ConfigError(f"'{key}' must be an integer >= {minimum}")
        return v

    # -- inputs shared by several commands

    def subshift(self) -> symbolic.SubshiftSpec:
        d = self.raw.get("subshift")
        if isinstance(d, str):
            d = load_json(self.path(d))
        if d is None:
            d = {"alphabet": "01", "group": self.raw.get("group", "IntegerLine")}
        try:
            return symbolic.SubshiftSpec.from_dict(d)
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad subshift: {exc}") from None

    def scheme(self, key: str = "tiling") -> tiling.TilingScheme:
        d = self.section(key) or {"kind": "dyadic", "depth": 4}
        kind = d.get("kind", "dyadic")
        try:
            if "path" in d:
                scheme = scheme_from_dict(load_json(self.path(d["path"])))
            elif "scheme" in d:
                scheme = scheme_from_dict(d["scheme"])
            elif kind == "dyadic":
                scheme = tiling.build_dyadic_tiling(self.integer(d, "depth", 4, 2))
            elif kind == "box":
                scheme = tiling.build_box_tiling(self.integer(d, "depth", 3, 2))
            elif kind == "intervals":
                n = self.integer(d, "length", 12, 1)
                sets = tuple(groups.interval(0, m) for m in range(1, n + 1))
                scheme = tiling.TilingScheme(tiling.FolnerData(sets, (0, n)), {})
            else:
                raise ConfigError(f"unknown tiling kind {kind!r}")
        except tiling.TilingError as exc:
            raise ConfigError(f"bad tiling: {exc}") from None
        overrides = d.get("centers", [])
        if overrides:
            group = scheme.group
            centers = dict(scheme.centers)
            for entry in overrides:
                try:
                    key2 = (int(entry["k"]), int(entry["n"]))
                    centers[key2] = groups.FiniteSubset(group, (group.parse(g) for g in entry["c"]))
                except (KeyError, TypeError, ValueError):
                    raise ConfigError(f"bad center override {entry!r}") from None
            scheme = tiling.TilingScheme(scheme.folner, centers)
        return scheme

    def cylinders(self) -> tuple[symbolic.Cylinder, symbolic.Cylinder]:
        spec = self.subshift()
        d = self.section("cylinders")
        a, b = d.get("U0", spec.alphabet[0]), d.get("U1", spec.alphabet[1])
        if a == b or a not in spec.alphabet or b not in spec.alphabet:
            raise ConfigError("cylinders must fix two distinct alphabet symbols")
        return symbolic.Cylinder(a), symbolic.Cylinder(b)


def load_config(path: str | None, seed: int, out: str | None, budget: int | None) -> RunConfig:
    raw: dict = {}
    base = Path(".")
    if path:
        raw = load_json(path)
        if not isinstance(raw, dict):
            raise ConfigError("configuration must be a JSON object")
        base = Path(path).resolve().parent
    cfg = RunConfig(raw=raw, base=base, seed=seed)
    if out is not None:
        cfg.out = Path(out)
    elif "out" in raw:
        cfg.out = cfg.path(raw["out"])
    b = budget if budget is not None else raw.get("budget", 2**16)
    if isinstance(b, bool) or not isinstance(b, int) or b < 1:
        raise ConfigError("budget must be a positive integer")
    cfg.budget = b
    return cfg


# -- commands -----------------------------------------------------------------------


def cmd_tile(cfg: RunConfig) -> int:
    scheme = cfg.scheme()
    v = tiling.verify_tiling(scheme)
    write_json(cfg.out / "scheme.json", scheme_to_dict(scheme))
    pairs = [{"portion": i, "n": n} for i, n in scheme.checkable_pairs()]
    result: dict[str, Any] = {"pairs_checked": pairs, "ok": v is None}
    if v is not None:
        result["violation"] = {
            "n": v.n, "portion": v.portion,
            "overlap": sorted(v.overlap), "gap": sorted(v.gap), "extra": sorted(v.extra),
        }
        print(v)
    else:
        print(f"Ok: {len(pairs)} (portion, n) pairs tile exactly")
    write_json(cfg.out / "tile.json", result)
    return EXIT_OK if v is None else EXIT_FAILED


def cmd_folner(cfg: RunConfig) -> int:
    scheme = cfg.scheme()
    d = cfg.section("folner")
    M = parse_frac(d.get("M", 2))
    group = scheme.group
    gens = [1] if group.family is groups.Family.LINE else [(1, 0), (0, 1)]
    rows = []
    for n, F in enumerate(scheme.folner.sets, 1):
        rows.append([n, len(F)] + [groups.folner_defect(F, g) for g in gens])
    header = ["n", "size"] + [f"defect_{g}".replace(" ", "") for g in gens]
    write_csv(cfg.out / "folner.csv", header, rows)
    sets = scheme.folner.sets
    ok, worst = groups.is_tempered(sets, M) if len(sets) >= 2 else (True, Fraction(0))
    write_json(cfg.out / "tempered.json", {"M": M, "tempered": ok, "worst_ratio": worst, "length": len(sets)})
    print(f"tempered with M={frac_str(M)}: {ok} (worst ratio {frac_str(worst)})")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_independence(cfg: RunConfig) -> int:
    spec = cfg.subshift()
    U0, U1 = cfg.cylinders()
    d = cfg.section("independence")
    if "tiling" not in cfg.raw:
        cfg.raw["tiling"] = {"kind": "intervals", "length": cfg.integer(d, "max_n", 12, 1)}
    sets = cfg.scheme().folner.sets
    try:
        w = symbolic.independence_witness(spec, sets, U0, U1, cfg.budget)
    except symbolic.SubshiftError as exc:
        print(f"independence search failed: {exc}")
        return EXIT_FAILED
    running = w.running_min()
    rows = [
        [r.n, len(r.F), len(r.J), r.delta, m, r.certified, r.optimal, list(r.J)]
        for r, m in zip(w.records, running)
    ]
    write_csv(cfg.out / "independence.csv",
              ["n", "F_size", "J_size", "delta", "running_min", "certified", "optimal", "J"], rows)
    counts = [symbolic.count_patterns(spec, F) for F in sets]
    quotients = groups.ow_limit(lambda F: groups.log2_int(symbolic.count_patterns(spec, F)), sets)
    write_csv(cfg.out / "entropy.csv", ["n", "F_size", "patterns", "log2_quotient"],
              [[n, len(F), c, q] for n, (F, c, q) in enumerate(zip(sets, counts, quotients), 1)])
    write_json(cfg.out / "independence.json", {
        "subshift": spec.to_dict(), "U0": U0.symbol, "U1": U1.symbol,
        "records": [{"n": r.n, "J": list(r.J), "delta": r.delta, "certified": r.certified,
                     "optimal": r.optimal} for r in w.records],
        "running_min": running,
    })
    print(f"{len(rows)} sets, final running min delta {frac_str(running[-1])}")
    return EXIT_OK


def cmd_transport(cfg: RunConfig) -> int:
    d = cfg.section("transport")
    if "path" in d:
        d = load_json(cfg.path(d["path"]))
    try:
        metric = metric_from_dict(d["metric"])
        mu, nu = measure_from_dict(d["mu"]), measure_from_dict(d["nu"])
    except KeyError as exc:
        raise ConfigError(f"transport input lacks {exc.args[0]!r}") from None
    except transport.TransportError as exc:
        raise ConfigError(str(exc)) from None
    for m in (mu, nu):
        if not all(p in metric for p in m.support):
            raise ConfigError("measure charges a point outside the metric")
    primal = transport.wasserstein1(mu, nu, metric)
    dual = transport.kr_dual(mu, nu, metric)
    write_json(cfg.out / "transport.json", {
        "primal": primal.value, "dual": dual, "equal": primal.value == dual,
        "plan": [[p.source, p.target, p.mass] for p in primal.plan],
    })
    print(frac_str(primal.value))
    print(frac_str(dual))
    return EXIT_OK if primal.value == dual else EXIT_FAILED


def cmd_lebesgue(cfg: RunConfig) -> int:
    d = cfg.section("lebesgue")
    specs = d.get("specs", [[2], [3], [2, 2]])
    max_el = cfg.integer(d, "max_elements", 6, 1)
    max_r = cfg.integer(d, "max_resolution", 3, 1)
    samples = cfg.integer(d, "samples", 1000, 0)
    rng = random.Random(cfg.seed)
    rows, details, failed = [], [], False
    for ks in specs:
        try:
            spec = ProductSpec(tuple(ks))
        except (SimplexError, TypeError) as exc:
            raise ConfigError(f"bad product {ks!r}: {exc}") from None
        res = covers.min_separating_order(spec, max_el, max_r)
        claim_ok, checked = True, 0
        for w in res.witnesses:
            rep = covers.boundary_claim_check(w, covers.boundary_samples(spec, samples, rng))
            claim_ok &= rep.ok
            checked += rep.checked
        classical_ok = res.min_order is not None and res.min_order >= spec.dim
        failed |= not (classical_ok and claim_ok)
        rows.append([str(spec), spec.dim, spec.sum_k_bound, res.min_order, classical_ok,
                     res.sum_k_bound_holds, res.enumerated, checked, claim_ok])
        details.append({
            "spec": list(spec.ks), "min_order": res.min_order, "dim": spec.dim,
            "sum_k_bound": spec.sum_k_bound, "sum_k_bound_holds": res.sum_k_bound_holds,
            "enumerated": res.enumerated, "witness": res.witness.to_dict() if res.witness else None,
            "claim_samples": checked, "claim_ok": claim_ok,
        })
        print(f"{spec}: min order {res.min_order} (dim {spec.dim}, sum-k bound {spec.sum_k_bound})")
    write_csv(cfg.out / "lebesgue.csv",
              ["product", "dim", "sum_k_bound", "min_order", "classical_ok", "sum_k_bound_holds",
               "covers_enumerated", "claim_samples", "claim_ok"], rows)
    write_json(cfg.out / "lebesgue.json", {"max_elements": max_el, "max_resolution": max_r, "results": details})
    return EXIT_FAILED if failed else EXIT_OK


def cmd_bound(cfg: RunConfig) -> int:
    spec = cfg.subshift()
    U0, U1 = cfg.cylinders()
    scheme = cfg.scheme()
    v = tiling.verify_tiling(scheme)
    if v is not None:
        print(v)
        return EXIT_FAILED
    delta = cfg.raw.get("delta")
    delta = parse_frac(delta) if delta is not None else None
    try:
        rep = meandim.bound_report(spec, scheme, delta, U0, U1, cfg.budget)
    except (meandim.BoundError, symbolic.SubshiftError) as exc:
        print(f"bound pipeline failed: {exc}")
        return EXIT_FAILED
    write_csv(cfg.out / "bound.csv",
              ["portion", "n", "F_n", "J_n", "delta_n", "certified", "F_j_sizes", "C_counts",
               "dense_counts", "gamma", "epsilon", "order_sum", "dim_lower_bound", "dim_over_F_n", "lemma45"],
              [[r.portion, r.n, r.F_n, r.J_n, r.delta_n, r.certified, r.F_sizes, r.centers, r.dense,
                r.gamma, r.epsilon, r.order_sum, r.dim_bound, r.ratio, r.lemma45] for r in rep.rows])
    write_csv(cfg.out / "portions.csv",
              ["portion", "js", "F_j_sizes", "min_F_j", "delta", "gamma", "epsilon", "mdim_lower_bound"],
              [[p.portion, p.js, p.F_sizes, min(p.F_sizes), p.delta, p.gamma, p.epsilon, p.mdim_bound]
               for p in rep.portions])
    ok = all(r.lemma45 for r in rep.rows)
    write_json(cfg.out / "bound_summary.json", {
        "subshift": spec.to_dict(),
        "rows": len(rep.rows),
        "lemma45_all": ok,
        "mdim_lower_bounds": [{"portion": p.portion, "F_j_sizes": p.F_sizes, "bound": p.mdim_bound}
                              for p in rep.portions],
    })
    for p in rep.portions:
        print(f"portion {p.portion} |F_j|={p.F_sizes}: mdim >= {frac_str(p.mdim_bound)}")
    return EXIT_OK if ok else EXIT_FAILED


def run_checks(inst: meandim.LnInstance, rng: random.Random, samples: int, gamma_samples: int) -> dict:
    """All lemma checks on one instance; every entry carries an ``ok`` flag."""
    out: dict[str, Any] = {}
    recon = lemma42 = lemma43 = 0
    bad: list = []
    for s in range(samples):
        ts = meandim.random_point(inst, rng)
        m = rng.randrange(len(inst.blocks))
        k = inst.blocks[m].k
        if k < 2:
            continue
        I = rng.sample(range(k), rng.randint(1, k - 1))
        d = meandim.decompose_measure(inst, ts, m, I)
        if meandim.reconstruct(d) != meandim.xi_embed(inst, ts):
            bad.append(("reconstruction", s))
        recon += 1
        r = meandim.lemma42_check(inst, ts, m, I)
        if not r.ok:
            bad.append(("lemma42", s))
        lemma42 += 1
        # a point close to a facet, so that the premise of the next check bites
        u = rng.randrange(k)
        small = Fraction(1, rng.randint(8, 64))
        ts2 = list(ts)
        rest = meandim.random_slot(rng, k, 2, zeros=[u])
        ts2[m] = tuple(small if a == u else (1 - small) * rest[a] for a in range(k))
        removed = {u} if k == 2 else {u} | set(rng.sample([a for a in range(k) if a != u], rng.randint(0, 1)))
        r3 = meandim.lemma43_check(inst, ts2, m, removed, inst.epsilon)
        if not r3.ok:
            bad.append(("lemma43", s))
        lemma43 += 1
    out["reconstruction"] = {"checked": recon, "ok": not any(b[0] == "reconstruction" for b in bad)}
    out["lemma42"] = {"checked": lemma42, "ok": not any(b[0] == "lemma42" for b in bad)}
    out["lemma43"] = {"checked": lemma43, "ok": not any(b[0] == "lemma43" for b in bad)}
    out["lemma45"] = {"ok": meandim.lemma45_check(len(inst.F_n), len(inst.J), inst.delta, inst.blocks)}
    pts = [meandim.random_point(inst, rng) for _ in range(min(samples, 16))]
    D = meandim.pairwise_wf(inst, [meandim.xi_embed(inst, t) for t in pts])
    balls = meandim.greedy_balls(D, inst.epsilon / 2)
    probe = meandim.lemma44_probe(inst, pts, balls, D)
    out["lemma44_probe"] = {"balls": len(balls), "max_diameter": probe.max_diameter,
                            "ok": probe.ok and probe.max_diameter <= inst.epsilon}
    g = meandim.verify_gamma(inst.spec, inst.portion_sets, inst.gamma, gamma_samples, rng)
    out["gamma_check"] = {"pairs": g.pairs, "worst": g.worst, "ok": g.ok}
    out["failures"] = [list(b) for b in bad]
    return out


def cmd_check(cfg: RunConfig) -> int:
    spec = cfg.subshift()
    U0, U1 = cfg.cylinders()
    d = cfg.section("check")
    if "tiling" not in cfg.raw:
        cfg.raw["tiling"] = {"kind": "dyadic", "depth": 2}
    scheme = cfg.scheme()
    portion = cfg.integer(d, "portion", 0)
    n = cfg.integer(d, "n", scheme.folner.bounds[portion + 1] + 1 if portion + 1 < len(scheme.folner.bounds) else 2, 1)
    caps = cfg.section("caps")
    max_j = cfg.integer(caps, "max_j", 4, 1)
    samples = cfg.integer(caps, "samples", 12, 1)
    try:
        inst = meandim.build_instance(spec, scheme, portion, n, U0, U1, d.get("J"), max_j, cfg.budget)
    except (meandim.BoundError, tiling.TilingError, symbolic.SubshiftError) as exc:
        raise ConfigError(f"cannot build instance: {exc}") from None
    result = run_checks(inst, random.Random(cfg.seed), samples, cfg.integer(caps, "gamma_samples", 200, 1))
    ok = all(v["ok"] for k, v in result.items() if isinstance(v, dict))
    result.update({
        "n": n, "portion": portion, "J": list(inst.J), "k": list(inst.ks), "gamma": inst.gamma,
        "epsilon": inst.epsilon, "diam": inst.diam, "seed": cfg.seed, "ok": ok,
    })
    write_json(cfg.out / "check.json", result)
    for key, v in result.items():
        if isinstance(v, dict):
            print(f"{key}: {'ok' if v['ok'] else 'FAILED'}")
    return EXIT_OK if ok else EXIT_FAILED


HANDLERS = {
    "tile": cmd_tile, "folner": cmd_folner, "independence": cmd_independence,
    "transport": cmd_transport, "lebesgue": cmd_lebesgue, "bound": cmd_bound, "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mdimlab", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--seed", type=int, default=0, help="seed for all sampling (default 0)")
    p.add_argument("--out", help="output directory (default: config 'out' or ./out)")
    p.add_argument("--budget", type=int, help="certification / search budget")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config, args.seed, args.out, args.budget)
        return HANDLERS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
