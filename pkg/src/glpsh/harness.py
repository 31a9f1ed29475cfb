"""Verification harness: a registry of exact checks streaming one report per instance.

Each check splits into instances (small JSON-able descriptors) and a pure
runner.  Instances are generated in a fixed order and, when a worker pool is
used, results are merged back into that order, so a run is byte-for-byte
reproducible for a given configuration.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache

from .cyclo import Cyclotomic
from .classfn import hc_restrict, hc_restriction_map, schur_inner
from .field import DEFAULT_ORDER_CAP
from .graded import coassociativity, hc_component, hopf_square, m_plus, parabolic_product
from .groups import (
    DEFAULT_SUBGROUP_CAP,
    CapExceeded,
    GroupError,
    LinearCharacter,
    Subgroup,
    block_parabolic,
    character_from_generators,
    gl,
    linear_characters,
    parse_group_spec,
    product_group,
)
from .hyperhecke import (
    HHElement,
    HHTriple,
    canonical_triples,
    check_condition,
    check_triple,
    compose,
    element_matches_map,
    factorization,
    hh_comul,
    hh_comul_element,
    hh_join,
    is_equivariant,
    join_element,
    projected_line_map,
    reconstruct_line_map,
    same_line_maps,
    to_module_map,
    triple_normalize,
)
from .indmod import (
    b_of_m_star_plus,
    build_induced,
    line_orbits,
    line_span_hc_character,
    line_span_levi_character,
    u_fixed_subspace,
)
from .rplus import (
    MonomialSum,
    b_map,
    b_pair,
    basis,
    boltje_form,
    brauer_induction,
    canonicalize_pair,
    induced_sum_oracle,
    sort_key,
)

STATUSES = ("pass", "fail", "vacuous", "skipped")
DEFAULT_INDUCED_DIM_CAP = 2000


class ConfigError(ValueError):
    """Bad run configuration (exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    group: str | None = None
    cap_order: int = DEFAULT_ORDER_CAP
    cap_subgroups: int = DEFAULT_SUBGROUP_CAP
    cap_induced_dim: int = DEFAULT_INDUCED_DIM_CAP
    central: str | None = None
    sl_intersect: bool = False
    literal_mplus: bool = False
    format: str = "json"
    checks: tuple | None = None
    seed: int = 0
    jobs: int = 1
    timing: bool = False
    sample: int = 24

    def validate(self) -> "RunConfig":
        for name in ("cap_order", "cap_subgroups", "cap_induced_dim", "jobs", "sample"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name.replace('_', '-')} must be positive")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.checks is not None:
            unknown = [c for c in self.checks if c not in REGISTRY]
            if unknown:
                raise ConfigError(f"unknown checks: {', '.join(unknown)}")
        if self.group is not None:
            try:
                parse_group_spec(self.group, cap=10**12)
            except GroupError as exc:
                raise ConfigError(str(exc)) from exc
        if self.central is not None:
            parse_phibar_spec(self.central)
        return self


@dataclass
class Report:
    check: str
    instance: dict
    status: str
    experimental: bool = False
    witness: object = None
    detail: dict = field(default_factory=dict)
    seconds: float | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if (self.status == "fail") != (self.witness is not None):
            raise ValueError("witness must be present exactly when the status is fail")

    def to_dict(self) -> dict:
        d = {
            "check": self.check,
            "instance": self.instance,
            "status": self.status,
            "experimental": self.experimental,
        }
        if self.witness is not None:
            d["witness"] = self.witness
        if self.detail:
            d["detail"] = self.detail
        if self.seconds is not None:
            d["seconds"] = round(self.seconds, 3)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


CSV_COLUMNS = ("check", "status", "experimental", "instance", "witness", "detail", "seconds")


def csv_row(rep: Report) -> list:
    d = rep.to_dict()
    enc = lambda v: "" if v is None else json.dumps(v, sort_keys=True, separators=(",", ":"))
    return [
        d["check"],
        d["status"],
        "1" if d["experimental"] else "0",
        enc(d["instance"]),
        enc(d.get("witness")),
        enc(d.get("detail")),
        "" if "seconds" not in d else str(d["seconds"]),
    ]


# -- central characters ---------------------------------------------------------------


def parse_phibar_spec(spec: str):
    """"trivial" or "N:e1,e2,..." (exponents of zeta_N on the generators of Z(G))."""
    s = spec.strip()
    if s in ("", "trivial", "1"):
        return None
    try:
        n, rest = s.split(":", 1)
        N = int(n)
        exps = tuple(int(x) for x in rest.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"malformed central character spec {spec!r}") from exc
    if N <= 0:
        raise ConfigError("central character level must be positive")
    return N, exps


def central_character(G, spec: str | None) -> LinearCharacter | None:
    """The character of Z(G) described by spec, extended from generator values."""
    if spec is None:
        return None
    parsed = parse_phibar_spec(spec)
    if parsed is None:
        return None
    N, gexps = parsed
    Z = G.center
    gens = Z.generators()
    if len(gens) != len(gexps):
        raise ConfigError(f"Z({G.label}) has {len(gens)} generators, got {len(gexps)} exponents")
    try:
        return character_from_generators(G, gens, N, gexps)
    except GroupError as exc:
        raise ConfigError(f"central character spec: {exc}") from exc


# -- shared instance data (cached per process) --------------------------------------


@lru_cache(maxsize=None)
def _group(spec: str, cap: int):
    return parse_group_spec(spec, cap=cap)


@lru_cache(maxsize=None)
def _pairs(spec: str, cfg: RunConfig, central: bool):
    G = _group(spec, cfg.cap_order)
    if cfg.central is not None:
        return basis(G, cfg.cap_subgroups, True, central_character(G, cfg.central))
    return basis(G, cfg.cap_subgroups, central)


@lru_cache(maxsize=None)
def _triples(spec: str, cfg: RunConfig, central: bool):
    return canonical_triples([p.phi for p in _pairs(spec, cfg, central)])


@lru_cache(maxsize=None)
def _triples_by_target(spec: str, cfg: RunConfig, central: bool):
    out = {}
    for y in _triples(spec, cfg, central):
        out.setdefault(y.target, []).append(y)
    return out


def _spec(n: int, q: int) -> str:
    return f"gl:{n}:{q}"


def _rplus_groups(cfg: RunConfig):
    """(group spec, central flag) for the R_+ level checks."""
    if cfg.group is not None:
        return [(cfg.group, False)]
    return [("gl:2:2", False), ("gl:2:3", False)]


def _line_groups(cfg: RunConfig):
    if cfg.group is not None:
        return [(cfg.group, False)]
    return [("gl:2:2", False), ("gl:2:3", True), ("gl:3:2", False)]


def _hh_groups(cfg: RunConfig):
    if cfg.group is not None:
        return [(cfg.group, False)]
    return [("gl:2:2", False), ("gl:2:3", False)]


def _hh_comul_groups(cfg: RunConfig):
    if cfg.group is not None:
        return [(cfg.group, False)]
    return [("gl:2:2", False), ("gl:2:3", True)]


def _hh_condition_groups(cfg: RunConfig):
    if cfg.group is not None:
        return [(cfg.group, False)]
    return [("gl:2:2", False), ("gl:2:3", True), ("gl:3:2", False), ("gl:3:3", False)]


def _graded_range(cfg: RunConfig):
    """(q values, maximal total degree) for the graded checks."""
    if cfg.group is not None:
        G = parse_group_spec(cfg.group, cap=10**12)
        return (G.q,), G.n
    return (2, 3), 3


def _splits_for(G):
    """Per-factor two-block splits with at least one proper block split."""
    ranges = [range(a + 1) for a in G.parts]
    out = []
    for alphas in itertools.product(*ranges):
        if any(0 < al < a for al, a in zip(alphas, G.parts)):
            out.append(tuple((al, a - al) for al, a in zip(alphas, G.parts)))
    return out


def _skip(name, inst, exc, experimental=False):
    return Report(name, inst, "skipped", experimental, detail={"reason": str(exc)})


def _guard_groups(name, groups, cfg, experimental, build):
    """Yield instances from build(spec, central); a cap failure becomes one skipped record."""
    for spec, central in groups:
        try:
            yield from build(spec, central)
        except CapExceeded as exc:
            yield _skip(name, {"group": spec}, exc, experimental)


# -- R_+ checks ------------------------------------------------------------------------


def _inst_pairs(name, groups_fn, experimental=False):
    def instances(cfg):
        def build(spec, central):
            for i, _ in enumerate(_pairs(spec, cfg, central)):
                yield {"group": spec, "central": central, "pair": i}

        yield from _guard_groups(name, groups_fn(cfg), cfg, experimental, build)

    return instances


@lru_cache(maxsize=None)
def _oracle(p):
    return induced_sum_oracle(p.H, p.phi)


def run_mackey(cfg, inst):
    B = _pairs(inst["group"], cfg, inst["central"])
    x = B[inst["pair"]]
    X = MonomialSum.of(x)
    for y in B:
        lhs = b_map(X * MonomialSum.of(y))
        rhs = _oracle(x) * _oracle(y)
        if lhs != rhs:
            return "fail", {"x": x.key_string, "y": y.key_string, "b(xy)": lhs.to_json(), "oracle": rhs.to_json()}, {}
    return "pass", None, {"partners": len(B)}


def run_adjunction(cfg, inst):
    B = _pairs(inst["group"], cfg, inst["central"])
    sigma = B[inst["pair"]]
    rho = b_pair(sigma)
    res = brauer_induction(rho, cfg.cap_subgroups)
    if not res.in_image:
        return "fail", {"sigma": sigma.key_string, "reason": "not in the image"}, {}
    if b_map(res.element) != rho:
        return "fail", {"sigma": sigma.key_string, "reason": "b(a(rho)) != rho", "a": res.element.to_json()}, {}
    for tau in B:
        lhs = boltje_form(tau, res.element)
        rhs = schur_inner(b_pair(tau), rho)
        if rhs != lhs:
            return "fail", {"sigma": sigma.key_string, "tau": tau.key_string, "form": str(lhs), "inner": repr(rhs)}, {}
    return "pass", None, {"integral": res.integral, "terms": len(res.element)}


# -- graded checks -----------------------------------------------------------------------


def _degree_pairs(cfg):
    qs, top = _graded_range(cfg)
    for q in qs:
        for total in range(2, top + 1):
            for a in range(1, total):
                yield q, a, total - a


def inst_hopf(cfg):
    for q, a, b in _degree_pairs(cfg):
        try:
            na = len(basis(gl(a, q, cfg.cap_order), cfg.cap_subgroups))
            nb = len(basis(gl(b, q, cfg.cap_order), cfg.cap_subgroups))
            product_group((a + b,), q, cfg.cap_order)
        except CapExceeded as exc:
            yield _skip("hopf-square", {"q": q, "a": a, "b": b}, exc)
            continue
        for i in range(na):
            for j in range(nb):
                yield {"q": q, "a": a, "b": b, "f": i, "g": j}


def run_hopf(cfg, inst):
    q, a, b = inst["q"], inst["a"], inst["b"]
    f = b_pair(basis(gl(a, q, cfg.cap_order), cfg.cap_subgroups)[inst["f"]])
    g = b_pair(basis(gl(b, q, cfg.cap_order), cfg.cap_subgroups)[inst["g"]])
    for out in hopf_square(f, g):
        if not out.equal:
            return "fail", {"s": out.instance["s"], **out.witness}, {}
    return "pass", None, {}


def _sampled(cfg, tag, items):
    items = list(items)
    if len(items) <= 2 * cfg.sample:
        return items
    rng = random.Random(f"{cfg.seed}:{tag}")
    return sorted(rng.sample(items, cfg.sample))


def inst_mplus_b(cfg):
    for q, a, b in _degree_pairs(cfg):
        try:
            na = len(basis(gl(a, q, cfg.cap_order), cfg.cap_subgroups))
            nb = len(basis(gl(b, q, cfg.cap_order), cfg.cap_subgroups))
            product_group((a + b,), q, cfg.cap_order)
        except CapExceeded as exc:
            yield _skip("mplus-b", {"q": q, "a": a, "b": b}, exc)
            continue
        for i, j in _sampled(cfg, f"mplus:{q}:{a}:{b}", itertools.product(range(na), range(nb))):
            yield {"q": q, "a": a, "b": b, "p": i, "r": j, "literal": cfg.literal_mplus}


def run_mplus_b(cfg, inst):
    q, a, b = inst["q"], inst["a"], inst["b"]
    p = basis(gl(a, q, cfg.cap_order), cfg.cap_subgroups)[inst["p"]]
    r = basis(gl(b, q, cfg.cap_order), cfg.cap_subgroups)[inst["r"]]
    prod = m_plus(MonomialSum.of(p), MonomialSum.of(r), literal=inst["literal"])
    lhs = b_map(prod)
    rhs = parabolic_product(b_pair(p), b_pair(r))
    if lhs != rhs:
        return "fail", {
            "p": p.key_string,
            "r": r.key_string,
            "b(m_plus)": lhs.to_json(),
            "m(b,b)": rhs.to_json(),
            "degrees": [str(lhs.degree), str(rhs.degree)],
        }, {}
    return "pass", None, {}


def _compositions3(a, allow_zero):
    lo = 0 if allow_zero else 1
    for x in range(lo, a + 1):
        for y in range(lo, a - x + 1):
            z = a - x - y
            if z < lo:
                continue
            if sum(1 for v in (x, y, z) if v) >= 2:
                yield (x, y, z)


def inst_mstar_r_coassoc(cfg):
    qs, top = _graded_range(cfg)
    for q in qs:
        for a in range(2, top + 1):
            try:
                n = len(basis(gl(a, q, cfg.cap_order), cfg.cap_subgroups))
            except CapExceeded as exc:
                yield _skip("mstar-coassoc", {"q": q, "a": a}, exc)
                continue
            for parts in _compositions3(a, allow_zero=False):
                for i in range(n):
                    yield {"q": q, "a": a, "parts": list(parts), "pair": i}


def run_mstar_r_coassoc(cfg, inst):
    q, a = inst["q"], inst["a"]
    al, be, ga = inst["parts"]
    f = b_pair(basis(gl(a, q, cfg.cap_order), cfg.cap_subgroups)[inst["pair"]])
    direct = hc_restriction_map(f.group, ((al, be, ga),))(f)
    first = hc_component(f, (al,))
    left = hc_restriction_map(first.group, ((al,), (be, ga)))(first)
    first = hc_component(f, (al + be,))
    right = hc_restriction_map(first.group, ((al, be), (ga,)))(first)
    if direct != left or direct != right:
        return "fail", {"direct": direct.to_json(), "left": left.to_json(), "right": right.to_json()}, {}
    return "pass", None, {}


# -- line orbits and fixed subspaces -----------------------------------------------------


def inst_lines(name, experimental=False):
    def instances(cfg):
        def build(spec, central):
            G = _group(spec, cfg.cap_order)
            B = _pairs(spec, cfg, central)
            for splits in _splits_for(G):
                for i, p in enumerate(B):
                    inst = {"group": spec, "central": central, "splits": [list(s) for s in splits], "pair": i}
                    if G.order // p.H.order > cfg.cap_induced_dim:
                        yield _skip(name, inst, f"induced dimension {G.order // p.H.order} over the cap", experimental)
                    else:
                        yield inst

        yield from _guard_groups(name, _line_groups(cfg), cfg, experimental, build)

    return instances


def _line_data(cfg, inst):
    G = _group(inst["group"], cfg.cap_order)
    p = _pairs(inst["group"], cfg, inst["central"])[inst["pair"]]
    splits = tuple(tuple(s) for s in inst["splits"])
    pd = block_parabolic(G, splits)
    ls = line_orbits(p.H, p.phi, pd, cfg.sl_intersect)
    return G, p, splits, pd, ls


def run_fixed_subspace(cfg, inst):
    G, p, splits, pd, ls = _line_data(cfg, inst)
    M = build_induced(p.H, p.phi)
    expected = hc_restrict(b_pair(p), splits=splits)
    fixed = u_fixed_subspace(M, pd, cfg.sl_intersect).character()
    span_hc = line_span_hc_character(ls, cfg.sl_intersect)
    span_levi = line_span_levi_character(ls)
    b_m = b_of_m_star_plus(ls)
    bad = {}
    if fixed != expected:
        bad["u_fixed"] = fixed.to_json()
    if span_hc != expected:
        bad["line_span_fixed"] = span_hc.to_json()
    if span_levi != b_m:
        bad["line_span_levi"] = span_levi.to_json()
        bad["b_m_star_plus"] = b_m.to_json()
    if bad:
        return "fail", {"pair": p.key_string, "hc_restrict": expected.to_json(), **bad}, {}
    return "pass", None, {}


def run_line_orbits(cfg, inst):
    G, p, splits, pd, ls = _line_data(cfg, inst)
    M = build_induced(p.H, p.phi)
    fixed = u_fixed_subspace(M, pd, cfg.sl_intersect)
    detail = {
        "lines": ls.total_lines,
        "orbit_sum": ls.orbit_sum(),
        "valid_cosets": len(ls.valid_cosets),
        "fixed_dim": fixed.dim,
        "orbits": len(ls.orbits),
    }
    if detail["lines"] != detail["orbit_sum"] or detail["fixed_dim"] != detail["valid_cosets"]:
        return "fail", {"pair": p.key_string, **detail}, {}
    return "pass", None, detail


def run_stabilizer_characters(cfg, inst):
    G, p, splits, pd, ls = _line_data(cfg, inst)
    if not ls.orbits:
        return "vacuous", None, {}
    bad = [
        {"line": o.chosen, "stabilizer_order": o.stabilizer.order, "character": o.pair.to_json()}
        for o in ls.orbits
        if not o.character.is_trivial
    ]
    if bad:
        return "fail", {"pair": p.key_string, "nontrivial": bad}, {}
    return "pass", None, {"orbits": len(ls.orbits)}


def run_coassoc_plus(cfg, inst):
    p = _coassoc_pair(cfg, inst)
    direct, left, right = coassociativity(p, tuple(inst["parts"]), cfg.sl_intersect)
    if direct != left or direct != right:
        return "fail", {
            "pair": p.key_string,
            "direct": direct.to_json(),
            "via_left": left.to_json(),
            "via_right": right.to_json(),
        }, {}
    return "pass", None, {}


@lru_cache(maxsize=None)
def _pair_pool(a: int, q: int, cap_order: int, cap_induced_dim: int) -> tuple:
    """Canonical pairs of G(a) for groups whose subgroup lattice is over the cap.

    Cyclic subgroups generated by class representatives, the Borel subgroup and
    the unipotent radicals of the standard parabolics, each with all of its
    linear characters.  Subgroups of index above the induced-dimension cap are
    left out.
    """
    G = gl(a, q, cap_order)
    subs = {}
    for x in G.class_reps.tolist():
        e = tuple(G.generate([x]).tolist())
        subs.setdefault(e, Subgroup(G, e))
    for splits in [((1,) * a,)] + [((al, a - al),) for al in range(1, a)]:
        pd = block_parabolic(G, splits)
        subs.setdefault(pd.U.elements, pd.U)
        if len(splits[0]) == a:
            subs.setdefault(pd.P.elements, pd.P)
    found = {}
    for H in subs.values():
        if G.order // H.order > cap_induced_dim:
            continue
        for phi in linear_characters(H):
            p = canonicalize_pair(H, phi)
            found.setdefault(p.key, p)
    return tuple(sorted(found.values(), key=sort_key))


def _coassoc_pair(cfg, inst):
    if inst.get("pool") == "sampled":
        return _pair_pool(inst["a"], inst["q"], cfg.cap_order, cfg.cap_induced_dim)[inst["pair"]]
    return basis(gl(inst["a"], inst["q"], cfg.cap_order), cfg.cap_subgroups)[inst["pair"]]


def inst_coassoc_plus(cfg):
    qs, top = _graded_range(cfg)
    for q in qs:
        for a in range(2, top + 1):
            parts = list(_compositions3(a, allow_zero=True))
            try:
                n = len(basis(gl(a, q, cfg.cap_order), cfg.cap_subgroups))
            except CapExceeded:
                # the lattice is out of reach; fall back to a seeded sample
                # from a pool of pairs built without it
                try:
                    pool = _pair_pool(a, q, cfg.cap_order, cfg.cap_induced_dim)
                except CapExceeded as exc:
                    yield _skip("coassoc-mstar-plus", {"q": q, "a": a}, exc, True)
                    continue
                items = itertools.product(range(len(pool)), range(len(parts)))
                for i, k in _sampled(cfg, f"coassoc-pool:{q}:{a}", items):
                    yield {"q": q, "a": a, "parts": list(parts[k]), "pair": i, "pool": "sampled"}
                continue
            for pt in parts:
                for i in range(n):
                    yield {"q": q, "a": a, "parts": list(pt), "pair": i}


# -- hyperHecke checks ---------------------------------------------------------------------


def _inst_triples(name, groups_fn, experimental=False, with_splits=False):
    def instances(cfg):
        def build(spec, central):
            G = _group(spec, cfg.cap_order)
            T = _triples(spec, cfg, central)
            split_list = _splits_for(G) if with_splits else [None]
            for splits in split_list:
                for i, _ in enumerate(T):
                    inst = {"group": spec, "central": central, "triple": i}
                    if splits is not None:
                        inst["splits"] = [list(s) for s in splits]
                    yield inst

        yield from _guard_groups(name, groups_fn(cfg), cfg, experimental, build)

    return instances


def _normalization_witness(t: HHTriple, exhaustive_limit: int = 64):
    """Check [(K,psi), h g k, (H,phi)] = phi(h)^-1 psi(k)^-1 [(K,psi), g, (H,phi)]."""
    G = t.group
    H, K = t.target.subgroup, t.source.subgroup
    if H.order * K.order <= exhaustive_limit:
        hs, ks = list(H.elements), list(K.elements)
    else:
        hs = [G.identity] + [int(x) for x in H.generators()]
        ks = [G.identity] + [int(x) for x in K.generators()]
    T = to_module_map(t)
    N = t.target.N * t.source.N
    for h in hs:
        for k in ks:
            g2 = G.prod(int(h), t.g, int(k))
            t2 = HHTriple(t.source, g2, t.target)
            scalar, t0 = triple_normalize(t2)
            e = -(t.target.exp_at(int(h), N) + t.source.exp_at(int(k), N))
            predicted = HHElement.of(t, _zeta(N, e))
            if HHElement.of(t0, scalar) != predicted:
                return {"h": int(h), "k": int(k), "normalized": HHElement.of(t0, scalar).to_json()}
            if to_module_map(t2) != T.scaled(e % N, N):
                return {"h": int(h), "k": int(k), "reason": "module maps disagree"}
    return None


def _zeta(N, e):
    return Cyclotomic.zeta(N, e % N)


def run_hh_relations(cfg, inst):
    T = _triples(inst["group"], cfg, inst["central"])
    by_target = _triples_by_target(inst["group"], cfg, inst["central"])
    x = T[inst["triple"]]
    if not is_equivariant(x):
        return "fail", {"x": x.to_json(), "reason": "module map not equivariant"}, {}
    wit = _normalization_witness(x)
    if wit is not None:
        return "fail", {"x": x.to_json(), "reason": "normalization", **wit}, {}
    left, right = factorization(x)
    if compose(HHElement.of(left), HHElement.of(right)) != HHElement.of(x):
        return "fail", {"x": x.to_json(), "reason": "factorization", "left": left.to_json(), "right": right.to_json()}, {}
    Mx = to_module_map(x)
    partners = by_target.get(x.source, ())
    for y in partners:
        z = compose(HHElement.of(x), HHElement.of(y))
        if not element_matches_map(z, to_module_map(y).then(Mx)):
            return "fail", {"x": x.to_json(), "y": y.to_json(), "reason": "compose", "xy": z.to_json()}, {}
    return "pass", None, {"partners": len(partners)}


def run_hh_comul_hom(cfg, inst):
    T = _triples(inst["group"], cfg, inst["central"])
    by_target = _triples_by_target(inst["group"], cfg, inst["central"])
    splits = tuple(tuple(s) for s in inst["splits"])
    sl = cfg.sl_intersect
    x = T[inst["triple"]]
    mx = hh_comul(x, splits, sl)
    if not same_line_maps(reconstruct_line_map(mx, x, splits, sl), projected_line_map(x, splits, sl)):
        return "fail", {"x": x.to_json(), "reason": "matrix does not reproduce the projected map"}, {}
    partners = by_target.get(x.source, ())
    for y in partners:
        z = compose(HHElement.of(x), HHElement.of(y))
        lhs = hh_comul_element(z, splits, sl)
        rhs = mx @ hh_comul(y, splits, sl)
        if lhs != rhs:
            return "fail", {"x": x.to_json(), "y": y.to_json(), "comul(xy)": lhs.to_json(), "product": rhs.to_json()}, {}
    return "pass", None, {"partners": len(partners)}


def run_hh_condition(cfg, inst):
    """Source condition holding while the target condition fails is reported as fail."""
    T = _triples(inst["group"], cfg, inst["central"])
    x = T[inst["triple"]]
    splits = tuple(tuple(s) for s in inst["splits"])
    rows = check_condition(x, splits, cfg.sl_intersect)
    forward = [t for t, src, tgt in rows if tgt and not src]
    converse = [t for t, src, tgt in rows if src and not tgt]
    detail = {"cosets": len(rows), "source_holds": sum(1 for _, s, _ in rows if s)}
    if forward or converse:
        return "fail", {
            "x": x.to_json(),
            "target_without_source": forward,
            "source_without_target": converse,
        }, detail
    if detail["source_holds"] == 0:
        return "vacuous", None, detail
    return "pass", None, detail


# -- the parabolic product square ----------------------------------------------------------


@lru_cache(maxsize=None)
def _square_pool(q: int, cap_order: int, cap_subgroups: int):
    """All valid triples over G(1) (every g, not only double coset minima) and
    their composable pairs."""
    G = gl(1, q, cap_order)
    chars = [p.phi for p in basis(G, cap_subgroups)]
    triples = []
    for a in chars:
        for b in chars:
            for g in range(G.order):
                if check_triple(a, g, b)[0]:
                    triples.append(HHTriple(a, g, b))
    comp = [(x, y) for x in triples for y in triples if x.source == y.target]
    return triples, comp


def _square(x1, x2, x3, x4, promote):
    a = join_element(compose(HHElement.of(x1), HHElement.of(x2)), compose(HHElement.of(x3), HHElement.of(x4)), promote)
    b = compose(HHElement.of(hh_join(x1, x3, promote)), HHElement.of(hh_join(x2, x4, promote)))
    return a, b


def inst_hh_square(cfg):
    qs = (3,) if cfg.group is None else _graded_range(cfg)[0]
    for q in qs:
        try:
            _, comp = _square_pool(q, cfg.cap_order, cfg.cap_subgroups)
            product_group((2,), q, cfg.cap_order)
        except CapExceeded as exc:
            yield _skip("hh-square", {"q": q}, exc)
            continue
        for i in range(len(comp)):
            yield {"q": q, "left": i, "mode": "exhaustive"}
        pairs = list(itertools.product(range(len(comp)), repeat=2))
        rng = random.Random(f"{cfg.seed}:square:{q}")
        for i, j in sorted(rng.sample(pairs, min(cfg.sample, len(pairs)))):
            yield {"q": q, "left": i, "right": j, "mode": "sampled"}


def run_hh_square(cfg, inst):
    _, comp = _square_pool(inst["q"], cfg.cap_order, cfg.cap_subgroups)
    x1, x2 = comp[inst["left"]]
    if inst["mode"] == "exhaustive":
        rights, promote = comp, False
    else:
        rights, promote = [comp[inst["right"]]], True
    for x3, x4 in rights:
        a, b = _square(x1, x2, x3, x4, promote)
        if a != b:
            return "fail", {
                "quadruple": [t.to_json() for t in (x1, x2, x3, x4)],
                "join_of_products": a.to_json(),
                "product_of_joins": b.to_json(),
            }, {}
    return "pass", None, {"quadruples": len(rights)}


# -- registry and driver -------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    instances: object
    run: object
    experimental: bool = False
    about: str = ""


REGISTRY: dict = {}


def register(check: Check):
    REGISTRY[check.name] = check
    return check


register(Check("mackey", _inst_pairs("mackey", _rplus_groups), run_mackey, about="b(xy) = b(x) b(y) against the induced-character oracle"))
register(Check("adjunction", _inst_pairs("adjunction", _rplus_groups), run_adjunction, about="[tau, a(rho)] = <b(tau), rho> and b(a(rho)) = rho"))
register(Check("hopf-square", inst_hopf, run_hopf, about="m* m = (m x m)(1 x T x 1)(m* x m*) on class functions"))
register(Check("mplus-b", inst_mplus_b, run_mplus_b, about="b m_plus = m (b x b)"))
register(Check("mstar-coassoc", inst_mstar_r_coassoc, run_mstar_r_coassoc, about="two-step Harish-Chandra restriction equals the direct three-block one"))
register(Check("fixed-subspace", inst_lines("fixed-subspace"), run_fixed_subspace, about="hc_restrict b = U-fixed character = line-span fixed character"))
register(Check("line-orbits", inst_lines("line-orbits"), run_line_orbits, about="orbit sums and fixed dimension bookkeeping"))
register(Check("hh-relations", _inst_triples("hh-relations", _hh_groups), run_hh_relations, about="normalization, factorization and composition against module maps"))
register(Check("hh-comul-hom", _inst_triples("hh-comul-hom", _hh_comul_groups, with_splits=True), run_hh_comul_hom, about="comultiplication of hyperHecke triples is multiplicative"))
register(Check("hh-square", inst_hh_square, run_hh_square, about="join of products equals product of joins"))
register(Check("coassoc-mstar-plus", inst_coassoc_plus, run_coassoc_plus, experimental=True, about="coassociativity of the line-orbit comultiplication"))
register(Check("hh-condition", _inst_triples("hh-condition", _hh_condition_groups, True, with_splits=True), run_hh_condition, experimental=True, about="source versus target line conditions"))
register(Check("stabilizer-characters", inst_lines("stabilizer-characters", True), run_stabilizer_characters, experimental=True, about="characters of line stabilizers are trivial"))


def selected(cfg: RunConfig) -> list:
    names = list(REGISTRY) if cfg.checks is None else list(cfg.checks)
    return [REGISTRY[n] for n in names]


def _work(args):
    cfg, name, inst = args
    chk = REGISTRY[name]
    start = time.perf_counter()
    try:
        status, witness, detail = chk.run(cfg, inst)
    except CapExceeded as exc:
        status, witness, detail = "skipped", None, {"reason": str(exc)}
    seconds = time.perf_counter() - start if cfg.timing else None
    return Report(name, inst, status, chk.experimental, witness, detail, seconds)


def _tasks(cfg: RunConfig):
    """(task or ready-made report) in canonical order."""
    for chk in selected(cfg):
        for inst in chk.instances(cfg):
            if isinstance(inst, Report):
                yield inst
            else:
                yield (cfg, chk.name, inst)


def _stream(cfg: RunConfig, tasks):
    if cfg.jobs == 1:
        for task in tasks:
            yield task if isinstance(task, Report) else _work(task)
        return
    # a bounded window of futures keeps memory flat and the output ordered
    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        window = []
        for task in tasks:
            window.append(task if isinstance(task, Report) else pool.submit(_work, task))
            while len(window) > 8 * cfg.jobs:
                head = window.pop(0)
                yield head if isinstance(head, Report) else head.result()
        for head in window:
            yield head if isinstance(head, Report) else head.result()


def run_checks(cfg: RunConfig):
    """Stream reports in canonical order; with jobs > 1 a process pool does the work."""
    cfg.validate()
    yield from _stream(cfg, _tasks(cfg))


def run_instances(cfg: RunConfig, name: str, instances):
    """Stream reports of one check over explicitly chosen instances."""
    cfg.validate()
    tasks = (i if isinstance(i, Report) else (cfg, name, i) for i in instances)
    yield from _stream(cfg, tasks)


@dataclass
class Summary:
    counts: dict = field(default_factory=lambda: {s: 0 for s in STATUSES})
    failed_checks: set = field(default_factory=set)
    experimental_fails: int = 0
    total: int = 0

    def add(self, rep: Report):
        self.total += 1
        self.counts[rep.status] += 1
        if rep.status == "fail":
            if rep.experimental:
                self.experimental_fails += 1
            else:
                self.failed_checks.add(rep.check)

    @property
    def exit_code(self) -> int:
        return 1 if self.failed_checks else 0

    @property
    def all_skipped(self) -> bool:
        return self.total > 0 and self.counts["skipped"] == self.total


def with_overrides(cfg: RunConfig, **kw) -> RunConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})


def config_dict(cfg: RunConfig) -> dict:
    return asdict(cfg)
