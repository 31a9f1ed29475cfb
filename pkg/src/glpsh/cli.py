"""Command-line interface.

Every option can also be set through an environment variable named
``GLPSH_<OPTION>`` (for example ``GLPSH_CAP_ORDER=5000``).  Exit codes: 0 when
nothing failed, 1 when a non-experimental check failed, 2 for configuration
errors.
"""

from __future__ import annotations

import csv
import functools
import json
import sys
from contextlib import contextmanager

import click

from .classfn import hc_restrict
from .graded import m_plus, m_star_plus, parabolic_product
from .groups import CapExceeded, GroupError, character_from_generators, gl, parse_group_spec
from .harness import (
    CSV_COLUMNS,
    REGISTRY,
    ConfigError,
    RunConfig,
    Summary,
    _pairs,
    _triples,
    central_character,
    csv_row,
    inst_hh_square,
    run_checks,
    run_instances,
)
from .hyperhecke import (
    HHElement,
    InvalidTriple,
    compose,
    hh_comul,
    hh_join,
    triple_make,
    triple_normalize,
)
from .rplus import (
    MonomialSum,
    b_map,
    b_pair,
    basis,
    boltje_form,
    brauer_induction,
    canonicalize_pair,
)

ENV = "GLPSH"


def _env(name: str) -> str:
    return f"{ENV}_{name.upper().replace('-', '_')}"


def _opt(*decls, **kw):
    name = decls[0].lstrip("-").split("/")[0]
    kw.setdefault("envvar", _env(name))
    kw.setdefault("show_envvar", True)
    return click.option(*decls, **kw)


COMMON = [
    _opt("--group", default=None, help="Group specifier, e.g. gl:2:3 or gl:1:3,gl:1:3."),
    _opt("--cap-order", type=int, default=None, help="Largest group order that may be built."),
    _opt("--cap-subgroups", type=int, default=None, help="Largest group order whose subgroups are enumerated."),
    _opt("--cap-induced-dim", type=int, default=None, help="Largest induced-module dimension."),
    _opt("--central", default=None, help="Central-character mode: 'trivial' or 'N:e1,e2,...' on Z(G) generators."),
    _opt("--sl-intersect/--no-sl-intersect", default=False, help="Replace U by U meet SL in line conditions."),
    _opt("--literal-mplus/--no-literal-mplus", default=False, help="Use the block-diagonal H x K form of m_plus."),
    _opt("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", envvar=_env("format")),
    _opt("--out", type=click.Path(dir_okay=False, writable=True), default=None, help="Write output here instead of stdout."),
    _opt("--seed", type=int, default=0, help="Seed for sampled instance sets."),
    _opt("--jobs", type=int, default=1, help="Worker processes for verification."),
    _opt("--timing/--no-timing", default=False, help="Attach wall-clock seconds to each report."),
]


def common_options(f):
    for deco in reversed(COMMON):
        f = deco(f)
    return f


def _config(kw, **extra) -> RunConfig:
    fields = {
        "group": kw.get("group"),
        "central": kw.get("central"),
        "sl_intersect": kw.get("sl_intersect", False),
        "literal_mplus": kw.get("literal_mplus", False),
        "format": kw.get("fmt", "json"),
        "seed": kw.get("seed", 0),
        "jobs": kw.get("jobs", 1),
        "timing": kw.get("timing", False),
    }
    for name in ("cap_order", "cap_subgroups", "cap_induced_dim"):
        if kw.get(name) is not None:
            fields[name] = kw[name]
    fields.update(extra)
    return RunConfig(**fields).validate()


def handle_errors(f):
    """Configuration and input problems exit with status 2."""

    @functools.wraps(f)
    def wrapper(*args, **kw):
        try:
            return f(*args, **kw)
        except (ConfigError, GroupError, CapExceeded, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_doc(doc, out):
    with _output(out) as fh:
        fh.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")


def _emit_reports(reports, cfg: RunConfig, out) -> int:
    summary = Summary()
    with _output(out) as fh:
        writer = None
        if cfg.format == "csv":
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
        for rep in reports:
            summary.add(rep)
            if writer is not None:
                writer.writerow(csv_row(rep))
            else:
                fh.write(rep.to_json() + "\n")
            fh.flush()
    c = summary.counts
    click.echo(
        f"{summary.total} reports: {c['pass']} pass, {c['fail']} fail "
        f"({summary.experimental_fails} experimental), {c['vacuous']} vacuous, {c['skipped']} skipped",
        err=True,
    )
    if summary.all_skipped:
        click.echo("warning: every instance was skipped; the caps admit nothing", err=True)
    return summary.exit_code


# -- pair and triple specifiers -------------------------------------------------------------


def _group_of(cfg: RunConfig, spec: str | None = None):
    spec = spec or cfg.group
    if spec is None:
        raise ConfigError("--group is required")
    return parse_group_spec(spec, cap=cfg.cap_order)


def _basis_for(cfg: RunConfig, G):
    if cfg.central is not None:
        return basis(G, cfg.cap_subgroups, True, central_character(G, cfg.central))
    return basis(G, cfg.cap_subgroups)


def parse_pair(text: str, G, cfg: RunConfig):
    """'#i' (basis index) or JSON {"gens": [[flat]...], "N": n, "exps": [...]}."""
    text = text.strip()
    if text.startswith("#"):
        B = _basis_for(cfg, G)
        i = int(text[1:])
        if not 0 <= i < len(B):
            raise ConfigError(f"pair index {i} out of range 0..{len(B) - 1}")
        return B[i]
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed pair specifier: {exc}") from exc
    phi = _char_of(d, G)
    return canonicalize_pair(phi.subgroup, phi)


def _element(G, flat):
    key = tuple(int(v) for v in flat)
    if key not in G.index:
        raise ConfigError(f"{list(key)} is not an element of {G.label}")
    return G.index[key]


def _char_of(d, G):
    try:
        gens = [_element(G, m) for m in d.get("gens", [])]
        N = int(d.get("N", 1))
        exps = d.get("exps", [0] * len(gens))
    except (AttributeError, TypeError) as exc:
        raise ConfigError("pair specifier must be a JSON object") from exc
    return character_from_generators(G, gens, N, exps)


def parse_triple(text: str, G, cfg: RunConfig):
    """'#i' (canonical triple index) or JSON {"source": pair, "g": flat, "target": pair}.

    Pairs inside a triple are taken literally (not replaced by canonical conjugates).
    """
    text = text.strip()
    if text.startswith("#"):
        T = _triples(cfg.group, cfg, False)
        i = int(text[1:])
        if not 0 <= i < len(T):
            raise ConfigError(f"triple index {i} out of range 0..{len(T) - 1}")
        return T[i]
    try:
        d = json.loads(text)
        src, g, tgt = d["source"], d["g"], d["target"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ConfigError(f"malformed triple specifier: {exc}") from exc

    def side(v):
        if isinstance(v, str) and v.startswith("#"):
            return parse_pair(v, G, cfg).phi
        return _char_of(v, G)

    try:
        return triple_make(side(src), _element(G, g), side(tgt))
    except InvalidTriple as exc:
        raise ConfigError(f"invalid triple: {exc}") from exc


# -- commands ------------------------------------------------------------------------------


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main():
    """Exact computations with monomial rings, parabolic induction and
    hyperHecke algebras of finite general linear groups."""


@main.command("enumerate")
@common_options
@handle_errors
def enumerate_cmd(**kw):
    """List the canonical basis pairs (H, phi) of R_+(G)."""
    cfg = _config(kw)
    G = _group_of(cfg)
    B = _basis_for(cfg, G)
    with _output(kw["out"]) as fh:
        if cfg.format == "csv":
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["index", "key", "order", "N", "gens", "exps"])
            for i, p in enumerate(B):
                d = p.to_json()
                w.writerow([i, d["key"], d["order"], d["N"], json.dumps(d["gens"]), json.dumps(d["exps"])])
        else:
            for i, p in enumerate(B):
                fh.write(json.dumps({"index": i, **p.to_json()}, sort_keys=True, separators=(",", ":")) + "\n")
    click.echo(f"{len(B)} pairs on {G.label}", err=True)


# R_+


@main.group()
def rplus():
    """The monomial ring R_+(G)."""


@rplus.command("mul")
@click.argument("x")
@click.argument("y")
@common_options
@handle_errors
def rplus_mul(x, y, **kw):
    """Product of two pairs in R_+(G)."""
    cfg = _config(kw)
    G = _group_of(cfg)
    prod = MonomialSum.of(parse_pair(x, G, cfg)) * MonomialSum.of(parse_pair(y, G, cfg))
    _emit_doc({"group": G.label, "product": prod.to_json()}, kw["out"])


@rplus.command("bmap")
@click.argument("x")
@common_options
@handle_errors
def rplus_bmap(x, **kw):
    """The induced character b(H, phi) as class-function values."""
    cfg = _config(kw)
    G = _group_of(cfg)
    p = parse_pair(x, G, cfg)
    _emit_doc({"group": G.label, "pair": p.to_json(), "character": b_pair(p).to_json()}, kw["out"])


@rplus.command("form")
@click.argument("x")
@click.argument("y")
@common_options
@handle_errors
def rplus_form(x, y, **kw):
    """The Boltje form [x, y]."""
    cfg = _config(kw)
    G = _group_of(cfg)
    v = boltje_form(parse_pair(x, G, cfg), parse_pair(y, G, cfg))
    _emit_doc({"group": G.label, "form": int(v)}, kw["out"])


@rplus.command("brauer")
@click.argument("x")
@common_options
@handle_errors
def rplus_brauer(x, **kw):
    """Explicit Brauer induction of the character b(x)."""
    cfg = _config(kw)
    G = _group_of(cfg)
    rho = b_pair(parse_pair(x, G, cfg))
    res = brauer_induction(rho, cfg.cap_subgroups)
    _emit_doc(
        {
            "group": G.label,
            "rank": res.rank,
            "in_image": res.in_image,
            "integral": res.integral,
            "element": res.element.to_json() if res.element is not None else None,
            "kernel_dim": len(res.kernel),
        },
        kw["out"],
    )


# graded rings


@main.group()
def psh():
    """Parabolic product and Harish-Chandra coproduct."""


@psh.command("mul")
@click.option("--q", type=int, required=True)
@click.option("--a", type=int, required=True)
@click.option("--b", type=int, required=True)
@click.argument("x")
@click.argument("y")
@common_options
@handle_errors
def psh_mul(q, a, b, x, y, **kw):
    """m_plus of pairs on G(a) and G(b), with b of both sides."""
    cfg = _config(kw)
    A, B = gl(a, q, cfg.cap_order), gl(b, q, cfg.cap_order)
    p, r = parse_pair(x, A, cfg), parse_pair(y, B, cfg)
    prod = m_plus(MonomialSum.of(p), MonomialSum.of(r), literal=cfg.literal_mplus)
    bp = b_map(prod)
    mr = parabolic_product(b_pair(p), b_pair(r))
    _emit_doc(
        {"m_plus": prod.to_json(), "b_of_m_plus": bp.to_json(), "m_of_b": mr.to_json(), "agree": bp == mr},
        kw["out"],
    )


@psh.command("comul")
@click.option("--q", type=int, required=True)
@click.option("--a", type=int, required=True)
@click.option("--alpha", type=int, required=True)
@click.argument("x")
@common_options
@handle_errors
def psh_comul(q, a, alpha, x, **kw):
    """Line-orbit comultiplication of a pair on G(a) at the split (alpha, a - alpha)."""
    cfg = _config(kw)
    if not 0 <= alpha <= a:
        raise ConfigError("alpha must lie in 0..a")
    G = gl(a, q, cfg.cap_order)
    p = parse_pair(x, G, cfg)
    splits = ((alpha, a - alpha),)
    ms = m_star_plus(MonomialSum.of(p), splits, cfg.sl_intersect)
    _emit_doc(
        {
            "m_star_plus": ms.to_json(),
            "b_of_m_star_plus": b_map(ms).to_json(),
            "hc_restrict": hc_restrict(b_pair(p), splits=splits).to_json(),
        },
        kw["out"],
    )


@psh.group("verify")
def psh_verify():
    """Diagram checks on the graded rings."""


@psh_verify.command("hopf")
@click.option("--q", type=int, required=True)
@click.option("--a", type=int, required=True)
@click.option("--b", type=int, required=True)
@common_options
@handle_errors
def psh_verify_hopf(q, a, b, **kw):
    """Hopf square on b(basis) x b(basis) of G(a) x G(b)."""
    cfg = _config(kw)
    na = len(basis(gl(a, q, cfg.cap_order), cfg.cap_subgroups))
    nb = len(basis(gl(b, q, cfg.cap_order), cfg.cap_subgroups))
    insts = [{"q": q, "a": a, "b": b, "f": i, "g": j} for i in range(na) for j in range(nb)]
    sys.exit(_emit_reports(run_instances(cfg, "hopf-square", insts), cfg, kw["out"]))


@psh_verify.command("bcompat")
@click.option("--q", type=int, required=True)
@click.option("--a", type=int, required=True)
@click.option("--alpha", type=int, required=True)
@common_options
@handle_errors
def psh_verify_bcompat(q, a, alpha, **kw):
    """hc_restrict b against the U-fixed and line-span characters."""
    spec = f"gl:{a}:{q}"
    cfg = _config(kw, group=spec)
    if not 0 < alpha < a:
        raise ConfigError("alpha must lie strictly between 0 and a")
    n = len(_pairs(spec, cfg, False))
    insts = [
        {"group": spec, "central": False, "splits": [[alpha, a - alpha]], "pair": i} for i in range(n)
    ]
    sys.exit(_emit_reports(run_instances(cfg, "fixed-subspace", insts), cfg, kw["out"]))


# hyperHecke


@main.group()
def hh():
    """The hyperHecke algebra of G."""


@hh.command("compose")
@click.argument("x")
@click.argument("y")
@common_options
@handle_errors
def hh_compose(x, y, **kw):
    """Composition product x . y (needs x.source == y.target)."""
    cfg = _config(kw)
    G = _group_of(cfg)
    tx, ty = parse_triple(x, G, cfg), parse_triple(y, G, cfg)
    if tx.source != ty.target:
        raise ConfigError("x . y needs the source pair of x to equal the target pair of y")
    _emit_doc({"product": compose(HHElement.of(tx), HHElement.of(ty)).to_json()}, kw["out"])


@hh.command("normalize")
@click.argument("t")
@common_options
@handle_errors
def hh_normalize(t, **kw):
    """Rewrite a triple as a scalar times its canonical representative."""
    cfg = _config(kw)
    G = _group_of(cfg)
    scalar, t0 = triple_normalize(parse_triple(t, G, cfg))
    _emit_doc({"scalar": scalar.to_json(), "triple": t0.to_json()}, kw["out"])


@hh.command("comul")
@click.option("--alpha", type=int, required=True, help="First block size (single-factor groups).")
@click.argument("t")
@common_options
@handle_errors
def hh_comul_cmd(alpha, t, **kw):
    """The matrix of Levi triples between line orbits."""
    cfg = _config(kw)
    G = _group_of(cfg)
    if len(G.parts) != 1 or not 0 < alpha < G.n:
        raise ConfigError("--alpha needs a single factor G(a) and 0 < alpha < a")
    tri = parse_triple(t, G, cfg)
    m = hh_comul(tri, ((alpha, G.n - alpha),), cfg.sl_intersect)
    _emit_doc(m.to_json(), kw["out"])


@hh.command("join")
@click.option("--other-group", required=True, help="Group of the second triple.")
@click.option("--promote/--no-promote", default=False, help="Land in G(a+b) instead of G(a) x G(b).")
@click.argument("x")
@click.argument("y")
@common_options
@handle_errors
def hh_join_cmd(other_group, promote, x, y, **kw):
    """Block join of a triple on --group with a triple on --other-group."""
    cfg = _config(kw)
    A = _group_of(cfg)
    B = parse_group_spec(other_group, cap=cfg.cap_order)
    other_cfg = _config(kw, group=other_group)
    joined = hh_join(parse_triple(x, A, cfg), parse_triple(y, B, other_cfg), promote)
    _emit_doc({"group": joined.group.label, "triple": joined.to_json()}, kw["out"])


@hh.group("verify")
def hh_verify():
    """hyperHecke checks."""


@hh_verify.command("hom")
@click.option("--alpha", type=int, required=True)
@common_options
@handle_errors
def hh_verify_hom(alpha, **kw):
    """Multiplicativity of the comultiplication on canonical triples of --group."""
    cfg = _config(kw)
    G = _group_of(cfg)
    if len(G.parts) != 1 or not 0 < alpha < G.n:
        raise ConfigError("--alpha needs a single factor G(a) and 0 < alpha < a")
    T = _triples(cfg.group, cfg, False)
    insts = [
        {"group": cfg.group, "central": False, "triple": i, "splits": [[alpha, G.n - alpha]]}
        for i in range(len(T))
    ]
    sys.exit(_emit_reports(run_instances(cfg, "hh-comul-hom", insts), cfg, kw["out"]))


@hh_verify.command("square")
@click.option("--q", type=int, default=3)
@click.option("--sample", type=int, default=24, help="Sampled quadruples promoted into G(2).")
@common_options
@handle_errors
def hh_verify_square(q, sample, **kw):
    """Join of products against product of joins over G(1)."""
    cfg = _config(kw, group=f"gl:1:{q}", sample=sample)
    sys.exit(_emit_reports(run_instances(cfg, "hh-square", inst_hh_square(cfg)), cfg, kw["out"]))


# everything


@main.command("verify-all")
@_opt("--checks", default=None, help="Comma-separated check names (default: all).")
@click.option("--list", "list_only", is_flag=True, help="List the registered checks and exit.")
@common_options
@handle_errors
def verify_all(checks, list_only, **kw):
    """Run every registered check, streaming one report per instance."""
    if list_only:
        for name, chk in REGISTRY.items():
            tag = " [experimental]" if chk.experimental else ""
            click.echo(f"{name}{tag}: {chk.about}")
        return
    sel = None if checks is None else tuple(c.strip() for c in checks.split(",") if c.strip())
    cfg = _config(kw, checks=sel)
    sys.exit(cmd_verify_all(cfg, kw["out"]))


def cmd_verify_all(cfg: RunConfig, out=None) -> int:
    return _emit_reports(run_checks(cfg), cfg, out)


if __name__ == "__main__":  # pragma: no cover
    main()
