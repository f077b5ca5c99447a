"""Command-line front end.

    cfspectra value "[0;(1 4)~]"
    cfspectra thickness --variant k4 --prefix "1 4" --depth 6
    cfspectra tree --variant k4 --prefix "1 3" --depth 2
    cfspectra sum --claim tilde --s 1
    cfspectra spectrum --k 2 --period-max 1
    cfspectra certify --filter gluing
    cfspectra dynamics-check --samples 1000

Settings come from defaults, then the key=value file named by the
CFSPECTRA_CONFIG environment variable, then command-line flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields, replace

import mpmath

from . import cantor, certify, dynamics, spectra, sums
from .dynamics import to_mpf
from .exact import QuadIrr
from .words import ParseError, parse_cf

CONFIG_ENV = "CFSPECTRA_CONFIG"
OUTPUTS = ("text", "json", "csv")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    precision_bits: int = 256
    depth: int = 10
    s_max: int = 8
    output: str = "text"
    seed: int = 0

    def validate(self):
        if self.precision_bits < 64:
            raise ConfigError("precision_bits must be at least 64")
        if not 0 <= self.depth <= 16:
            raise ConfigError("depth must lie in 0..16")
        if self.s_max < 1:
            raise ConfigError("s_max must be positive")
        if self.output not in OUTPUTS:
            raise ConfigError(f"output must be one of {', '.join(OUTPUTS)}")
        return self


def read_config_file(path):
    """Parse key=value lines; '#' starts a comment."""
    types = {f.name: f.type for f in fields(Config)}
    values = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{n}: expected key=value")
            key, val = (p.strip() for p in line.split("=", 1))
            if key not in types:
                raise ConfigError(f"{path}:{n}: unknown key {key!r}")
            try:
                values[key] = val if types[key] in ("str", str) else int(val)
            except ValueError:
                raise ConfigError(f"{path}:{n}: {key} needs an integer") from None
    return values


def load_config(overrides=None, environ=None):
    environ = os.environ if environ is None else environ
    cfg = Config()
    path = environ.get(CONFIG_ENV)
    if path:
        cfg = replace(cfg, **read_config_file(path))
    if overrides:
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg.validate()


# ------------------------------------------------------------------ output


def decimal(x, digits, bits):
    with mpmath.workprec(bits):
        return mpmath.nstr(to_mpf(x, bits), digits)


def emit(cfg, payload, rows=None, text=None, out=None):
    """payload goes out as JSON; rows (list of dicts) as CSV; text as is."""
    out = out or sys.stdout
    if cfg.output == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    elif cfg.output == "csv":
        rows = rows if rows is not None else [payload]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        out.write(buf.getvalue())
    else:
        out.write(text + "\n")


# ------------------------------------------------------------------ spec flags


def _word(text):
    return tuple(int(t) for t in text.replace(",", " ").split()) if text else ()


def build_spec(variant, prefix, k=None):
    variant = variant.lower()
    if variant == "k4":
        return cantor.k4(prefix)
    if variant == "tilde-k4":
        return cantor.tilde_k4(prefix)
    if k is None:
        raise ConfigError(f"variant {variant} needs --k")
    if variant == "c":
        return cantor.cset(prefix, k)
    if variant == "tilde-c":
        return cantor.tilde_c(prefix, k)
    raise ConfigError(f"unknown variant {variant!r}")


def _side(text, k):
    # "variant:prefix", e.g. "k4:1 3" or "tilde-c:1 5"
    variant, _, prefix = text.partition(":")
    return build_spec(variant, _word(prefix), k)


# ------------------------------------------------------------------ commands


def cmd_value(args, cfg, out=None):
    x = parse_cf(args.cf)
    v = x.value()
    digits = args.digits
    payload = {"input": args.cf, "canonical": str(x), "exact": str(v), "decimal": decimal(v, digits, cfg.precision_bits)}
    emit(cfg, payload, text=f"{payload['exact']}  ~  {payload['decimal']}", out=out)
    return 0


def cmd_thickness(args, cfg, out=None):
    spec = build_spec(args.variant, _word(args.prefix), args.k)
    depth = args.depth if args.depth is not None else min(cfg.depth, 6)
    tb = cantor.thickness_lower_bound(spec, depth)
    payload = {"spec": spec.to_json(), **tb.to_json()}
    text = (
        f"{spec.variant} prefix ({' '.join(map(str, spec.prefix))}): tau >= {float(tb.tau_lower):.6f}"
        f"  [{tb.method}, depth {tb.depth_explored}, {tb.nodes} nodes]"
    )
    emit(cfg, payload, text=text, out=out)
    return 0


def cmd_tree(args, cfg, out=None):
    spec = build_spec(args.variant, _word(args.prefix), args.k)
    depth = args.depth if args.depth is not None else 2
    rows = []

    def walk(word, level):
        iv = cantor.node_interval(spec.rules, word)
        rows.append({"word": list(word), "level": level, "lo": float(iv.lo), "hi": float(iv.hi), "type": iv.itype})
        if level < depth:
            children, gaps = cantor.subdivide(spec.rules, word)
            for ch in sorted(children, key=lambda c: c.word):
                walk(ch.word, level + 1)

    for node in spec.nodes:
        walk(node, 0)
    text = "\n".join(
        f"{'  ' * r['level']}({' '.join(map(str, r['word']))})  [{r['lo']:.10f}, {r['hi']:.10f}]  {r['type']}" for r in rows
    )
    emit(cfg, {"spec": spec.to_json(), "depth": depth, "nodes": rows}, rows=rows, text=text, out=out)
    return 0


SUM_ALIASES = {"k13-plus-tilde-k14": ("tilde", 1)}


def cmd_sum(args, cfg, out=None):
    if args.claim:
        name, s = SUM_ALIASES.get(args.claim, (args.claim, args.s))
        k = args.k or 4
        claims = sums.k4_claims(s) if k == 4 else sums.c_claims(k, s)
        if name not in claims:
            raise ConfigError(f"unknown claim {name!r}; known: {', '.join(sorted(claims))}")
        claim = claims[name]
    else:
        if not (args.left and args.right):
            raise ConfigError("give --claim or both --left and --right")
        a, b = _side(args.left, args.k), _side(args.right, args.k)
        claim = sums.SumClaim("custom", (("custom", a, b),))
    try:
        r = sums.sum_interval(claim)
    except (sums.NewhouseFailure, sums.GlueFailure) as exc:
        emit(cfg, {"claim": claim.name, "error": str(exc)}, text=f"{claim.name}: not certified ({exc})", out=out)
        return 1
    payload = r.to_json()
    text = f"{r.name}: [{decimal(r.lo, 12, cfg.precision_bits)}, {decimal(r.hi, 12, cfg.precision_bits)}]"
    text += f"\n  lo = {r.lo}\n  hi = {r.hi}"
    if r.stated is not None:
        text += f"\n  printed endpoints {'match' if r.matches_stated else 'DIFFER'}"
    emit(cfg, payload, text=text, out=out)
    return 0


def cmd_spectrum(args, cfg, out=None):
    threshold = None
    if args.below is not None:
        threshold = parse_cf(args.below).value() if args.below.startswith("[") else QuadIrr.parse(args.below)
    pts = spectra.enumerate_spectrum(args.k, args.period_max, threshold)
    rows = [
        {
            "value": str(p.value),
            "decimal": decimal(p.value, 15, cfg.precision_bits),
            "period": list(p.witness.right.period),
        }
        for p in pts
    ]
    text = "\n".join(f"{r['decimal']:<20} {r['value']:<28} ({' '.join(map(str, r['period']))})~" for r in rows)
    emit(cfg, {"k": args.k, "period_max": args.period_max, "points": rows}, rows=rows, text=text, out=out)
    return 0


def cmd_certify(args, cfg, out=None):
    s_max = args.s_max or cfg.s_max
    rep = certify.run_catalog(args.filter, s_max=s_max, bits=min(cfg.precision_bits, 256), workers=args.workers)
    rows = [
        {k: v for k, v in r.to_json().items() if k != "margin"} | {"margin_lo": r.to_json()["margin"]["lo"]}
        for r in rep.records
    ]
    emit(cfg, rep.to_json(), rows=rows, text=rep.to_text(), out=out)
    return 0 if rep.all_pass and rep.records else 1


def cmd_dynamics(args, cfg, out=None):
    bits = args.bits or 128
    conj = dynamics.check_conjugation(args.samples, bits, cfg.seed)
    area = dynamics.check_area_preservation(args.points, seed=cfg.seed, bits=bits)
    orbit = {
        " ".join(map(str, p)): dynamics.orbit_coding_check(spectra.BiInfSeq.periodic(p), 20, cfg.precision_bits)
        for p in ((1,), (2,), (1, 2), (1, 4), (1, 3), (2, 3), (1, 1, 2), (1, 3, 4), (4,), (2, 1, 1))
    }
    payload = {"conjugation": conj.to_json(), "area": area.to_json(), "orbit_coding": orbit}
    text = (
        f"conjugation: max residual {conj.max_residual:.3e} over {conj.samples} samples "
        f"({conj.excluded} in guard band), {bits} bits\n"
        f"area: symbolic det = {area.symbolic_det}, max finite-difference error {area.max_fd_error:.3e} "
        f"at {area.points} points\n"
        f"orbit coding: max mismatch {max(orbit.values()):.3e} over {len(orbit)} periodic codes, "
        f"{cfg.precision_bits} bits"
    )
    emit(cfg, payload, text=text, out=out)
    # phi is expanding, so orbit coding runs at the full configured precision
    ok = conj.max_residual < 1e-15 and area.ok and max(orbit.values()) < 1e-25
    return 0 if ok else 1


# ------------------------------------------------------------------ parser


def build_parser():
    p = argparse.ArgumentParser(prog="cfspectra", description=__doc__.split("\n\n")[0])
    p.add_argument("--output", choices=OUTPUTS)
    p.add_argument("--precision-bits", type=int)
    p.add_argument("--depth", dest="cfg_depth", type=int, help="default exploration depth")
    p.add_argument("--seed", type=int)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("value", help="exact and decimal value of a continued fraction")
    v.add_argument("cf")
    v.add_argument("--digits", type=int, default=30)
    v.set_defaults(func=cmd_value)

    for name, func, helptext in (
        ("thickness", cmd_thickness, "certified thickness lower bound"),
        ("tree", cmd_tree, "stage intervals below a prefix"),
    ):
        t = sub.add_parser(name, help=helptext)
        t.add_argument("--variant", default="k4", help="k4, tilde-k4, c or tilde-c")
        t.add_argument("--prefix", default="")
        t.add_argument("--k", type=int)
        t.add_argument("--depth", type=int)
        t.set_defaults(func=func)

    s = sub.add_parser("sum", help="certify that a sum of Cantor sets is an interval")
    s.add_argument("--claim")
    s.add_argument("--s", type=int, default=1)
    s.add_argument("--k", type=int)
    s.add_argument("--left", help="variant:prefix")
    s.add_argument("--right", help="variant:prefix")
    s.set_defaults(func=cmd_sum)

    sp = sub.add_parser("spectrum", help="periodic Markov values with letters at most k")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--period-max", type=int, default=4)
    sp.add_argument("--below", help="threshold, as '[a0; ...]' or a quadratic surd like '(20 + 3*sqrt(5))/5'")
    sp.set_defaults(func=cmd_spectrum)

    c = sub.add_parser("certify", help="replay the claim catalog")
    c.add_argument("--filter", help="claim id prefix")
    c.add_argument("--s-max", type=int)
    c.add_argument("--workers", type=int, default=1, help="evaluate claims in this many processes")
    c.set_defaults(func=cmd_certify)

    d = sub.add_parser("dynamics-check", help="numeric checks of the plane maps")
    d.add_argument("--samples", type=int, default=10_000)
    d.add_argument("--points", type=int, default=1000)
    d.add_argument("--bits", type=int)
    d.set_defaults(func=cmd_dynamics)
    return p


def main(argv=None, out=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config({
            "output": args.output,
            "precision_bits": args.precision_bits,
            "depth": args.cfg_depth,
            "seed": args.seed,
        })
        return args.func(args, cfg, out)
    except (ConfigError, ParseError, cantor.CapExceeded, spectra.ConstraintViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
