"""Command-line interface: ``singclass <command> [options] POLY``."""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Callable

from . import __version__
from .classify import ClassLabel, classify_contact, classify_right, classify_univariate
from .deform import semicontinuity_scan, tjurina_basis_unfolding
from .determinacy import contact_determinacy_bound, right_determinacy_bound
from .errors import InputError, NotIsolated, SingclassError
from .invariants import default_cap, hessian_rank_corank, milnor_number, tjurina_number
from .oracle import enumerate_jets, orbit_decomposition
from .ring import FieldSpec, Polynomial, parse_poly
from .splitting import split

SCHEMA = "singclass/1"
EXIT_OK, EXIT_INPUT, EXIT_NOT_FINITE, EXIT_ASSERT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are input errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _infer_vars(text: str) -> list[str]:
    names = sorted(set(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", text)))
    return names or ["x"]


class _Ctx:
    def __init__(self, args, text: str):
        self.args = args
        self.text = text
        self.field = FieldSpec(args.char)
        self.names = args.vars.split(",") if args.vars else _infer_vars(text)
        self.cap = args.truncate or default_cap()
        self.f = parse_poly(text, self.field, self.names)

    def fmt(self, g: Polynomial) -> str:
        return g.format(self.names)

    def echo(self) -> dict:
        return {"polynomial": self.fmt(self.f), "field": str(self.field), "characteristic": self.field.characteristic, "vars": self.names}


def _require_germ(f: Polynomial) -> None:
    if f.is_zero():
        raise InputError("the zero polynomial has no invariants")


def _label_json(lab: ClassLabel) -> dict:
    out = lab.to_json()
    out["family"] = lab.family
    out["name"] = lab.full_name
    return out


# ---------------------------------------------------------------- commands


def cmd_parse(c: _Ctx) -> dict:
    f = c.f
    return {"input": c.echo(), "terms": len(f), "order": None if f.is_zero() else f.order(), "degree": f.degree() if f else None}


def cmd_invariants(c: _Ctx) -> dict:
    f = c.f
    _require_germ(f)
    out = {"input": c.echo(), "order": f.order()}
    out["mu"] = milnor_number(f, c.cap).to_json()
    out["tau"] = tjurina_number(f, c.cap).to_json()
    if f.order() >= 2:
        r, k = hessian_rank_corank(f)
        out["rank"], out["corank"] = r, k
    return out


def _determinacy_json(c: _Ctx) -> dict:
    """Both bounds; an equivalence whose invariant is not finite gets an error entry instead."""
    out, failed = {}, 0
    for name, fn in (("right", right_determinacy_bound), ("contact", contact_determinacy_bound)):
        try:
            out[name] = fn(c.f, c.cap).to_json(c.names)
        except NotIsolated as exc:
            out[name] = {"error": str(exc), "bound": exc.bound}
            failed += 1
    if failed == 2:
        raise NotIsolated("neither mu nor tau is certified finite", c.cap)
    return out


def cmd_determinacy(c: _Ctx) -> dict:
    _require_germ(c.f)
    return {"input": c.echo(), "determinacy": _determinacy_json(c)}


def _split_bound(c: _Ctx) -> int:
    if c.args.truncate:
        return c.args.truncate
    return max(c.f.degree(), 8)


def cmd_split(c: _Ctx) -> dict:
    _require_germ(c.f)
    res = split(c.f, _split_bound(c))
    out = res.to_json(c.names)
    out["corank"] = res.corank
    return {"input": c.echo(), "split": out}


def cmd_classify(c: _Ctx) -> dict:
    f = c.f
    _require_germ(f)
    p = c.field.characteristic
    warnings = []
    contact = classify_contact(f, c.cap)
    right = classify_right(f, c.cap) if p else contact
    out = {
        "input": c.echo(),
        "label": contact.name,
        "variant": contact.variant,
        "index": contact.index,
        "reason": contact.reason,
        "simple_contact": contact.simple,
        "simple_right": right.simple,
        "contact_label": _label_json(contact),
        "right_label": _label_json(right),
        "order": f.order(),
    }
    mu, tau = milnor_number(f, c.cap), tjurina_number(f, c.cap)
    out["mu"], out["tau"] = mu.to_json(), tau.to_json()
    if f.order() >= 2:
        out["rank"], out["corank"] = hessian_rank_corank(f)
        res = split(f, _split_bound(c), verify=False)
        out["split"] = {"quad": res.block.to_json(), "residual": res.residual.format(c.names), "bound": res.bound}
        if not c.args.truncate and f.degree() > res.bound:
            warnings.append("jet-level split only")
        if tau.finite:
            out["determinacy"] = _determinacy_json(c)
    if f.nvars == 1 and p and f.order() >= 2:
        try:
            out["univariate"] = classify_univariate(f, c.cap).to_json()
        except NotIsolated as exc:
            out["univariate"] = {"error": str(exc)}
    if contact.family == "Unclassified" and contact.candidates:
        warnings.append("derived-table tie")
    out["warnings"] = warnings
    return out


def cmd_univariate(c: _Ctx) -> dict:
    return {"input": c.echo(), "univariate": classify_univariate(c.f, c.cap).to_json()}


def cmd_deform_scan(c: _Ctx) -> dict:
    _require_germ(c.f)
    U = tjurina_basis_unfolding(c.f, c.cap)
    rep = semicontinuity_scan(U, c.args.samples, c.args.seed, c.cap)
    out = {"input": c.echo(), "basis": [g.format(c.names) for g in U.basis]}
    out.update(rep.to_json())
    return out


COMMANDS: dict[str, Callable[[_Ctx], dict]] = {
    "parse": cmd_parse,
    "invariants": cmd_invariants,
    "determinacy": cmd_determinacy,
    "split": cmd_split,
    "classify": cmd_classify,
    "univariate": cmd_univariate,
    "deform-scan": cmd_deform_scan,
}


def _text(d: dict, indent: str = "") -> list[str]:
    lines = []
    for k, v in d.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.extend(_text(v, indent + "  "))
        else:
            lines.append(f"{indent}{k}: {v}")
    return lines


def _emit(out: dict, as_json: bool, stream) -> None:
    out = {"schema": SCHEMA, **out}
    if as_json:
        stream.write(json.dumps(out, sort_keys=True) + "\n")
    else:
        stream.write("\n".join(_text(out)) + "\n")


def _run_one(cmd: str, args, text: str) -> tuple[int, dict]:
    try:
        out = COMMANDS[cmd](_Ctx(args, text))
        return EXIT_OK, out
    except InputError as exc:
        return EXIT_INPUT, {"input": text, "error": {"type": type(exc).__name__, "message": str(exc)}}
    except NotIsolated as exc:
        return EXIT_NOT_FINITE, {"input": text, "error": {"type": type(exc).__name__, "message": str(exc), "bound": exc.bound}}
    except (ValueError, ZeroDivisionError) as exc:
        return EXIT_INPUT, {"input": text, "error": {"type": type(exc).__name__, "message": str(exc)}}
    except AssertionError as exc:
        return EXIT_ASSERT, {"input": text, "error": {"type": "AssertionError", "message": str(exc)}}


def _oracle(args) -> int:
    p = args.char
    if p not in (2, 3):
        print("oracle: --char must be 2 or 3", file=sys.stderr)
        return EXIT_INPUT
    try:
        table = orbit_decomposition(enumerate_jets(p, args.nvars, args.k), action=args.action)
    except SingclassError as exc:
        print(f"oracle: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(table.to_json(), True, sys.stdout)  # fixtures are always JSON
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="singclass", description="Invariants and classification of hypersurface singularities.")
    ap.add_argument("--version", action="version", version=f"singclass {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--char", type=int, default=0, help="0 or a prime (default 0)")
    common.add_argument("--vars", default=None, help="comma separated variable names (default: names found in the input, sorted)")
    common.add_argument("--truncate", type=int, default=None, help="jet bound cap (default 64 or $SINGCLASS_MAX_BOUND)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--file", default=None, help="read one polynomial per line and emit JSON lines")
    common.add_argument("--samples", type=int, default=100, help="parameter samples for deform-scan")
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("poly", nargs="?", help="polynomial text")
    op = sub.add_parser("oracle", parents=[common], help="orbit fixtures over F_2 or F_3")
    op.add_argument("--nvars", type=int, default=1)
    op.add_argument("--k", type=int, default=3)
    op.add_argument("--action", choices=("right", "contact"), default="contact")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.truncate is not None and args.truncate < 1:
        ap.error("--truncate must be positive")
    try:
        FieldSpec(args.char)
    except InputError as exc:
        ap.error(str(exc))
    if args.command == "oracle":
        return _oracle(args)
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
        except OSError as exc:
            ap.error(str(exc))
        worst = EXIT_OK
        for ln in lines:
            code, out = _run_one(args.command, args, ln)
            out["exit"] = code
            _emit(out, True, sys.stdout)
            worst = max(worst, code)
        return worst
    if args.poly is None:
        ap.error("a polynomial argument or --file is required")
    code, out = _run_one(args.command, args, args.poly)
    stream = sys.stdout if code == EXIT_OK else sys.stderr
    if code != EXIT_OK and not args.json:
        err = out["error"]
        stream.write(f"error ({err['type']}): {err['message']}\n")
    else:
        _emit(out, args.json, stream if code == EXIT_OK else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
