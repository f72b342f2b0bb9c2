"""Command-line interface.

Exit codes: 0 success, 2 usage, 3 file format, 4 degraded construction or
rejected device, 5 decoding failure. ``LDPC_ANCHOR_SEED`` overrides the
default seed; every other setting comes from flags and is echoed into the
command's JSON output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, alist, kernels, sim
from .anchor import AnchorResult, construction_success, select_orthogonal, select_until_rank
from .decode import DEFAULT_MAX_ITERS, bit_flip_decode
from .entropy import certify, rank_bound_check
from .geometry import BaseMatrixBundle, GeometrySpec, build_bundle
from .gf2 import bits_to_hex, hex_to_bits
from . import puf

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_DEGRADED = 4
EXIT_DECODE = 5


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def default_seed() -> int:
    raw = os.environ.get("LDPC_ANCHOR_SEED")
    if raw is None:
        return sim.DEFAULT_SEED
    try:
        return int(raw, 0)
    except ValueError:
        raise CliError(f"LDPC_ANCHOR_SEED must be an integer, got {raw!r}", EXIT_USAGE) from None


# helpers -----------------------------------------------------------------


class _GeometryAction(argparse.Action):
    """Collect --eg/--pg flags into one ordered list."""

    def __call__(self, parser, namespace, values, option_string=None):
        try:
            m, s = (int(x) for x in values.split(","))
        except ValueError:
            parser.error(f"{option_string} expects M,S (e.g. 3,2), got {values!r}")
        parts = list(getattr(namespace, "geometry", None) or [])
        parts.append((self.const, m, s))
        namespace.geometry = parts


def _add_geometry_flags(p):
    p.add_argument("--eg", action=_GeometryAction, const="EG", metavar="M,S",
                   help="Euclidean geometry EG(M, 2^S); repeatable")
    p.add_argument("--pg", action=_GeometryAction, const="PG", metavar="M,S",
                   help="projective geometry PG(M, 2^S); repeatable")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--type1", dest="type1", action="store_true", default=True,
                   help="drop the origin and lines through it from EG parts (default)")
    g.add_argument("--full-eg", dest="type1", action="store_false",
                   help="keep the origin in EG parts")
    p.set_defaults(geometry=None)


def _specs(args) -> list[GeometrySpec]:
    return [GeometrySpec(fam, m, s, args.type1) for fam, m, s in (args.geometry or [])]


def _bundle_from_specs(specs) -> BaseMatrixBundle:
    try:
        return build_bundle(specs)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None


def _load_bundle(path) -> BaseMatrixBundle:
    try:
        return alist.read_bundle(path)
    except FileNotFoundError:
        raise CliError(f"no such file: {path}", EXIT_FORMAT) from None
    except alist.AlistFormatError as exc:
        raise CliError(str(exc), EXIT_FORMAT) from None


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise CliError(f"no such file: {path}", EXIT_FORMAT) from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}", EXIT_FORMAT) from None


def _hex(text: str, n: int, what: str):
    try:
        return hex_to_bits(text, n)
    except ValueError as exc:
        raise CliError(f"{what}: {exc}", EXIT_USAGE) from None


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _envelope(command: str, config: dict, **body) -> dict:
    doc = {"command": command, "version": __version__, "config": config}
    doc.update(body)
    return doc


def _anchor_body(res: AnchorResult, bundle: BaseMatrixBundle) -> dict:
    cert = certify(res)
    bound = rank_bound_check(res, bundle)
    return {
        "n": res.n,
        "k": res.k,
        "summary": res.summary(),
        "success": construction_success(res, bundle),
        "selected_indices": res.selected_indices.tolist(),
        "rejected_indices": res.rejected_indices.tolist(),
        "unscanned_indices": res.unscanned_indices.tolist(),
        "certificate": cert.to_dict(),
        "rank_bound": {"holds": bound.holds, "vacuous": bound.vacuous},
    }


# commands ----------------------------------------------------------------


def cmd_gen(args) -> int:
    specs = _specs(args)
    if not specs:
        raise CliError("gen needs at least one --eg or --pg part", EXIT_USAGE)
    bundle = _bundle_from_specs(specs)
    config = {"parts": [sp.to_dict() for sp in specs], "output": args.output}
    alist.write_bundle(args.output, bundle, {"command": "gen", "version": __version__, "config": config})
    print(f"wrote {args.output}: {bundle.nrows}x{bundle.n}, rank {bundle.rank_cache}")
    return EXIT_OK


def cmd_anchor(args) -> int:
    bundle = _load_bundle(args.matrix)
    r = _hex(args.r, bundle.n, "--r")
    try:
        if args.k_target is None:
            res = select_orthogonal(bundle, r)
        else:
            res = select_until_rank(bundle, r, args.k_target)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    config = {"matrix": str(args.matrix), "k_target": args.k_target}
    doc = _envelope("anchor", config, r=bits_to_hex(r), **_anchor_body(res, bundle))
    _emit(doc, args.output)
    if args.selected_out:
        alist.write(args.selected_out, res.selected)
    return EXIT_OK if doc["success"] else EXIT_DEGRADED


def _rebuild(report: dict, bundle: BaseMatrixBundle) -> AnchorResult:
    n = bundle.n
    r = _hex(report["r"], n, "stored r")
    sel = np.asarray(report["selected_indices"], dtype=np.int64)
    rej = np.asarray(report["rejected_indices"], dtype=np.int64)
    uns = np.asarray(report.get("unscanned_indices", []), dtype=np.int64)
    M = bundle.matrix
    return AnchorResult(r, M.take(sel), M.take(rej), sel, rej, bundle.rank_cache,
                        unscanned_indices=uns)


def cmd_certify(args) -> int:
    report = _load_json(args.report)
    if "certificate" not in report:
        raise CliError(f"{args.report} has no certificate", EXIT_FORMAT)
    stored = report["certificate"]
    matrix = args.matrix or report.get("config", {}).get("matrix")
    doc = {"command": "certify", "version": __version__,
           "config": {"report": str(args.report), "matrix": matrix},
           "certificate": stored, "recomputed": False}
    if matrix and Path(matrix).exists():
        try:
            res = _rebuild(report, _load_bundle(matrix))
        except (KeyError, IndexError, ValueError) as exc:
            raise CliError(f"report does not match {matrix}: {exc}", EXIT_FORMAT) from None
        fresh = certify(res).to_dict()
        doc["recomputed"] = True
        doc["matches_stored"] = fresh == stored
        doc["certificate"] = fresh
        _emit(doc, args.output)
        return EXIT_OK if fresh == stored else EXIT_FORMAT
    _emit(doc, args.output)
    return EXIT_OK


def cmd_decode(args) -> int:
    bundle = _load_bundle(args.matrix)
    y = _hex(args.y, bundle.n, "--y")
    out = bit_flip_decode(bundle.matrix, y, args.max_iters)
    doc = _envelope("decode", {"matrix": str(args.matrix), "max_iters": args.max_iters},
                    n=bundle.n, word=bits_to_hex(out.word), converged=out.converged,
                    iterations=out.iterations, flips=out.flips)
    _emit(doc, args.output)
    return EXIT_OK if out.converged else EXIT_DECODE


def _sim_bundle(args) -> tuple[BaseMatrixBundle, dict]:
    if args.matrix:
        return _load_bundle(args.matrix), {"matrix": str(args.matrix)}
    specs = _specs(args) or [GeometrySpec("EG", 3, 2, True)]
    return _bundle_from_specs(specs), {"parts": [sp.to_dict() for sp in specs]}


def cmd_simulate(args) -> int:
    bundle, source = _sim_bundle(args)
    seed = args.seed if args.seed is not None else default_seed()
    kind = args.kind
    trials = args.trials or (sim.ROWCOUNT_TRIALS if kind == "rowcount" else sim.RANK_TRIALS)
    config = {"kind": kind, "trials": trials, "seed": seed, "workers": args.workers, **source}
    try:
        if kind == "rowcount":
            rep = sim.row_count_experiment(bundle, trials, seed, args.workers)
            body = rep.to_dict()
            if args.cdf:
                Path(args.cdf).write_text(rep.cdf_table())
        elif kind == "success":
            body = sim.success_probability(bundle, trials, seed, args.workers)
        elif kind == "entropy":
            body = sim.entropy_bound_experiment(bundle, trials, seed, args.workers)
        else:
            config.update(scheme=args.scheme, p=args.p, max_iters=args.max_iters)
            body = sim.end_to_end_key_experiment(bundle, args.scheme, args.p, trials, seed,
                                                 args.max_iters, args.workers)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    body.pop("version", None)
    _emit(_envelope(f"simulate {kind}", config, **body), args.output)
    return EXIT_OK


def cmd_puf_enroll(args) -> int:
    bundle = _load_bundle(args.matrix)
    seed = args.seed if args.seed is not None else default_seed()
    if args.r is not None:
        r = _hex(args.r, bundle.n, "--r")
        seeds = {"enroll": seed}
    else:
        rs = args.response_seed if args.response_seed is not None else seed
        r = puf.sample_response(bundle.n, rs)
        seeds = {"enroll": seed, "response": rs}
    try:
        if args.scheme == "anchor":
            helper, cert = puf.anchor_init(r, bundle, args.k_target, args.max_iters)
        else:
            helper = puf.code_offset_init(r, bundle.matrix, seed, args.max_iters)
            cert = None
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    rec = puf.device_record(helper, cert, seeds)
    rec["command"] = "puf enroll"
    rec["version"] = __version__
    rec["config"] = {"matrix": str(args.matrix), "scheme": args.scheme, "k_target": args.k_target}
    _emit(rec, args.output)
    return EXIT_OK


def cmd_puf_reproduce(args) -> int:
    rec = _load_json(args.device)
    try:
        helper = puf.helper_from_record(rec)
    except (KeyError, ValueError, TypeError) as exc:
        raise CliError(f"bad device record: {exc}", EXIT_FORMAT) from None
    n = helper.code.ncols
    config = {"device": str(args.device)}
    if args.r_prime is not None:
        r_prime = _hex(args.r_prime, n, "--r-prime")
    elif args.r is not None:
        seed = args.channel_seed if args.channel_seed is not None else default_seed()
        try:
            channel = puf.ChannelModel(args.p, seed)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
        r_prime = puf.reextract(_hex(args.r, n, "--r"), channel)
        config.update(p=args.p, channel_seed=seed)
    else:
        raise CliError("give --r-prime, or --r with --p to simulate re-extraction", EXIT_USAGE)
    try:
        key = puf.reproduce(r_prime, helper)
    except puf.ReproductionError as exc:
        _emit(_envelope("puf reproduce", config, n=n, converged=False, error=str(exc)), args.output)
        return EXIT_DECODE
    _emit(_envelope("puf reproduce", config, n=n, converged=True, key=bits_to_hex(key)), args.output)
    return EXIT_OK


def cmd_puf_screen(args) -> int:
    rec = _load_json(args.device)
    cert = puf.certificate_from_record(rec)
    if cert is None:
        raise CliError("device record carries no entropy certificate", EXIT_FORMAT)
    ok = puf.screen_device(cert, args.k_min)
    _emit(_envelope("puf screen", {"device": str(args.device), "k_min": args.k_min},
                    accept=ok, lower_bound=cert.lower_bound, degenerate=cert.degenerate), args.output)
    return EXIT_OK if ok else EXIT_DEGRADED


# parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ldpc-anchor", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({kernels.BACKEND})")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a stacked finite-geometry base matrix")
    _add_geometry_flags(g)
    g.add_argument("-o", "--output", required=True, help="alist output path (sidecar: <path>.json)")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("anchor", help="select the rows orthogonal to r")
    a.add_argument("matrix")
    a.add_argument("--r", required=True, help="response as hex, MSB = coordinate 0")
    a.add_argument("--k-target", type=int, default=None, help="stop once the dimension reaches this")
    a.add_argument("--selected-out", help="write the selected rows as alist")
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_anchor)

    c = sub.add_parser("certify", help="recompute or print the certificate of an anchor report")
    c.add_argument("report")
    c.add_argument("--matrix", help="base matrix (defaults to the one recorded in the report)")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_certify)

    d = sub.add_parser("decode", help="bit-flip decode a word")
    d.add_argument("matrix")
    d.add_argument("--y", required=True, help="received word as hex")
    d.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_decode)

    s = sub.add_parser("simulate", help="Monte-Carlo experiments")
    s.add_argument("kind", choices=["rowcount", "success", "entropy", "endtoend"])
    s.add_argument("--matrix", help="alist base matrix; otherwise geometry flags (default EG(3,2^2)-I)")
    _add_geometry_flags(s)
    s.add_argument("--trials", type=int, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--scheme", choices=sim.SCHEMES, default="code-offset")
    s.add_argument("--p", type=float, default=0.01)
    s.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    s.add_argument("--cdf", help="rowcount only: write the two-column empirical CDF table here")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_simulate)

    u = sub.add_parser("puf", help="helper-data enrollment and reproduction")
    usub = u.add_subparsers(dest="puf_command", required=True)

    e = usub.add_parser("enroll")
    e.add_argument("matrix")
    grp = e.add_mutually_exclusive_group()
    grp.add_argument("--r", help="response as hex")
    grp.add_argument("--response-seed", type=int, help="simulate a uniform response from this seed")
    e.add_argument("--scheme", choices=sim.SCHEMES, default="anchor")
    e.add_argument("--k-target", type=int, default=None)
    e.add_argument("--seed", type=int, default=None, help="codeword seed for code-offset")
    e.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_puf_enroll)

    rp = usub.add_parser("reproduce")
    rp.add_argument("device")
    rp.add_argument("--r-prime", help="re-extracted response as hex")
    rp.add_argument("--r", help="enrolled response, re-extracted through BSC(--p)")
    rp.add_argument("--p", type=float, default=0.0)
    rp.add_argument("--channel-seed", type=int, default=None)
    rp.add_argument("-o", "--output")
    rp.set_defaults(func=cmd_puf_reproduce)

    sc = usub.add_parser("screen")
    sc.add_argument("device")
    sc.add_argument("--k-min", type=int, default=puf.DEFAULT_K_MIN)
    sc.add_argument("-o", "--output")
    sc.set_defaults(func=cmd_puf_screen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
