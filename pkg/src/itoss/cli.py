"""Command-line front end.

Subcommands: share, reconstruct, attack, compare, simulate.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import adversary, baselines
from .errors import EXIT_CODES, GroupTooSmall, ItossError, ManifestMismatch, ModulusMismatch
from .field import PrimeModulus, from_hex, make_rng, to_hex
from .generic import SCHEMES, convert, get_scheme
from .netsim import Edge, Group, Transcript
from .rns import max_rounds, round_paths
from .session import PublicInfo, run_session, simulate_ip_attack
from .shamir import ShareTable, share_generate

SCHEME_VERSION = 1
DEFAULT_P = (1 << 127) - 1
SEED_ENV = "ITOSS_SEED"


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def _parse_k(text: str) -> int | str:
    return "auto" if text == "auto" else int(text)


def _parse_int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _parse_hex_list(text: str) -> list[int]:
    return [from_hex(x) for x in text.split(",") if x.strip()]


def _parse_range(text: str) -> range:
    if ".." in text:
        lo, hi = text.split("..")
        return range(int(lo), int(hi) + 1)
    return range(int(text), int(text) + 1)


def _write_json(path: Path, record: dict) -> None:
    path.write_text(json.dumps(record, sort_keys=True) + "\n")


@dataclass
class RunConfig:
    p: int = DEFAULT_P
    t: int = 2
    n: int = 2
    ids: list[int] = field(default_factory=list)
    k: int | str = "auto"
    seed: int = 0
    scheme: str = "shamir-additive"

    def validate(self) -> PrimeModulus:
        modulus = PrimeModulus(self.p)
        if self.scheme not in SCHEMES:
            raise ManifestMismatch(f"unknown scheme {self.scheme!r}")
        if not self.ids:
            self.ids = list(range(1, self.n + 1))
        if len(self.ids) != self.n:
            raise ManifestMismatch(f"{len(self.ids)} ids given for n={self.n}")
        if self.n >= modulus.p:
            raise ManifestMismatch(f"p={modulus.p} must exceed n={self.n}")
        if self.k != "auto" and int(self.k) < 1:
            raise ManifestMismatch("k must be a positive integer or 'auto'")
        return modulus


def resolve_k(k: int | str, t: int, m: int) -> int:
    if k != "auto":
        return int(k)
    choice = adversary.choose_k(t, m)
    if not choice.reachable:
        print(
            f"warning: no k <= {max_rounds(m)} reaches ceil(m/2)={adversary.min_rc_route(m)} "
            f"for t={t}, m={m}; using k={choice.k} with bound {choice.bound}",
            file=sys.stderr,
        )
    return choice.k


# -- share -------------------------------------------------------------------


def cmd_share(args) -> int:
    cfg = RunConfig(
        p=from_hex(args.p), t=args.t, n=args.n, ids=args.ids or [], seed=args.seed, scheme=args.scheme
    )
    modulus = cfg.validate()
    text = Path(args.secret_file).read_text() if args.secret_file else sys.stdin.read()
    value = from_hex(text.strip())
    if value >= modulus.p:
        raise ModulusMismatch(f"secret {text.strip()} is not below p={to_hex(modulus.p)}")
    secret = modulus(value)
    scheme = get_scheme(cfg.scheme, modulus)
    ids = [modulus(u) for u in cfg.ids]
    table = scheme.share_gen(secret, ids, cfg.t, make_rng(cfg.seed))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    envelope = {"scheme": cfg.scheme, "version": SCHEME_VERSION, "p": to_hex(modulus.p), "t": cfg.t, "n": cfg.n}
    for u in ids:
        _write_json(out / f"share_{to_hex(u.value)}.json", {**envelope, "id": to_hex(u.value), "share": to_hex(table.share(u).value)})
    _write_json(out / "manifest.json", {**envelope, "ids": [to_hex(u.value) for u in ids]})
    print(f"wrote {cfg.n} shares and manifest.json to {out}")
    return 0


# -- reconstruct -------------------------------------------------------------


def _load_shares(paths: list[str], manifest_path: str | None):
    records = [json.loads(Path(p).read_text()) for p in paths]
    if manifest_path is None:
        candidate = Path(paths[0]).parent / "manifest.json"
        manifest_path = str(candidate) if candidate.exists() else None
    manifest = json.loads(Path(manifest_path).read_text()) if manifest_path else records[0]
    keys = ("scheme", "version", "p", "t", "n")
    for rec in records:
        for key in keys:
            if rec.get(key) != manifest.get(key):
                raise ManifestMismatch(f"share file for id {rec.get('id')} disagrees on {key!r}")
        if "ids" in manifest and rec["id"] not in manifest["ids"]:
            raise ManifestMismatch(f"id {rec['id']} is not listed in the manifest")
    if len({rec["id"] for rec in records}) != len(records):
        raise ManifestMismatch("the same share file was given twice")
    return manifest, records


def cmd_reconstruct(args) -> int:
    manifest, records = _load_shares(args.shares, args.manifest)
    modulus = PrimeModulus(from_hex(manifest["p"]))
    t, m = manifest["t"], len(records)
    if m < t:
        raise GroupTooSmall(f"{m} share files given, threshold is t={t}")
    ids = tuple(modulus(from_hex(rec["id"])) for rec in records)
    shares = {u: modulus(from_hex(rec["share"])) for u, rec in zip(ids, records)}
    k = resolve_k(args.k, t, m)
    group = Group(ids)
    rng = make_rng(args.seed)

    table = ShareTable(shares, t, modulus)
    transcript = Transcript()
    scheme = manifest["scheme"]
    if scheme == "shamir-additive":
        result = run_session(table, group, k, rng, transcript)
        paths = result.public.paths
    else:
        result = convert(get_scheme(scheme, modulus)).run_session(table, group, k, rng, transcript)
        paths = [list(p) for p in round_paths(m, k)]
    transcript.header = {
        "scheme": scheme,
        "p": to_hex(modulus.p),
        "t": t,
        "ids": [to_hex(u.value) for u in ids],
        "k": k,
        "seed": args.seed,
        "paths": [list(p) for p in paths],
    }
    if args.transcript:
        Path(args.transcript).write_text(transcript.to_jsonl())
    print(to_hex(result.secret.value))
    return 0


# -- attack ------------------------------------------------------------------


def load_session(path: str) -> adversary.ObservedSession:
    transcript = Transcript.from_jsonl(Path(path).read_text())
    h = transcript.header
    if h.get("scheme", "shamir-additive") != "shamir-additive":
        raise ManifestMismatch("attack analysis models the additive Shamir scheme only")
    modulus = PrimeModulus(from_hex(h["p"]))
    public = PublicInfo(
        modulus,
        h["t"],
        tuple(modulus(from_hex(u)) for u in h["ids"]),
        h["k"],
        [tuple(p) for p in h["paths"]],
    )
    return adversary.ObservedSession(transcript, public)


def cmd_attack(args) -> int:
    session = load_session(args.transcript)
    public = session.public
    if args.search_min:
        report = adversary.min_crack_set(session, search_limit=args.budget).to_dict()
        cracked = [Edge.parse(e) for e in report["witness"]]
    else:
        cracked = [Edge.parse(e) for e in args.edges.split(",") if e.strip()] if args.edges else []
        for e in cracked:
            if e.b >= public.m:
                raise ManifestMismatch(f"edge {e} is outside a group of {public.m}")
        report = adversary.analytic_report(public.t, public.m, public.k).to_dict()
    closure = adversary.knowledge_closure(session.transcript, cracked, public)
    report.update(
        cracked=[str(e) for e in sorted(set(cracked))],
        secret_determined=closure.secret_determined,
        secret=to_hex(closure.secret.value) if closure.secret is not None else None,
        determined_shares=sorted(closure.determined_shares),
    )
    print(json.dumps(report, sort_keys=True, indent=2))
    return 0


# -- compare -----------------------------------------------------------------


def cmd_compare(args) -> int:
    rows = baselines.comparison_table(_parse_int_list(args.t), _parse_range(args.m))
    text = baselines.to_csv(rows)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# -- simulate ----------------------------------------------------------------


def cmd_simulate(args) -> int:
    from scipy.stats import chisquare

    modulus = PrimeModulus(from_hex(args.p))
    rng = make_rng(args.seed)
    m, t = args.m, args.t
    ids = [modulus(u) for u in range(1, m + 1)]
    secret = modulus(rng.randrange(modulus.p))
    if args.suite == "ip":
        table = share_generate(secret, ids[:-1], t, rng)
        k = resolve_k(args.k, t, m)
        summary = simulate_ip_attack(table, ids[:-1], ids[-1], k, args.trials, rng, secret=secret)
        out = {
            "suite": "ip",
            "trials": summary.trials,
            "hits": summary.hits,
            "hit_rate": summary.hit_rate,
            "expected_rate": summary.expected_rate,
            "z_score": summary.z_score,
        }
    else:
        table = share_generate(secret, ids, t, rng)
        k = resolve_k(args.k, t, m)
        group = Group(tuple(ids))
        counts = [0] * modulus.p
        for _ in range(args.trials):
            result = run_session(table, group, k, rng)
            counts[result.rcs.components[0].c.value] += 1
        stat, pvalue = chisquare(counts)
        out = {"suite": "uniformity", "sessions": args.trials, "chi2": float(stat), "p_value": float(pvalue)}
    print(json.dumps(out, sort_keys=True, indent=2))
    return 0


# -- entry point -------------------------------------------------------------


def _exit_code_help() -> str:
    lines = ["exit codes:", "  0  success", "  1  other error", "  2  usage error"]
    by_code: dict[int, list[str]] = {}
    for name, code in EXIT_CODES.items():
        by_code.setdefault(code, []).append(name)
    lines += [f"  {code}  {', '.join(sorted(names))}" for code, names in sorted(by_code.items())]
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itoss",
        description="Tightly-coupled (t,m,n) secret sharing with k-round RNS.",
        epilog=_exit_code_help() + f"\n\nThe default seed is read from ${SEED_ENV} (0 if unset).",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    seed = argparse.ArgumentParser(add_help=False)
    seed.add_argument("--seed", type=int, default=_default_seed())

    p = sub.add_parser("share", parents=[seed], help="deal shares to files")
    p.add_argument("--p", default=to_hex(DEFAULT_P), help="prime modulus, hex")
    p.add_argument("-t", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--ids", type=_parse_hex_list, help="comma-separated hex ids (default 1..n)")
    p.add_argument("--secret-file", help="hex secret; read from stdin when omitted")
    p.add_argument("--scheme", default="shamir-additive", choices=sorted(SCHEMES))
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_share)

    p = sub.add_parser("reconstruct", parents=[seed], help="run a coupled reconstruction session")
    p.add_argument("shares", nargs="+", help="share files, in ring order")
    p.add_argument("--manifest")
    p.add_argument("--k", type=_parse_k, default="auto")
    p.add_argument("--transcript", help="write the session transcript here")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("attack", help="eavesdropping analysis of a transcript")
    p.add_argument("--transcript", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--edges", help="cracked channels, e.g. 0-1,2-3 (may be empty)")
    group.add_argument("--search-min", action="store_true")
    p.add_argument("--budget", type=int, help="max crack sets to examine with --search-min")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("compare", help="message and robustness comparison CSV")
    p.add_argument("-t", required=True, help="comma-separated thresholds")
    p.add_argument("-m", required=True, help="participant range lo..hi")
    p.add_argument("--output")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", parents=[seed], help="Monte Carlo suites")
    p.add_argument("suite", choices=["ip", "uniformity"])
    p.add_argument("--p", default=to_hex(257))
    p.add_argument("-t", type=int, default=3)
    p.add_argument("-m", type=int, default=5)
    p.add_argument("--k", type=_parse_k, default="auto")
    p.add_argument("--trials", type=int, default=10_000)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ItossError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
