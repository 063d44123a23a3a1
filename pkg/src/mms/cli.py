"""``mms`` command line tool.

Exit codes: 0 success / equivalent, 1 negative answer (a scheme fails to
verify, schemes are not equivalent), 2 input error, 3 resource cap hit,
4 corrupted dedupe index.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .canon import Limits, equivalent, normal_form
from .field import Field, FieldError
from .matrix import CapExceeded
from .scheme import (
    ParseError,
    Scheme,
    canonical_digest,
    load_text_or_json,
    maximal_pattern,
    rank_pattern,
    serialize,
    to_json_obj,
    transpose_c,
    verify,
    zero_rows,
)
from .symmetry import apply, format_element, random_element

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_CAP, EXIT_INDEX = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


class IndexCorrupt(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    field: Optional[int] = None
    as_json: bool = False
    convention: str = "ct"
    jobs: int = 1
    seed: int = 0
    limits: Limits = Limits()

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        if args.field is not None:
            try:
                Field(args.field)
            except FieldError as e:
                raise InputError(str(e)) from None
        if args.max_stabilizer < 1 or args.max_nullspace < 1:
            raise InputError("caps must be positive")
        jobs = args.jobs
        if jobs is None:
            try:
                jobs = int(os.environ.get("MMS_JOBS", "1"))
            except ValueError:
                raise InputError("MMS_JOBS must be an integer") from None
        return cls(
            field=args.field,
            as_json=args.json,
            convention=args.convention,
            jobs=max(1, jobs),
            seed=args.seed,
            limits=Limits(max_stabilizer=args.max_stabilizer, max_nullspace=args.max_nullspace),
        )


# ---------------------------------------------------------------------------
# loading


def load_file(path: str, config: RunConfig) -> List[Tuple[str, Scheme]]:
    """Schemes in a file with their ids ``<path>:<ordinal>``."""
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        schemes = load_text_or_json(text, path, True if config.as_json else None)
    except ParseError as e:
        raise InputError(str(e)) from None
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(f"{path}: {e}") from None
    out = []
    for i, s in enumerate(schemes, start=1):
        if config.field is not None and s.p != config.field:
            raise InputError(f"{path}:{i}: scheme is over GF({s.p}), expected GF({config.field})")
        if config.convention == "c":
            s = transpose_c(s)
        out.append((f"{path}:{i}", s))
    return out


def load_all(paths: Sequence[str], config: RunConfig) -> List[Tuple[str, Scheme]]:
    out = []
    for p in paths:
        out.extend(load_file(p, config))
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_verify(paths: Sequence[str], config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    schemes = load_all(paths, config)
    status = EXIT_OK
    for sid, s in schemes:
        ok = verify(s)
        note = ""
        zr = zero_rows(s)
        if zr:
            note = "  (zero rows: " + ",".join(str(i + 1) for i in zr) + ")"
        out.write(f"{'OK' if ok else 'FAIL'} {sid}{note}\n")
        if not ok:
            status = EXIT_NEGATIVE
    return status


def cmd_normalize(path: str, config: RunConfig, witness: bool = False, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    for sid, s in load_file(path, config):
        if not verify(s):
            err.write(f"warning: {sid} does not verify; normalizing anyway\n")
        res = normal_form(s, config.limits)
        if config.as_json:
            obj = to_json_obj(res.nf)
            if witness:
                obj = {"nf": obj, "witness": format_element(res.witness)}
            out.write(json.dumps(obj, sort_keys=True) + "\n")
        else:
            out.write(serialize(res.nf))
            if witness:
                out.write(f"# witness: {format_element(res.witness)}\n")
    return EXIT_OK


def _single(path: str, config: RunConfig) -> Tuple[str, Scheme]:
    schemes = load_file(path, config)
    if len(schemes) != 1:
        raise InputError(f"{path}: expected exactly one scheme, found {len(schemes)}")
    return schemes[0]


def _fmt_pattern(pattern) -> str:
    return " ".join("(" + ",".join(map(str, v)) + ")" for v in pattern)


def cmd_equiv(path_a: str, path_b: str, config: RunConfig, witness: bool = False, out=None) -> int:
    out = out or sys.stdout
    ida, a = _single(path_a, config)
    idb, b = _single(path_b, config)
    if (a.n, a.r, a.p) != (b.n, b.r, b.p):
        raise InputError(f"shape mismatch: {ida} is (n={a.n}, r={a.r}, p={a.p}), {idb} is (n={b.n}, r={b.r}, p={b.p})")
    pa, pb = maximal_pattern(a)[0], maximal_pattern(b)[0]
    if pa != pb:
        out.write("not equivalent: rank patterns differ\n")
        out.write(f"  {ida}: {_fmt_pattern(pa)}\n  {idb}: {_fmt_pattern(pb)}\n")
        return EXIT_NEGATIVE
    g = equivalent(a, b, config.limits)
    if g is None:
        out.write("not equivalent: normal forms differ\n")
        return EXIT_NEGATIVE
    out.write("equivalent\n")
    if witness:
        out.write(f"# witness: {format_element(g)}\n")
    return EXIT_OK


_INDEX_LINE = re.compile(r"[0-9a-f]{64} \S.*")


def read_index(path: str) -> Dict[str, str]:
    if not os.path.exists(path):
        return {}
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text and not text.endswith("\n"):
        raise IndexCorrupt(f"{path}: truncated last line")
    entries: Dict[str, str] = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        if not _INDEX_LINE.fullmatch(line):
            raise IndexCorrupt(f"{path}:{ln}: malformed index line")
        digest, sid = line.split(" ", 1)
        if digest in entries:
            raise IndexCorrupt(f"{path}:{ln}: duplicate digest {digest}")
        entries[digest] = sid
    return entries


def write_index(path: str, entries: Dict[str, str]) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        for digest in sorted(entries):
            fh.write(f"{digest} {entries[digest]}\n")
    os.replace(tmp, path)


def _nf_digest(job) -> str:
    text, limits = job
    (s,) = load_text_or_json(text)
    return canonical_digest(normal_form(s, limits).nf).hex()


def _id_key(sid: str):
    src, _, ordinal = sid.rpartition(":")
    return (src, int(ordinal))


def cmd_dedupe(paths: Sequence[str], index_path: Optional[str], config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    index = read_index(index_path) if index_path else {}
    schemes = load_all(paths, config)
    jobs = [(serialize(s), config.limits) for _, s in schemes]
    if config.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            digests = list(pool.map(_nf_digest, jobs, chunksize=max(1, len(jobs) // (4 * config.jobs))))
    else:
        digests = [_nf_digest(j) for j in jobs]
    classes: Dict[str, List[str]] = {}
    for (sid, _), d in zip(schemes, digests):
        classes.setdefault(d, []).append(sid)
    new = 0
    rows = []
    for d, members in classes.items():
        members.sort(key=_id_key)
        if d in index:
            rep = index[d]
        else:
            rep = members[0]
            index[d] = rep
            new += 1
        rows.append((rep, d, members))
    rows.sort(key=lambda x: (x[0], x[1]))
    for rep, d, members in rows:
        out.write(f"class {d} rep={rep} members={','.join(members)}\n")
    out.write(f"{len(schemes)} schemes, {len(classes)} classes, {new} new\n")
    if index_path:
        write_index(index_path, index)
    return EXIT_OK


def cmd_rank_pattern(path: str, config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    for sid, s in load_file(path, config):
        out.write(f"{sid}\n")
        for i, v in enumerate(rank_pattern(s), start=1):
            out.write(f"  {i:3d}: {v[0]} {v[1]} {v[2]}\n")
        best, syms = maximal_pattern(s)
        out.write(f"  sorted: {_fmt_pattern(best)}\n")
        out.write("  attained by: " + ", ".join(str(x) for x in syms) + "\n")
    return EXIT_OK


def cmd_orbit_sample(path: str, count: int, seed: int, config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    docs = []
    for _, s in load_file(path, config):
        for i in range(count):
            g = random_element(s.n, s.r, s.p, f"{seed}:{i}")
            img = apply(g, s)
            if config.as_json:
                docs.append(to_json_obj(img))
            else:
                out.write(serialize(img))
    if config.as_json:
        out.write(json.dumps(docs, sort_keys=True) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, default=None, help="require every scheme to be over GF(FIELD)")
    common.add_argument("--json", action="store_true", help="read and write the JSON format")
    common.add_argument(
        "--convention", choices=["c", "ct"], default="ct",
        help="input tensor convention: ct (C^T = AB, default) or c (C = AB; every C is transposed on load)",
    )
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default $MMS_JOBS or 1)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-stabilizer", type=int, default=Limits.max_stabilizer)
    common.add_argument("--max-nullspace", type=int, default=Limits.max_nullspace)

    parser = argparse.ArgumentParser(prog="mms", description="Matrix multiplication schemes over GF(p)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check the Brent equations")
    p.add_argument("files", nargs="+")

    p = sub.add_parser("normalize", parents=[common], help="print normal forms")
    p.add_argument("file")
    p.add_argument("--witness", action="store_true", help="also print the group element used")

    p = sub.add_parser("equiv", parents=[common], help="decide equivalence of two schemes")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--witness", action="store_true")

    p = sub.add_parser("dedupe", parents=[common], help="group schemes into equivalence classes")
    p.add_argument("files", nargs="*")
    p.add_argument("--index", default=None, help="persistent digest index to merge into")

    p = sub.add_parser("rank-pattern", parents=[common], help="print rank patterns")
    p.add_argument("file")

    p = sub.add_parser("orbit-sample", parents=[common], help="emit random equivalent schemes")
    p.add_argument("file")
    p.add_argument("--count", type=int, default=1)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig.from_args(args)
        if args.command == "verify":
            return cmd_verify(args.files, config)
        if args.command == "normalize":
            return cmd_normalize(args.file, config, args.witness)
        if args.command == "equiv":
            return cmd_equiv(args.file_a, args.file_b, config, args.witness)
        if args.command == "dedupe":
            return cmd_dedupe(args.files, args.index, config)
        if args.command == "rank-pattern":
            return cmd_rank_pattern(args.file, config)
        if args.command == "orbit-sample":
            if args.count < 0:
                raise InputError("--count must be non-negative")
            return cmd_orbit_sample(args.file, args.count, args.seed, config)
    except InputError as e:
        print(f"mms: {e}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as e:
        print(f"mms: resource cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except IndexCorrupt as e:
        print(f"mms: corrupted index: {e}", file=sys.stderr)
        return EXIT_INDEX
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
