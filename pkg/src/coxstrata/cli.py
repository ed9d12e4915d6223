"""Command-line surface: tables, JSON/CSV export, verification, caching.

Exit codes: 0 success, 1 verification mismatch, 2 usage or I/O error.
Environment: COXSTRATA_CACHE (cache directory, default ./.coxstrata),
COXSTRATA_THREADS (worker count for lattice sweeps).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import re
import struct
import sys
from fractions import Fraction
from pathlib import Path

from . import betti
from .cohomology import GradedClass, cup
from .errors import CoxstrataError, InvalidRank, ResourceLimit
from .flats import (
    DEFAULT_FLAT_BUDGET,
    IntersectionLattice,
    build_lattice,
    enumerate_rank_counts,
)
from .goodsub import bds_candidates, param_F
from .rootsys import CartanType, RootSystem, build_root_system, classify_subsystem
from .strata import ExtendedPoint, Rejection, membership
from .weyl import parabolic_summary

CACHE_MAGIC = b"CXLT"
CACHE_VERSION = 1
TYPE_RE = re.compile(r"^([A-Ga-g])([0-9]+)$")


def _parse_type(text: str) -> CartanType:
    m = TYPE_RE.match(text.strip())
    if not m:
        raise InvalidRank(f"type must look like A3, B4, E8; got {text!r}")
    return CartanType.parse(m.group(1).upper() + m.group(2))


def _root_order_checksum(rs: RootSystem) -> bytes:
    blob = b"|".join(
        b",".join(str(x).encode() for x in rs.roots[i]) for i in rs.positives
    )
    return hashlib.sha256(blob).digest()


# -- binary lattice cache ---------------------------------------------------


def save_lattice_cache(lat: IntersectionLattice, path: Path) -> None:
    rs = lat.rs
    mask_bytes = (rs.d + 7) // 8
    with open(path, "wb") as fh:
        name = str(rs.ctype).encode()
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<I", CACHE_VERSION))
        fh.write(struct.pack("<H", len(name)))
        fh.write(name)
        fh.write(struct.pack("<II Q", rs.rank, rs.d, len(lat.flats)))
        fh.write(_root_order_checksum(rs))
        for f in lat.flats:
            fh.write(struct.pack("<B", f.rank))
            fh.write(f.mask.to_bytes(mask_bytes, "little"))
        fh.write(struct.pack("<Q", len(lat.covers)))
        for lo, hi in lat.covers:
            fh.write(struct.pack("<II", lo, hi))


def load_lattice_cache(rs: RootSystem, path: Path) -> IntersectionLattice | None:
    """Read a cache; any header mismatch returns None (caller recomputes)."""
    try:
        data = path.read_bytes()
    except OSError:
        return None
    try:
        view = io.BytesIO(data)
        if view.read(4) != CACHE_MAGIC:
            return None
        (version,) = struct.unpack("<I", view.read(4))
        if version != CACHE_VERSION:
            return None
        (name_len,) = struct.unpack("<H", view.read(2))
        name = view.read(name_len).decode()
        rank, d, n_flats = struct.unpack("<IIQ", view.read(16))
        checksum = view.read(32)
        if (
            name != str(rs.ctype)
            or rank != rs.rank
            or d != rs.d
            or checksum != _root_order_checksum(rs)
        ):
            return None
        mask_bytes = (d + 7) // 8
        levels: list[list[int]] = [[] for _ in range(rank + 1)]
        for _ in range(n_flats):
            (frank,) = struct.unpack("<B", view.read(1))
            mask = int.from_bytes(view.read(mask_bytes), "little")
            levels[frank].append(mask)
        (n_covers,) = struct.unpack("<Q", view.read(8))
        covers = [struct.unpack("<II", view.read(8)) for _ in range(n_covers)]
        return IntersectionLattice(rs, levels, [tuple(c) for c in covers])
    except (struct.error, ValueError, IndexError):
        return None


def _cache_dir(arg: str | None) -> Path:
    base = arg or os.environ.get("COXSTRATA_CACHE") or "./.coxstrata"
    return Path(base)


def _lattice_for(
    rs: RootSystem, cache_dir: Path | None, allow_huge: bool
) -> IntersectionLattice:
    budget = None if allow_huge else DEFAULT_FLAT_BUDGET
    if cache_dir is None:
        return build_lattice(rs, max_flats=budget)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"{rs.ctype}.cxlt"
    lat = load_lattice_cache(rs, path)
    if lat is None:
        lat = build_lattice(rs, max_flats=budget)
        save_lattice_cache(lat, path)
    return lat


# -- commands ----------------------------------------------------------------


def cmd_rootinfo(args) -> int:
    rs = build_root_system(_parse_type(args.type))
    if args.json:
        payload = {
            "type": str(rs.ctype),
            "rank": rs.rank,
            "d": rs.d,
            "positive_roots": [list(rs.roots[i]) for i in rs.positives],
            "simples": [rs.pos_of[i] for i in rs.simples],
            "highest": rs.pos_of[rs.highest],
            "labels": rs.labels,
            "affine_adjacency": [
                [i, j, m] for (i, j), m in sorted(rs.affine_adjacency.items())
            ],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0
    print(f"type {rs.ctype}  rank {rs.rank}  positive roots {rs.d}")
    for p, idx in enumerate(rs.positives):
        tags = []
        if idx in rs.simples:
            tags.append(f"alpha_{rs.simples.index(idx) + 1}")
        if idx == rs.highest:
            tags.append("highest")
        tag = ("  # " + ", ".join(tags)) if tags else ""
        print(f"  [{p}] {tuple(rs.roots[idx])}{tag}")
    print("labels m_0..m_r:", " ".join(str(m) for m in rs.labels))
    print(
        "affine adjacency:",
        " ".join(f"{i}-{j}x{m}" for (i, j), m in sorted(rs.affine_adjacency.items())),
    )
    return 0


def _betti_row_enum(rs: RootSystem, allow_huge: bool) -> list[int]:
    budget = None if allow_huge else DEFAULT_FLAT_BUDGET
    counts = enumerate_rank_counts(rs, max_flats=budget)
    return list(reversed(counts))


def cmd_betti(args) -> int:
    ctype = _parse_type(args.type)
    rs = build_root_system(ctype)
    family = ctype.factors[0][0]
    methods = {}
    wanted = ["formula", "enum", "series"] if args.compare else [args.method]
    for method in wanted:
        if method == "formula":
            methods["formula"] = betti.betti_row_closed_form(ctype)
        elif method == "enum":
            methods["enum"] = _betti_row_enum(rs, args.allow_huge)
        elif method == "series":
            if family not in ("A", "B", "C", "D"):
                if args.compare:
                    continue
                print("series method applies to classical families only", file=sys.stderr)
                return 2
            fam = "B" if family == "C" else family
            methods["series"] = betti.series_coefficients(fam, rs.rank)[rs.rank]
    if args.compare:
        rows = list(methods.values())
        agree = all(row == rows[0] for row in rows)
        for name, row in sorted(methods.items()):
            print(f"{name:8s} " + " ".join(str(x) for x in row))
        if not agree:
            print("MISMATCH between methods", file=sys.stderr)
            return 1
        return 0
    row = methods[args.method]
    print(" ".join(str(x) for x in row))
    return 0


def cmd_lattice(args) -> int:
    rs = build_root_system(_parse_type(args.type))
    cache = _cache_dir(args.cache_dir) if not args.no_cache else None
    lat = _lattice_for(rs, cache, args.allow_huge)
    if args.export == "json":
        payload = {
            "type": str(rs.ctype),
            "rank": rs.rank,
            "d": rs.d,
            "flats": [
                {
                    "id": f.id,
                    "rank": f.rank,
                    "positive_roots": rs.positions(f.mask),
                    "cartan_type": str(classify_subsystem(rs, f.mask)),
                }
                for f in lat.flats
            ],
            "covers": [[lo, hi] for lo, hi in lat.covers],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif args.export == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["id", "rank", "cartan_type", "positive_roots"])
        for f in lat.flats:
            writer.writerow(
                [
                    f.id,
                    f.rank,
                    str(classify_subsystem(rs, f.mask)),
                    " ".join(str(p) for p in rs.positions(f.mask)),
                ]
            )
    else:
        print(f"type {rs.ctype}: {len(lat.flats)} flats, {len(lat.covers)} covers")
        print("counts by codimension:", " ".join(str(x) for x in lat.betti_row()))
    return 0


def cmd_good(args) -> int:
    rs = build_root_system(_parse_type(args.type))
    lat = build_lattice(rs)
    if args.bds:
        for (i, j), mask in bds_candidates(rs):
            print(
                f"nodes ({i},{j}) labels ({rs.labels[i]},{rs.labels[j]}) -> "
                f"{classify_subsystem(rs, mask)} positives {rs.positions(mask)}"
            )
        return 0
    for fid in lat.by_rank[rs.rank - 1]:
        mask = lat.flats[fid].mask
        line = f"flat {fid}: {classify_subsystem(rs, mask)} positives {rs.positions(mask)}"
        if args.classical_param:
            line += f"  param {sorted(param_F(rs, mask))}"
        print(line)
    return 0


def cmd_orbits(args) -> int:
    rs = build_root_system(_parse_type(args.type))
    lat = build_lattice(rs)
    summary = parabolic_summary(rs, lat)
    print(f"type {rs.ctype}: |W| = {summary.weyl_order}, {summary.class_count} classes")
    for rank, recs in enumerate(summary.per_rank):
        for rec in recs:
            print(
                f"  rank {rank}: rep flat {rec.representative}  orbit {rec.size}  "
                f"stabilizer {rec.stabilizer_order}  type {rec.cartan_type}"
            )
    return 0


def cmd_cup(args) -> int:
    rs = build_root_system(_parse_type(args.type))
    lat = build_lattice(rs)
    rows = []
    for atom in lat.atoms():
        for f in lat.flats:
            product = cup(GradedClass.basis(lat, atom), GradedClass.basis(lat, f.id))
            target = next(iter(product.coefficients), None)
            rows.append((atom, f.id, target))
    if args.format == "json":
        print(
            json.dumps(
                {
                    "type": str(rs.ctype),
                    "products": [
                        {"atom": a, "flat": b, "result": t} for a, b, t in rows
                    ],
                },
                indent=2,
                sort_keys=True,
            )
        )
    else:
        print("| atom | flat | product |")
        print("| --- | --- | --- |")
        for a, b, t in rows:
            print(f"| {a} | {b} | {'0' if t is None else t} |")
    return 0


def _parse_point(text: str, rs: RootSystem) -> ExtendedPoint:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != rs.d:
        raise InvalidRank(f"point needs {rs.d} coordinates, got {len(parts)}")
    vals = []
    for p in parts:
        if p.lower() in ("inf", "infinity", "oo"):
            vals.append(None)
        else:
            vals.append(Fraction(p))
    return ExtendedPoint(tuple(vals))


def cmd_member(args) -> int:
    rs = build_root_system(_parse_type(args.type))
    lat = build_lattice(rs)
    point = _parse_point(args.point, rs)
    result = membership(rs, lat, point)
    if isinstance(result, Rejection):
        print(f"not in variety: {result.reason}")
        return 0
    flat = lat.flat(result.flat_id)
    print(
        f"stratum rank {flat.rank} (flat {flat.id}, codimension {rs.rank - flat.rank}), "
        f"witness on positions {list(result.witness.basis_positions)}"
    )
    return 0


def cmd_verify(args) -> int:
    from .verify import verify_battery, verify_type

    if args.type:
        _parse_type(args.type)
        checks = verify_type(args.type, args.level)
    else:
        checks = verify_battery(args.level, allow_huge=args.allow_huge)
    failed = 0
    for name, ok, detail in checks:
        tag = "PASS" if ok else "FAIL"
        suffix = f"  {detail}" if detail and not ok else ""
        print(f"{tag} {name}{suffix}")
        if not ok:
            failed += 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxstrata",
        description="Exact stratification combinatorics of reflection arrangements",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rootinfo", help="list roots, labels, affine diagram")
    p.add_argument("type")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_rootinfo)

    p = sub.add_parser("betti", help="stratum counts by codimension")
    p.add_argument("type")
    p.add_argument("--method", choices=["enum", "formula", "series"], default="formula")
    p.add_argument("--compare", action="store_true")
    p.add_argument("--allow-huge", action="store_true")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("lattice", help="enumerate flats; export or cache them")
    p.add_argument("type")
    p.add_argument("--export", choices=["json", "csv"])
    p.add_argument("--cache-dir")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--allow-huge", action="store_true")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("good", help="rank r-1 subsystems / candidates")
    p.add_argument("type")
    p.add_argument("--bds", action="store_true", help="affine-diagram candidates")
    p.add_argument("--classical-param", action="store_true")
    p.set_defaults(func=cmd_good)

    p = sub.add_parser("orbits", help="orbit/stabilizer table")
    p.add_argument("type")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("cup", help="atom x flat multiplication table")
    p.add_argument("type")
    p.add_argument("--table", action="store_true")
    p.add_argument("--format", choices=["json", "markdown"], default="markdown")
    p.set_defaults(func=cmd_cup)

    p = sub.add_parser("member", help="decide membership of a point")
    p.add_argument("type")
    p.add_argument("--point", required=True, help="comma list of fractions or inf")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("type", nargs="?")
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.add_argument("--allow-huge", action="store_true")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ResourceLimit as exc:
        print(f"error: {exc} (use --allow-huge to opt in)", file=sys.stderr)
        return 2
    except (CoxstrataError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
