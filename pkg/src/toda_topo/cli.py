"""Command line front end.

    toda-topo rootsys info --type A2 --json
    toda-topo cells --type A2 --list --json
    toda-topo classify --type A2 --chamber s1 --point "-1,0.5"
    toda-topo homology --type A2 --json [--export-dir DIR]
    toda-topo verify --type F4 --all
    toda-topo toda simulate --type A2 --signs "+-" --a "0,0" --b "1,-1" --t-end 10 --json

Exit status is 0 on success, 1 on a domain error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from itertools import combinations
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, TextIO

from . import atlas, complex as cx, diagram, rootsys, toda
from .errors import TodaTopoError

SCHEMA = "1"
COMMANDS = ("rootsys info", "cells", "classify", "homology", "verify", "toda simulate")

# flags whose values may legitimately start with "-"
_VALUE_FLAGS = ("--point", "--a", "--b", "--f", "--signs", "--chamber")


@dataclass(frozen=True)
class Config:
    """Options shared by every command, normalized."""

    command: str
    type_label: str
    rank: int
    output: str = "text"
    rank_cap: int = rootsys.DEFAULT_RANK_CAP
    size_cap: int = rootsys.DEFAULT_SIZE_CAP
    tol: float = 1e-10

    @property
    def type_name(self) -> str:
        return f"{self.type_label}{self.rank}"

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "Config":
        label, rank = rootsys.parse_type(ns.type)
        output = "json" if getattr(ns, "json", False) else (
            "csv" if getattr(ns, "csv", False) else "text")
        return cls(ns.command, label, rank, output, ns.rank_cap, ns.size_cap,
                   getattr(ns, "tol", 1e-10))

    @classmethod
    def parse(cls, argv: Sequence[str]) -> "Config":
        return cls.from_namespace(build_parser().parse_args(_glue(argv)))

    def to_argv(self) -> List[str]:
        out = self.command.split() + ["--type", self.type_name,
                                      "--rank-cap", str(self.rank_cap),
                                      "--size-cap", str(self.size_cap)]
        if self.command == "toda simulate":
            out += ["--tol", repr(self.tol)]
        if self.output != "text":
            out.append(f"--{self.output}")
        return out

    def to_json(self) -> dict:
        return asdict(self)


def _glue(argv: Sequence[str]) -> List[str]:
    """Turn ``--point -1,0.5`` into ``--point=-1,0.5`` so argparse keeps the value."""
    out: List[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _signs(text: str) -> List[int]:
    text = text.replace(",", "").replace(" ", "")
    if not text or any(c not in "+-" for c in text):
        raise argparse.ArgumentTypeError(f"expected a string of + and -, got {text!r}")
    return [1 if c == "+" else -1 for c in text]


def _common(p: argparse.ArgumentParser, formats=("json",)) -> None:
    p.add_argument("--type", required=True, help='root system label, e.g. "A2" or "F4"')
    p.add_argument("--rank-cap", type=int, default=rootsys.DEFAULT_RANK_CAP)
    p.add_argument("--size-cap", type=int, default=rootsys.DEFAULT_SIZE_CAP,
                   help="largest Weyl group order to enumerate")
    fmt = p.add_mutually_exclusive_group()
    for f in formats:
        fmt.add_argument(f"--{f}", action="store_true", help=f"emit {f.upper()}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toda-topo",
                                     description="Cell complex, homology and Toda flows of "
                                                 "compactified Cartan manifolds.")
    sub = parser.add_subparsers(dest="group", required=True, metavar="COMMAND")

    rs = sub.add_parser("rootsys", help="root system data")
    rs_sub = rs.add_subparsers(dest="action", required=True, metavar="ACTION")
    p = rs_sub.add_parser("info", help="Cartan matrix, Coxeter orders and |W|")
    _common(p)
    p.set_defaults(command="rootsys info")

    p = sub.add_parser("cells", help="canonical cells of the atlas")
    _common(p)
    p.add_argument("--list", action="store_true", help="list every cell with its chart box")
    p.set_defaults(command="cells")

    p = sub.add_parser("classify", help="cell containing a chart point")
    _common(p)
    p.add_argument("--chamber", required=True, help='Weyl element, e.g. "e" or "s1s2"')
    p.add_argument("--point", required=True, type=_floats, help='coordinates, e.g. "-1,0.5"')
    p.set_defaults(command="classify")

    p = sub.add_parser("homology", help="integral homology of the cell complex")
    _common(p)
    p.add_argument("--export-dir", type=Path,
                   help="write boundary_<d>.txt matrices as 'row col value' triplets")
    p.set_defaults(command="homology")

    p = sub.add_parser("verify", help="machine verification suite")
    _common(p)
    for name in ("rootsys", "coxeter", "complex", "atlas"):
        p.add_argument(f"--{name}", action="store_true", help=f"run the {name} checks")
    p.add_argument("--all", action="store_true", help="run every check")
    p.set_defaults(command="verify")

    td = sub.add_parser("toda", help="indefinite Toda lattice")
    td_sub = td.add_subparsers(dest="action", required=True, metavar="ACTION")
    p = td_sub.add_parser("simulate", help="integrate the (a, b) flow")
    _common(p, formats=("json", "csv"))
    p.add_argument("--signs", type=_signs, help='sign vector, e.g. "+-"')
    p.add_argument("--a", required=True, type=_floats)
    init = p.add_mutually_exclusive_group(required=True)
    init.add_argument("--b", type=_floats)
    init.add_argument("--f", type=_floats, help="log coordinates; b_i = eps_i exp(-(C f)_i)")
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--samples", type=int, help="resample on a uniform grid of this size")
    p.set_defaults(command="toda simulate")
    return parser


def _dump(obj: dict, out: TextIO) -> None:
    payload = {"schema": SCHEMA, **obj}
    out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _load(cfg: Config):
    return rootsys.load(cfg.type_name, rank_cap=cfg.rank_cap, size_cap=cfg.size_cap)


def cmd_rootsys_info(cfg: Config, ns, out: TextIO) -> int:
    rs, W = _load(cfg)
    data = rootsys.info(rs, W)
    if cfg.output == "json":
        _dump(data, out)
    else:
        out.write(f"{data['type']}: rank {data['rank']}, |W| = {data['weyl_order']}, "
                  f"{data['positive_roots']} positive roots\n")
        for row in data["cartan"]:
            out.write(" ".join(f"{x:3d}" for x in row) + "\n")
    return 0


def cmd_cells(cfg: Config, ns, out: TextIO) -> int:
    rs, W = _load(cfg)
    counts = atlas.count_cells(rs, W)
    data: Dict[str, object] = {"type": rs.name, "counts": counts}
    if ns.list:
        data["cells"] = atlas.list_cells(W)
    if cfg.output == "json":
        _dump(data, out)
    else:
        out.write(f"{rs.name} cells by dimension: {counts}\n")
        for c in data.get("cells", []):
            out.write(f"({c['diagram']},{c['coset']}) dim {c['dimension']} box {c['box']}\n")
    return 0


def cmd_classify(cfg: Config, ns, out: TextIO) -> int:
    rs, W = _load(cfg)
    if len(ns.point) != rs.rank:
        raise TodaTopoError(f"point has {len(ns.point)} coordinates, rank is {rs.rank}")
    try:
        chamber = W.parse(ns.chamber)
    except ValueError as exc:
        raise TodaTopoError(str(exc)) from None
    data = atlas.classify(W, chamber, ns.point)
    if cfg.output == "json":
        _dump(data, out)
    else:
        can = data["canonical"]
        out.write(f"({data['diagram']},{data['chamber']}) = ({can['diagram']},{can['coset']})\n")
    return 0


def cmd_homology(cfg: Config, ns, out: TextIO) -> int:
    rs, W = _load(cfg)
    cc = cx.build_complex(rs, W)
    data = cx.homology_summary(cc)
    if ns.export_dir:
        ns.export_dir.mkdir(parents=True, exist_ok=True)
        for d, mat in sorted(cc.boundary.items()):
            text = f"# {mat.nrows} {mat.ncols}\n" + mat.to_triplet_text()
            (ns.export_dir / f"boundary_{d}.txt").write_text(text)
    if cfg.output == "json":
        _dump(data, out)
    else:
        groups = cx.homology(cc, check=False)
        out.write(f"{rs.name}: dims {data['dims']}, Euler {data['euler']}\n")
        for h in groups:
            out.write(f"H_{h.degree} = {h}\n")
    return 0


def _run_checks(checks: Dict[str, Callable[[], object]]) -> List[dict]:
    results = []
    for name, fn in checks.items():
        start = time.perf_counter()
        value = fn()
        ok = value if isinstance(value, bool) else bool(value)
        results.append({"check": name, "passed": ok,
                        "seconds": round(time.perf_counter() - start, 3)})
    return results


def verification_checks(rs, W, groups: Sequence[str]) -> Dict[str, Callable[[], object]]:
    checks: Dict[str, Callable[[], object]] = {}
    if "rootsys" in groups:
        for key, val in rootsys.self_test(rs, W).items():
            checks[f"rootsys.{key}"] = lambda v=val: v
    if "coxeter" in groups:
        def coxeter():
            return all(diagram.verify_coxeter(rs, S).passed
                       for k in range(1, rs.rank + 1) for S in combinations(range(rs.rank), k))
        checks["coxeter.all_subsets"] = coxeter
    if "complex" in groups or "atlas" in groups:
        state: Dict[str, object] = {}

        def cc():
            if "cc" not in state:
                state["cc"] = cx.build_complex(rs, W)
            return state["cc"]

        if "complex" in groups:
            def betti_sum():
                hs = cx.homology(cc())
                return sum((-1) ** h.degree * h.betti for h in hs) == cx.euler_characteristic(cc())

            def h0_and_top():
                hs = cx.homology(cc(), check=False)
                ok = hs[0].betti == 1 and not hs[0].torsion
                if rs.rank >= 2:
                    ok = ok and hs[-1].betti == 0 and not hs[-1].torsion
                return ok

            def top_cycle():
                _, bd = cx.top_cycle(cc())
                if rs.rank == 1:
                    return bd.is_zero()
                return not bd.is_zero() and all(v % 2 == 0 for v in bd.coeffs.values())

            checks["complex.dimensions"] = lambda: cc().dims() == cx.expected_dims(W)
            checks["complex.d_squared"] = lambda: cx.verify_d_squared(cc())
            checks["complex.equivariance"] = lambda: cx.verify_equivariance(cc())
            checks["complex.euler_equals_betti_sum"] = betti_sum
            checks["complex.h0_and_top_degree"] = h0_and_top
            checks["complex.top_cycle"] = top_cycle
        if "atlas" in groups:
            checks["atlas.cell_counts"] = lambda: atlas.count_cells(rs, W) == cc().dims()
    return checks


def cmd_verify(cfg: Config, ns, out: TextIO) -> int:
    groups = [g for g in ("rootsys", "coxeter", "complex", "atlas") if ns.all or getattr(ns, g)]
    if not groups:
        groups = ["rootsys", "coxeter", "complex", "atlas"]
    rs, W = _load(cfg)
    results = _run_checks(verification_checks(rs, W, groups))
    passed = all(r["passed"] for r in results)
    if cfg.output == "json":
        # timings vary between runs, so they stay out of the JSON
        _dump({"type": rs.name, "passed": passed,
               "checks": [{k: r[k] for k in ("check", "passed")} for r in results]}, out)
    else:
        for r in results:
            out.write(f"{'PASS' if r['passed'] else 'FAIL'} {r['check']} ({r['seconds']}s)\n")
        out.write(f"{rs.name}: {'all checks passed' if passed else 'FAILED'}\n")
    return 0 if passed else 1


def cmd_toda_simulate(cfg: Config, ns, out: TextIO) -> int:
    rs = rootsys.build_root_system(cfg.type_name, rank_cap=cfg.rank_cap)
    l = rs.rank
    for name in ("a", "b", "f", "signs"):
        val = getattr(ns, name)
        if val is not None and len(val) != l:
            raise TodaTopoError(f"--{name} has {len(val)} entries, rank is {l}")
    if ns.f is not None:
        if ns.signs is None:
            raise TodaTopoError("--f requires --signs")
        b = toda.b_from_f(rs, ns.f, ns.signs)
    else:
        b = ns.b
    try:
        state = toda.TodaState.make(ns.a, b, ns.signs)
    except ValueError as exc:
        raise TodaTopoError(str(exc)) from None
    traj = toda.integrate(state, ns.t_end, cfg.tol, rs=rs)
    if cfg.output == "csv":
        out.write(traj.to_csv(ns.samples))
    elif cfg.output == "json":
        _dump({"type": rs.name, **traj.to_json(ns.samples)}, out)
    else:
        out.write(f"{rs.name}: {len(traj.t)} accepted steps to t = {traj.t[-1]:.12g}\n")
        if traj.invariant_drift is not None:
            out.write(f"invariant drift {traj.invariant_drift:.3e}\n")
        for e in traj.events:
            signs = "".join("+" if x > 0 else "-" for x in e.epsilon_after)
            out.write(f"blow-up of b_{e.index + 1} at t* = {e.t_star:.12g}, signs after {signs}\n")
    return 0


_HANDLERS = {
    "rootsys info": cmd_rootsys_info,
    "cells": cmd_cells,
    "classify": cmd_classify,
    "homology": cmd_homology,
    "verify": cmd_verify,
    "toda simulate": cmd_toda_simulate,
}


def run(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = parser.parse_args(_glue(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = Config.from_namespace(ns)
        return _HANDLERS[cfg.command](cfg, ns, out)
    except TodaTopoError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())
