"""Command-line front end.

Exit status is 0 when every requested verification passes, 1 when one fails
and 2 on a usage error.  Relative output paths are resolved against
``$MATCHCODES_OUTPUT_DIR`` when it is set.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import io as mio
from .anyons import AnyonError, derive_fusion_table
from .code import CodeError, build, random_bicolorable_matching, verify_relations
from .color import build_embedding, combined_sector_count, verify_color_group
from .lattice import (
    LatticeError,
    honeycomb_torus,
    label_matching,
    modified_honeycomb_torus,
    planar_wen,
    tricolored_honeycomb_torus,
    validate,
    wen_matching,
)
from .majorana import BraidScript, BraidScriptError, MajoranaError, make_layout, run_script
from .render import Decorations, render_svg
from .threequbit import demo_three_qubit, report_json

OUTPUT_ENV = "MATCHCODES_OUTPUT_DIR"
BUILDERS = {
    "honeycomb": honeycomb_torus,
    "modified": modified_honeycomb_torus,
    "tricolored": tricolored_honeycomb_torus,
    "planar": planar_wen,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    lattice: str | None = None
    matching: str | None = None
    seed: int = 0
    shots: int | None = None
    outputs: dict[str, str] = field(default_factory=dict)
    flags: dict[str, object] = field(default_factory=dict)


def parse_lattice(desc: str):
    if desc.endswith(".json"):
        try:
            return mio.load_lattice(Path(desc).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read {desc}: {exc}") from None
    m = re.fullmatch(r"([a-z]+):(\d+)x(\d+)", desc)
    if not m or m.group(1) not in BUILDERS:
        raise UsageError(f"lattice descriptor {desc!r} must look like honeycomb:4x4 "
                         f"(builders: {', '.join(BUILDERS)}) or be a .json file")
    try:
        return BUILDERS[m.group(1)](int(m.group(2)), int(m.group(3)))
    except LatticeError as exc:
        raise UsageError(str(exc)) from None


def parse_matching(desc: str, lat):
    """Returns (matching, note)."""
    if desc.endswith(".json"):
        try:
            return mio.matching_from_list(json.loads(Path(desc).read_text())), desc
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read {desc}: {exc}") from None
    m = re.fullmatch(r"([xyz])-links", desc)
    if m:
        return label_matching(lat, m.group(1)), desc
    if desc == "wen":
        try:
            return wen_matching(lat), desc
        except LatticeError as exc:
            raise UsageError(str(exc)) from None
    m = re.fullmatch(r"random[:(](\d+)\)?", desc)
    if m:
        seed = int(m.group(1))
        try:
            mt, k = random_bicolorable_matching(lat, seed)
        except CodeError as exc:
            raise UsageError(str(exc)) from None
        return mt, f"random seed {seed} (attempt {k})"
    raise UsageError(f"matching descriptor {desc!r} must be x-links|y-links|z-links|wen|random:SEED|file.json")


def out_path(p: str) -> Path:
    path = Path(p)
    base = os.environ.get(OUTPUT_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _write(p: str | None, text: str) -> None:
    if p:
        out_path(p).write_text(text)


def _with_seed(text: str, seed: int) -> str:
    doc = json.loads(text)
    doc["seed"] = seed
    return mio.dumps(doc)


def _verdict(ok: bool) -> int:
    return 0 if ok else 1


# -- subcommands ------------------------------------------------------------------

def cmd_lattice(args, cfg: RunConfig) -> int:
    lat = parse_lattice(args.lattice)
    matching = None
    if args.matching:
        matching, _ = parse_matching(args.matching, lat)
    rep = validate(lat, matching)
    print(f"lattice {lat.name} {lat.dims[0]}x{lat.dims[1]}: {lat.num_vertices} vertices, "
          f"{lat.num_edges} edges, {len(lat.faces)} faces")
    print(f"validation: {'PASS' if rep.ok else 'FAIL'}")
    for line in getattr(rep, "problems", []) or []:
        print(f"  {line}")
    fill = {}
    if lat.face_types is not None:
        fill = dict(enumerate(lat.face_types))
    _write(args.svg, render_svg(lat, Decorations(matching=matching, face_fill=fill,
                                                 title=f"{lat.name} {lat.dims}")))
    if args.json:
        doc = mio.lattice_to_dict(lat)
        doc["seed"] = cfg.seed
        _write(args.json, mio.dumps(doc))
    return _verdict(rep.ok)


def _code_from_args(args):
    lat = parse_lattice(args.lattice)
    matching, note = parse_matching(args.matching, lat)
    try:
        return build(lat, matching), note
    except CodeError as exc:
        raise UsageError(str(exc)) from None


def cmd_code(args, cfg: RunConfig) -> int:
    code, note = _code_from_args(args)
    rep = verify_relations(code)
    print(f"code on {code.lattice.name} {code.lattice.dims[0]}x{code.lattice.dims[1]} with matching {note}")
    for line in rep.lines():
        print(line)
    if code.sign_fixes:
        print(f"sign fixes: {', '.join(code.sign_fixes)}")
    if args.json:
        doc = mio.code_to_dict(code)
        doc["seed"] = cfg.seed
        _write(args.json, mio.dumps(doc))
    if args.svg:
        fill = dict(enumerate(code.coloring)) if code.coloring else {}
        _write(args.svg, render_svg(code.lattice, Decorations(matching=code.matching, face_fill=fill)))
    return _verdict(rep.ok)


def cmd_anyons(args, cfg: RunConfig) -> int:
    code, note = _code_from_args(args)
    try:
        table = derive_fusion_table(code)
    except AnyonError as exc:
        print(f"classification failed: {exc}")
        return 1
    print(f"fusion table for matching {note} ({table.num_sectors} sectors)")
    print(table.grid())
    if table.m_source != "black plaquette":
        print(f"m realised as a {table.m_source} (the code has a single plaquette colour)")
    ok = table.is_d_z2()
    print(f"D(Z2) fusion rules: {'PASS' if ok else 'FAIL'}")
    if args.json:
        _write(args.json, _with_seed(table.to_json(), cfg.seed))
    return _verdict(ok)


DEFAULT_SCRIPT = "exchange 1 ccw\nexchange 1 cw\n"


def cmd_braid(args, cfg: RunConfig) -> int:
    lat = parse_lattice(args.lattice)
    if lat.name != "modified":
        raise UsageError("braid needs a modified lattice, e.g. modified:4x4")
    code = build(lat, label_matching(lat, "z"))
    try:
        layout, state = make_layout(code, args.d, args.line_row)
    except MajoranaError as exc:
        raise UsageError(str(exc)) from None
    text = DEFAULT_SCRIPT
    if args.script:
        try:
            text = Path(args.script).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.script}: {exc}") from None
    try:
        script = BraidScript.parse(text)
        script.validate(layout)
    except BraidScriptError as exc:
        raise UsageError(str(exc)) from None
    print(f"layout: {layout.num_majoranas} Majoranas at {layout.majorana_positions}, d={layout.d}")
    try:
        res = run_script(script, layout, state, seed=cfg.seed)
    except MajoranaError as exc:
        print(f"protocol error: {exc}")
        return 1
    for line in res.log:
        print(line)
    print(f"braid verification: {'PASS' if res.ok else 'FAIL'}")
    if args.svg:
        paths = [layout.parity_paths[j] for j in sorted(layout.parity_paths)]
        _write(args.svg, render_svg(lat, Decorations(matching=layout.current_matching, paths=paths,
                                                     majoranas=layout.majorana_positions)))
    if args.json:
        doc = mio.layout_to_dict(layout)
        doc["seed"] = cfg.seed
        _write(args.json, mio.dumps(doc))
    return _verdict(res.ok)


def cmd_demo3q(args, cfg: RunConfig) -> int:
    if args.shots < 1:
        raise UsageError("--shots must be at least 1")
    rep = demo_three_qubit(args.shots, cfg.seed, args.mode, args.orientation, jobs=args.jobs)
    text = report_json(rep) + "\n"
    if args.json:
        _write(args.json, text)
    else:
        sys.stdout.write(text)
    return _verdict(rep["ok"])


def cmd_embed_color(args, cfg: RunConfig) -> int:
    lat = parse_lattice(args.lattice)
    try:
        emb = build_embedding(lat)
    except (ValueError,) as exc:
        raise UsageError(str(exc)) from None
    equal = verify_color_group(emb)
    sectors = combined_sector_count(emb)
    print(f"COLOR GROUP EQUAL: {'true' if equal else 'false'}")
    print(f"combined sectors: {sectors}")
    if args.json:
        _write(args.json, _with_seed(emb.to_json(), cfg.seed))
    return _verdict(equal and sectors == 16)


# -- parser ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="matchcodes", description="Matching-code builders, verifiers and protocol runners.")
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("lattice", help="build, validate and render a lattice")
    s.add_argument("--lattice", required=True)
    s.add_argument("--matching")
    s.add_argument("--svg")
    s.add_argument("--json")
    s.set_defaults(func=cmd_lattice)

    for name, func, helptext in (("code", cmd_code, "build a code and check its relations"),
                                 ("anyons", cmd_anyons, "derive the fusion table")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--lattice", required=True)
        s.add_argument("--matching", default="z-links")
        s.add_argument("--json")
        if name == "code":
            s.add_argument("--svg")
        s.set_defaults(func=func)

    s = sub.add_parser("braid", help="create Majoranas and run a braid script")
    s.add_argument("--lattice", default="modified:4x4")
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--line-row", type=int, default=0)
    s.add_argument("--script")
    s.add_argument("--svg")
    s.add_argument("--json")
    s.set_defaults(func=cmd_braid)

    s = sub.add_parser("demo3q", help="three-qubit exchange demonstration")
    s.add_argument("--shots", type=int, default=2000)
    s.add_argument("--mode", choices=("postselect", "corrected"), default="postselect")
    s.add_argument("--orientation", choices=("ccw", "cw"), default="ccw")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--json")
    s.set_defaults(func=cmd_demo3q)

    s = sub.add_parser("embed-color", help="embed a surface code and compare with the color code")
    s.add_argument("--lattice", default="tricolored:3x3")
    s.add_argument("--json")
    s.set_defaults(func=cmd_embed_color)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a subcommand is required")
        cfg = RunConfig(args.command, getattr(args, "lattice", None), getattr(args, "matching", None),
                        args.seed, getattr(args, "shots", None))
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
