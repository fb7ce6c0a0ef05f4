"""Create a line of Majoranas on the modified honeycomb, braid two of them and fuse.

Writes ``braid.svg`` next to the working directory (or under
``$MATCHCODES_OUTPUT_DIR``).
"""

from matchcodes.cli import out_path
from matchcodes.code import build
from matchcodes.lattice import label_matching, modified_honeycomb_torus
from matchcodes.majorana import (
    BraidScript,
    exchange,
    fuse,
    layout_syndrome,
    make_layout,
    parity_operator,
    plan_exchange,
    run_script,
    verify_exchange,
)
from matchcodes.render import Decorations, render_svg


def main():
    lat = modified_honeycomb_torus(4, 4)
    layout, state = make_layout(build(lat, label_matching(lat, "z")), d=1)
    print(f"{layout.num_majoranas} Majoranas at {layout.majorana_positions}")

    route = plan_exchange(layout, 1, "ccw")
    print(f"route for exchanging 1 and 2: legs {route.legs}, waypoint {route.waypoint}")
    for o in ("ccw", "cw"):
        print(f"verify_exchange(1, {o}): {verify_exchange(layout, state, 1, o)}")

    pis = [parity_operator(layout, j) for j in range(layout.num_majoranas - 1)]
    lay, s = layout.copy(), state.copy()
    print("parities before:", [s.expectation(p) for p in pis])
    rec = exchange(s, lay, 1, "ccw", seed=1)
    print(f"one exchange: {len(rec.steps)} teleport hops, background restored: {rec.background_restored}")
    print("parities after one exchange:", [s.expectation(p) for p in pis])
    exchange(s, lay, 1, "ccw", seed=2)
    print("parities after two:", [s.expectation(p) for p in pis])
    print("syndrome:", layout_syndrome(lay, s) or "clean")
    print("fuse 0 ->", fuse(s, lay, 0).outcome)

    script = BraidScript.parse("exchange 0 ccw\nexchange 1 ccw\nexchange 0 ccw\nfuse 2\n")
    res = run_script(script, layout.copy(), state.copy(), seed=3)
    print("\n".join(res.log))

    paths = [layout.parity_paths[j] for j in sorted(layout.parity_paths)]
    svg = render_svg(lat, Decorations(matching=layout.current_matching, paths=paths,
                                      majoranas=layout.majorana_positions))
    target = out_path("braid.svg")
    target.write_text(svg)
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
