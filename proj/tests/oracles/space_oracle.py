"""Independent brute-force enumeration of the traffic-light state spaces.

The two machines are hand-coded here as Python transition functions over the
full typed value space; nothing is shared with the C++ implementation.
Prints the numbers frozen into the C++ tests.
"""
from collections import deque
from itertools import product

COLORS = ["red", "redyellow", "yellow", "green"]
CMDS = ["cmd_cars_ry", "cmd_cars_y", "cmd_cars_g", "cmd_cars_r", "cmd_peds_r", "cmd_peds_g", "cmd_none"]


def tl_events(s):
    c, p = s
    out = []
    if c == "red" and p == "red":
        out.append(("cars_ry", ("redyellow", p)))
    if c == "green":
        out.append(("cars_y", ("yellow", p)))
    if c == "redyellow":
        out.append(("cars_g", ("green", p)))
    if c == "yellow":
        out.append(("cars_r", ("red", p)))
    if p == "green":
        out.append(("peds_r", (c, "red")))
    if p == "red" and c == "red":
        out.append(("peds_g", (c, "green")))
    return out


def ref_events(s):
    c, p, q = s
    out = []
    for cmd in CMDS:
        if cmd != "cmd_none" and q == "cmd_none":
            out.append(("Send_cmd(%s)" % cmd, (c, p, cmd)))
    if q != "cmd_none":
        out.append(("Reject_cmd", (c, p, "cmd_none")))
    if c == "red" and p == "red" and q == "cmd_cars_ry":
        out.append(("cars_ry", ("redyellow", p, "cmd_none")))
    if c == "green" and q == "cmd_cars_y":
        out.append(("cars_y", ("yellow", p, "cmd_none")))
    if c == "redyellow" and q == "cmd_cars_g":
        out.append(("cars_g", ("green", p, "cmd_none")))
    if c == "yellow" and q == "cmd_cars_r":
        out.append(("cars_r", ("red", p, "cmd_none")))
    if p == "green" and q == "cmd_peds_r":
        out.append(("peds_r", (c, "red", "cmd_none")))
    if c == "red" and p == "red" and q == "cmd_peds_g":
        out.append(("peds_g", (c, "green", "cmd_none")))
    return out


def explore(init, events, typed_space):
    # Reachability by fixpoint over the typed space, not by a worklist.
    reach = {init}
    changed = True
    while changed:
        changed = False
        for s in typed_space:
            if s in reach:
                for _, t in events(s):
                    if t not in reach:
                        reach.add(t)
                        changed = True
    edges = [(s, lbl, t) for s in sorted(reach) for lbl, t in events(s)]
    return reach, edges


def opname(label):
    return label.split("(")[0]


def report(name, init, events, typed_space, proj):
    reach, edges = explore(init, events, typed_space)
    print("==", name)
    print("states incl root:", len(reach) + 1)
    print("transitions incl init:", len(edges) + 1)
    print("deadlocks:", sum(1 for s in reach if not events(s)))
    per_op = {}
    for _, lbl, _ in edges:
        per_op[opname(lbl)] = per_op.get(opname(lbl), 0) + 1
    print("per op:", sorted(per_op.items()))
    ed = sorted({(opname(l), opname(l2)) for s, l, t in edges for l2, _ in events(t)})
    print("ED pairs (%d):" % len(ed), ed)
    pe = sorted({(proj(s), l, proj(t)) for s, l, t in edges})
    print("projection nodes:", sorted({proj(s) for s in reach}))
    print("projection edges (%d + init):" % len(pe))
    for e in pe:
        print("  ", e)
    return reach, edges


def mcdc_tl(reach):
    # Guard leaves at depth 2 for the traffic light: a conjunction of two
    # equalities counts two conditions, a single equality one.
    guards = {
        "cars_ry": [lambda s: s[0] == "red", lambda s: s[1] == "red"],
        "cars_y": [lambda s: s[0] == "green"],
        "cars_g": [lambda s: s[0] == "redyellow"],
        "cars_r": [lambda s: s[0] == "yellow"],
        "peds_r": [lambda s: s[1] == "green"],
        "peds_g": [lambda s: s[1] == "red", lambda s: s[0] == "red"],
    }
    total = witnessed = 0
    for op, conds in guards.items():
        for i, _ in enumerate(conds):
            for want in (True, False):
                total += 1
                for s in reach:
                    vals = [c(s) for c in conds]
                    if vals[i] != want:
                        continue
                    flip_t = all(v if j != i else True for j, v in enumerate(vals))
                    flip_f = all(v if j != i else False for j, v in enumerate(vals))
                    if flip_t != flip_f:
                        witnessed += 1
                        break
    print("MCDC level 2 requirements:", total, "witnessed:", witnessed)


if __name__ == "__main__":
    tl_space = list(product(COLORS, ["red", "green"]))
    reach, _ = report("TrafficLight", ("red", "red"), tl_events, tl_space, lambda s: s[1])
    mcdc_tl(reach)
    ref_space = list(product(COLORS, COLORS, CMDS))
    ref_reach, ref_edges = report("TrafficLightCommand_Ref", ("red", "red", "cmd_none"), ref_events, ref_space,
                                  lambda s: s[2])
    print("EF queuedCmd=cmd_peds_g:", any(s[2] == "cmd_peds_g" for s in ref_reach))
