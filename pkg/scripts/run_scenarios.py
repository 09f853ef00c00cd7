"""Walk the 16-object example stream through one edge and print each step."""

from epus_sky.edge import EdgeNode
from epus_sky.running_example import (SCENARIO_MESSAGES, SCENARIO_STATES, SCENARIO_WINDOW,
                                      scenario_objects, table_objects)
from epus_sky.skyline import brute_force_skyline
from epus_sky.uncertain import object_dominance_probability


def names(ids):
    return "[" + ",".join(f"u{i}" for i in sorted(ids)) + "]"


def main():
    t = table_objects()
    print(f"P(u2 dominates u1) = {object_dominance_probability(t[2], t[1]):.4f}")
    print(f"skyline of the three-object table: {names(brute_force_skyline(t.values()))}")
    print()

    node = EdgeNode(1, SCENARIO_WINDOW, fanout=4, check=True)
    objs = scenario_objects()
    node.bootstrap(objs[:SCENARIO_WINDOW])
    node.t = SCENARIO_WINDOW
    print(f"{'t':>3}  {'skyline':<18} {'candidates':<14} message")
    for o in objs[SCENARIO_WINDOW:]:
        m = node.step([o])
        sk1, sk2 = node.state.ids()
        msg = (f"{{obsolete:{names(m.obsolete_ids)}, sky:{names(x.id for x in m.new_skyline)}, "
               f"cand:{names(x.id for x in m.new_candidates)}}}")
        want = SCENARIO_STATES[node.t]
        mark = "ok" if (sk1, sk2) == want else "MISMATCH"
        if node.t in SCENARIO_MESSAGES:
            ob, sk, ca = SCENARIO_MESSAGES[node.t]
            if (m.obsolete_ids, [x.id for x in m.new_skyline],
                    [x.id for x in m.new_candidates]) != (ob, sk, ca):
                mark = "MISMATCH"
        print(f"{node.t:>3}  {names(sk1):<18} {names(sk2):<14} {msg}  {mark}")


if __name__ == "__main__":
    main()
