"""Smoke test for the `groupwl` extension.

Build and run:
    cargo build --release -p groupwl-py --features extension-module
    cp target/release/libgroupwl.so python/groupwl.so
    python3 python/smoke_test.py
"""

import json

import groupwl


def main():
    k4 = groupwl.Graph.complete(4)
    assert k4.n == 4 and len(k4.edges()) == 6
    assert groupwl.Graph.parse(k4.to_text()).edges() == k4.edges()

    # CFI pair over K4: 1-WL is blind to the twist, 3-WL is not.
    even, meta = groupwl.cfi_build(k4)
    odd, _ = groupwl.cfi_build(k4, [(0, 1)])
    assert json.loads(meta)
    assert not groupwl.graph_wl(even, odd, 1)["distinguished"]
    assert groupwl.graph_wl(even, odd, 3)["distinguished"]
    assert groupwl.graph_iso(even, odd)[0] == "non_isomorphic"
    assert groupwl.graph_iso(even, even)[0] == "isomorphic"

    # Groups: Z4 vs Z2 x Z2.
    z4 = groupwl.Group.cyclic(4)
    v4 = groupwl.Group.cyclic(2).direct_product(groupwl.Group.cyclic(2))
    assert z4.order == v4.order == 4
    assert z4.invariants()["exponent"] == 4 and v4.invariants()["exponent"] == 2
    assert groupwl.wl_group(z4, v4, k=2, version="II")["distinguished"]
    assert groupwl.game_solve(z4, v4, pebbles=2, version="II") == "spoiler"
    assert groupwl.group_iso(z4, z4.relabel([0, 3, 2, 1]))[0] == "isomorphic"
    assert groupwl.group_iso(z4, v4) == ("non_isomorphic", None)
    assert len(groupwl.Group.corpus(8)) > 0

    # Mekler group of the path 0-1-2 over p = 3.
    path = groupwl.Graph(3, [(0, 1), (1, 2)])
    m = groupwl.MeklerGroup(path, 3)
    assert m.log_order == 3 + len(m.non_edges)
    print("v1*v2 =", m.mul("v1", "v2"))
    print("[v1,v3] =", m.commutator("v1", "v3"))
    assert m.to_group().order == 3 ** m.log_order

    # CFI groups over K4, p = 3.
    pair = groupwl.CfiGroupPair(k4, 3)
    distinguished, bits = pair.distinguish()
    assert distinguished and bits[0] != bits[1]
    found, equal = pair.twist_pipeline(20, k=3, seed=1)
    assert equal == found
    assert pair.centralizer_violations(200) == 0

    print("groupwl smoke test: ok")


if __name__ == "__main__":
    main()
