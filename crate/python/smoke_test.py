"""Smoke test for the drsys Python bindings."""

import drsys_py as d

o2 = d.corpus_graph("o2")
assert o2.vertex_count == 1 and o2.edge_count == 2, o2
assert [o2.periodic_count(p) for p in range(1, 5)] == [2, 4, 8, 16]
assert o2.condition_l()

loop = d.corpus_graph("loop")
assert not loop.condition_l()

p2 = d.corpus_graph("p2")
assert p2.sinks(), p2.to_text()
assert d.Graph(p2.to_text()).to_text() == p2.to_text()

for name in d.corpus_instances():
    fwd, bwd, expected = d.corpus_instance(name)
    report = d.conjugacy(fwd, bwd, depth=3, seed=0)
    verdict = report["verdict"]
    assert verdict["is_homeomorphism"], name
    assert verdict["is_conjugacy"] == expected, name
    assert verdict["routes_agree"], name
    if expected:
        assert d.cocycle_intertwine(fwd, bwd, depth=3)["ok"], name

fixed = d.fixed_points(p2)
assert fixed["numeric_agrees"] and fixed["is_diagonal"], fixed

fwd, bwd, _ = d.corpus_instance("p2-relabel")
assert d.star_isomorphism(fwd, bwd)["conjugacy"]
fwd, bwd, _ = d.corpus_instance("p2-point-swap")
assert not d.star_isomorphism(fwd, bwd)["conjugacy"]

try:
    d.Graph("this is not a graph")
except ValueError:
    pass
else:
    raise AssertionError("bad graph text accepted")

print("python smoke test: ok")
