"""Smoke test for the heis extension module."""

import heis

m = heis.normalize("t' . t")
assert m.source == "ud" and m.target == "ud", m
assert m == heis.Morphism.identity("ud")

assert heis.normalize("d' . c") == heis.Morphism.identity("")
assert len(heis.normalize("t . t'").terms()) == 2

assert heis.homdim("du", "du") == len(heis.basis("du", "du")) == 2
assert heis.homdim("ud", "ud") == 1
assert heis.oracle_equal("t' . t", "id:ud")

w = heis.normal_order("ddxx")
assert str(w) == "x^2∂^2 + 4x∂ + 2", str(w)
assert w.coeffs()[(0, 0)] == 2
assert heis.iso("du", "ud + 1")
assert str(heis.k0("du")) == str(heis.normal_order("xd + 1"))

assert heis.decompose("du") == [((0, 0), 1), ((1, 1), 1)], heis.decompose("du")
assert heis.ideal_member("two_sided", "u", "ud")
assert heis.selftest_relations(2)["pass"]
assert heis.selftest_closure(2, 3)["pass"]
d = m.to_dict()
assert d["schema"] == heis.SCHEMA == "heis/1"
print(m.render("ascii"))
print("smoke test ok")
