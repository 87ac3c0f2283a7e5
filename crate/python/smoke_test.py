"""Smoke test for the lpa_ibn extension module.

Build the module first, e.g. `maturin develop -m crates/python/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

import json

import lpa_ibn


def main():
    sink = lpa_ibn.Graph.parse("vertices u v\nedge u u 2\nedge u v\n")
    v = lpa_ibn.decide_ibn(sink)
    assert (v.has_ibn, v.rank_left, v.rank_right) == (False, 1, 1), v
    assert json.loads(v.to_json()) == {"hasIbn": False, "rankLeft": 1, "rankRight": 1}
    g = lpa_ibn.decide_gribn(sink)
    assert g.has_gr_ibn and g.reason == "sink-present" and g.certificate is None

    uniform = lpa_ibn.Graph(["u", "v"], [[3, 2], [1, 2]])
    g = lpa_ibn.decide_gribn(uniform)
    assert not g.has_gr_ibn and g.reason == "column-sum-uniform" and g.column_sum == 4
    assert (g.certificate.p, g.certificate.q) == ([1], [0, 0, 0, 0])
    assert lpa_ibn.verify_certificate(uniform, g.certificate)
    assert lpa_ibn.column_sum_shortcut(uniform) == 4

    fib = lpa_ibn.Graph(["u", "v"], [[1, 1], [1, 0]])
    cert = lpa_ibn.exact_certificate(fib)
    assert cert == lpa_ibn.Certificate([0, 1], [2]), cert
    assert lpa_ibn.bounded_certificate_search(fib, max_exp=3, max_terms=4) == cert
    left, right = lpa_ibn.certificate_to_equation(fib, cert)
    assert lpa_ibn.monoid_equal(fib, left, right)
    assert lpa_ibn.monoid_equal(fib, "u(1)+v(1)", "2*u(2)+v(2)")
    assert lpa_ibn.monoid_shift(fib, "u(1)", -3) == "u(-2)"
    assert not lpa_ibn.verify_certificate(fib, lpa_ibn.Certificate([0], [1]))

    s3 = lpa_ibn.Group.symmetric(3)
    assert [len(c) for c in s3.conjugacy_classes()] == [1, 3, 2]
    hopf = lpa_ibn.hopf_graph(s3, "(123):1")
    assert sum(map(sum, hopf.adjacency)) == 12
    assert lpa_ibn.decide_gribn(hopf).has_gr_ibn is False

    z4 = lpa_ibn.Group.cyclic(4)
    c4 = lpa_ibn.cayley_graph(z4, ["1"])
    assert lpa_ibn.decide_gribn(c4).reason == "no-relation-exists"
    assert lpa_ibn.sufficient_ibn_maximal(c4)
    assert lpa_ibn.cyclic_cayley(4, 2).adjacency == lpa_ibn.cayley_graph(z4, ["1", "2"]).adjacency

    prod = lpa_ibn.cycle(3).cartesian_product(lpa_ibn.line(2))
    assert lpa_ibn.decide_gribn(prod).has_gr_ibn
    assert lpa_ibn.Graph.parse(prod.to_text()) == prod

    ext = lpa_ibn.Graph(["u", "v", "w"], [[3, 2, 0], [1, 2, 1], [0, 0, 0]])
    assert ext.hereditary_saturated_sets() == [[], ["w"], ["u", "v", "w"]]
    assert ext.quotient(["w"]).adjacency == [[3, 2], [1, 2]]

    try:
        ext.quotient(["v"])
    except lpa_ibn.LpaError as e:
        assert "hereditary" in str(e)
    else:
        raise AssertionError("quotient by a non-hereditary set succeeded")

    print("lpa_ibn smoke test passed")


if __name__ == "__main__":
    main()
