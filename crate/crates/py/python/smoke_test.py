"""Smoke test for the okounkov extension module.

Run after `maturin develop` (or with the built shared library on PYTHONPATH):

    python crates/py/python/smoke_test.py
"""

import os

import okounkov as ok

HERE = os.path.dirname(os.path.abspath(__file__))
EXAMPLES = os.path.join(HERE, "..", "..", "cli", "examples")


def main():
    conic_model = ok.Model.projective(2, 2)
    conic = ok.Flag.curve("z0 z2 - z1^2", ["u^2", "u t", "t^2"])
    assert all(status != "fail" for _, status, _ in conic.validate(conic_model))

    image = ok.valuation_image(conic_model, conic, 1)
    assert image == [[0, 0], [0, 1], [1, 0], [2, 0], [3, 0], [4, 0]], image

    body = ok.body(conic_model, conic, 1)
    assert body.vertices == [["0", "0"], ["0", "1"], ["4", "0"]], body.vertices
    assert body.volume() == "2"
    assert ok.Polytope.from_json(body.to_json()) == body

    report = ok.verify_theorem(conic_model, conic, 1)
    assert report["contained"] and report["equal"] and report["e1_gap"] == "0" and report["b"] == 4

    assert ok.decompose([3, 0], 1, 4) == ["1/4", "3/4", "0"]
    try:
        ok.decompose([5, 0], 1, 4)
    except ok.OkounkovError as e:
        assert "outside predicted simplex" in str(e)
    else:
        raise AssertionError("out-of-simplex point decomposed")

    w = ok.lemma_witness(conic_model, conic, "7/2")
    assert (w["m"], w["v1"], w["N"], w["valuation"]) == (3, 11, 1, [11, 0]), w

    rows = ok.volume_table(conic_model, conic, 5, 2)
    assert rows[4] == (5, 66, "66/25", None) and rows[1][3] == "2", rows
    assert [ok.restriction_rank(conic_model, conic, j) for j in range(1, 4)] == [5, 9, 13]
    assert ok.axiom_violations(conic_model, conic, 50, 1) == 0

    model, flag = ok.load_config(os.path.join(EXAMPLES, "toric-square.toml"))
    square = ok.Polytope.hull([["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"], ["1/2", "1/2"]])
    assert ok.body(model, flag, 1) == square
    assert model.hilbert_dim(4) == 25
    assert ok.scaling_check(model, flag, 3, 1)
    assert square.scale("2").volume() == "4"
    assert square.contains_point(["1/3", "2/3"]) and not square.contains_point(["2", "0"])

    print("okounkov smoke test: ok")


if __name__ == "__main__":
    main()
