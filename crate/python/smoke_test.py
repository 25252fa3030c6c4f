"""Smoke test for the centext extension module.

Build and install first:

    pip install maturin
    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/centext-*.whl
    python python/smoke_test.py
"""

from fractions import Fraction
import json

import centext


def main():
    z3 = centext.AbelianGroup([3])
    assert centext.AbelianGroup([2, 3]).factors == [6]
    assert z3.order == 3

    carry = centext.Cocycle.carry(3, 3)
    assert carry.is_valid()
    assert carry.validate()["first_violation"] is None
    again = centext.Cocycle.from_json(carry.to_json())
    assert again == carry

    h = centext.h2(z3, z3)
    assert h.factors == [3]
    assert h.z2_order == 9 and h.b2_order == 3
    assert h.bilinear_factors() == []
    assert h.project(carry) != [0]

    g = centext.ExtensionGroup(carry)
    assert g.order == 9 and g.is_abelian()
    assert g.element_order(([1], [0])) == 9
    assert g.bilinear_representative() is None
    x = ([1], [0])
    assert g.power(x, 3) == ([0], [1])
    assert g.mul(x, g.inv(x)) == ([0], [0])

    e = g.embed()
    assert e.passed() and e.target_is_abelian()
    assert e.image_f == [9]
    a, f = e.phi(x)
    assert a == [1] and [Fraction(v) for v in f] == [Fraction(1, 9)]
    assert json.loads(e.to_json())["image_f"] == {"factors": [9]}

    v4 = centext.AbelianGroup([2, 2])
    z2 = centext.AbelianGroup([2])
    beta = centext.Cocycle.bilinear(v4, z2, [[[0], [1]], [[0], [0]]])
    d8 = centext.ExtensionGroup(beta)
    s = d8.structure()
    assert s["order"] == 8 and not s["abelian"] and s["center_order"] == 2
    assert d8.bilinear_representative() is not None
    assert d8.embed().passed()

    report = centext.carry_example(3)
    assert report["cyclic"] and not report["bilinear_representative"]

    bad = carry.table()
    bad[1][1] = [1]
    broken = centext.Cocycle(z3, z3, bad)
    assert not broken.is_valid()
    assert broken.validate()["first_violation"] is not None

    try:
        centext.AbelianGroup([0])
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
