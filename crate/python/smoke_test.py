"""Smoke test for the dexbound extension module.

Build and install first:
    pip install --no-build-isolation ./crates/python
"""

import json
from fractions import Fraction
from pathlib import Path

import dexbound

ROOT = Path(__file__).resolve().parent.parent


def main():
    base = dexbound.Instance(2, [([0], [1], 1), ([1], [0], 1)])
    assert base.is_valid(), base.validate()
    assert dexbound.generic_bound(base) == 2

    cyclic = dexbound.Instance.load(ROOT / "instances" / "cyclic3.json")
    assert cyclic.centralized and cyclic.k == 4
    assert dexbound.centralized_bound(cyclic) == Fraction(3, 2)
    assert dexbound.profile_bound(cyclic) == Fraction(3, 2)
    assert dexbound.alpha(cyclic) == (2, [1, 2, 3])
    assert dexbound.permutation_bound(cyclic, [1, 2, 3]) == 2
    assert dexbound.tightness(cyclic) is not None

    doc = json.loads(dexbound.scheme(cyclic))
    assert doc["verified"] and doc["load"] == 3

    load, certified, rows = dexbound.linear_optimal_load(cyclic)
    assert (load, certified) == (2, True) and len(rows) == 2
    try:
        dexbound.linear_optimal_load(cyclic, max_load=1)
    except dexbound.BudgetExhausted as e:
        assert e.args[1:] == (2, 3)
    else:
        raise AssertionError("expected the search to run out of budget")

    half = dexbound.Instance(2, [([0], [1], Fraction(1, 2)), ([1], [0], "3/2")])
    assert dexbound.generic_bound(half) == 2
    assert dexbound.Instance.from_json(half.to_json()).classes == half.classes

    bad = dexbound.Instance(2, [([0], [0], 1)])
    assert not bad.is_valid() and bad.validate()
    try:
        dexbound.generic_bound(bad)
    except ValueError:
        pass
    else:
        raise AssertionError("invalid instance accepted")

    constructed, closed, inst = dexbound.caching(4, 4, 1, 4)
    assert constructed == closed == 6 and inst.is_valid()
    constructed, closed, _ = dexbound.decentralized(3, 3, 1, 12)
    assert constructed == closed
    constructed, closed = dexbound.cdc(4, 4, 2, 4)
    assert constructed == closed == Fraction(1, 4)
    constructed, closed = dexbound.shuffling(3, 2, 4, 2)
    assert constructed >= closed

    print("smoke test passed")


if __name__ == "__main__":
    main()
