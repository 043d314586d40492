"""Smoke test for the diffn extension module.

Build and install first:
    pip install --no-build-isolation ./crates/python
"""
from fractions import Fraction

import diffn


def main():
    j1 = diffn.DiffObject.jordan_block("Q", 1, 2)
    j2 = diffn.DiffObject.jordan_block("Q", 2, 2)
    assert j2.jordan_type() == [2]
    assert j2.eps() == [["0", "0"], ["1", "0"]]
    assert j2.is_projective() and j2.is_acyclic()
    assert not j1.is_acyclic() and j1.homology_dim(1) == 1

    try:
        diffn.DiffObject("Q", 2, [[1]])
    except ValueError:
        pass
    else:
        raise AssertionError("eps = 1 is not nilpotent")

    x = diffn.DiffObject("Q", 3, [[0, 0, 0], [Fraction(1, 2), 0, 0], [0, "2", 0]])
    assert x.jordan_type() == [3]
    assert x.minimal_model().dim == 0

    # J1 (+) T(k) -> J1 is a quasi-isomorphism with a homotopy section
    t = diffn.DiffObject.augment("Q", 1, 3)
    j1 = diffn.DiffObject.jordan_block("Q", 1, 3)
    s = j1.direct_sum(t)
    proj = diffn.DiffMorphism(s, j1, [[1, 0, 0, 0]])
    assert proj.is_quasi_iso()
    g, w = proj.homotopy_section()
    assert proj.compose(g).homotopic(j1.identity())

    ident = j2.identity()
    assert ident.null_homotopy() is not None
    assert j1.identity().null_homotopy() is None
    assert j2.theta(1) == (0, 0)

    assert diffn.hom_dims(j1, j1) == (1, 0, 1)
    sx = j1.shift()
    assert [sx.homology_dim(r) for r in (1, 2)] == [j1.homology_dim(2), j1.homology_dim(1)]

    failures, report = diffn.verify(seed=1, field="5", n=3, trials=3)
    assert failures == 0, report
    print("ok")


if __name__ == "__main__":
    main()
