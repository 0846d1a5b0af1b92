"""Smoke test for the orbiroot extension module.

Build and install first:

    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/orbiroot-*.whl
    python python/smoke_test.py
"""

from fractions import Fraction

import orbiroot


def main():
    cfg = orbiroot.OrbiConfig(0, 3, 2)
    assert (cfg.genus, cfg.num_points, cfg.root_index) == (0, 3, 2)

    e = orbiroot.ParBundle(cfg, [(-1, ["1/2", "1/2", "0/2"])])
    assert e.deg_par() == Fraction(0)
    assert e.deg_par_hilbert() == e.deg_par()
    assert e.degree_theorem_holds()

    f = e.to_stack()
    assert f.summands() == [(-1, [1, 1, 0])]
    assert f.to_parabolic() == e
    assert f.deg_stack() == Fraction(0)
    assert f.is_finite()

    h = orbiroot.ParBundle(cfg, [(0, [Fraction(1, 2), 0, 0]), (2, ["0/2", "1/2", "1/2"])])
    par, push, inertia = h.chi_three_way()
    assert par == push == inertia == h.chi_par()
    assert not h.to_stack().is_semistable()

    k = orbiroot.StackBundle(cfg, [(-1, [1, 1, 0]), (0, [0, 0, 0])])
    p, q = k.witness(4)
    assert (p, q) == (["0", "0", "1"], ["0", "2"])
    assert orbiroot.StackBundle(cfg, [(0, [1, 0, 0])]).witness(4) is None

    assert e.tensor(e).to_stack() == f.tensor(f)
    assert k.chi_inertia() == k.chi()

    assert len(cfg.finite_lines()) == 4
    count, lo, hi = cfg.verify_structure_theorem()
    assert count == 4 and -3 < lo <= hi <= 0

    shifts = orbiroot.decompose_shifts(2, [0, 1], [["1", "t"], ["t", "1+t^2"]])
    assert shifts == [(0, 1), (1, 1)]

    checks = orbiroot.selftest(20, 3)
    assert all(failures == 0 for _, _, failures in checks), checks

    try:
        orbiroot.ParBundle(cfg, [(0, ["1/3", "0/2", "0/2"])])
    except ValueError as err:
        assert "1/3" in str(err)
    else:
        raise AssertionError("weight with the wrong denominator was accepted")

    print("orbiroot smoke test: ok")


if __name__ == "__main__":
    main()
