"""Smoke test for the permuta_py extension.

Build it first:  pip install --no-build-isolation -e crates/python
"""

import itertools

import permuta_py as pm


def test_langford_first_solution():
    p = pm.Problem.instance("langford:3,9", "all-diff")
    r = p.solve(heuristic="lex", goal="first")
    assert r.solution_count == 1 and r.fails == 12, r
    seq = pm.langford_sequence(r.solutions[0], 9)
    for d in range(1, 10):
        pos = [i for i, v in enumerate(seq) if v == d]
        assert pos[1] - pos[0] == d + 1 and pos[2] - pos[1] == d + 1


def test_models_agree():
    counts = {m: pm.Problem.instance("langford:2,4", m).solve(goal="all").solution_count
              for m in ["neq", "c", "all-diff", "neq-c-neq"]}
    assert set(counts.values()) == {2}, counts


def test_permutation_count():
    r = pm.Problem.permutation(4, "c").solve(goal="all")
    assert sorted(map(tuple, r.solutions)) == sorted(itertools.permutations(range(1, 5)))


def test_propagation():
    p = pm.Problem.permutation(3, "c")
    p.set_primal_domain(1, [1, 2])
    p.set_primal_domain(2, [1, 2])
    doms = p.propagate()
    assert doms[:3] == [[1, 2], [1, 2], [3]], doms
    assert pm.gac_alldiff([[1], [1]]) is None
    inj = pm.Problem.injection(3, 5, "injection-c2")
    assert (inj.num_primal, inj.num_dual) == (3, 5)


def test_reference_and_lockstep():
    row = pm.run("langford:3,9", "c", "lex", "first")
    assert row["ref_fails"] == 12 and row["delta"] == 0, row
    assert len(pm.reference_cells()) > 400
    lock = pm.Problem.instance("langford:2,4", "neq").lockstep("channelling")
    assert lock["equal"], lock
    assert pm.is_golomb_ruler([0, 1, 4, 9, 11])
    try:
        pm.Problem.permutation(3, "bogus")
    except ValueError:
        pass
    else:
        raise AssertionError("bad model tag accepted")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print("ok", name)
