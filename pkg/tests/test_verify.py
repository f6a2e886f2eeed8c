import random

from ahilb import lattice_context, parse_group_spec
from ahilb.verify import random_group_spec, run_checks, run_random_suite


def test_run_checks_names_are_stable():
    ctx = lattice_context(parse_group_spec("1/11(1,2,8)"))
    results = run_checks(ctx)
    assert all(r.ok for r in results)
    names = [r.name.split(":")[0] for r in results]
    assert names == [
        "lattice", "corners", "corners", "corners", "mmp", "partition",
        "partition", "partition", "fan", "fan", "monomials", "monomials",
        "monomials", "clusters",
    ]


def test_sampler_is_deterministic():
    a = [random_group_spec(random.Random(11), 40).canonical_text
         for _ in range(5)]
    rng = random.Random(11)
    b = [random_group_spec(rng, 40).canonical_text for _ in range(5)]
    assert a[0] == b[0]
    groups = [random_group_spec(random.Random(3), 40).canonical_text
              for _ in range(3)]
    assert len(set(groups)) == 1


def test_sampler_respects_cap():
    rng = random.Random(5)
    for _ in range(30):
        spec = random_group_spec(rng, 25)
        ctx = lattice_context(spec)
        assert ctx.order <= 25


def test_small_random_suite_clean():
    count, failures = run_random_suite(25, 40, seed=123)
    assert count == 25
    assert failures == []


def test_suite_deterministic():
    a = run_random_suite(8, 30, seed=9)
    b = run_random_suite(8, 30, seed=9)
    assert a == b
