import time

import pytest

from conftest import model_of, spec_of
from oracles import ce_betti, realify, torus_hodge
from gerst.cohomology import betti_numbers, cohomology, compute, model_complex
from gerst.errors import StructuralError
from gerst.linalg import Echelon
from gerst.models import build_forms_model, build_splitting_models

HEISENBERG = {(0, 1): {2: 1}}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_torus_hodge_numbers(n):
    B, C = build_splitting_models(spec_of(f"torus-{n}"))
    expected = torus_hodge(n)
    assert cohomology(B, "bigrade").dims == expected
    assert cohomology(C, "bigrade").dims == expected


def test_iwasawa_de_rham_matches_ce_oracle():
    t0 = time.perf_counter()
    forms = build_forms_model(spec_of("iwasawa"), "d")
    betti = betti_numbers(forms)
    assert betti == [1, 4, 8, 10, 8, 4, 1]
    assert betti == ce_betti(*realify(HEISENBERG, 3))
    assert time.perf_counter() - t0 < 10


def test_heisenberg_times_c_de_rham():
    forms = build_forms_model(spec_of("heisenberg-c"), "d")
    assert betti_numbers(forms) == ce_betti(*realify(HEISENBERG, 4))


def test_filiform_de_rham_matches_ce_oracle():
    structure = {(0, 1): {2: 1}, (0, 2): {3: 1}}
    forms = build_forms_model(spec_of("filiform-4"), "d")
    assert betti_numbers(forms) == ce_betti(*realify(structure, 4))


def test_iwasawa_polyvector_cohomology():
    dims = cohomology(model_of("iwasawa"), "bigrade").dims
    dolbeault = [1, 2, 2, 1]
    # holomorphically parallelizable: every (p, q) is Lambda^p of the frame times H^{0,q}
    assert dims == {(p, q): [1, 3, 3, 1][p] * dolbeault[q] for p in range(4) for q in range(4)}


def test_semidirect_total_cohomology():
    dims = cohomology(model_of("cxn1n2-k1-k2"), "degree", representatives=False).dims
    assert [dims[k] for k in range(15)] == [1, 2, 10, 28, 64, 106, 143, 164, 143, 106, 64, 28, 10, 2, 1]


@pytest.mark.parametrize("key", ["iwasawa", "nakamura-generic", "nakamura-pi", "filiform-4"])
def test_representatives_are_closed_and_independent_mod_exact(key):
    m = model_of(key)
    table = cohomology(m, "degree")
    for k, reps in table.representatives.items():
        assert len(reps) == table.dims[k]
        e = Echelon("forward")
        for i in m.indices(k - 1) if k else []:
            if m.diff(i):
                e.insert(m.diff(i))
        exact_rank = e.rank
        for r in reps:
            assert not m.diff_vec(r)
            e.insert(r)
        assert e.rank == exact_rank + len(reps)


@pytest.mark.parametrize("key", ["iwasawa", "cxn1n2-k1-k2", "nakamura-pi"])
def test_pivot_orders_agree_and_euler(key):
    m = model_of(key)
    cx = model_complex(m, "degree")
    a = compute(cx, "forward", False)
    b = compute(cx, "reverse", False)
    assert a.dims == b.dims
    assert a.euler_characteristic() == sum((-1) ** k * d for k, d in m.dims_by_degree().items())


def test_full_derivative_has_no_bigrading():
    with pytest.raises(StructuralError):
        model_complex(build_forms_model(spec_of("iwasawa"), "d"), "bigrade")
