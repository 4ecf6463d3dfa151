import pytest

from conftest import model_of, spec_of
from oracles import ce_betti, nakamura_poisson_dims, realify
from gerst.cohomology import cohomology
from gerst.errors import ClosureError, RejectionError
from gerst.exterior import Element
from gerst.linalg import Echelon
from gerst.manifest import parse_manifest
from gerst.models import build_complex_model
from gerst.poisson import (check_double_complex, dims_list, mu_from_spec, poisson_cohomology,
                           verify_poisson)
from gerst.scalar import ONE, Character

NAKAMURA_DIMS = [1, 2, 4, 6, 3, 0, 0]


def label_terms(model, el: Element):
    T = model.algebra
    return {T.label(c, w): str(s) for (c, w), s in el.terms.items()}


def structure(key):
    m = model_of(key)
    return m, verify_poisson(m, mu_from_spec(spec_of(key)))


@pytest.mark.parametrize("key", ["heisenberg-c", "nakamura-pi", "nak-family"])
def test_builtin_bivectors_give_double_complexes(key):
    m, ps = structure(key)
    check_double_complex(ps)
    for i in range(m.size):
        if m.degree(i) <= 3:
            assert not ps.apply_vec(ps.apply(i))


def test_heisenberg_poisson_cohomology_matches_de_rham_oracle():
    m, ps = structure("heisenberg-c")
    table = poisson_cohomology(m, ps)
    dims = dims_list(table, 8)
    assert dims == [1, 6, 17, 30, 36, 30, 17, 6, 1]
    # the bivector is symplectic-like here, so the total cohomology is the de Rham one
    assert dims == ce_betti(*realify({(0, 1): {2: 1}}, 4))
    assert table.euler_characteristic() == 0


def test_nakamura_poisson_dims_match_coordinate_oracle():
    m, ps = structure("nakamura-pi")
    assert label_terms(m, ps.mu) == {"exp(z1)*Z1^Z2": "1"}
    table = poisson_cohomology(m, ps)
    assert dims_list(table, 6) == NAKAMURA_DIMS
    assert nakamura_poisson_dims({(1, (0, 1), ()): 1}) == NAKAMURA_DIMS


@pytest.mark.parametrize("word", ["Z3^z1~^z3~", "exp(z1)*Z2^Z3^z1~^z3~"])
def test_nakamura_products_with_dzbar1_survive(word):
    m, ps = structure("nakamura-pi")
    i = next(j for j in range(m.size) if m.label(j) == word)
    assert not ps.total(i)
    k = m.degree(i)
    e = Echelon("forward")
    for j in m.indices(degree=k - 1):
        if ps.total(j):
            e.insert(ps.total(j))
    r = e.rank
    e.insert({i: ONE})
    assert e.rank == r + 1


def test_image_of_the_bracket_lies_in_the_z1_z2_ideal():
    m, ps = structure("nakamura-pi")
    T = m.algebra
    ideal = {T.lookup("Z1"), T.lookup("Z2")}
    for i in range(m.size):
        for j in ps.apply(i):
            assert ideal & set(m.words[j][1])


def test_zero_bivector_gives_ordinary_cohomology():
    m = model_of("iwasawa")
    ps = verify_poisson(m, Element())
    table = poisson_cohomology(m, ps)
    plain = cohomology(m, "degree", representatives=False)
    assert table.dims == plain.dims


def test_non_poisson_bivector_rejected_with_residual():
    m = model_of("heisenberg-c")
    T = m.algebra
    with pytest.raises(RejectionError) as exc:
        verify_poisson(m, T.word(["X", "Y"]))
    assert label_terms(m, exc.value.residual) == {"X^Y^Z": "2"}


def test_non_holomorphic_bivector_rejected():
    spec = parse_manifest({
        "name": "kt", "kind": "nilmanifold",
        "fiber": [{"name": "X"}, {"name": "Y"}, {"name": "W"}],
        "brackets": [{"pair": ["X~", "X"], "value": {"Y": "i", "Y~": "i"}}]})
    m = build_complex_model(spec)
    with pytest.raises(RejectionError) as exc:
        verify_poisson(m, m.algebra.word(["X", "W"]))
    assert label_terms(m, exc.value.residual) == {"Y^W^x~": "i"}
    assert "holomorphic" in str(exc.value)


def test_non_bivector_rejected():
    m = model_of("nakamura-pi")
    T = m.algebra
    with pytest.raises(RejectionError):
        verify_poisson(m, T.gen("Z1"))
    with pytest.raises(RejectionError):
        verify_poisson(m, T.word(["Z1", "z1~"]))


def test_bivector_outside_the_model_rejected():
    m = model_of("nakamura-generic")
    T = m.algebra
    assert verify_poisson(m, T.word(["Z1", "Z2"], Character([1], [0]))).vec
    with pytest.raises(ClosureError):
        verify_poisson(m, T.word(["Z1", "Z2"], Character([2], [0])))
