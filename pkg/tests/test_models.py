from math import comb

import pytest

from conftest import ALL_KEYS, model_of, spec_of
from gerst.errors import AssumptionError
from gerst.linalg import axpy
from gerst.manifest import parse_manifest
from gerst.examples import get_manifest
from gerst.models import (build_forms_model, build_nilmanifold_model, build_parallelizable_models,
                          build_splitting_models, build_symplectic_models, check_condition_D,
                          check_condition_E, duality_map)

SIZES = {"heisenberg-c": 256, "iwasawa": 64, "filiform-4": 256, "cxn1n2-k1-k2": 1704,
         "nakamura-generic": 32, "nakamura-pi": 64, "nak-family": 96, "tyy-family": 280,
         "torus-1": 4, "torus-2": 16, "torus-3": 64}


@pytest.mark.parametrize("key", ALL_KEYS)
def test_model_sizes(key):
    m = model_of(key)
    assert m.size == SIZES[key]
    dims = m.dims_by_degree()
    top = max(dims)
    # every model is closed under the complement pairing, so dims are palindromic
    assert all(dims[k] == dims[top - k] for k in dims)
    assert m.star_closed()[0]


def test_nilmanifold_model_is_full_exterior_algebra():
    m = model_of("iwasawa")
    assert m.dims_by_degree() == {k: comb(6, k) for k in range(7)}


def test_low_degree_words_of_semidirect_example():
    m = model_of("cxn1n2-k1-k2")
    assert sorted(m.label(i) for i in m.indices(1)) == ["Z1", "z1~"]
    assert sorted(m.label(i) for i in m.indices(2)) == sorted(
        ["y11~^y21~", "y12~^y22~", "y13~^y23~", "Z1^z1~", "Y11^y11~", "Y12^y12~", "Y13^y13~",
         "Y21^y21~", "Y22^y22~", "Y23^y23~", "Y11^Y21", "Y12^Y22", "Y13^Y23"])


def test_parallelizable_forms_models():
    B, _ = build_parallelizable_models(spec_of("nakamura-generic"))
    assert [B.label(i) for i in range(B.size)] == ["1", "z1~", "z2~^z3~", "z1~^z2~^z3~"]
    B, _ = build_parallelizable_models(spec_of("nakamura-pi"))
    assert B.size == 8
    assert "exp(-z1)*z2~" in [B.label(i) for i in range(B.size)]


@pytest.mark.parametrize("key,D,E", [
    ("cxn1n2-k1-k2", (True, None), (False, {"I": [2]})),
    ("nakamura-generic", (False, {"J": [1], "L": []}), (True, None)),
    ("nakamura-pi", (False, {"J": [], "L": [1]}), (False, {"I": [2]})),
    ("nak-family", (True, None), (False, {"I": [3]})),
    ("torus-2", (True, None), (True, None)),
])
def test_conditions_with_witnesses(key, D, E):
    s = spec_of(key)
    assert check_condition_D(s, 2 * s.m) == D
    assert check_condition_E(s, 2) == E


@pytest.mark.parametrize("key", ["iwasawa", "cxn1n2-k1-k2", "nakamura-pi"])
def test_duality_is_a_chain_isomorphism_up_to_sign(key):
    s = spec_of(key)
    if s.kind == "nilmanifold":
        C, B = build_nilmanifold_model(s), build_forms_model(s, "dbar")
    else:
        B, C = build_splitting_models(s)
    dm = duality_map(C, B)
    images = set()
    signs = {}
    for i in range(C.size):
        (j, s0), = dm[i].items()
        assert s0 in (1, -1)
        images.add(j)
        lhs = B.diff_vec(dm[i])
        rhs = {}
        for k, x in C.diff(i).items():
            axpy(rhs, x, dm[k])
        if lhs == rhs:
            sign = 1
        else:
            assert lhs == {k: -x for k, x in rhs.items()}
            sign = -1
        if lhs:
            assert signs.setdefault(C.bigrade(i)[0], sign) == sign
    assert len(images) == C.size == B.size


@pytest.mark.parametrize("key", ["torus-2", "nak-family"])
def test_symplectic_transport_round_trip(key):
    P = build_symplectic_models(spec_of(key))
    assert P.A.size == P.D.size
    for i in range(P.D.size):
        img = P.transport(i)
        back = {}
        for j, s in img.items():
            axpy(back, s, P.transport_inverse(j))
        assert back == {i: 1}


def test_symplectic_models_need_symplectic_input():
    with pytest.raises(AssumptionError):
        build_symplectic_models(spec_of("iwasawa"))
    with pytest.raises(AssumptionError):
        build_splitting_models(spec_of("iwasawa"))
    with pytest.raises(AssumptionError):
        build_nilmanifold_model(spec_of("nakamura-pi"))


def test_degenerate_omega_rejected():
    obj = get_manifest("torus-2")
    obj["omega"] = [{"coef": "i", "word": "z1^z1~"}]
    with pytest.raises(AssumptionError):
        build_symplectic_models(parse_manifest(obj))


@pytest.mark.parametrize("key", ALL_KEYS)
def test_d_squared_on_models(key):
    m = model_of(key)
    assert m.check_d_squared(range(0, 4))
