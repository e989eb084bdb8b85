import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lagrep import io as lio
from lagrep.lagrangian import Lagrangian
from lagrep.maslov import check_index_identities, triple_invariants
from lagrep.numerics import haar_unitary
from lagrep.representation import phi_tilde, spectral_projection
from lagrep.spectra import SpectrumTuple

from conftest import random_tuple

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def roundtrip(obj, decoder):
    text = lio.dumps(obj)
    back = decoder(lio.loads(text))
    assert lio.dumps(back) == text
    return back


@given(seeds, st.integers(1, 3), st.integers(2, 5))
def test_round_trips_are_byte_identical(seed, n, ell):
    lam = random_tuple(n, ell, np.random.default_rng(seed))
    back = roundtrip(lam, lio.decode_lagrangian_tuple)
    assert all(np.array_equal(a.M, b.M) for a, b in zip(lam, back))
    rho = phi_tilde(lam)
    back = roundtrip(rho, lio.decode_representation)
    assert np.array_equal(back.gammas, rho.gammas)
    a = spectral_projection(rho)
    back = roundtrip(a, lio.decode_spectrum)
    assert np.array_equal(back.alpha, a.alpha)
    roundtrip(lam[0], lio.decode_lagrangian)


def test_report_round_trip(rng):
    rep = check_index_identities(random_tuple(2, 4, rng))
    roundtrip(rep, lio.decode_report)


def test_triple_invariants_encode(rng):
    d = triple_invariants(*random_tuple(2, 3, rng))
    doc = json.loads(lio.dumps(d))
    assert set(doc) == {"n0", "n12", "n23", "n31", "tau"}


def test_dumps_is_compact_and_terminated():
    text = lio.dumps(SpectrumTuple([[0.25, 0.75]] * 3))
    assert text == '{"ell":3,"n":2,"alpha":[[0.25,0.75],[0.25,0.75],[0.25,0.75]]}\n'


def test_encode_rejects_unknown_types():
    with pytest.raises(TypeError):
        lio.encode(object())


def test_complex_encoding():
    assert lio.encode(1 + 2j) == [1.0, 2.0]
    assert lio.decode_complex([1, 2]) == 1 + 2j
    assert lio.decode_complex(3) == 3 + 0j


def test_near_unitary_matrix_names_the_invariant():
    A = np.eye(2, dtype=complex)
    A[0, 0] = 1.0 + 1e-3
    doc = {"ell": 1, "n": 2, "gammas": [lio.encode_matrix(A)]}
    with pytest.raises(lio.SchemaError, match="unitarity") as exc:
        lio.decode_representation(doc)
    assert exc.value.path == "/gammas/0"


def test_non_symmetric_lagrangian_rejected():
    u = haar_unitary(2, 5)
    with pytest.raises(lio.SchemaError, match="symmetry") as exc:
        lio.decode_lagrangian({"n": 2, "M": lio.encode_matrix(u)})
    assert exc.value.path == "/M"


@pytest.mark.parametrize(
    "doc, path",
    [
        ({"ell": 3, "n": 2}, "/alpha"),
        ({"ell": 1, "n": 2, "alpha": [[0.1]]}, "/alpha/0"),
        ({"ell": 1, "n": 2, "alpha": [[0.1, 1.0]]}, "/alpha/0/1"),
        ({"ell": 1, "n": 2, "alpha": [[0.5, 0.1]]}, "/alpha/0"),
        ({"ell": 1, "n": 2, "alpha": [[0.1, "x"]]}, "/alpha/0/1"),
        ({"ell": True, "n": 2, "alpha": []}, "/ell"),
        ([1, 2], "/"),
    ],
)
def test_spectrum_errors_carry_pointers(doc, path):
    with pytest.raises(lio.SchemaError) as exc:
        lio.decode_spectrum(doc)
    assert exc.value.path == path


def test_tuple_errors_carry_pointers():
    good = lio.encode(Lagrangian.standard(2))
    with pytest.raises(lio.SchemaError) as exc:
        lio.decode_lagrangian_tuple([good, lio.encode(Lagrangian.standard(3))])
    assert exc.value.path == "/1"
    bad = {"n": 2, "M": [[[1, 0], [0, 0]], [[0, 0], [1, 0, 0]]]}
    with pytest.raises(lio.SchemaError) as exc:
        lio.decode_lagrangian_tuple([good, bad])
    assert exc.value.path == "/1/M/1/1"
    with pytest.raises(lio.SchemaError):
        lio.decode_lagrangian_tuple([good])


def test_representation_relation_checked():
    u = haar_unitary(2, 3)
    doc = {"ell": 2, "n": 2, "gammas": [lio.encode_matrix(u), lio.encode_matrix(u)]}
    with pytest.raises(lio.SchemaError) as exc:
        lio.decode_representation(doc)
    assert exc.value.path == "/gammas"


def test_report_type_errors():
    doc = {"tau": 0, "I": 0, "n0": 0, "njk": [0], "identities": {"x": 1}}
    with pytest.raises(lio.SchemaError) as exc:
        lio.decode_report(doc)
    assert exc.value.path == "/identities/x"


def test_malformed_json():
    with pytest.raises(lio.SchemaError, match="malformed JSON"):
        lio.loads('{"ell": 3,')
    with pytest.raises(lio.SchemaError, match="not finite"):
        lio.decode_complex(float("nan"))
