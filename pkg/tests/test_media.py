import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavity_casimir.errors import DomainError, PoleError
from cavity_casimir.media import (Constant, Drude, Lorentzian, PerfectConductor, PolarizabilityModel,
                                  Vacuum, eval_alpha, eval_epsilon, sqrt_eps)

FIG3 = Lorentzian(1.0, 1.0, 0.01)


def test_lorentzian_examples():
    assert eval_epsilon(FIG3, 1e-300j) == pytest.approx(2.0, abs=1e-15)
    assert abs(eval_epsilon(FIG3, 1e8j) - 1.0) < 1e-15
    assert eval_epsilon(FIG3, 1j) == pytest.approx(1 + 1 / 2.01, abs=1e-15)
    assert isinstance(eval_epsilon(FIG3, 1j), complex)
    assert eval_epsilon(FIG3, 1j).imag == 0.0


def test_alpha_examples():
    atom = PolarizabilityModel(3.0, 2.0)
    assert eval_alpha(atom, 0) == 3.0
    assert eval_alpha(atom, 2j) == pytest.approx(1.5, abs=1e-15)
    assert eval_alpha(atom, 6j) == pytest.approx(0.3, abs=1e-15)


def test_vacuum_and_constant():
    assert eval_epsilon(Vacuum(), 3 + 1j) == 1
    assert eval_epsilon(Constant(4.0), 2j) == 4
    with pytest.raises(DomainError):
        Constant(2 - 1j)


def test_invalid_parameters():
    with pytest.raises(DomainError):
        Lorentzian(-1.0, 1.0)
    with pytest.raises(DomainError):
        Drude(1.0, -0.1)
    with pytest.raises(DomainError):
        PolarizabilityModel(1.0, 0.0)
    with pytest.raises(DomainError):
        PolarizabilityModel(-1.0, 1.0)


def test_poles():
    with pytest.raises(PoleError):
        Lorentzian(1.0, 1.0, 0.0).epsilon(1.0)
    with pytest.raises(PoleError):
        PolarizabilityModel(1.0, 1.0).alpha(1.0)


def test_pec_has_no_eps():
    with pytest.raises(DomainError):
        eval_epsilon(PerfectConductor(), 1.0)


params = st.tuples(st.floats(0, 10), st.floats(0.01, 10), st.floats(0, 5))


@settings(max_examples=200, deadline=None)
@given(p=params, u=st.floats(1e-6, 1e3))
def test_reality_imag_axis(p, u):
    for m in (Lorentzian(*p), Drude(p[0], p[2] + 1e-3)):
        e = eval_epsilon(m, 1j * u)
        assert abs(e.imag) <= 1e-14 * abs(e)
    a = eval_alpha(PolarizabilityModel(p[0], p[1]), 1j * u)
    assert abs(a.imag) <= 1e-14 * max(abs(a), 1e-300)


@settings(max_examples=100, deadline=None)
@given(p=params)
def test_monotone_imag_axis(p):
    u = np.logspace(-4, 3, 400)
    for m in (Lorentzian(*p), Drude(p[0], p[2])):
        e = m.epsilon_imag(u)
        assert np.all(np.diff(e) <= 1e-15 * e[:-1])


@settings(max_examples=200, deadline=None)
@given(p=params, w=st.floats(1e-3, 50))
def test_passivity(p, w):
    for m in (Lorentzian(*p), Drude(p[0], p[2])):
        try:
            e = eval_epsilon(m, w)
        except PoleError:
            continue
        assert e.imag >= 0


def test_sqrt_branch():
    assert sqrt_eps(-4 + 0j) == 2j
    assert sqrt_eps(-4 + 1e-3j).imag > 0
    r = sqrt_eps(-4 - 1e-3j)
    # continuous with the root just above the negative real axis
    assert r.imag > 0 and abs(r - sqrt_eps(-4 + 1e-3j)) < 1e-3
    assert sqrt_eps(2.0) == pytest.approx(2 ** 0.5)
