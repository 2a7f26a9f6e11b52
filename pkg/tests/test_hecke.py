import itertools

import pytest
from hypothesis import given, settings, strategies as st

from dlcoh import hecke as hk
from dlcoh.braid import parse_completed
from dlcoh.coxeter import preset
from dlcoh.errors import NotSmooth
from dlcoh.rings import LaurentPoly

from _oracles import kl_by_r_polynomials, left_mult

X = LaurentPoly.x()
ONE = LaurentPoly.coerce(1)


def bar(h: hk.HeckeElt) -> hk.HeckeElt:
    W = h.system
    out = hk.HeckeElt(W)
    for w, c in h.coeffs.items():
        out = out + hk.invert_T(W.elements[w].inverse()) * c.bar()
    return out


def test_quadratic_relation():
    for name in ("A2", "B2", "G2", "A3"):
        W = preset(name)
        for s in W.gens():
            Ts = hk.T(s)
            assert Ts * Ts == Ts * (X - 1) + hk.T(W.identity) * X


def test_closure_element_examples():
    W = preset("A2")
    h = hk.eval_completed(parse_completed(W, "_s"))
    assert h == hk.T(W.identity) + hk.T(W.gen("s"))
    # _s _s = (x + 1) _s
    hh = hk.eval_completed(parse_completed(W, "_s _s"))
    assert hh == h * (X + 1)
    assert len(hk.t_bar(W.longest_element()).coeffs) == 6


elts = st.lists(st.tuples(st.integers(0, 7), st.integers(-2, 2), st.integers(-3, 3)), max_size=3)


def hecke_of(W, spec):
    out = hk.HeckeElt(W)
    for w, k, c in spec:
        out = out + hk.HeckeElt(W, {w: LaurentPoly.monomial(2 * k, c)})
    return out


@given(elts, elts, elts)
@settings(max_examples=40, deadline=None)
def test_hecke_mult_matches_left_multiplication_and_is_associative(a, b, c):
    W = preset("B2")
    A, B, C = hecke_of(W, a), hecke_of(W, b), hecke_of(W, c)
    assert hk.hecke_mult(A, B) == left_mult(A, B)
    assert (A * B) * C == A * (B * C)


def test_inverses():
    W = preset("G2")
    e = hk.T(W.identity)
    for s in W.gens():
        assert hk.invert_Ts(W, s.word) * hk.T(s) == e
    for w in W.elements:
        assert hk.invert_T(w) * hk.T(w) == e


@pytest.mark.parametrize("name", ["I2(3)", "I2(4)", "I2(5)", "I2(6)", "I2(8)", "A3"])
def test_kl_matches_r_polynomial_oracle(name):
    W = preset(name)
    tab = hk.kl_polynomials(W)
    ref = kl_by_r_polynomials(W)
    for (y, w), p in ref.items():
        assert tab.coefficients(W.elements[y], W.elements[w]) == p


def test_kl_basis_is_bar_invariant():
    for name in ("B2", "A3"):
        W = preset(name)
        for w in W.elements:
            D = hk.kl_basis_D(w)
            assert bar(D) * LaurentPoly.x(w.length) == D


def test_kl_positivity_and_mu():
    W = preset("A3")
    tab = hk.kl_polynomials(W)
    for y, w, p in tab.pairs():
        assert all(c.parts()[0] >= 0 for c in p.terms().values())
        assert p.coefficient(0) == ONE.coefficient(0)
    assert tab.mu(W.element("2"), W.element("2132")) == 1
    assert tab.mu(W.identity, W.element("2132")) == 0


def test_a3_non_smooth_elements():
    W = preset("A3")
    bad = sorted(w.word for w in W.elements if not hk.is_rationally_smooth(w))
    assert bad == ["12321", "2132"]
    assert str(hk.kl_polynomials(W).P(W.identity, W.element("2132"))) == "1+x"
    assert str(hk.kl_polynomials(W).P(W.identity, W.element("12321"))) == "1+x"


def test_kl_csv_dump():
    csv = hk.kl_polynomials(preset("A2")).to_csv().splitlines()
    assert csv[0] == "y,w,P"
    assert len(csv) == 1 + 19


@pytest.mark.parametrize("name", ["B2", "G2"])
def test_lemma_T_cases_hold(name):
    W = preset(name)
    seen = set()
    for w, s in itertools.product(W.elements, W.gens()):
        lt = hk.lemma_T_case(w, s)
        assert lt.holds, lt.statement()
        assert lt.lhs == left_mult(hk.t_bar(w), hk.t_bar(s))
        seen.add(lt.case)
    assert seen == {"i", "ii", "iii"}


def test_lemma_T_examples():
    W = preset("B2")
    lt = hk.lemma_T_case(W.element("st"), "t")
    assert lt.case == "i" and lt.statement() == "T_stbar T_tbar = (x+1) T_stbar"
    lt = hk.lemma_T_case(W.element("s"), "t")
    assert lt.case == "ii"
    lt = hk.lemma_T_case(W.element("st"), "s")
    assert lt.case == "iii" and lt.y == W.element("s")


def test_lemma_T_case_iv_in_A3():
    W = preset("A3")
    lt = hk.lemma_T_case(W.element("213"), "2")
    assert lt.case == "iv" and lt.holds
    with pytest.raises(NotSmooth):
        hk.lemma_T_case(W.element("2132"), "1")


def test_char_specs_are_representations():
    for name in ("A2", "B2", "G2"):
        for twisted in (False, True):
            specs = hk.char_specs(name, twisted)
            W = preset(name)
            # degrees sum of squares = |W| in the split case
            if not twisted:
                assert sum(s.degree ** 2 for s in specs.values()) == W.size
            for spec in specs.values():
                spec.validate()


def test_traces_examples():
    W = preset("A2")
    rho = hk.char_specs("A2")["rho"]
    assert str(hk.char_trace(rho, hk.T(W.element("st")))) == "-x"
    assert str(hk.char_trace(rho, hk.T(W.identity))) == "2"
    rhoF = hk.char_specs("A2", True)["rho"]
    assert str(hk.char_trace(rhoF, hk.T(W.identity))) == "0"


def test_central_characters():
    assert str(hk.central_char_pi(hk.char_specs("A2")["rho"])) == "x^3"
    assert str(hk.central_char_pi(hk.char_specs("B2")["rho"])) == "x^4"
    for name in ("A", "B"):
        assert str(hk.central_char_pi(hk.char_specs("G2")[name])) == "x^6"
