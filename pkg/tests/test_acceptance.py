"""Acceptance criteria 1-10, each at its stated tolerance and time bound.

Every test reports one PASS/FAIL line through the `criterion` fixture; the
lines are printed in the "acceptance criteria" section of the pytest summary.
"""
import random
import time

import pytest

from dlcoh import braid as br
from dlcoh import cohomology as co
from dlcoh import hecke as hk
from dlcoh.coxeter import preset

from _oracles import (divides_by_search, kl_by_r_polynomials, left_mult, max_w_divisor,
                      positive_words, rank2_relations, word_class)

TYPES = ["A2", "2A2", "B2", "2B2", "G2", "2G2"]


def test_c01_garside_oracle(criterion):
    c = criterion(1, "Garside alpha / left_divides vs brute force, A2 and B2, length <= 6")
    t0 = time.perf_counter()
    bad, pairs = [], 0
    for name in ("A2", "B2"):
        W = preset(name)
        m = rank2_relations(W)
        ws = list(positive_words("st", 6))
        braids = {w: br.braid_of_word(W, w) for w in ws}
        for w in ws:
            best, _ = max_w_divisor(W, w, m)
            if br.alpha(braids[w]) != best:
                bad.append((name, "alpha", w))
        for a in ws:
            for b in ws:
                pairs += 1
                if br.left_divides(braids[a], braids[b]) != divides_by_search(a, b, m):
                    bad.append((name, "divides", a, b))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10
    c.report(ok, f"{2 * 127} words, {pairs} pairs, {len(bad)} mismatches, {dt:.1f}s")
    assert not bad, bad[:5]
    assert dt < 10


def test_c02_kl_suite(criterion):
    t0 = time.perf_counter()
    for name in ("I2(3)", "I2(4)", "I2(6)", "I2(8)"):
        W = preset(name)
        tab = hk.kl_polynomials(W)
        assert all(p == hk.LaurentPoly.coerce(1) for _, _, p in tab.pairs()), name
    W = preset("A3")
    tab = hk.kl_polynomials(W)
    ref = kl_by_r_polynomials(W)
    for (y, w), p in ref.items():
        assert tab.coefficients(W.elements[y], W.elements[w]) == p
    w = W.element("2132")
    assert tab.coefficients(W.identity, w) == [1, 1] == ref[0, w.id]
    assert time.perf_counter() - t0 < 5


@pytest.mark.xfail(strict=True, reason="A3 has two non-smooth elements, 2132 and 12321")
def test_c02_exactly_one_non_smooth_in_A3(criterion):
    c = criterion(2, "KL suite: dihedral P = 1, A3 P_{e,2132} = 1+x, exactly one non-smooth class")
    dihedral = all(p == [1] for name in ("I2(3)", "I2(4)", "I2(6)", "I2(8)")
                   for p in kl_by_r_polynomials(preset(name)).values())
    W = preset("A3")
    ref = kl_by_r_polynomials(W)
    p2132 = hk.kl_polynomials(W).coefficients(W.identity, W.element("2132")) == ref[0, W.element("2132").id] == [1, 1]
    bad = sorted(w.word for w in W.elements if ref[0, w.id] != [1])
    c.report(len(bad) == 1 and dihedral and p2132,
             f"dihedral P = 1: {dihedral}; P_e,2132 = 1+x: {p2132}; non-smooth in A3: {', '.join(bad)}")
    assert len(bad) == 1


def test_c03_lemma_T(criterion):
    c = criterion(3, "lemma T identity vs hecke_mult, every (w, s) in B2 and G2")
    bad, n = [], 0
    for name in ("B2", "G2"):
        W = preset(name)
        for w in W.elements:
            for s in W.gens():
                n += 1
                lt = hk.lemma_T_case(w, s)
                prod = hk.hecke_mult(hk.t_bar(w), hk.t_bar(s))
                if not (lt.rhs == prod == left_mult(hk.t_bar(w), hk.t_bar(s)) and lt.holds):
                    bad.append((name, w.word, s.word, lt.case))
    c.report(not bad, f"{n} pairs, {len(bad)} mismatches")
    assert not bad, bad


REQUIRED = {
    "A2": (25, {"rappel.i", "rappel.ii", "rappel.iii", "rappel.iii'", "rappel.iv", "rappel.v",
                "rappelA2.i", "rappelA2.i'", "rappelA2.ii", "rappelA2.iii", "rappelA2.iv",
                "rappelA2.v"}),
    "2A2": (15, set()),
    "B2": (20, {"rappelB2.i", "rappelB2.ii", "rappelB2.iii"}),
    "2B2": (10, {"rappelB2.v"}),
    "G2": (20, set()),
    "2G2": (10, set()),
}


def test_c04_table_suites(criterion):
    c = criterion(4, "identity suites for all six types")
    t0 = time.perf_counter()
    notes, ok = [], True
    for tag in TYPES:
        rep = co.verify_tables(tag)
        need, rules = REQUIRED[tag]
        missing = rules - set(rep.rules)
        good = rep.passed and len(rep.results) >= need and not missing
        ok &= good
        notes.append(f"{tag} {len(rep.results)}" + ("" if good else "!"))
    # eps stays formal: 2G2 instances through the eps row hold for eps = 0 and eps = -1 alike
    eps_rep = co.check_2g2()
    eps = (any(r.involves_eps for r in eps_rep)
           and all(r.formal and r.at_zero and r.at_minus_one for r in eps_rep))
    notes.append(f"{sum(r.involves_eps for r in eps_rep)} via eps")
    dt = time.perf_counter() - t0
    ok = ok and eps and dt < 30
    c.report(ok, ", ".join(notes) + f"; {dt:.1f}s")
    assert ok


def test_c05_trace_identity_at_h_minus_one(criterion):
    c = criterion(5, "h = -1 specialisation of every table row equals the trace formula")
    bad, n = [], 0
    for tag in TYPES:
        gt = co.group_type(tag)
        for e in co.load_table(gt):
            n += 1
            lhs = co.table_H(gt, e.key).specialize_h(-1)
            if lhs != co.trace_formula_hm1(gt, e.key):
                bad.append((tag, str(e.key)))
    gt = co.group_type("A2")
    st = gt.parse("s t")
    example = str(co.table_H(gt, st).specialize_h(-1)) == str(co.trace_formula_hm1(gt, st)) == "(-t)*rho"
    c.report(not bad and example, f"{n} rows, {len(bad)} mismatches; A2 st gives -t")
    assert not bad, bad
    assert example


def test_c06_closed_form_vs_table(criterion):
    c = criterion(6, "closed form equals table on fully underlined keys")
    bad, n = [], 0
    for tag in TYPES:
        gt = co.group_type(tag)
        for e in co.load_table(gt):
            if e.key.all_underlined():
                n += 1
                if co.closed_form_H(gt, e.key) != co.table_H(gt, e.key):
                    bad.append((tag, str(e.key)))
    c.report(not bad, f"{n} keys, {len(bad)} mismatches")
    assert not bad, bad


def test_c07_conj_A2(criterion):
    c = criterion(7, "conj A2 on plain A2 rows and their pi-translates, n <= 2")
    W = preset("A2")
    P = br.pi(W)
    bad, n = [], 0
    for e in co.load_table("A2"):
        if not e.key.is_plain():
            continue
        b = br.rho(e.key)
        for k in range(3):
            n += 1
            ok, _, _ = co.check_conjA2(P ** k * b)
            if not ok:
                bad.append((str(e.key), k))
    pred = {w: str(co.check_conjA2(br.parse_braid(W, w))[2]) for w in ("s t", "pi", "s")}
    examples = pred == {"s t": "h^3*t", "pi": "2*h^8*t^3", "s": "h^2*t+h"}
    c.report(not bad and examples, f"{n} braids, {len(bad)} failures")
    assert not bad, bad
    assert examples, pred


def test_c08_central_characters(criterion):
    c = criterion(8, "T_pi acts by a power of x; T_w0 squared is T_pi in every spec")
    exps = {}
    for name, chars in (("A2", ["rho"]), ("B2", ["rho"]), ("G2", ["A", "B"])):
        for ch in chars:
            spec = hk.char_specs(name)[ch]
            ok, k = co.check_conjA_hm1(spec)
            assert ok
            assert hk.central_char_pi(spec) == hk.LaurentPoly.x(k)
            exps[f"{name}:{ch}"] = k
    assert exps["A2:rho"] == 3
    squares = 0
    for name in ("A2", "B2", "G2"):
        W = preset(name)
        tpi = hk.eval_completed(br.parse_completed(W, "pi"))
        for twisted in (False, True):
            for spec in hk.char_specs(name, twisted).values():
                M = hk.rep_matrix(spec, hk.T(W.longest_element()), with_F=False)
                assert M * M == hk.rep_matrix(spec, tpi, with_F=False)
                squares += 1
    c.report(True, ", ".join(f"{k} x^{v}" for k, v in exps.items()) + f"; {squares} specs")


def _word_orbit(w: str, m: dict) -> frozenset:
    swap = str.maketrans("st", "ts")
    seen, todo = {w}, [w]
    while todo:
        x = todo.pop()
        for y in set(word_class(x, m)) | {x[1:] + x[:1], x.translate(swap)}:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def test_c09_a2_classification(criterion):
    c = criterion(9, "A2 descriptors: constant on and separating orbits; phi(pi b) = 1 + phi(b)")
    t0 = time.perf_counter()
    W = preset("A2")
    m = rank2_relations(W)
    orbits = {}
    for w in positive_words("st", 6):
        orbits.setdefault(_word_orbit(w, m), []).append(w)
    seen = {}
    for ws in orbits.values():
        ds = {br.a2_classify(br.braid_of_word(W, w)) for w in ws}
        assert len(ds) == 1, ws
        d = ds.pop()
        assert d not in seen, (ws, seen.get(d))
        seen[d] = ws
    rng = random.Random(20240611)
    P = br.pi(W)
    for _ in range(50):
        b = br.braid_of_word(W, "".join(rng.choice("st") for _ in range(rng.randint(0, 8))))
        assert br.a2_classify(P * b).phi == 1 + br.a2_classify(b).phi
    dt = time.perf_counter() - t0
    c.report(dt < 20, f"{len(orbits)} orbits, 50 random pi-shifts, {dt:.1f}s")
    assert dt < 20


def _random_completed(rng, W, max_len=5):
    toks = []
    while True:
        w = rng.choice(W.elements[1:])
        cur = sum(W.elements[t].length for _, t in toks)
        if cur + w.length > max_len or rng.random() < 0.2:
            return br.CompletedBraidElt(W, toks)
        toks.append((rng.random() < 0.5, w.id))


def test_c10_id_and_steinberg(criterion):
    c = criterion(10, "Id component via traces; St vanishes on underlined elements")
    rng = random.Random(7)
    n = 0
    for tag in TYPES:
        gt = co.group_type(tag)
        W = gt.system
        ident = gt.specs["Id"]
        for _ in range(100):
            el = _random_completed(rng, W)
            ref = hk.char_trace(ident, hk.eval_completed(el)).subst_h2t()
            assert co.id_component(gt, el) == ref, (tag, str(el))
            if el.has_underlined():
                assert co.st_component(gt, el).is_zero(), (tag, str(el))
            n += 1
    c.report(True, f"{n} random elements")
