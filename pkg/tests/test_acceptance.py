"""Acceptance criteria 1-11, one test each.

Every test prints a single PASS/FAIL line; the lines are also collected into a
summary at the end of the pytest run.  Run on its own with

    pytest tests/test_acceptance.py -v -s
"""

import random
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from dlcurve.clgroup import (cl_Y_p_torsion_oracle, class_group_oracle, gamma0_mod_p_trivial,
                             gamma_source_group, verify_picY_chain)
from dlcurve.curve import (affine_points, affiso_backward, affiso_forward, boundary_points,
                           count_affine_points, count_points, curve_context, enumerate_points,
                           genus, is_smooth, special_fibre_points)
from dlcurve.errors import InvalidInput
from dlcurve.ffield import make_field, prime_power
from dlcurve.forms import Form, FormRatio
from dlcurve.localring import boundary_divisor_report, form_order, principal_divisor
from dlcurve.snf import smith_normal_form
from dlcurve.zeta import (hasse_weil_check, jacobian_order, l_polynomial, l_polynomial_over_base,
                          p_rank, predict_count)

# every count computed here is also run through Hasse-Weil in criterion 11
SEEN_COUNTS = {}


def counted(q, m):
    N = count_points(curve_context(q), m)
    SEEN_COUNTS[(q, m)] = N
    return N


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_01_point_counts():
    t = time.perf_counter()
    got = {q: counted(q, 1) for q in (2, 3, 4, 5)}
    ok = all(got[q] == q + 1 for q in got)
    extra = {"q=2 F_4": counted(2, 2), "q=4 F_16": counted(4, 2),
             "q=3 F_9": counted(3, 2), "q=5 F_25": counted(5, 2)}
    ok &= extra == {"q=2 F_4": 9, "q=4 F_16": 65, "q=3 F_9": 4, "q=5 F_25": 6}
    dt = time.perf_counter() - t
    ok &= dt < 10
    report(1, ok, f"|Z(F_q)| = {got}, {extra}, {dt:.2f}s")


def test_criterion_02_boundary():
    ok = True
    for q in (2, 3, 4, 5):
        ctx = curve_context(q)
        bp = boundary_points(ctx)
        ok &= len(bp) == q + 1 and set(bp) == set(enumerate_points(ctx, 1))
        for m in range(1, 5):
            at_infinity = {P for P in enumerate_points(ctx, m) if not P.Z}
            ok &= at_infinity == set(boundary_points(ctx, m))
    report(2, ok, "boundary = Z(F_q), q+1 points; Z \\ Y = boundary for m <= 4")


def test_criterion_03_smoothness():
    res = {q: is_smooth(curve_context(q), max_ext=6) for q in (2, 3, 4, 5)}
    ok = all(r.smooth and r.witness is None for r in res.values())
    checked = {q: r.points_checked for q, r in res.items()}
    report(3, ok, f"no singular point over F_(q^m), m <= 6; points checked {checked}")


def test_criterion_04_fit_and_predict():
    t = time.perf_counter()
    L2 = l_polynomial([counted(2, 2)], 1, 4)
    ok = L2.coeffs == (1, 4, 4)
    ok &= predict_count(L2, 2) == counted(2, 4) and predict_count(L2, 3) == counted(2, 6)
    L3 = l_polynomial([counted(3, m) for m in (1, 2, 3)], 3, 3)
    ok &= len(L3.coeffs) == 7 and predict_count(L3, 4) == counted(3, 4)
    dt = time.perf_counter() - t
    ok &= dt < 60
    report(4, ok, f"q=2/F_4: L = {L2}; q=3/F_3: L = {L3}, N_4 = {predict_count(L3, 4)}; {dt:.2f}s")


def test_criterion_05_p_rank():
    ranks = {}
    for q in (2, 3, 4):
        ctx = curve_context(q)
        ranks[q] = p_rank(l_polynomial_over_base(ctx, 1), ctx.p)
    ok = all(r == 0 for r in ranks.values())
    # N_1..N_10 over powers of F_25 would need F_{25^10} = 2^46 elements
    cap_f25 = 25 ** 10 <= 1 << 27
    ranks[5] = p_rank(l_polynomial_over_base(curve_context(5), 1), 5)
    ok &= ranks[5] == 0
    note = "q=5 via counts over powers of F_5" + ("" if cap_f25 else
                                                   " (the F_25 tower exceeds the 2^27 cap)")
    report(5, ok, f"p-ranks {ranks}; {note}")


def test_criterion_06_valuations():
    reports = {q: boundary_divisor_report(curve_context(q), 2) for q in (2, 3, 5)}
    ok = all(r["ok"] and r["pairs"] == q * (q + 1) for q, r in reports.items())
    ok &= all(r["uniformiser_checks"] == 2 * q for q, r in reports.items())
    summary = {q: (r["pairs"], r["other_places"], len(r["failures"])) for q, r in reports.items()}
    report(6, ok, f"(pairs, other places of degree <= 2, failures) = {summary}")


def test_criterion_07_gamma():
    qs = [q for q in range(2, 65) if prime_power(q)]
    ok = True
    for q in qs:
        p = prime_power(q)[0]
        G = gamma_source_group(q, p)
        ok &= G.free_rank == 1 and G.invariants == (q + 1,) * q
        ok &= gamma0_mod_p_trivial(q, p)
    report(7, ok, f"Z x (Z/(q+1))^q and trivial mod p for {len(qs)} prime powers q <= 64")


def test_criterion_08_oracle():
    t = time.perf_counter()
    ctx = curve_context(2)
    r = class_group_oracle(ctx, 4, 1, 3)
    J = jacobian_order(l_polynomial_over_base(ctx, 2))
    clY = cl_Y_p_torsion_oracle(ctx, 4, 1, 3)
    dt = time.perf_counter() - t
    ok = r.stabilized and r.order == 9 == J and str(r.structure) == "Z/3 x Z/3" and clY
    ok &= dt < 120
    report(8, ok, f"Cl^0 = {r.structure} (stabilized {r.stabilized}), L(1) = {J}, "
                  f"Cl(Y)[2] = 0: {clY}; {dt:.2f}s")


def test_criterion_09_certificate():
    ok = True
    for q in (2, 3, 4):
        cert = verify_picY_chain(curve_context(q))
        statuses = [s.status for s in cert.steps]
        ok &= cert.conclusion and statuses[1] == "assumed"
        ok &= all(s in ("computed", "verified") for i, s in enumerate(statuses) if i != 1)
    ok &= verify_picY_chain(curve_context(2)).conclusion == cl_Y_p_torsion_oracle(
        curve_context(2), 4, 1, 3)
    report(9, ok, "certificates conclude true for q = 2, 3, 4; step 2 assumed; q=2 matches oracle")


def test_criterion_10_special_fibre():
    ok = True
    sizes = {}
    for q in (2, 3):
        ctx = curve_context(q)
        for m in (1, 2, 3):
            for a in affine_points(ctx, m):
                ok &= affiso_forward(ctx, affiso_backward(ctx, a)) == a
            sf = special_fibre_points(ctx, m)
            for s in sf:
                ok &= affiso_backward(ctx, affiso_forward(ctx, s)) == s
            nY = count_affine_points(ctx, m)
            ok &= len(sf) == nY
            sizes[(q, m)] = nY
    report(10, ok, f"round trips exact; |special fibre| = |Y| = {sizes}")


def test_criterion_11_properties():
    ok = True
    # Frobenius additivity, exhaustive over fields of size <= 2^12
    fields = [(p, k) for p in (2, 3, 5, 7) for k in range(1, 13) if p ** k <= 1 << 12]
    for p, k in fields:
        F = make_field(p, k)
        codes = np.arange(F.order, dtype=np.int64)
        xp = F.vpow(codes, p)
        for y in range(F.order):
            lhs = F.vpow(F.vadd(codes, np.full_like(codes, y)), p)
            ok &= bool(np.array_equal(lhs, F.vadd(xp, np.full_like(codes, xp[y]))))
    # valuation additivity, 50 random pairs per q
    pairs = 0
    for q in (2, 3, 5):
        ctx = curve_context(q)
        rng = random.Random(100 + q)
        bp = boundary_points(ctx)
        done = 0
        while done < 50:
            G1, G2 = (_random_form(rng, ctx) for _ in range(2))
            if G1 is None or G2 is None:
                continue
            for P in bp:
                ok &= form_order(ctx, P, G1 * G2) == form_order(ctx, P, G1) + form_order(ctx, P, G2)
            done += 1
        pairs += done
    # principal divisors have degree 0
    divs = 0
    for q in (2, 3):
        ctx = curve_context(q)
        rng = random.Random(200 + q)
        done = 0
        while done < 15:
            G, H = _random_form(rng, ctx, 1), _random_form(rng, ctx, 1)
            if G is None or H is None:
                continue
            ok &= principal_divisor(ctx, FormRatio(G, H)).degree == 0
            done += 1
        divs += done
    # SNF: U M V = D and unimodularity are asserted inside every call
    rng = random.Random(7)
    for _ in range(50):
        M = [[rng.randint(-20, 20) for _ in range(rng.randint(1, 7))]]
        M += [[rng.randint(-20, 20) for _ in M[0]] for _ in range(rng.randint(0, 6))]
        smith_normal_form(M)
    # Hasse-Weil on every count computed above
    hw = all(hasse_weil_check([N] if m == 1 else N, genus(curve_context(q)), q ** m)
             for (q, m), N in SEEN_COUNTS.items())
    ok &= hw
    report(11, ok, f"Frobenius exhaustive on {len(fields)} fields, {pairs} valuation pairs, "
                   f"{divs} principal divisors, 50 SNF calls, Hasse-Weil on "
                   f"{len(SEEN_COUNTS)} counts")


def _random_form(rng, ctx, deg=None):
    F = ctx.base
    deg = deg or rng.randint(1, 2)
    terms = {}
    for i in range(deg + 1):
        for j in range(deg + 1 - i):
            c = rng.randrange(F.order)
            if c:
                terms[(i, j, deg - i - j)] = F.element(c)
    G = Form(F, terms, deg)
    try:
        form_order(ctx, boundary_points(ctx)[0], G)
    except InvalidInput:
        return None
    return G


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
