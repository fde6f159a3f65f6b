"""Acceptance suite: one test per headline criterion, each printing a PASS/FAIL line."""

import itertools
import math
import random
import time
import warnings
from fractions import Fraction

import numpy as np
import pytest

from blaschke2d import DegreeMatrix, lift, monomial_map
from blaschke2d.degrees import c_plus, degree_sequence, predicted_degrees, pullback_matrix
from blaschke2d.errors import DegenerateConfigurationWarning
from blaschke2d.exact import GaussianRational, TriPoly, divides, poly_divexact, poly_eval, poly_gcd
from blaschke2d.families import random_generic_map
from blaschke2d.geometry import critical_jacobian, expected_indeterminacy_count, indeterminacy_points, line_arrangement
from blaschke2d.numeric import solve_system
from blaschke2d.topology import classify_case, random_targets, topological_degree
from blaschke2d.torus import (TorusPoint, backward_measure_sample, curve_growth_entropy, homology_action,
                              matrix_power, torus_distance)

SEED = 2024


@pytest.fixture
def report(capsys):
    """Call as ``report(k, title, budget, fn)``: runs ``fn`` (returning ``(ok, detail)``), prints one line."""

    def run(k, title, budget, fn):
        t0 = time.perf_counter()
        ok, detail = fn()
        elapsed = time.perf_counter() - t0
        in_time = elapsed < budget
        verdict = "PASS" if ok and in_time else "FAIL"
        with capsys.disabled():
            print(f"\n{verdict} criterion {k}: {title} | {detail} | {elapsed:.2f}s (budget {budget}s)")
        assert ok, detail
        assert in_time, f"took {elapsed:.2f}s, budget {budget}s"

    return run


def valid_matrices(bound):
    for m, n, p, q in itertools.product(range(1, bound + 1), repeat=4):
        if m * q - n * p > 0:
            yield DegreeMatrix(m, n, p, q)


def test_criterion_01_dynamical_degree(report):
    N = DegreeMatrix(1, 1, 1, 2)

    def body():
        pred = predicted_degrees(N, 3).degrees
        seqs = [degree_sequence(random_generic_map(N, SEED + k), 3).degrees for k in range(3)]
        cp = c_plus(N).value
        ratio_err = max(abs(s[2] / s[1] - cp) / cp for s in seqs)
        ok = pred == (5, 13, 34) and all(s == pred for s in seqs) and ratio_err < 0.005
        return ok, f"measured {seqs}, predicted {pred}, ratio error {ratio_err:.2e}"

    report(1, "exact degree sequence of generic maps", 60, body)


def test_criterion_02_pullback_charpoly(report):
    def body():
        bad = [N.rows for N in valid_matrices(5)
               if pullback_matrix(N).charpoly() != (1, -(N.m + N.q), N.det, 0)]
        count = sum(1 for _ in valid_matrices(5))
        return not bad, f"{count} matrices, failures {bad}"

    report(2, "pullback characteristic polynomial", 1, body)


def test_criterion_03_topological_degree(report):
    mats = [DegreeMatrix(1, 1, 1, 2), DegreeMatrix(2, 1, 1, 1), DegreeMatrix(1, 2, 1, 3)]

    def body():
        ok, rows = True, []
        for N in mats:
            want = N.m * N.q + N.n * N.p
            for k in range(3):
                f = random_generic_map(N, SEED + 10 * k)
                for t in random_targets(f, 2, SEED + k):
                    by_w = solve_system(f, t, "w", cross_check=False)
                    by_z = solve_system(f, t, "z", cross_check=False)
                    res = max(by_w.max_residual, by_z.max_residual)
                    ok &= len(by_w) == len(by_z) == want and res < 1e-8
                    rows.append((len(by_w), len(by_z), want))
        return ok, f"(w-order, z-order, mq+np) counts {sorted(set(rows))}"

    report(3, "numeric preimage count equals mq+np", 30, body)


def test_criterion_04_small_degree_family(report, small_family):
    def body():
        dt = topological_degree(small_family, "numeric", SEED)
        lab = classify_case(small_family.N, dt.value)
        ok = dt.value == 5 and lab.case == "II" and lab.p_value == -4 and str(lab.c_plus) == "(6+sqrt(32))/2"
        return ok, f"d_top {dt.value}, case {lab.case}, p(d_top) {lab.p_value}, c_plus {lab.c_plus}"

    report(4, "small topological degree family", 30, body)


def test_criterion_05_equal_degree_family(report, equal_family):
    def body():
        dt = topological_degree(equal_family, "numeric", SEED)
        lab = classify_case(equal_family.N, dt.value)
        # every preimage of a torus point, down to depth 3
        level = [TorusPoint(0.25, 0.5).to_complex()]
        worst, counts = 0.0, []
        for _ in range(3):
            nxt = []
            for p in level:
                nxt.extend(solve_system(equal_family, p, cross_check=False).points)
            level = nxt
            counts.append(len(level))
            worst = max(worst, float(torus_distance(level).max()))
        ok = (dt.value == 5 == equal_family.N.det and lab.case == "III" and lab.p_value == 0
              and counts == [5, 25, 125] and worst < 1e-8)
        return ok, f"d_top {dt.value}, case {lab.case}, p(d_top) {lab.p_value}, preimages {counts}, " \
                   f"max distance to torus {worst:.1e}"

    report(5, "equal degree family", 60, body)


def test_criterion_06_indeterminacy_census(report):
    def body():
        mats = list(valid_matrices(3))
        rng = random.Random(SEED)
        ok, rows = True, []
        for k in range(10):
            N = rng.choice(mats)
            f = random_generic_map(N, SEED + k)
            S = indeterminacy_points(f)
            H = lift(f)
            vanish = all(poly_eval(F, (z, w, 1)) == 0 for z, w in S.finite_points for F in H.components)
            want = 2 * (N.m * N.n + N.p * N.q) + (N.m * N.q + N.n * N.p)
            ok &= len(S) == want == expected_indeterminacy_count(f) and vanish
            rows.append(f"{len(S)}/{want}")
        return ok, "counts " + " ".join(rows)

    report(6, "indeterminacy census", 10, body)


def test_criterion_07_homology(report):
    def body():
        N = DegreeMatrix(1, 1, 1, 2)
        ok = True
        for f in (random_generic_map(N, SEED), monomial_map(N)):
            for n in (1, 2, 3):
                ok &= homology_action(f, n) == matrix_power(N.rows, n)
        return ok, "homology equals N^n for n = 1, 2, 3 on generic and monomial maps" if ok else "mismatch"

    report(7, "homology action", 30, body)


def test_criterion_08_torus_entropy(report):
    def body():
        N = DegreeMatrix(2, 1, 1, 1)
        target = math.log(c_plus(N).value)
        lin = curve_growth_entropy(monomial_map(N), 12).value
        f = random_generic_map(N, SEED, max_modulus=0.05)
        assert max(abs(complex(z)) for z in f.sigma) <= 0.05
        pert = curve_growth_entropy(f, 12).value
        e1, e2 = abs(lin - target) / target, abs(pert - target) / target
        return e1 < 0.10 and e2 < 0.15, f"log c+ {target:.6f}, linear {lin:.6f} ({e1:.1e}), " \
                                        f"perturbed {pert:.6f} ({e2:.1e})"

    report(8, "torus entropy by curve growth", 120, body)


def test_criterion_09_rotation_invariance(report):
    def body():
        f0 = random_generic_map(DegreeMatrix(1, 1, 1, 2), SEED, rotations=False)
        seeds = [(GaussianRational(1), GaussianRational(1)), (GaussianRational(3, 4), GaussianRational(1, -2)),
                 (GaussianRational(2, -1), GaussianRational(5, 1))]
        sigs = []
        for u1, u2 in seeds:
            f = f0.with_rotations(u1, u2)
            sigs.append((indeterminacy_points(f).finite_set(), frozenset(L.key() for L in line_arrangement(f)),
                         critical_jacobian(f).normalized()))
        same = all(s == sigs[0] for s in sigs[1:])
        return same, f"{len(seeds)} rotation seeds, identical exact sets: {same}"

    report(9, "rotation invariance", 10, body)


def _random_tripoly(rng, degree):
    exps = [(i, j, degree - i - j) for i in range(degree + 1) for j in range(degree + 1 - i)]
    terms = {}
    for e in rng.sample(exps, min(len(exps), rng.randint(2, 4))):
        terms[e] = GaussianRational(Fraction(rng.randint(-5, 5), rng.randint(1, 4)),
                                    Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
    return TriPoly(terms, degree=degree)


def test_criterion_10_property_suite(report):
    def body():
        rng = random.Random(SEED)
        notes = []
        # gcd divisibility and cofactor coprimality
        gcd_ok = True
        for _ in range(40):
            p, q, r = (_random_tripoly(rng, rng.randint(1, 3)) for _ in range(3))
            if p.is_zero() or q.is_zero() or r.is_zero():
                continue
            a, b = p * r, q * r
            g = poly_gcd(a, b)
            gcd_ok &= divides(g, a) and divides(g, b) and divides(r, g)
            gcd_ok &= poly_gcd(poly_divexact(a, g), poly_divexact(b, g)).is_constant()
        notes.append(f"gcd {gcd_ok}")
        # exact unimodularity of rotations and of values on rational circle points
        unimod = True
        for _ in range(40):
            u = GaussianRational(rng.randint(-9, 9) or 1, rng.randint(-9, 9))
            theta = u / u.conj()
            unimod &= theta * theta.conj() == 1
            f = random_generic_map(DegreeMatrix(1, 1, 1, 2), rng.randint(0, 10 ** 6))
            t = Fraction(rng.randint(-20, 20), rng.randint(1, 20))
            z = GaussianRational(1 - t * t, 2 * t) / (1 + t * t)
            for b in (f.A, f.B, f.C, f.D):
                v = b(z)
                unimod &= v * v.conj() == 1
        notes.append(f"unimodular {unimod}")
        # planted preimages are recovered
        planted = True
        for k in range(15):
            f = random_generic_map(DegreeMatrix(1, 1, 1, 2), SEED + k)
            z = GaussianRational(Fraction(rng.randint(-4, 4), 7), Fraction(rng.randint(-4, 4), 7))
            w = GaussianRational(Fraction(rng.randint(-4, 4), 9), Fraction(rng.randint(-4, 4), 9))
            img = f.evaluate_exact(z, w)
            pts = solve_system(f, (complex(img[0]), complex(img[1]))).array()
            planted &= np.max(np.abs(pts - [complex(z), complex(w)]), axis=1).min() < 1e-7
        notes.append(f"planted {planted}")
        # monomial backward orbits never leave the torus
        mono = backward_measure_sample(monomial_map(DegreeMatrix(1, 1, 1, 2)), TorusPoint(0.3, 0.7), 4, 32, SEED)
        mono_ok = bool(np.all(mono.dist < 1e-14)) and len(mono.dist) == 32
        notes.append(f"monomial max dist {mono.dist.max():.1e}")
        # reported only: how far generic small-zero backward orbits wander from the torus
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateConfigurationWarning)
            gen = backward_measure_sample(random_generic_map(DegreeMatrix(1, 1, 1, 2), SEED, max_modulus=0.05),
                                          TorusPoint(0.25, 0.5), 4, 32, SEED)
        notes.append(f"generic small-zero histogram {list(gen.histogram)}, "
                     f"fraction beyond 0.05 = {gen.fraction_beyond(0.05):.3f} (reported)")
        return gcd_ok and unimod and planted and mono_ok, "; ".join(notes)

    report(10, "property suite", 120, body)
