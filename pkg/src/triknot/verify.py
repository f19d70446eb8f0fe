"""Verification suites over one (p, q) pair.

Each suite returns a list of CheckResult rows with the measured figure
and the threshold it was compared against, so callers can render either
a text table or a structured record.  Thresholds are the defaults the
individual modules promise; a tol argument can only loosen them.
Sampling is seeded and deterministic.  Counts default to the full
advertised scale of every check; callers with a tighter budget can
lower them.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import DomainError
from .forms import (FormEvaluator, evaluator_for, fit_relation_constants,
                    verify_degree_identity, winding_number)
from .knotmap import (central_period_gap, fitted_config, knot_point,
                      lens_data, match_sphere_section, psi,
                      psi_curve_residuals, random_tangent_samples,
                      scale_action)
from .moebius import (CENTER_LIFT, LiftedMoebius, LogNonzero, TangentPoint,
                      lift_compose, lift_gap, lift_power)
from .triangle import (TriangleGroupData, build_group, check_edge_pairings,
                       conjugation_identity_check, domain_contains,
                       domain_spec, reduce_to_fundamental, word_matrix)
from .uniformizer import schwarz_map_for, theta, theta_map
from .words import (character_kernel_report, coset_representatives,
                    represent, standard_characters, word)

_SUITE_NAMES = ("group", "forms", "knotmap")


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    threshold: float
    passed: bool

    def to_record(self) -> dict:
        return {"name": self.name, "measured": self.measured,
                "threshold": self.threshold, "passed": self.passed}


def _check(name: str, measured: float, threshold: float,
           tol: float = 0.0) -> CheckResult:
    thr = max(threshold, tol)
    return CheckResult(name, float(measured), thr, float(measured) <= thr)


def _random_word(rng: random.Random, max_len: int):
    n = rng.randint(1, max_len)
    return word(*((rng.choice("ab"), rng.choice((-1, 1)))
                  for _ in range(n)))


def _sample_points(rng: random.Random, count: int) -> list[complex]:
    return [complex(rng.uniform(-6.0, 6.0),
                    math.exp(rng.uniform(math.log(0.05), math.log(20.0))))
            for _ in range(count)]


# ---------------------------------------------------------------------------
# group suite


def group_suite(p: int, q: int, seed: int = 0, tol: float = 0.0,
                reduce_count: int = 1000, orbit_count: int = 100,
                assoc_count: int = 1000, kernel_len: int = 6
                ) -> list[CheckResult]:
    g = build_group(p, q)
    rng = random.Random(seed)
    out = []

    ci = conjugation_identity_check(g)
    bad = sum(1 for c in ci["checks"] if not c["ok"])
    out.append(_check("conjugation_identities", bad, 0.0, tol))

    # torsion lifts land on the central element, branch exact: the phi
    # gap must round to zero turns, not merely stay under some multiple
    # of pi
    mat_worst = 0.0
    branch_bad = 0
    for letter, n in (("a", p), ("b", q)):
        lifted = lift_power(represent(word((letter, 1)), g), n)
        dev, dphi = lift_gap(lifted, CENTER_LIFT)
        mat_worst = max(mat_worst, dev, abs(dphi))
        if round(dphi / math.pi) != 0:
            branch_bad += 1
    out.append(_check("lift_torsion_branch", branch_bad, 0.0, tol))
    out.append(_check("lift_torsion_matrix", mat_worst, 1e-10, tol))

    branch_bad = 0
    mat_dev = 0.0
    for _ in range(assoc_count):
        trip = []
        for _ in range(3):
            lifted = represent(_random_word(rng, 5), g)
            shift = rng.randint(-2, 2)
            trip.append(LiftedMoebius(lifted.mat, lifted.m + shift))
        x, y, z = trip
        left = lift_compose(lift_compose(x, y), z)
        right = lift_compose(x, lift_compose(y, z))
        dev, dphi = lift_gap(left, right)
        if round(dphi / math.pi) != 0:
            branch_bad += 1
        mat_dev = max(mat_dev, dev, abs(dphi))
    out.append(_check("lift_associativity_branch", branch_bad, 0.0, tol))
    out.append(_check("lift_associativity_matrix", mat_dev, 1e-9, tol))

    reps = coset_representatives(p, q, g.r)
    out.append(_check("coset_index", abs(len(reps) - g.r), 0.0, tol))

    _, chi_a, chi_b = standard_characters(p, q)
    order_gap = abs(chi_a.order - g.r) + abs(chi_b.order - g.r)
    out.append(_check("character_orders", order_gap, 0.0, tol))

    kern = character_kernel_report(p, q, kernel_len)
    out.append(_check("character_kernels", len(kern["failures"]), 0.0, tol))

    worst = 0.0
    for tag in ("D", "D1", "Dprime"):
        worst = max(worst, check_edge_pairings(g, domain_spec(g, tag))["worst"])
    out.append(_check("edge_pairings", worst, 1e-9, tol))

    d1 = domain_spec(g, "D1")
    worst = 0.0
    misses = 0
    for z in _sample_points(rng, reduce_count):
        reduced, w = reduce_to_fundamental(g, z)
        if not domain_contains(g, d1, reduced, 1e-9):
            misses += 1
        worst = max(worst, abs(word_matrix(g, w).apply(reduced) - z))
    out.append(_check("reduction_roundtrip", worst, 1e-9, tol))
    out.append(_check("reduction_membership", misses, 0.0, tol))

    worst = 0.0
    for z in _sample_points(rng, orbit_count):
        base, _ = reduce_to_fundamental(g, z)
        moved = word_matrix(g, _random_word(rng, 6)).apply(z)
        again, _ = reduce_to_fundamental(g, moved)
        worst = max(worst, abs(again - base))
    out.append(_check("reduction_orbit", worst, 1e-8, tol))
    return out


# ---------------------------------------------------------------------------
# forms suite


_THETA_AT_2I = -165.375  # forced by the classical normalization at (2, 3)


def forms_suite(p: int, q: int, seed: int = 0, tol: float = 0.0,
                auto_words: int = 50, auto_points: int = 20,
                max_word_len: int = 8, relation_count: int = 100,
                combos: int = 10, roundtrip_count: int = 20
                ) -> list[CheckResult]:
    g = build_group(p, q)
    ev = evaluator_for(g)
    rng = random.Random(seed)
    out = []

    if (p, q) == (2, 3):
        rel = abs(theta(g, 2j) - _THETA_AT_2I) / abs(_THETA_AT_2I)
        out.append(_check("theta_special_value", rel, 1e-6, tol))

    sm = schwarz_map_for(g)
    worst = 0.0
    done = 0
    while done < roundtrip_count:
        z = complex(rng.uniform(-6.0, 6.0),
                    math.exp(rng.uniform(math.log(0.3), math.log(5.0))))
        td = theta_map(g, z)
        try:
            back = sm.forward(td.value)
        except DomainError:
            continue  # theta landed beside a singular point; resample
        worst = max(worst, abs(back - td.reduced))
        done += 1
    out.append(_check("theta_roundtrip", worst, 1e-8, tol))

    words = [_random_word(rng, max_word_len) for _ in range(auto_words)]
    pts = random_tangent_samples(auto_points, seed=seed + 1)
    worst = 0.0
    for tag in ("a", "b", "inf"):
        for w in words:
            for pt in pts:
                worst = max(worst, ev.automorphy_residual(tag, w, pt))
    out.append(_check("automorphy", worst, 1e-7, tol))

    rel = fit_relation_constants(ev, count=relation_count, seed=seed)
    out.append(_check("relation_fit", rel.max_residual, 1e-7, tol))

    deg = verify_degree_identity(ev, combos=combos, seed=seed)
    out.append(_check("degree_monomials",
                      0 if deg["monomials_exact"] else 1, 0.0, tol))
    out.append(_check("degree_combos", deg["worst_combo_error"], 1e-6, tol))

    rad_a = 0.12 * min(g.vertex_a.imag, abs(g.vertex_a - g.vertex_b))
    rad_b = 0.12 * min(g.vertex_b.imag, abs(g.vertex_a - g.vertex_b))
    w_a = winding_number(lambda z: theta(g, z), g.vertex_a, rad_a)
    w_b = winding_number(lambda z: theta(g, z) - 1.0, g.vertex_b, rad_b)
    out.append(_check("vertex_windings", abs(w_a - p) + abs(w_b - q),
                      0.0, tol))
    return out


# ---------------------------------------------------------------------------
# knot-map suite


def knotmap_suite(p: int, q: int, seed: int = 0, tol: float = 0.0,
                  curve_count: int = 100, section_samples: int = 200,
                  knot_count: int = 25, equiv_count: int = 20
                  ) -> list[CheckResult]:
    g = build_group(p, q)
    cfg = fitted_config(evaluator_for(g))
    rng = random.Random(seed)
    out = []

    worst = psi_curve_residuals(cfg, count=curve_count, seed=seed)
    out.append(_check("psi_curve", worst, 1e-8, tol))

    rep = match_sphere_section(cfg, samples=section_samples, seed=seed)
    out.append(_check("section_sphere", rep.max_sphere_error, 1e-10, tol))
    out.append(_check("section_congruent", rep.congruent_max_diff, 1e-8, tol))
    out.append(_check("section_separation",
                      max(0.0, 1e-6 - rep.min_separation), 0.0, tol))

    worst = 0.0
    for k in range(knot_count):
        s = knot_point(p, q, k / knot_count)
        norm = abs(s.z1) ** 2 + abs(s.z2) ** 2
        worst = max(worst, abs(norm - 1.0), abs(s.f_value))
    out.append(_check("knot_points", worst, 1e-12, tol))

    ld = lens_data(p, q)
    lens_bad = 0
    if ld.r != g.r or not 0 <= ld.lens_param < max(ld.r, 1):
        lens_bad += 1
    if ld.h_power(ld.r) != (0, 0):
        lens_bad += 1
    if ld.r > 1 and not ld.fixed_point_free:
        lens_bad += 1
    out.append(_check("lens_arithmetic", lens_bad, 0.0, tol))

    gap = max(central_period_gap(cfg, pt)
              for pt in random_tangent_samples(5, seed=seed + 2))
    out.append(_check("central_period", gap, 1e-8, tol))

    worst = 0.0
    for pt in random_tangent_samples(equiv_count, seed=seed + 3):
        lam = math.exp(rng.uniform(-1.0, 1.0))
        scaled = TangentPoint(pt.z, pt.w.mul(LogNonzero(math.log(lam), 0.0)))
        lhs = psi(cfg, scaled)
        rhs = scale_action(cfg, lam, *psi(cfg, pt))
        err = max(abs(lhs[0] - rhs[0]) / max(abs(rhs[0]), 1e-300),
                  abs(lhs[1] - rhs[1]) / max(abs(rhs[1]), 1e-300))
        worst = max(worst, err)
    out.append(_check("psi_equivariance", worst, 1e-10, tol))
    return out


# ---------------------------------------------------------------------------
# dispatch and rendering


def run_suites(suite: str, p: int, q: int, seed: int = 0,
               tol: float = 0.0) -> list[CheckResult]:
    table = {"group": group_suite, "forms": forms_suite,
             "knotmap": knotmap_suite}
    if suite == "all":
        names = _SUITE_NAMES
    elif suite in table:
        names = (suite,)
    else:
        raise DomainError("unknown suite %r (want group, forms, knotmap "
                          "or all)" % (suite,))
    out = []
    for name in names:
        out.extend(table[name](p, q, seed=seed, tol=tol))
    return out


def results_record(p: int, q: int, suite: str,
                   results: list[CheckResult]) -> dict:
    return {"p": p, "q": q, "suite": suite,
            "checks": [r.to_record() for r in results],
            "passed": all(r.passed for r in results)}


def results_text(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = ["%s  %-*s  measured %.6g  threshold %.6g"
             % ("PASS" if r.passed else "FAIL", width, r.name,
                r.measured, r.threshold)
             for r in results]
    status = "all checks passed" if all(r.passed for r in results) \
        else "FAILURES present"
    lines.append(status)
    return "\n".join(lines) + "\n"
