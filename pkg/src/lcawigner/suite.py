"""The acceptance battery: every property check, with fixed default seeds.

Each check yields ``ReportRecord``s; ``criterion`` groups the records into
the ten numbered acceptance items and ``summarize`` folds each group into a
single pass/fail line.  Output is deterministic for a given configuration:
no timings or other run-dependent values appear in the records.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .adic import (
    NAdicNumber,
    SolenoidPoint,
    doubling_constant,
    nadic_congruent,
    nadic_double,
    nadic_halve,
    random_nadic,
    random_solenoid,
    solenoid_double,
    solenoid_doubling_kernel,
    solenoid_equal,
    solenoid_halve,
)
from .groups import Group, enumerate_subgroups
from .phase_space import (
    PhaseSubgroup,
    StateVector,
    ambiguity,
    constant,
    delta,
    fourier,
    modulate,
    random_state,
    reflect,
    smooth_stack,
    stft,
    tensor,
    translate,
    wigner,
    wigner_from_ambiguity,
    wigner_stack,
    wigner_via_stft,
)
from .schwartz_bruhat import indicator_of_integers, random_sb, sb_min, sb_wigner
from .second_degree import (
    canonical_key,
    detect_sstate,
    enumerate_max_isotropic,
    enumerate_sstates,
    hudson_classify,
    verify_direct_product_form,
    verify_direct_sum_form,
    wehrl_l1,
)

DEFAULT_GROUPS = ((3,), (5,), (7,), (9,), (3, 3), (3, 5), (27,))

CRITERIA = {
    1: "hudson forward: S-state Wigner tables are coset indicators",
    2: "hudson converse: random states have negative Wigner values",
    3: "classifier consistency: Wehrl-type equality iff positive",
    4: "structural identities of the phase-space transforms",
    5: "smoothed positivity over isotropic subgroups",
    6: "counting oracles",
    7: "positive states on Z3 x Z3 are exactly the S-states",
    8: "n-adic halving and doubling constant",
    9: "negative Wigner values on the 2-adic numbers",
    10: "solenoid halving and the odd-n kernel",
}


@dataclass
class ReportRecord:
    check: str
    status: str
    measured: object
    tolerance: object
    citation: str
    criterion: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "citation": self.citation,
            "criterion": self.criterion,
        }


def record(check: str, ok: bool, measured, tolerance, citation: str) -> ReportRecord:
    return ReportRecord(check, "pass" if ok else "fail", measured, tolerance, citation)


@dataclass
class SuiteConfig:
    groups: tuple[tuple[int, ...], ...] = DEFAULT_GROUPS
    seed: int = 0
    converse_samples: int = 1000
    classifier_samples: int = 200
    identity_samples: int = 100
    smoothing_samples: int = 100
    halving_seeds: int = 500
    sb_samples: int = 100
    oracle_samples: int = 50
    solenoid_samples: int = 200
    inject_fault: bool = False
    criteria: tuple[int, ...] = tuple(CRITERIA)
    budgets: dict = field(default_factory=lambda: {1: 60.0, 2: 120.0, 9: 60.0})


def _name(orders) -> str:
    return "x".join(f"Z{d}" for d in orders)


class Suite:
    def __init__(self, config: SuiteConfig | None = None):
        self.config = config or SuiteConfig()
        self._sstates: dict = {}
        self._isotropic: dict = {}

    # shared, cached data

    def rng(self, *stream: int) -> np.random.Generator:
        return np.random.default_rng([self.config.seed, *stream])

    def sstates(self, g: Group):
        if g not in self._sstates:
            self._sstates[g] = enumerate_sstates(g)
        return self._sstates[g]

    def isotropic(self, g: Group):
        if g not in self._isotropic:
            self._isotropic[g] = enumerate_max_isotropic(g)
        return self._isotropic[g]

    def wigner_values(self, f: StateVector) -> np.ndarray:
        w = wigner(f).values
        return -w if self.config.inject_fault else w

    def wigner_batch(self, g: Group, values: np.ndarray) -> np.ndarray:
        w = wigner_stack(g, values)
        return -w if self.config.inject_fault else w

    def groups(self) -> list[Group]:
        return [Group(tuple(o)) for o in self.config.groups]

    # driver

    def run(self) -> list[ReportRecord]:
        out = []
        for c in self.config.criteria:
            t0 = time.perf_counter()
            recs = list(getattr(self, f"criterion_{c}")())
            elapsed = time.perf_counter() - t0
            budget = self.config.budgets.get(c)
            if budget is not None:
                recs.append(record("runtime", elapsed < budget, "within budget" if elapsed < budget else "over budget",
                                   f"{budget:g} s", "desk-scale runtime"))
            for r in recs:
                r.criterion = c
            out.extend(recs)
        return out

    # 1

    def criterion_1(self) -> Iterator[ReportRecord]:
        cite = "positive Wigner iff indicator of an isotropic coset"
        for g in self.groups():
            n = g.cardinality
            keys = {G.phase_subgroup.key() for G in self.isotropic(g)}
            worst_min, worst_err, unmatched = np.inf, 0.0, 0
            for f in self.sstates(g):
                w = self.wigner_values(f)
                worst_min = min(worst_min, float(w.real.min()))
                flat = np.flatnonzero(w.real.reshape(-1) > 0.5)
                if flat.size == 0:
                    unmatched += 1
                    continue
                x0, a0 = divmod(int(flat[0]), n)
                xs, as_ = np.divmod(flat, n)
                shifted = np.unique(g.sub_table[xs, x0] * n + g.sub_table[as_, a0])
                if shifted.astype(np.int64).tobytes() not in keys:
                    unmatched += 1
                indicator = np.zeros(n * n)
                indicator[flat] = 1.0
                worst_err = max(worst_err, float(np.abs(w.reshape(-1) - indicator).max()))
            ok = worst_min >= -1e-9 and worst_err < 1e-9 and unmatched == 0
            yield record(
                f"sstate_wigner_indicator/{_name(g.orders)}", ok,
                {"sstates": len(self.sstates(g)), "min_wigner": worst_min, "indicator_error": worst_err,
                 "unmatched_cosets": unmatched},
                {"min": -1e-9, "indicator_error": 1e-9}, cite,
            )

    # 2

    def criterion_2(self) -> Iterator[ReportRecord]:
        cite = "positive Wigner implies S-state"
        for gi, g in enumerate(self.groups()):
            rng = self.rng(2, gi)
            states = [random_state(g, rng) for _ in range(self.config.converse_samples)]
            mins = self.wigner_batch(g, np.array([f.values for f in states])).real.min(axis=(1, 2))
            detected = sum(detect_sstate(f) is not None for f in states)
            violations = int(sum(1 for f, m in zip(states, mins) if m >= -1e-4 and detect_sstate(f) is None))
            yield record(
                f"random_states_negative/{_name(g.orders)}", violations == 0,
                {"samples": len(states), "violations": violations, "detected": detected,
                 "max_min_wigner": float(mins.max())},
                {"min_wigner": -1e-4}, cite,
            )

    # 3

    def criterion_3(self) -> Iterator[ReportRecord]:
        cite = "L1 norm of the cross STFT equals |f|^2 exactly for S-states"
        for gi, g in enumerate(self.groups()):
            rng = self.rng(3, gi)
            pool = list(self.sstates(g)) + [random_state(g, rng) for _ in range(self.config.classifier_samples)]
            mismatches = 0
            for f in pool:
                equal = abs(wehrl_l1(f, reflect(f)) - f.norm() ** 2) <= 1e-8
                positive = hudson_classify(f).positive
                if self.config.inject_fault:
                    positive = bool(self.wigner_values(f.normalized()).real.min() >= -1e-9)
                mismatches += equal != positive
            yield record(
                f"wehrl_equality_vs_classifier/{_name(g.orders)}", mismatches == 0,
                {"states": len(pool), "mismatches": mismatches}, {"wehrl": 1e-8}, cite,
            )

    # 4

    def criterion_4(self) -> Iterator[ReportRecord]:
        cite = "phase-space identities for 2-regular groups"
        for gi, g in enumerate(self.groups()):
            rng = self.rng(4, gi)
            n = g.cardinality
            worst = dict.fromkeys(
                ["plancherel", "stft_isometry", "orthogonality", "moyal", "covariance",
                 "fourier_symmetry", "symplectic_fourier", "via_stft", "total_mass", "realness"], 0.0)
            for _ in range(self.config.identity_samples):
                f1, f2, g1, g2 = (random_state(g, rng) for _ in range(4))
                f1 = f1.scaled(1 + rng.random())
                fh = fourier(f1)
                worst["plancherel"] = max(worst["plancherel"], abs(f1.norm() ** 2 - fh.norm() ** 2 / n))
                V = stft(f1, g1)
                worst["stft_isometry"] = max(worst["stft_isometry"],
                                            abs(V.inner(V).real - f1.norm() ** 2 * g1.norm() ** 2))
                lhs = stft(f1, g1).inner(stft(f2, g2))
                worst["orthogonality"] = max(worst["orthogonality"], abs(lhs - f1.inner(f2) * g2.inner(g1)))
                W1 = wigner(f1)
                Wv = self.wigner_values(f1)
                W2 = wigner(f2)
                worst["moyal"] = max(worst["moyal"], abs(W1.inner(W2) - abs(f1.inner(f2)) ** 2))
                y, b = int(rng.integers(n)), int(rng.integers(n))
                shifted = wigner(translate(modulate(f1, g.element(b)), g.element(y))).values
                expect = Wv[np.ix_(g.sub_table[:, y], g.sub_table[:, b])]
                worst["covariance"] = max(worst["covariance"], float(np.abs(shifted - expect).max()))
                Wh = wigner(fh.scaled(1 / np.sqrt(n))).values
                worst["fourier_symmetry"] = max(worst["fourier_symmetry"],
                                                float(np.abs(Wv - Wh[:, g.neg_index].T).max()))
                worst["symplectic_fourier"] = max(
                    worst["symplectic_fourier"],
                    float(np.abs(Wv - wigner_from_ambiguity(ambiguity(f1)).values).max()))
                worst["via_stft"] = max(worst["via_stft"], float(np.abs(Wv - wigner_via_stft(f1).values).max()))
                worst["total_mass"] = max(worst["total_mass"], abs(Wv.sum() / n - f1.norm() ** 2))
                worst["realness"] = max(worst["realness"], float(np.abs(Wv.imag).max()))
            tols = {"plancherel": 1e-9, "stft_isometry": 1e-9, "orthogonality": 1e-9, "moyal": 1e-9,
                    "covariance": 1e-9, "fourier_symmetry": 1e-8, "symplectic_fourier": 1e-8,
                    "via_stft": 1e-9, "total_mass": 1e-9, "realness": 1e-9}
            for k, v in worst.items():
                yield record(f"{k}/{_name(g.orders)}", v < tols[k], float(v), tols[k], cite)

    # 5

    def criterion_5(self) -> Iterator[ReportRecord]:
        cite = "Wigner smoothed by an isotropic subgroup is nonnegative"
        for gi, g in enumerate(self.groups()):
            rng = self.rng(5, gi)
            values = np.array([random_state(g, rng).values for _ in range(self.config.smoothing_samples)])
            W = self.wigner_batch(g, values).real
            subgroups: dict[bytes, PhaseSubgroup] = {}
            larger = 0
            for G in self.isotropic(g):
                P = G.phase_subgroup
                subgroups.setdefault(P.key(), P)
                for axis in (PhaseSubgroup.dual_axis(g), PhaseSubgroup.primal_axis(g)):
                    J = P.join(axis)
                    if len(J) > len(P) and J.key() not in subgroups:
                        subgroups[J.key()] = J
                        larger += 1
            worst = min(float(smooth_stack(W, P).min()) for P in subgroups.values())
            yield record(
                f"smoothed_positive/{_name(g.orders)}", worst >= -1e-9 and larger > 0,
                {"subgroups": len(subgroups), "strictly_larger": larger, "min_smoothed": worst},
                -1e-9, cite,
            )

    # 6

    def criterion_6(self) -> Iterator[ReportRecord]:
        cite = "exhaustive enumeration counts"
        expected = [
            ("sstates/Z3", lambda: len(self.sstates(Group((3,)))), 12),
            ("sstates/Z5", lambda: len(self.sstates(Group((5,)))), 30),
            ("sstates/Z7", lambda: len(self.sstates(Group((7,)))), 56),
            ("isotropic/Z3", lambda: len(self.isotropic(Group((3,)))), 4),
            ("isotropic/Z5", lambda: len(self.isotropic(Group((5,)))), 6),
            ("isotropic/Z7", lambda: len(self.isotropic(Group((7,)))), 8),
            ("subgroups/Z9", lambda: len(enumerate_subgroups(Group((9,)))), 3),
            ("subgroups/Z3xZ3", lambda: len(enumerate_subgroups(Group((3, 3)))), 6),
        ]
        for name, fn, want in expected:
            got = fn()
            yield record(name, got == want, got, want, cite)

    # 7

    def criterion_7(self) -> Iterator[ReportRecord]:
        cite = "S-states on products and under the Fourier transform"
        g = Group((3, 3))
        roots = np.array([0, 1, np.exp(2j * np.pi / 3), np.exp(4j * np.pi / 3)])
        family = []
        for lead in range(g.cardinality):
            for tail in itertools.product(range(4), repeat=g.cardinality - lead - 1):
                v = np.zeros(g.cardinality, dtype=complex)
                v[lead] = 1
                v[lead + 1:] = roots[list(tail)]
                family.append(v)
        family = np.array(family)
        positive_keys = set()
        for chunk in np.array_split(family, 16):
            W = self.wigner_batch(g, chunk)
            norms = np.sum(np.abs(chunk) ** 2, axis=1)
            mins = W.real.min(axis=(1, 2)) / norms
            for v in chunk[mins >= -1e-9]:
                positive_keys.add(canonical_key(StateVector(g, v)))
        sstate_keys = {canonical_key(f) for f in self.sstates(g)}
        yield record(
            "positive_family_equals_sstates/Z3xZ3", positive_keys == sstate_keys,
            {"family": len(family), "positive": len(positive_keys), "sstates": len(sstate_keys),
             "symmetric_difference": len(positive_keys ^ sstate_keys)},
            "exact set equality", cite,
        )
        fourier_keys = {canonical_key(fourier(f)) for f in self.sstates(g)}
        yield record("fourier_maps_sstates_onto_sstates/Z3xZ3", fourier_keys == sstate_keys,
                     {"image": len(fourier_keys), "sstates": len(sstate_keys)}, "exact set equality", cite)
        g1 = Group((3,))
        small = self.sstates(g1)
        sum_ok = all(verify_direct_sum_form(tensor(f, delta(g1)), 1) for f in small)
        prod_ok = all(verify_direct_product_form(tensor(f, constant(g1)), 1) for f in small)
        rng = self.rng(7)
        rnd = [random_state(g1, rng) for _ in range(20)]
        neg_ok = not any(verify_direct_sum_form(tensor(f, delta(g1)), 1) for f in rnd)
        neg_ok = neg_ok and not any(verify_direct_sum_form(tensor(f, random_state(g1, rng)), 1) for f in small)
        yield record("tensor_forms/Z3xZ3", sum_ok and prod_ok and neg_ok,
                     {"delta_form": sum_ok, "constant_form": prod_ok, "rejects_non_sstates": neg_ok},
                     "exact", cite)

    # 8

    def criterion_8(self) -> Iterator[ReportRecord]:
        cite = "the n-adic numbers are 2-regular"
        for n in (2, 3, 4, 5, 6, 9, 10):
            rng = self.rng(8, n)
            failures = 0
            for _ in range(self.config.halving_seeds):
                y = random_nadic(n, rng, int(rng.integers(-3, 4)), int(rng.integers(2, 10)))
                end = y.precision_end - 1
                failures += not nadic_congruent(nadic_double(nadic_halve(y)), y, end)
                failures += not nadic_congruent(nadic_halve(nadic_double(y)), y, end)
            yield record(f"halving_roundtrip/n={n}", failures == 0,
                         {"samples": self.config.halving_seeds, "failures": failures}, "exact", cite)
            want = Fraction(1) if n % 2 else Fraction(1, 2)
            got = doubling_constant(n, 2)
            yield record(f"doubling_constant/n={n}", got == want, str(got), str(want), cite)

    # 9

    def criterion_9(self) -> Iterator[ReportRecord]:
        cite = "Wigner positivity fails on the 2-adic numbers"
        m0, _ = sb_min(indicator_of_integers(2))
        yield record("indicator_min/n=2", abs(m0 + 0.5) < 1e-9, m0, {"value": -0.5, "tol": 1e-9}, cite)
        for m, M in ((-1, 2), (-2, 3)):
            rng = self.rng(9, -m, M)
            worst = max(sb_min(random_sb(2, m, M, rng))[0] for _ in range(self.config.sb_samples))
            yield record(f"random_negative/n=2,m={m},M={M}", worst < -1e-6,
                         {"samples": self.config.sb_samples, "max_min": worst}, -1e-6, cite)
        for n, m, M in ((3, -1, 1), (9, 0, 1)):
            rng = self.rng(9, n)
            g = Group((n ** (M - m),))
            err = 0.0
            for _ in range(self.config.oracle_samples):
                f = random_sb(n, m, M, rng)
                oracle = wigner(StateVector(g, f.coeffs)).values.real * float(n) ** (-M)
                err = max(err, float(np.abs(sb_wigner(f).values - oracle).max()))
            yield record(f"quotient_oracle/n={n}", err < 1e-9, err, 1e-9, cite)

    # 10

    def criterion_10(self) -> Iterator[ReportRecord]:
        cite = "the solenoid is 2-regular iff n is even"
        for n in (2, 4):
            rng = self.rng(10, n)
            failures = 0
            for _ in range(self.config.solenoid_samples):
                q = random_solenoid(n, rng)
                p = solenoid_halve(q)
                d = solenoid_double(p)
                failures += not (d.a == q.a and nadic_congruent(d.x, q.x))
                back = solenoid_halve(solenoid_double(q))
                failures += not (back.a == q.a and nadic_congruent(back.x, q.x))
            yield record(f"solenoid_halving/n={n}", failures == 0,
                         {"samples": self.config.solenoid_samples, "failures": failures}, "exact", cite)
        for n in (3, 5):
            k = solenoid_doubling_kernel(n)
            d = solenoid_double(k)
            zero = SolenoidPoint(n, Fraction(0), NAdicNumber.from_int(n, 0, 0, d.x.precision_end))
            ok = k.a != 0 and solenoid_equal(d, zero)
            yield record(f"doubling_kernel/n={n}", ok, {"kernel": k.to_json(), "double": d.to_json()}, "exact", cite)


def run_suite(config: SuiteConfig | None = None) -> list[ReportRecord]:
    return Suite(config).run()


def summarize(records: list[ReportRecord]) -> list[ReportRecord]:
    """One record per criterion: pass iff every record of that criterion passed."""
    out = []
    for c in sorted({r.criterion for r in records}):
        recs = [r for r in records if r.criterion == c]
        failed = [r.check for r in recs if not r.passed]
        out.append(ReportRecord(f"criterion_{c}", "fail" if failed else "pass",
                                {"checks": len(recs), "failed": failed}, "all checks", CRITERIA[c], c))
    return out
