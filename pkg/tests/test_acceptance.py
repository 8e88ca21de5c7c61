"""Acceptance suite: ten go/no-go criteria, one printed verdict line each.

Every test prints exactly one line of the form

    [criterion NN] PASS  <what was checked, with the pinned tolerance>

through the capture-disabled channel, so the verdicts are visible in a
plain ``pytest -v`` run.  A FAIL line prints before the assert fires.
Tolerances are pinned here, not imported, so a drive-by change to library
defaults cannot silently relax the gate.
"""

from __future__ import annotations

import time

import numpy as np

from opmeas.causality import builtin_model_family, leakage_scan, schlieder_scan
from opmeas.cli import main
from opmeas.ensembles import (
    run_annihilation_trials,
    run_objectivity_trials,
    run_prop1_trials,
    run_sharpness_trials,
    trial_rng,
    random_pom,
    random_projective_pom,
)
from opmeas.linalg import op_norm
from opmeas.localization import (
    SpatialSet,
    check_local_commutativity,
    coherent_state_povm,
    gaussian_fiducial,
    make_model,
    position_marginal,
    sharp_position_map,
    smeared_position_map,
    three_point_kernel,
    zero_hamiltonian,
)
from opmeas.povm import is_commutative, is_sharp_pom

TOL = 1e-8          # equivalence / agreement tolerance (criteria 1-5, 10)
TOL_MARGINAL = 1e-10  # commutativity of the position marginal (criterion 7)
TOL_LEAK = 1e-10    # leakage baseline and the H = 0 series (criterion 8)
TRIALS = 200


def _report(capsys, num: int, ok: bool, detail: str) -> bool:
    with capsys.disabled():
        print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
    return ok


def test_criterion_01_proposition1_case_beta(capsys):
    start = time.perf_counter()
    records = run_prop1_trials(seed=101, trials=TRIALS, dims=(2, 6), outcomes=(2, 2), tol=TOL)
    elapsed = time.perf_counter() - start
    bad = [r for r in records if not r.equivalent]
    ok = not bad and elapsed < 10.0
    assert _report(
        capsys, 1, ok,
        f"proposition 1 case beta: {TRIALS - len(bad)}/{TRIALS} binary-POM trials "
        f"equivalent at tol {TOL} in {elapsed:.2f}s (limit 10s)",
    ), bad[:3]


def test_criterion_02_proposition1_case_alpha(capsys):
    start = time.perf_counter()
    records = run_prop1_trials(seed=202, trials=TRIALS, dims=(2, 6), outcomes=(2, 5), tol=TOL)
    elapsed = time.perf_counter() - start
    bad = [r for r in records if not r.equivalent]
    ok = not bad and elapsed < 30.0
    assert _report(
        capsys, 2, ok,
        f"proposition 1 case alpha: {TRIALS - len(bad)}/{TRIALS} trials with 2-5 outcomes "
        f"equivalent at tol {TOL} in {elapsed:.2f}s (limit 30s)",
    ), bad[:3]


def test_criterion_03_objectivity_and_causality_link(capsys):
    records = run_objectivity_trials(seed=303, trials=TRIALS, dims=(2, 6), tol=TOL)
    disagree = [r for r in records if not r.agree]
    broken_link = [r for r in records if not r.link_holds]
    ok = not disagree and not broken_link
    assert _report(
        capsys, 3, ok,
        f"objectivity: ops_commute iff effects_commute in {TRIALS - len(disagree)}/{TRIALS} "
        f"trials, commuting operations imply mutual nondisturbance in "
        f"{TRIALS - len(broken_link)}/{TRIALS}, tol {TOL}",
    ), (disagree[:3], broken_link[:3])


def test_criterion_04_annihilation_reduction(capsys):
    records = run_annihilation_trials(seed=404, trials=TRIALS, dims=(2, 8), tol=TOL)
    bad = [r for r in records if not r.agree]
    zeros = sum(r.prod_zero for r in records)
    ok = not bad
    assert _report(
        capsys, 4, ok,
        f"effect-product vs range-projection annihilation: {TRIALS - len(bad)}/{TRIALS} "
        f"agreements ({zeros} annihilating pairs) at tol {TOL}",
    ), bad[:3]


def test_criterion_05_sharpness_dichotomy(capsys):
    records = run_sharpness_trials(seed=505, trials=TRIALS, dims=(2, 6), tol=TOL)
    bad = [r for r in records if not r.agree]

    pom_checks = 0
    pom_bad = []
    for trial in range(40):
        rng = trial_rng(606, trial)
        dim = int(rng.integers(2, 7))
        k = int(rng.integers(2, dim + 1))
        pom = (
            random_projective_pom(rng, dim, k)
            if trial % 2 == 0
            else random_pom(rng, dim, k)
        )
        pairwise_vanish = all(
            op_norm(pom.effects[i].op @ pom.effects[j].op) <= TOL
            for i in range(len(pom))
            for j in range(len(pom))
            if i != j
        )
        pom_checks += 1
        if pairwise_vanish != is_sharp_pom(pom, TOL):
            pom_bad.append(trial)

    ok = not bad and not pom_bad
    assert _report(
        capsys, 5, ok,
        f"sharpness dichotomy: is_sharp iff ||E^2-E|| <= {TOL} in "
        f"{TRIALS - len(bad)}/{TRIALS} effects; pairwise-annihilation iff is_sharp_pom in "
        f"{pom_checks - len(pom_bad)}/{pom_checks} POMs",
    ), (bad[:3], pom_bad[:3])


def test_criterion_06_lattice_commutator_and_strong_unsharpness(capsys):
    start = time.perf_counter()
    model = make_model(32)
    sharp = sharp_position_map(model)
    worst = 0.0
    for d in (2, 3, 4):
        rep = check_local_commutativity(sharp, SpatialSet({0}), SpatialSet({d}, time_slice=1))
        if rep.applicable:
            worst = max(worst, rep.commutator)
    smeared = smeared_position_map(model, three_point_kernel(32))
    max_eig = max(
        float(np.linalg.eigvalsh(e.op).max()) for e in smeared.base_pom.effects
    )
    elapsed = time.perf_counter() - start
    ok = worst > 1e-3 and max_eig <= 0.5 + 1e-10 and elapsed < 60.0
    assert _report(
        capsys, 6, ok,
        f"N=32 hopping: worst spacelike commutator {worst:.6f} > 1e-3; smeared singleton "
        f"max eigenvalue {max_eig:.12f} <= 0.5+1e-10; {elapsed:.2f}s (limit 60s)",
    )


def test_criterion_07_phase_space_povm_vs_marginal(capsys):
    worst_noncomm = np.inf
    worst_marginal = 0.0
    for n in range(4, 17):
        model = make_model(n)
        povm = coherent_state_povm(model, gaussian_fiducial(n))
        worst_noncomm = min(worst_noncomm, is_commutative(povm).max_commutator)
        marg = position_marginal(povm, model)
        worst_marginal = max(worst_marginal, is_commutative(marg.base_pom).max_commutator)
    ok = worst_noncomm > 1e-6 and worst_marginal <= TOL_MARGINAL
    assert _report(
        capsys, 7, ok,
        f"coherent-state POVM noncommutative for all N=4..16 (min of max commutators "
        f"{worst_noncomm:.3e} > 1e-6) while every position marginal commutes "
        f"(worst {worst_marginal:.3e} <= {TOL_MARGINAL})",
    )


def test_criterion_08_leakage(capsys):
    start = time.perf_counter()
    phi = np.zeros(32)
    phi[0] = 1.0
    times = [0.0, 0.5, 1.0, 2.0, 4.0]
    hop = leakage_scan(sharp_position_map(make_model(32)), phi, SpatialSet({0}), times)
    static = leakage_scan(
        sharp_position_map(make_model(32, hamiltonian=zero_hamiltonian(32))),
        phi, SpatialSet({0}), times,
    )
    elapsed = time.perf_counter() - start
    baseline_ok = abs(hop.leakage[0]) <= TOL_LEAK
    positive_ok = bool(np.all(hop.leakage[1:] > 0.0))
    static_ok = bool(np.all(np.abs(static.leakage) <= TOL_LEAK))
    ok = baseline_ok and positive_ok and static_ok and elapsed < 10.0
    assert _report(
        capsys, 8, ok,
        f"leakage N=32: baseline {hop.leakage[0]:.1e} <= {TOL_LEAK}, positive at "
        f"t in {{0.5,1,2,4}} (min {hop.leakage[1:].min():.3e}), H=0 series <= {TOL_LEAK}; "
        f"{elapsed:.2f}s (limit 10s)",
    )


def test_criterion_09_csv_determinism(capsys, tmp_path):
    import json as _json

    from opmeas.effects import validate_effect
    from opmeas.serialize import effect_to_json

    effect_path = tmp_path / "effect.json"
    effect_path.write_text(
        _json.dumps(effect_to_json(validate_effect(np.diag([0.9, 0.1]).astype(complex))))
    )
    argv_sets = [
        ["luders-verify", "--seed", "11", "--trials", "40", "--dims", "2..5", "--format", "csv"],
        ["effect-check", "--effect", str(effect_path), "--format", "csv"],
    ]
    mismatched = []
    for argv in argv_sets:
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        second = capsys.readouterr().out
        if first.encode() != second.encode():
            mismatched.append(argv[0])
    ok = not mismatched
    assert _report(
        capsys, 9, ok,
        f"byte-identical CSV on repeated runs of {', '.join(a[0] for a in argv_sets)}",
    ), mismatched


def test_criterion_10_consistency_assertion_across_family(capsys):
    reports = [
        schlieder_scan(lmap, max_t=2, tol=TOL, label=label)
        for label, lmap in builtin_model_family(sizes=(8, 16, 32))
    ]
    violators = [r.label for r in reports if r.findings]
    # double-check the assertion from the raw report fields, independent of
    # the findings logic
    recomputed = []
    for r in reports:
        premises = all(
            r.condition_row(name).holds
            for name in ("covariance", "weak localizability", "local commutativity")
        )
        if premises and r.unit_window is not None and r.nontrivial_dynamics:
            recomputed.append(r.label)
    ok = not violators and not recomputed and len(reports) == 18
    assert _report(
        capsys, 10, ok,
        f"no configuration out of {len(reports)} (3 constructions x 2 Hamiltonians x "
        f"N in {{8,16,32}}) passes covariance + weak localizability + local commutativity "
        f"at tol {TOL} while holding a unit eigenvalue on a bounded proper subset under "
        f"nontrivial dynamics",
    ), (violators, recomputed)


def test_family_violation_would_exit_2(capsys):
    # contract check for the scan command: findings exit with code 2; the
    # builtin family has none, so the sweep must exit 0.
    assert main(["causality-scan", "--format", "csv", "--out", "/dev/null"]) == 0
    capsys.readouterr()
