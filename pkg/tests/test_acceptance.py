"""Acceptance suite: every advertised identity, bound, and pin at its
stated tolerance, driven through the command-line interface.

Each criterion prints one PASS/FAIL line (run with -s or rely on the
disabled-capture prints).  The hazard-inversion round trip is the one
part exercised through the library, since the CLI surface does not expose
inversion.
"""

import json
import math

import numpy as np
import pytest

from conftest import catalog_members, run_cli

EXP = '{"family":"exponential","params":{"rate":%g}}'
UNIFORM = '{"family":"uniform","params":{"a":%g,"b":%g}}'
GAMMA = '{"family":"gamma","params":{"alpha":%g,"beta":%g}}'
BETA = '{"family":"beta","params":{"alpha":%g,"beta":%g}}'
PW = '{"family":"piecewise","params":{"weights":%s}}'
PARETO21 = '{"family":"pareto","params":{"shape":2,"scale":1}}'
BB111 = '{"family":"bivariate_beta","params":{"alpha":1,"beta":1,"gamma":1}}'


def spec_of(dist):
    fam = dist.family
    p = dist.params
    if fam == "piecewise":
        return PW % json.dumps(list(p["weights"]))
    if fam == "tabulated":
        return json.dumps({"family": "tabulated",
                           "grid": [[0.0, 0.5], [1.0, 1.5], [2.0, 0.5], [3.0, 0.1]]})
    return json.dumps({"family": fam, "params": dict(p)})


def rows_of(out):
    return json.loads(out)["rows"]


def measure_value(spec, mid, t=None, method="auto"):
    args = ["measure", "--dist", spec, "--measure", mid, "--method", method]
    if t is not None:
        args += ["--t", repr(t)]
    code, out, err = run_cli(*args)
    assert code == 0, err
    return rows_of(out)[0]


def announce(capsys, label, problems):
    verdict = "PASS" if not problems else "FAIL"
    with capsys.disabled():
        print(f"[acceptance] {label}: {verdict}")
    assert not problems, f"{label}: " + "; ".join(problems)


def close(got, want, tol):
    if isinstance(got, str) or got is None:
        return False
    return abs(got - want) <= tol


class TestCriterion1ClosedForms:
    """Quadrature reproduces every analytic closed form within 1e-8."""

    def test_closed_form_reproduction(self, capsys):
        problems = []

        def check(tag, got, want, tol=1e-8):
            if not close(got, want, tol):
                problems.append(f"{tag}: got {got!r}, want {want}")

        for lam in (0.5, 1.0, 5.0):
            row = measure_value(EXP % lam, "weighted_extropy", method="quadrature")
            check(f"Jw(exp {lam})", row["value"], -0.125)

        for a, b in [(0.0, 1.0), (0.0, 4.0), (1.0, 3.0), (2.0, 6.0)]:
            spec = UNIFORM % (a, b)
            row = measure_value(spec, "extropy", method="quadrature")
            check(f"J(U({a},{b}))", row["value"], -1.0 / (2 * (b - a)))
            row = measure_value(spec, "weighted_extropy", method="quadrature")
            check(f"Jw(U({a},{b}))", row["value"], -(b + a) / (4 * (b - a)))

        for alpha in (1.0, 2.0, 3.0):
            want = -math.exp(math.lgamma(2 * alpha) - (2 * alpha + 1) * math.log(2)
                             - 2 * math.lgamma(alpha))
            got = []
            for beta in (0.5, 1.0, 2.0):
                row = measure_value(GAMMA % (alpha, beta), "weighted_extropy",
                                    method="quadrature")
                got.append(row["value"])
                check(f"Jw(gamma {alpha},{beta})", row["value"], want)
            if max(got) - min(got) > 1e-8:
                problems.append(f"gamma alpha={alpha} not scale-free: {got}")

        def b2(x, y):
            return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))

        for alpha, beta in [(1.0, 0.55), (1.5, 0.75), (2.0, 1.5)]:
            want = -b2(2 * alpha, 2 * beta - 1) / (2 * b2(alpha, beta) ** 2)
            row = measure_value(BETA % (alpha, beta), "weighted_extropy",
                                method="quadrature")
            check(f"Jw(beta {alpha},{beta})", row["value"], want)
        for beta in (0.3, 0.5):
            for method in ("auto", "quadrature"):
                row = measure_value(BETA % (1.0, beta), "weighted_extropy",
                                    method=method)
                if not (row["diverged"] and row["value"] == "-inf"):
                    problems.append(f"beta(1,{beta}) {method} not flagged divergent")

        vectors = [(0.2, 0.3, 0.5), (0.5, 0.3, 0.2), (0.5, 0.5)]
        results = {}
        for c in vectors:
            arr = np.asarray(c)
            ks = np.arange(1, arr.size + 1)
            spec = PW % json.dumps(list(c))
            j = measure_value(spec, "extropy", method="quadrature")["value"]
            jw = measure_value(spec, "weighted_extropy", method="quadrature")["value"]
            check(f"J(pw {c})", j, -0.5 * float(np.sum(arr**2)))
            check(f"Jw(pw {c})", jw,
                  -0.25 * float(np.sum(arr**2 * (2 * ks - 1))))
            results[c] = (j, jw)
        j1, jw1 = results[(0.2, 0.3, 0.5)]
        j2, jw2 = results[(0.5, 0.3, 0.2)]
        if abs(j1 - j2) > 1e-10:
            problems.append("permuted weights should share extropy")
        if abs(jw1 - jw2) < 1e-6:
            problems.append("permuted weights should differ in weighted extropy")

        announce(capsys, "criterion 1 (closed-form reproduction)", problems)

    def test_stated_uniform_exponential_coincidence(self, capsys):
        """Asserts the advertised identity Jw(U(1,3)) = Jw(exp) = -1/8.

        No uniform on a non-negative support can reach -1/8: by the
        closed form Jw(U(a,b)) = -(a+b)/(4(b-a)) <= -1/4 whenever a >= 0,
        and U(1,3) evaluates to -1/2 (confirmed by the quadrature oracle).
        The assertion is kept as stated and fails honestly.
        """
        row = measure_value(UNIFORM % (1.0, 3.0), "weighted_extropy",
                            method="quadrature")
        ok = close(row["value"], -0.125, 1e-8)
        with capsys.disabled():
            verdict = "PASS" if ok else "FAIL (expected: identity is false)"
            print(f"[acceptance] criterion 1 (stated Jw(U(1,3)) = -1/8): {verdict}")
        assert ok, f"Jw(U(1,3)) = {row['value']}, stated -0.125 is unattainable"


class TestCriterion2Transforms:
    """Transform identities within 1e-7."""

    def test_transform_identities(self, capsys):
        problems = []

        for d in catalog_members():
            code, out, _ = run_cli("transform", "--dist", spec_of(d),
                                   "--transform", "pit")
            row = {r["quantity"]: r for r in rows_of(out)}
            v = row["weighted_extropy_xdomain"]["value"]
            if not close(v, -0.25, 1e-7):
                problems.append(f"PIT on {d.label}: {v}")

        for base in (EXP % 1.0, UNIFORM % (0.0, 2.0)):
            for a, b in [(2.0, 0.0), (1.0, 3.0), (2.0, 3.0)]:
                code, out, _ = run_cli("transform", "--dist", base,
                                       "--transform", f"affine:{a:g},{b:g}")
                rows = {r["quantity"]: r for r in rows_of(out)}
                rule_j = rows["extropy_linear_rule"]["value"]
                rule_jw = rows["weighted_extropy_linear_rule"]["value"]
                direct_j = rows["extropy_pushforward"]["value"]
                direct_jw = rows["weighted_extropy_pushforward"]["value"]
                if not close(rule_j, direct_j, 1e-7):
                    problems.append(f"J rule {base} a={a} b={b}: {rule_j} vs {direct_j}")
                if not close(rule_jw, direct_jw, 1e-7):
                    problems.append(
                        f"Jw rule {base} a={a} b={b}: {rule_jw} vs {direct_jw}")

        for name in ("scale:2", "affine:1,3", "square", "exp", "pit"):
            code, out, _ = run_cli("transform", "--dist", EXP % 1.0,
                                   "--transform", name)
            rows = {r["quantity"]: r for r in rows_of(out)}
            x = rows["weighted_extropy_xdomain"]["value"]
            p = rows["weighted_extropy_pushforward"]["value"]
            if not close(x, p, 1e-7):
                problems.append(f"x-domain vs pushforward ({name}): {x} vs {p}")

        announce(capsys, "criterion 2 (transform identities)", problems)


class TestCriterion3ResidualPast:
    def test_residual_past_suite(self, capsys):
        problems = []

        code, out, _ = run_cli("curve", "--dist", EXP % 1.0,
                               "--measure", "weighted_residual_extropy",
                               "--grid", "0.2:4:10", "--method", "quadrature")
        for row in rows_of(out):
            want = -row["t"] / 4.0 - 0.125
            if not close(row["value"], want, 1e-8):
                problems.append(f"Jw(X_t) exp at t={row['t']}: {row['value']}")

        for spec in (EXP % 1.0, UNIFORM % (0.0, 1.0), GAMMA % (2.0, 1.0)):
            jw = measure_value(spec, "weighted_extropy", method="quadrature")["value"]
            early = measure_value(spec, "weighted_residual_extropy", t=1e-6,
                                  method="quadrature")["value"]
            if not close(early, jw, 1e-5):
                problems.append(f"residual limit t->0 on {spec}: {early} vs {jw}")
        late = measure_value(EXP % 1.0, "weighted_past_extropy",
                             t=-math.log(1e-7), method="quadrature")["value"]
        if not close(late, -0.125, 1e-5):
            problems.append(f"past limit t->end (exp): {late}")
        bounded = measure_value(UNIFORM % (0.0, 1.0), "weighted_past_extropy",
                                t=1.0, method="quadrature")["value"]
        if not close(bounded, -0.25, 1e-8):
            problems.append(f"past limit t=end (uniform): {bounded}")

        for d in catalog_members():
            q = d.quantile(np.asarray([0.01, 0.99]))
            grid = f"geometric:{float(q[0]):.12g}:{float(q[1]):.12g}:10"
            code, out, _ = run_cli("claims", "--dist", spec_of(d),
                                   "--claims", "decomposition", "--grid", grid)
            doc = json.loads(out)
            if doc["summary"]["holds"] != 10:
                problems.append(f"decomposition on {d.label}: {doc['summary']}")

        for lam in (0.5, 1.0, 2.0):
            for t in (0.5, 1.0, 2.0):
                row = measure_value(EXP % lam, "dynamic_survival_extropy", t=t,
                                    method="quadrature")
                if not close(row["value"], -0.25 / lam, 1e-8):
                    problems.append(f"Js(exp {lam}, {t}): {row['value']}")
        for b in (1.0, 4.0):
            for t in (0.25 * b, 0.5 * b, 0.75 * b):
                row = measure_value(UNIFORM % (0.0, b), "dynamic_survival_extropy",
                                    t=t, method="quadrature")
                if not close(row["value"], -(b - t) / 6.0, 1e-8):
                    problems.append(f"Js(U(0,{b}), {t}): {row['value']}")

        announce(capsys, "criterion 3 (residual/past suite)", problems)


class TestCriterion4Bivariate:
    def test_bivariate(self, capsys):
        problems = []
        for method, tol in (("auto", 1e-12), ("quadrature", 1e-6)):
            code, out, _ = run_cli("bivariate", "--dist", BB111,
                                   "--method", method)
            rows = {r["measure"]: r["value"] for r in rows_of(out)}
            if not close(rows["bivariate_extropy"], 0.5, tol):
                problems.append(f"J(X,Y) {method}: {rows['bivariate_extropy']}")
            if not close(rows["bivariate_weighted_extropy"], 0.125, tol):
                problems.append(
                    f"Jw(X,Y) {method}: {rows['bivariate_weighted_extropy']}")

        pairs = [(EXP % 1.0, UNIFORM % (0.0, 1.0)),
                 (GAMMA % (2.0, 1.0), EXP % 2.0),
                 (UNIFORM % (0.0, 2.0), UNIFORM % (0.0, 2.0))]
        for x, y in pairs:
            code, out, _ = run_cli("claims", "--dist", x, "--dist", y,
                                   "--claims", "independence_factorization")
            row = rows_of(out)[0]
            if row["verdict"] != "holds":
                problems.append(f"factorization {x} x {y}: {row['verdict']}")
            if abs(row["gap"]) > 1e-6 or abs(row["extras"]["weighted_gap"]) > 1e-6:
                problems.append(f"factorization gaps too large for {x} x {y}")

        announce(capsys, "criterion 4 (bivariate)", problems)


class TestCriterion5DerivativeOracle:
    def test_derivative_oracle(self, capsys):
        problems = []
        grids = {
            EXP % 1.0: "0.4:4:5",
            GAMMA % (2.0, 1.0): "0.5:3.5:5",
            UNIFORM % (0.0, 1.0): "0.2:0.8:5",
        }
        for spec, grid in grids.items():
            code, out, _ = run_cli("claims", "--dist", spec,
                                   "--claims", "lemma1_residual", "--grid", grid)
            for row in rows_of(out):
                if row["verdict"] != "holds" or abs(row["gap"]) > 1e-5:
                    problems.append(
                        f"derivative identity {spec} t={row['t']}: gap {row['gap']}")

        code, out, _ = run_cli("claims", "--dist", EXP % 1.0,
                               "--claims", "lemma1_residual", "--t", "1")
        row = rows_of(out)[0]
        if not close(row["extras"]["claimed_gap"], 0.5625, 1e-6):
            problems.append(f"claimed-identity gap pin: {row['extras']['claimed_gap']}")

        announce(capsys, "criterion 5 (derivative oracle)", problems)


class TestCriterion6ClaimPins:
    def test_claim_pins(self, capsys):
        problems = []

        code, out, _ = run_cli("claims", "--dist", EXP % 1.0,
                               "--claims", "residual_bound", "--grid", "0.3:3:5")
        for row in rows_of(out):
            if row["verdict"] != "holds" or not close(row["gap"], 0.125, 1e-8):
                problems.append(f"residual bound at t={row['t']}: gap {row['gap']}")

        code, out, _ = run_cli("claims", "--dist", EXP % 1.0, "--dist", EXP % 1.0,
                               "--claims", "sum_bound")
        row = rows_of(out)[0]
        if not close(row["lhs"], -0.1875, 1e-6):
            problems.append(f"sum bound lhs: {row['lhs']}")
        if not close(row["rhs"], -0.125, 1e-9):
            problems.append(f"sum bound rhs: {row['rhs']}")
        if row["verdict"] != "violated":
            problems.append(f"sum bound verdict: {row['verdict']}")

        code, out, _ = run_cli("claims", "--dist", UNIFORM % (0.0, 1.0),
                               "--claims", "past_bound", "--t", "1")
        row = rows_of(out)[0]
        ex = row["extras"]
        if not close(ex["claimed_bound"], -0.5, 1e-12):
            problems.append(f"claimed bound: {ex['claimed_bound']}")
        if not close(ex["rederived_bound"], -0.25, 1e-12):
            problems.append(f"re-derived bound: {ex['rederived_bound']}")
        if not close(ex["mutual_gap"], 0.25, 1e-12):
            problems.append(f"bound mutual gap: {ex['mutual_gap']}")

        announce(capsys, "criterion 6 (claim pins)", problems)


class TestCriterion7InversionRoundTrip:
    @pytest.mark.filterwarnings("ignore:.*two positive hazard roots.*")
    def test_inversion_round_trip(self, capsys):
        from extropy.claims import invert_weighted_residual, reconstruct_survival

        problems = []

        ts = np.linspace(0.5, 5.0, 400)
        hc = invert_weighted_residual([(t, -t / 4 - 0.125, -0.25) for t in ts])
        if float(np.max(np.abs(hc.values - 1.0))) > 1e-6:
            problems.append("exponential hazard not recovered to 1e-6")
        sf = reconstruct_survival(hc, 0.5, math.exp(-0.5))
        qs = np.linspace(0.5, 5.0, 80)
        if float(np.max(np.abs(sf(qs) - np.exp(-qs)))) > 1e-4:
            problems.append("exponential survival round trip above 1e-4")

        tg = np.geomspace(1.1, 5.0, 300)
        hcp = invert_weighted_residual([(t, -0.5, 0.0) for t in tg])
        if float(np.max(np.abs(hcp.values - 2.0 / hcp.times))) > 1e-6:
            problems.append("pareto hazard not recovered to 1e-6")
        sfp = reconstruct_survival(hcp, 1.1, 1.1**-2.0)
        qp = np.geomspace(1.1, 5.0, 50)
        if float(np.max(np.abs(sfp(qp) - qp**-2.0))) > 1e-4:
            problems.append("pareto survival round trip above 1e-4")

        code, out, _ = run_cli("claims", "--dist", PARETO21,
                               "--claims", "constancy", "--grid", "geometric:1.5:5:4")
        row = rows_of(out)[0]
        if row["lhs"] > 1e-6:
            problems.append(f"constancy spread {row['lhs']}")
        if not close(row["extras"]["mean_value"], -0.5, 1e-6):
            problems.append(f"constancy level {row['extras']['mean_value']}")

        announce(capsys, "criterion 7 (inversion round trip)", problems)


class TestCriterion8MonteCarlo:
    def test_monte_carlo(self, capsys):
        problems = []

        checks = [
            ((EXP % 1.0), "weighted_extropy", 10**6, -0.125),
            ((UNIFORM % (0.0, 1.0)), "extropy", 10**5, -0.5),
        ]
        for spec, mid, n, want in checks:
            code, out, _ = run_cli("mc", "--dist", spec, "--measure", mid,
                                   "--n", str(n), "--seed", "20250810")
            row = rows_of(out)[0]
            if not close(row["reference"], want, 1e-8):
                problems.append(f"{mid} reference: {row['reference']}")
            if abs(row["z"]) >= 4.0:
                problems.append(f"{mid} z-score {row['z']}")

        code, out, _ = run_cli("mc", "--dist", BB111,
                               "--measure", "bivariate_weighted_extropy",
                               "--n", str(10**6), "--seed", "20250810")
        row = rows_of(out)[0]
        if not close(row["reference"], 0.125, 1e-6):
            problems.append(f"bivariate reference: {row['reference']}")
        if abs(row["z"]) >= 4.0:
            problems.append(f"bivariate z-score {row['z']}")

        args = ("mc", "--dist", EXP % 1.0, "--measure", "extropy,weighted_extropy",
                "--n", "200000", "--seed", "11")
        _, first, _ = run_cli(*args)
        _, second, _ = run_cli(*args)
        if first != second:
            problems.append("rerun not byte-identical")

        announce(capsys, "criterion 8 (Monte-Carlo cross-check)", problems)
