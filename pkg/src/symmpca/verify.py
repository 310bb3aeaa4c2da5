"""Self-check suites run by ``symmpca verify``.

Each suite returns ``(passed, detail)``. Rule and analysis functions are
looked up through their modules at call time so a patched implementation is
what gets checked.
"""

import itertools

import numpy as np

from . import analysis, model as model_mod, rules
from .dynamics import model_from_seed
from .linalg import make_rng, random_stiefel

SEED = 2020


def numerical_gradient(f, W, h=1e-5):
    """Central finite-difference gradient of scalar ``f`` at matrix ``W``."""
    W = np.array(W, dtype=float)
    G = np.zeros_like(W)
    for idx in np.ndindex(W.shape):
        orig = W[idx]
        W[idx] = orig + h
        fp = f(W)
        W[idx] = orig - h
        fm = f(W)
        W[idx] = orig
        G[idx] = (fp - fm) / (2.0 * h)
    return G


def random_instance(rng, n_max=8, m_max=4):
    """Random ``(W, C)`` with a Gaussian ``W`` (off the manifold) and SPD ``C``."""
    n = int(rng.integers(2, n_max + 1))
    m = int(rng.integers(1, min(m_max, n) + 1))
    X = rng.standard_normal((n, n))
    C = X @ X.T / n + 0.1 * np.eye(n)
    C = 0.5 * (C + C.T)
    W = rng.standard_normal((n, m))
    return W, C


def identity_scale(W, C, alpha):
    """Magnitude of the individual terms of the M2S right-hand side."""
    CW = C @ W
    return (1.0 + alpha) * np.linalg.norm(CW) * np.linalg.norm(W.T @ CW)


def suite_gradcheck(trials=50):
    rng = make_rng([SEED, 1])
    worst = 0.0
    for i in range(trials):
        W, C = random_instance(rng)
        alpha = (0.0, 1.0, 5.0)[i % 3]
        g = rules.grad_modified(W, C, alpha)
        g_fd = numerical_gradient(lambda X: rules.objective_modified(X, C, alpha), W)
        worst = max(worst, np.linalg.norm(g - g_fd) / np.linalg.norm(g_fd))
    return worst <= 1e-6, f"max relative error {worst:.2e} (limit 1e-6)"


def suite_reduction(trials=100):
    rng = make_rng([SEED, 2])
    worst = 0.0
    for _ in range(trials):
        W, C = random_instance(rng)
        a = rules.rule_rhs(rules.RuleSpec("m2s", 0.0), W, C)
        b = rules.rule_rhs(rules.RuleSpec("n2s"), W, C)
        worst = max(worst, np.linalg.norm(a - b) / identity_scale(W, C, 0.0))
    return worst <= 1e-14, f"max relative deviation {worst:.2e} (limit 1e-14)"


def suite_arrangement(trials=100):
    rng = make_rng([SEED, 3])
    worst = 0.0
    for _ in range(trials):
        W, C = random_instance(rng)
        alpha = float(rng.uniform(0.0, 20.0))
        f1 = rules.m2s_form1_rhs(W, C, alpha)
        f2 = rules.rule_rhs(rules.RuleSpec("m2s", alpha), W, C)
        worst = max(worst, np.linalg.norm(f1 - f2) / identity_scale(W, C, alpha))
    return worst <= 1e-12, f"max relative deviation {worst:.2e} (limit 1e-12)"


def _fixed_point_cases():
    model = model_from_seed(model_mod.preset_eigenvalues("spaced"), SEED)
    for selection in itertools.combinations(range(6), 4):
        yield model, selection


def suite_fixed_points():
    specs = [rules.RuleSpec("n2s")] + [rules.RuleSpec("m2s", a) for a in (1.0, 5.0, 20.0)]
    worst = 0.0
    count = 0
    for model, selection in _fixed_point_cases():
        Wbar = model_mod.desired_fixed_point(model, selection)
        for spec in specs:
            worst = max(worst, np.linalg.norm(rules.rule_rhs(spec, Wbar, model.C)))
            count += 1
    return worst <= 1e-10, f"{count} cases, max ||dW/dt|| {worst:.2e} (limit 1e-10)"


def suite_constraints():
    worst = 0.0
    for model, selection in _fixed_point_cases():
        Wbar = model_mod.desired_fixed_point(model, selection)
        blocks = analysis.constraint_blocks(Wbar, model)
        for alpha in (0.0, 1.0, 2.0, 5.0, 10.0, 20.0):
            worst = max(worst, *analysis.check_fixed_point_constraints(blocks, alpha))
    return worst <= 1e-10, f"max residual {worst:.2e} (limit 1e-10)"


def suite_stability(probes=100, epsilon=1e-3):
    model = model_from_seed(model_mod.preset_eigenvalues("spaced"), SEED)
    n, m = model.n, 4
    rng = make_rng([SEED, 4])
    top = tuple(range(m))
    Wbar = model_mod.desired_fixed_point(model, top)
    max_dj = -np.inf
    for alpha in (0.0, 5.0, 20.0):
        for _ in range(probes):
            probe = analysis.random_probe(top, n, rng, epsilon, alpha)
            W = analysis.perturbed_point(model, top, probe)
            max_dj = max(max_dj, analysis.delta_j_measured(W, Wbar, model.C, alpha))

    # swap the 4th eigenvector for the 5th; tilt the 5th slot towards the 4th
    undesired = (0, 1, 2, 4)
    rest = model_mod.complement(undesired, n)
    B = np.zeros((n - m, m))
    B[rest.index(3), 3] = 1.0
    probe = analysis.StabilityProbe(undesired, np.zeros((m, m)), B, epsilon)
    W = analysis.perturbed_point(model, undesired, probe)
    Wbar_u = model_mod.desired_fixed_point(model, undesired)
    dj_undesired = analysis.delta_j_measured(W, Wbar_u, model.C, 0.0)

    ok = max_dj < 0 and dj_undesired > 0
    return ok, (
        f"max dJ at top-{m} {max_dj:.3e} (< 0), "
        f"dJ at {tuple(i + 1 for i in undesired)} {dj_undesired:.3e} (> 0)"
    )


def suite_second_order():
    model = model_from_seed(model_mod.preset_eigenvalues("spaced"), SEED)
    ratios = second_order_ratios(model, make_rng([SEED, 5]), alpha=5.0)
    ok = all(6.0 <= r <= 10.0 for r in ratios)
    return ok, "error ratios per halving " + ", ".join(f"{r:.2f}" for r in ratios) + " (in [6, 10])"


def second_order_ratios(model, rng, alpha, epsilons=(1e-2, 5e-3, 2.5e-3), m=4):
    sel = tuple(range(m))
    rest = model_mod.complement(sel, model.n)
    probe = analysis.random_probe(sel, model.n, rng, epsilons[0], alpha)
    Wbar = model_mod.desired_fixed_point(model, sel)
    errors = []
    for eps in epsilons:
        p = analysis.StabilityProbe(sel, probe.step_a, probe.step_b, eps, alpha)
        W = analysis.perturbed_point(model, sel, p)
        measured = analysis.delta_j_measured(W, Wbar, model.C, alpha)
        predicted = analysis.delta_j_predicted_special(
            model.lambdas[list(sel)], model.lambdas[rest], p.step_a, p.step_b, eps, alpha
        )
        errors.append(abs(measured - predicted))
    return [errors[i] / errors[i + 1] for i in range(len(errors) - 1)]


def suite_steepness():
    lam = np.asarray(model_mod.preset_eigenvalues("spaced"))
    rng = make_rng([SEED, 6])
    probe = analysis.random_probe(tuple(range(4)), lam.size, rng, 1e-3, parts="a")
    args = (lam[:4], lam[4:], probe.step_a, probe.step_b, probe.epsilon)
    ratio = analysis.delta_j_predicted_special(*args, 20.0) / analysis.delta_j_predicted_special(*args, 0.0)
    return abs(ratio / 21.0 - 1.0) <= 1e-9, f"dJ(alpha=20)/dJ(alpha=0) = {ratio:.12f} (expect 21)"


SUITES = {
    "gradcheck": suite_gradcheck,
    "reduction-identity": suite_reduction,
    "arrangement-identity": suite_arrangement,
    "fixed-point-residual": suite_fixed_points,
    "constraint-residual": suite_constraints,
    "stability-signs": suite_stability,
    "second-order": suite_second_order,
    "steepness": suite_steepness,
}


def run_suites(names=None):
    """Run the named suites (all by default); return ``[(name, passed, detail)]``."""
    names = list(SUITES) if not names else list(names)
    results = []
    for name in names:
        try:
            ok, detail = SUITES[name]()
        except Exception as exc:  # a crashing suite counts as a failure
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
