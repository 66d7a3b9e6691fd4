"""Machine-checks of every inequality and identity on generated corpora.

Each check produces BoundReport rows (one per inequality per input) with
the raw left/right values, the slack, a pass verdict and an equality flag.
Float comparisons normalize the slack by ``max(1, |rhs|)`` and use an
absolute tolerance of 1e-9 on the normalized value, since bound magnitudes
span several orders across the corpus; integer comparisons are exact.
Inequalities that are strict in exact arithmetic must show strictly
positive slack.

The corpora are committed as deterministic generation rules (fixed master
seeds driving the documented 64-bit generator), so every report is
reproducible bit-for-bit at the tree level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .spectral import (DEFAULT_MAX_ITER, DEFAULT_TOL, perron_entropy,
                       perron_value)
from .trees import (RootedTree, Splitmix64, bethe, bethe_order, is_path,
                    is_star, moment, moment_power_identity, path, random_tree,
                    rooted_power, rooted_product, rooted_sum, star)
from .fiedler import bethe_alg_conn_lower, bethe_rho_upper
from .spectral import rho_path_closed, rho_star_closed

FLOAT_TOL = 1e-9

# Bound identifiers (CSV vocabulary).
MOMENT_GE_RHO_MINUS_GAP = "moment_ge_rho_minus_gap"
MOMENT_GT_RHO_MINUS_TWO = "moment_gt_rho_minus_two"
MOMENT_LE_PATH_MAX = "moment_le_path_max"
MOMENT_LT_LINEAR_RHO = "moment_lt_linear_rho"
SUM_RHO_GE_MAX_PART = "sum_rho_ge_max_part"
SUM_RHO_LE_MAX_PART_PLUS_ORDER = "sum_rho_le_max_part_plus_order"
PRODUCT_RHO_GE_SCALED = "product_rho_ge_scaled"
PRODUCT_RHO_GE_ENTROPY = "product_rho_ge_entropy"
PRODUCT_RHO_LT_SUM = "product_rho_lt_sum"
POWER_RHO_GE_SCALED = "power_rho_ge_scaled"
POWER_RHO_LE_GEOMETRIC = "power_rho_le_geometric"
POWER_MOMENT_IDENTITY = "power_moment_identity"
BETHE_RHO_LE_CLOSED = "bethe_rho_le_closed"
BETHE_CONN_GE_CLOSED = "bethe_conn_ge_closed"

#: Master seeds for the committed corpora (arbitrary fixed constants).
CORPUS_SEED = 1729
SUM_SUITE_SEED = 2887
PRODUCT_SUITE_SEED = 4104
POWER_SUITE_SEED = 13832


@dataclass(frozen=True)
class BoundReport:
    """One inequality evaluated on one input.

    ``lhs <= rhs`` is the claimed direction, so ``slack = rhs - lhs`` is
    nonnegative exactly when the bound holds.  ``equality`` flags slack
    zero to tolerance; for the two bounds with structural equality cases
    the flag additionally requires the structural predicate.
    """
    tree_id: str
    n: int
    bound_id: str
    lhs: float | int
    rhs: float | int
    slack: float | int
    passed: bool
    equality: bool


def _report(tree_id, n, bound_id, lhs, rhs, strict=False, exact=False,
            structural=None, equality_required=False):
    slack = rhs - lhs
    if exact:
        num_eq = slack == 0
        passed = slack == 0 if equality_required else (
            slack > 0 if strict else slack >= 0)
    else:
        norm = slack / max(1.0, abs(rhs))
        num_eq = abs(norm) <= FLOAT_TOL
        passed = norm > 0.0 if strict else norm >= -FLOAT_TOL
    equality = num_eq if structural is None else (num_eq and structural)
    return BoundReport(tree_id, n, bound_id, lhs, rhs, slack, passed, equality)


def f_of(n: int) -> float:
    """Order-dependent gap allowance; strictly increasing, 1 at n = 1."""
    if n < 1:
        raise ValueError("n must be positive")
    return 0.5 * (math.sqrt(n * n + 2 * n - 3) - n + 3)


# ---------------------------------------------------------------------------
# Per-input checks
# ---------------------------------------------------------------------------

def check_tree(t: RootedTree, tree_id: str = "tree",
               tol: float = DEFAULT_TOL,
               max_iter: int = DEFAULT_MAX_ITER) -> list[BoundReport]:
    """The four bounds holding for every rooted tree.

    Equality cases (gap bound on stars, quadratic moment cap on paths) are
    flagged structurally and confirmed numerically.
    """
    n = t.n
    mu = moment(t)
    rho = perron_value(t, tol=tol, max_iter=max_iter).rho
    return [
        _report(tree_id, n, MOMENT_GE_RHO_MINUS_GAP,
                rho - f_of(n), mu, structural=is_star(t)),
        _report(tree_id, n, MOMENT_GT_RHO_MINUS_TWO,
                rho - 2.0, mu, strict=True),
        _report(tree_id, n, MOMENT_LE_PATH_MAX,
                mu, (n - 1) ** 2, exact=True, structural=is_path(t)),
        _report(tree_id, n, MOMENT_LT_LINEAR_RHO,
                mu, (4.0 / 7.0) * n * rho, strict=True),
    ]


def check_sum(parts, tree_id: str = "sum", tol: float = DEFAULT_TOL,
              max_iter: int = DEFAULT_MAX_ITER) -> list[BoundReport]:
    """Interlacing bounds for the dominant eigenvalue of a rooted sum."""
    parts = list(parts)
    s = rooted_sum(parts)
    rho_s = perron_value(s, tol=tol, max_iter=max_iter).rho
    mx = max(perron_value(p, tol=tol, max_iter=max_iter).rho for p in parts)
    return [
        _report(tree_id, s.n, SUM_RHO_GE_MAX_PART, mx, rho_s),
        _report(tree_id, s.n, SUM_RHO_LE_MAX_PART_PLUS_ORDER,
                rho_s, mx + s.n),
    ]


def product_lower_bounds(t1: RootedTree, t2: RootedTree,
                         tol: float = DEFAULT_TOL,
                         max_iter: int = DEFAULT_MAX_ITER) -> tuple:
    """The two (incomparable) lower bounds on the product's eigenvalue:
    the scaled factor bound and the entropy-weighted bound."""
    rho1 = perron_value(t1, tol=tol, max_iter=max_iter).rho
    ent2 = perron_entropy(t2, tol=tol, max_iter=max_iter)
    rho2 = ent2.spectral.rho
    return t2.n * rho1, rho2 + (rho1 - 1.0) * ent2.h


def check_product(t1: RootedTree, t2: RootedTree, tree_id: str = "product",
                  tol: float = DEFAULT_TOL,
                  max_iter: int = DEFAULT_MAX_ITER) -> list[BoundReport]:
    """Lower and upper bounds for the dominant eigenvalue of a product."""
    prod = rooted_product(t1, t2)
    rho_p = perron_value(prod, tol=tol, max_iter=max_iter).rho
    rho1 = perron_value(t1, tol=tol, max_iter=max_iter).rho
    ent2 = perron_entropy(t2, tol=tol, max_iter=max_iter)
    rho2 = ent2.spectral.rho
    n = prod.n
    return [
        _report(tree_id, n, PRODUCT_RHO_GE_SCALED, t2.n * rho1, rho_p),
        _report(tree_id, n, PRODUCT_RHO_GE_ENTROPY,
                rho2 + (rho1 - 1.0) * ent2.h, rho_p),
        _report(tree_id, n, PRODUCT_RHO_LT_SUM,
                rho_p, t2.n * rho1 + rho2, strict=True),
    ]


def check_power(t: RootedTree, k: int, tree_id: str = "power",
                tol: float = DEFAULT_TOL,
                max_iter: int = DEFAULT_MAX_ITER,
                max_vertices: int = 1_000_000) -> list[BoundReport]:
    """Eigenvalue bounds for an iterated product, plus the exact moment
    identity for it."""
    if t.n < 2:
        raise ValueError("base tree must be nontrivial")
    if k < 1:
        raise ValueError("k must be at least 1")
    pw = rooted_power(t, k, max_vertices=max_vertices)
    rho_t = perron_value(t, tol=tol, max_iter=max_iter).rho
    rho_pw = perron_value(pw, tol=tol, max_iter=max_iter).rho
    n = t.n
    geom = (n ** k - 1) // (n - 1)
    return [
        _report(tree_id, pw.n, POWER_RHO_GE_SCALED,
                rho_t * n ** (k - 1), rho_pw),
        _report(tree_id, pw.n, POWER_RHO_LE_GEOMETRIC, rho_pw, rho_t * geom),
        _report(tree_id, pw.n, POWER_MOMENT_IDENTITY,
                moment(pw), moment_power_identity(t, k),
                exact=True, equality_required=True),
    ]


def check_bethe(p: int, k: int, tree_id: str | None = None,
                tol: float = DEFAULT_TOL,
                max_iter: int = DEFAULT_MAX_ITER) -> list[BoundReport]:
    """Closed eigenvalue upper bound, and for p >= 2 the closed lower bound
    on the unrooted tree's algebraic connectivity against its exact value."""
    tree_id = tree_id or f"bethe(p={p},k={k})"
    t = bethe(p, k)
    rho = perron_value(t, tol=tol, max_iter=max_iter).rho
    out = [_report(tree_id, t.n, BETHE_RHO_LE_CLOSED,
                   rho, bethe_rho_upper(p, k))]
    if p >= 2:
        sub_rho = perron_value(bethe(p - 1, k), tol=tol,
                               max_iter=max_iter).rho
        out.append(_report(tree_id, t.n, BETHE_CONN_GE_CLOSED,
                           bethe_alg_conn_lower(p, k), 1.0 / sub_rho))
    return out


# ---------------------------------------------------------------------------
# Ratio experiments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RatioPoint:
    param: int
    n: int
    mu: int
    rho: float
    ratio: float
    ratio_over_log: float


@dataclass(frozen=True)
class RatioSeries:
    family: str
    points: tuple


_STAR_PATH_DEFAULT = (2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000,
                      5000, 10000, 20000, 50000, 100000)

#: Orders above which the star/path families switch to closed-form
#: eigenvalues (the spectral and closed values agree to 1e-9 below it).
CLOSED_FORM_THRESHOLD = 10_000

#: Solver tolerance for the ratio experiments.  Ratios are studied at
#: percent scale and the series ranges over multi-million-vertex trees,
#: where the float residual floor sits above the 1e-12 default.
RATIO_TOL = 1e-9


def ratio_series(family: str, params=None, *, k: int = 2,
                 base: RootedTree | None = None,
                 closed_form_threshold: int = CLOSED_FORM_THRESHOLD,
                 tol: float = RATIO_TOL, max_iter: int = DEFAULT_MAX_ITER,
                 max_vertices: int = 8_000_000) -> RatioSeries:
    """Moment/eigenvalue ratio along one of the four studied families.

    ``family`` is "star" or "path" (params are orders), "bethe" (params are
    depths, branching fixed by ``k``) or "power" (params are exponents of
    ``base``, default the 2-vertex path).  Every point must have order at
    least 2 so the log-normalized column is defined.
    """
    points = []
    if family in ("star", "path"):
        ns = list(params) if params is not None else list(_STAR_PATH_DEFAULT)
        closed = rho_star_closed if family == "star" else rho_path_closed
        for n in ns:
            if n < 2:
                raise ValueError("orders below 2 have no log-normalized ratio")
            if n > closed_form_threshold:
                rho = closed(n)
            else:
                t = star(n) if family == "star" else path(n)
                rho = perron_value(t, tol=tol, max_iter=max_iter).rho
            mu = (n - 1) if family == "star" else (n - 1) ** 2
            points.append(_ratio_point(n, n, mu, rho))
    elif family == "bethe":
        ps = list(params) if params is not None else list(range(2, 13))
        for p in ps:
            if p < 2:
                raise ValueError("depth below 2 gives a single vertex")
            t = bethe(p, k, max_vertices=max_vertices)
            rho = perron_value(t, tol=tol, max_iter=max_iter).rho
            points.append(_ratio_point(p, t.n, moment(t), rho))
    elif family == "power":
        base = base if base is not None else path(2)
        if base.n < 2:
            raise ValueError("base tree must be nontrivial")
        ks = list(params) if params is not None else list(range(1, 15))
        for kk in ks:
            if kk < 1:
                raise ValueError("exponent must be at least 1")
            t = rooted_power(base, kk, max_vertices=max_vertices)
            rho = perron_value(t, tol=tol, max_iter=max_iter).rho
            points.append(_ratio_point(kk, t.n, moment(t), rho))
    else:
        raise ValueError(f"unknown family {family!r}")
    return RatioSeries(family, tuple(points))


def _ratio_point(param, n, mu, rho):
    ratio = mu / rho
    return RatioPoint(param, n, mu, rho, ratio, ratio / math.log(n))


def conjecture_scan(trees, tol: float = DEFAULT_TOL,
                    max_iter: int = DEFAULT_MAX_ITER) -> float:
    """Largest log-normalized moment/eigenvalue ratio over a corpus: the
    smallest constant consistent with it.  Exploratory only."""
    best = 0.0
    for t in trees:
        if t.n < 2:
            raise ValueError("corpus trees must have at least 2 vertices")
        rho = perron_value(t, tol=tol, max_iter=max_iter).rho
        best = max(best, moment(t) / (rho * math.log(t.n)))
    return best


# ---------------------------------------------------------------------------
# Committed corpora and suites
# ---------------------------------------------------------------------------

def default_corpus(count: int = 1000, max_n: int = 150,
                   seed: int = CORPUS_SEED) -> list:
    """The committed fuzz corpus: ``count`` random trees with orders in
    [2, max_n], drawn from one master stream."""
    rng = Splitmix64(seed)
    corpus = []
    for i in range(count):
        n = 2 + rng.below(max_n - 1)
        corpus.append((f"rnd{i:04d}", random_tree(n, rng.next_u64())))
    return corpus


def sum_suite_cases(count: int = 120, seed: int = SUM_SUITE_SEED) -> list:
    """Random part lists (1-4 parts, orders in [1, 40], single vertices
    included) for the rooted-sum bounds."""
    rng = Splitmix64(seed)
    cases = []
    for i in range(count):
        parts = [random_tree(1 + rng.below(40), rng.next_u64())
                 for _ in range(1 + rng.below(4))]
        cases.append((f"sum{i:03d}", parts))
    return cases


def product_suite_cases(count: int = 120, budget: int = 2000,
                        seed: int = PRODUCT_SUITE_SEED) -> list:
    """Random factor pairs with product order at most ``budget``."""
    rng = Splitmix64(seed)
    cases = []
    for i in range(count):
        n1 = 1 + rng.below(44)
        n2 = 1 + rng.below(max(budget // n1, 1))
        t1 = random_tree(n1, rng.next_u64())
        t2 = random_tree(n2, rng.next_u64())
        cases.append((f"prod{i:03d}", t1, t2))
    return cases


def power_suite_cases(count: int = 80, budget: int = 20000,
                      seed: int = POWER_SUITE_SEED) -> list:
    """Random (base, exponent) pairs with power order at most ``budget``."""
    rng = Splitmix64(seed)
    cases = []
    for i in range(count):
        n = 2 + rng.below(8)
        kmax = 1
        while n ** (kmax + 1) <= budget:
            kmax += 1
        k = 1 + rng.below(kmax)
        cases.append((f"pow{i:03d}", random_tree(n, rng.next_u64()), k))
    return cases


def bethe_grid(p_range=range(1, 7), k_range=range(2, 7)) -> list:
    return [(p, k) for p in p_range for k in k_range]


def run_suite(name: str, tol: float = DEFAULT_TOL,
              max_iter: int = DEFAULT_MAX_ITER) -> list[BoundReport]:
    """Evaluate one committed suite ("tree", "sum", "product", "power",
    "bethe") or all of them."""
    reports: list[BoundReport] = []
    if name in ("tree", "all"):
        for tree_id, t in default_corpus():
            reports.extend(check_tree(t, tree_id, tol, max_iter))
    if name in ("sum", "all"):
        for case_id, parts in sum_suite_cases():
            reports.extend(check_sum(parts, case_id, tol, max_iter))
    if name in ("product", "all"):
        for case_id, t1, t2 in product_suite_cases():
            reports.extend(check_product(t1, t2, case_id, tol, max_iter))
    if name in ("power", "all"):
        for case_id, t, k in power_suite_cases():
            reports.extend(check_power(t, k, case_id, tol, max_iter))
    if name in ("bethe", "all"):
        for p, k in bethe_grid():
            reports.extend(check_bethe(p, k, tol=tol, max_iter=max_iter))
    if not reports and name not in ("tree", "sum", "product", "power",
                                    "bethe", "all"):
        raise ValueError(f"unknown suite {name!r}")
    return reports


# ---------------------------------------------------------------------------
# CSV rendering
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return f"{value:.12g}"


def reports_to_csv(reports) -> str:
    lines = ["tree_id,n,bound_id,lhs,rhs,slack,pass,equality"]
    for r in reports:
        lines.append(",".join([
            r.tree_id, str(r.n), r.bound_id, _fmt(r.lhs), _fmt(r.rhs),
            _fmt(r.slack), _fmt(r.passed), _fmt(r.equality)]))
    return "\n".join(lines) + "\n"


def series_to_csv(series: RatioSeries) -> str:
    lines = ["family,param,n,mu,rho,ratio,ratio_over_ln_n"]
    for pt in series.points:
        lines.append(",".join([
            series.family, str(pt.param), str(pt.n), str(pt.mu),
            _fmt(pt.rho), _fmt(pt.ratio), _fmt(pt.ratio_over_log)]))
    return "\n".join(lines) + "\n"
