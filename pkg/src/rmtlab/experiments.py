"""Named experiments: validation schemas, runners, and CSV layouts.

Every runner is a pure function of its validated configuration and returns
``(files, criteria)``: a mapping of CSV filename to (header, rows), plus a
list of pass/fail criterion records.  The CLI owns the file writing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from . import semicircle, spectral_stats, verification
from . import ensemble as ens
from . import hs_calculus as hs
from . import resolvent as rsv
from .config import ConfigProblem
from .errors import ConfigError
from .verification import MCConfig, derive_seed

__all__ = ["ExperimentConfig", "validate_config", "list_experiments",
           "run_experiment", "EXPERIMENTS"]


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    ensemble: ens.EnsembleSpec
    mc: MCConfig
    grid: Optional[Dict[str, Any]]
    params: Dict[str, Any]
    output_dir: str
    raw: Dict[str, Any]


@dataclass(frozen=True)
class Criterion:
    name: str
    value: float
    threshold: float
    passed: bool
    direction: str = "<="


@dataclass(frozen=True)
class ExperimentDef:
    name: str
    description: str
    csv_schema: str
    runner: Callable
    params_schema: Dict[str, type] = field(default_factory=dict)
    needs_grid: bool = False


_DIST_FACTORIES = {
    "gaussian-real": ens.gaussian_real,
    "gaussian-complex": ens.gaussian_complex,
    "ternary-real": ens.ternary_real,
    "ternary-complex": ens.ternary_complex,
    "bernoulli-sym": ens.bernoulli_sym,
}

_TOP_KEYS = {"experiment": str, "output_dir": str}
_ENSEMBLE_KEYS = {"family": str, "N": int, "offdiag": str, "diag": str,
                  "p": float, "center": bool}
_MC_KEYS = {"samples": int, "seed": int, "workers": int}
_GRID_KEYS = {"tau": float, "nE": int, "nEta": int}


def _typecheck(value, expected):
    if expected is float:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if expected is int:
        return isinstance(value, int) and not isinstance(value, bool)
    if expected is list:
        return isinstance(value, list)
    return isinstance(value, expected)


def validate_config(data: Dict[str, Any], locations: Dict[tuple, int]) -> ExperimentConfig:
    """Validate the parsed document against the experiment's schema.

    Unknown keys are rejected; missing required keys and type mismatches are
    reported with the relevant line numbers.  All problems are collected
    before raising.
    """
    problems: List[ConfigProblem] = []

    def loc(*path):
        return locations.get(tuple(path))

    name = data.get("experiment")
    if name is None:
        problems.append(ConfigProblem(None, "missing required key 'experiment'"))
        raise ConfigError(problems)
    if name not in EXPERIMENTS:
        problems.append(ConfigProblem(
            loc("experiment"),
            f"unknown experiment {name!r}; valid: {', '.join(sorted(EXPERIMENTS))}"))
        raise ConfigError(problems)
    exp = EXPERIMENTS[name]

    def check_table(table: str, schema: Dict[str, type], present: Dict[str, Any]):
        for key, value in present.items():
            if key not in schema:
                problems.append(ConfigProblem(
                    loc(table, key) if table else loc(key),
                    f"unknown key {key!r} in [{table}]" if table else f"unknown key {key!r}"))
            elif value is None or not _typecheck(value, schema[key]):
                problems.append(ConfigProblem(
                    loc(table, key) if table else loc(key),
                    f"key {key!r} expects {schema[key].__name__}, got {value!r}"))

    check_table("", _TOP_KEYS, {k: v for k, v in data.items() if not isinstance(v, dict)})
    for tname in (k for k, v in data.items() if isinstance(v, dict)):
        if tname not in ("ensemble", "mc", "grid", "params"):
            problems.append(ConfigProblem(loc(tname), f"unknown table [{tname}]"))
    check_table("ensemble", _ENSEMBLE_KEYS, data.get("ensemble", {}))
    check_table("mc", _MC_KEYS, data.get("mc", {}))
    check_table("grid", _GRID_KEYS, data.get("grid", {}))
    check_table("params", exp.params_schema, data.get("params", {}))

    etab = data.get("ensemble", {})
    for req in ("family", "N"):
        if req not in etab:
            problems.append(ConfigProblem(loc("ensemble"),
                                          f"missing required key '{req}' in [ensemble]"))
    mtab = data.get("mc", {})
    for req in ("samples", "seed"):
        if req not in mtab:
            problems.append(ConfigProblem(loc("mc"), f"missing required key '{req}' in [mc]"))
    if exp.needs_grid:
        gtab = data.get("grid", {})
        for req in _GRID_KEYS:
            if req not in gtab:
                problems.append(ConfigProblem(loc("grid"),
                                              f"missing required key '{req}' in [grid]"))
    if problems:
        raise ConfigError(problems)

    family = etab["family"]
    N = etab["N"]
    try:
        if family == "GOE":
            spec = ens.goe(N)
        elif family == "GUE":
            spec = ens.gue(N)
        elif family == "wigner-custom":
            off = _DIST_FACTORIES.get(etab.get("offdiag", ""))
            if off is None:
                raise ConfigError([ConfigProblem(
                    loc("ensemble", "offdiag"),
                    f"offdiag must be one of {sorted(_DIST_FACTORIES)}")])
            diag_name = etab.get("diag")
            diag = _DIST_FACTORIES[diag_name]() if diag_name in _DIST_FACTORIES else None
            spec = ens.wigner_custom(N, off(), diag)
        elif family == "erdos-renyi":
            spec = ens.erdos_renyi(N, etab.get("p", 0.5), etab.get("center", True))
        else:
            raise ConfigError([ConfigProblem(
                loc("ensemble", "family"),
                f"family must be GOE, GUE, wigner-custom or erdos-renyi, got {family!r}")])
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError([ConfigProblem(loc("ensemble"), str(exc))]) from exc

    mc = MCConfig(samples=mtab["samples"], base_seed=mtab["seed"],
                  workers=mtab.get("workers", 1))
    return ExperimentConfig(
        experiment=name, ensemble=spec, mc=mc,
        grid=dict(data["grid"]) if "grid" in data else None,
        params=dict(data.get("params", {})),
        output_dir=data.get("output_dir", "."),
        raw=data)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _sample_matrix(spec: ens.EnsembleSpec, seed: int) -> ens.HermitianMatrix:
    if spec.family == "erdos-renyi":
        return ens.sample_erdos_renyi(spec.N, spec.er_p, spec.center_er, seed)
    return ens.sample_wigner(spec, seed)


def _eig_worker(spec: ens.EnsembleSpec, seed: int) -> np.ndarray:
    return np.linalg.eigvalsh(_sample_matrix(spec, seed).entries)[::-1]


def _eigenvalue_pool(spec, mc: MCConfig) -> List[np.ndarray]:
    seeds = [derive_seed(mc.base_seed, i) for i in range(mc.samples)]
    return verification.run_indexed(_eig_worker, [(spec, s) for s in seeds],
                                    workers=mc.workers)


# ---------------------------------------------------------------- runners

def _run_identity_suite(cfg: ExperimentConfig):
    tol = cfg.params.get("tolerance", 1e-8)
    zs = [complex(0.1, 0.01), complex(-1.2, 0.5)]
    rows = []
    worst = 0.0
    for i in range(cfg.mc.samples):
        seed = derive_seed(cfg.mc.base_seed, i)
        H = _sample_matrix(cfg.ensemble, seed)
        N = H.N
        for z in zs:
            checks = [("ward", rsv.check_ward(H, z)),
                      ("resolvent-ids", max(
                          rsv.check_resolvent_identities(H, z, 0, min(3, N - 1), min(5, N - 2)),
                          rsv.check_resolvent_identities(H, z, 1, 1, 0))),
                      ("schur-block", rsv.check_schur(
                          np.asarray(H) - z * np.eye(N), max(1, N // 3))),
                      ("schur-diagonal", rsv.schur_diagonal_residual(H, z, N // 2))]
            G = rsv.green(H, z, check=False).G
            _, _, Y, _, s = rsv.fluctuation_terms_all(H, z, G=G)
            checks.append(("diagonal-decomposition",
                           float(np.abs(1.0 / np.diag(G) - (-z - s + Y)).max())))
            for label, violation in checks:
                ok = violation <= tol
                worst = max(worst, violation)
                rows.append((label, N, seed, z.real, z.imag, violation, tol, ok))

    # functional-calculus spot checks at small dimension
    small = ens.sample_wigner(ens.gue(12), derive_seed(cfg.mc.base_seed, 0))
    d = spectral_stats.decompose(small)
    bump = hs.smoothed_indicator([-0.8, 0.8], 0.5)
    oracle = (d.vectors * bump(d.lambdas)) @ d.vectors.conj().T
    err_hs = float(np.abs(hs.hs_evaluate(small, bump, n=2,
                                         grid=hs.Grid2D(1200, 400)) - oracle).max())
    rows.append(("hs-bump", 12, derive_seed(cfg.mc.base_seed, 0), 0.0, 0.0,
                 err_hs, 1e-4, err_hs <= 1e-4))
    err_ct = float(np.abs(hs.contour_evaluate(small, lambda z: z * z, 4.0)
                          - np.asarray(small) @ np.asarray(small)).max())
    rows.append(("contour-square", 12, derive_seed(cfg.mc.base_seed, 0), 0.0, 0.0,
                 err_ct, 1e-8, err_ct <= 1e-8))

    crit = [Criterion("identity-residuals", worst, tol, worst <= tol),
            Criterion("hs-bump", err_hs, 1e-4, err_hs <= 1e-4),
            Criterion("contour-square", err_ct, 1e-8, err_ct <= 1e-8)]
    files = {"identity-suite.csv":
             ("check,N,seed,z_E,z_eta,violation,tolerance,ok", rows)}
    return files, crit


def _run_global_law(cfg: ExperimentConfig):
    etas = cfg.params.get("etas", [0.02])
    nE = cfg.params.get("nE", 400)
    E_abs = cfg.params.get("E_max", 2.5)
    seed = derive_seed(cfg.mc.base_seed, 0)
    lam = _eig_worker(cfg.ensemble, seed)
    N = lam.size
    Es = np.linspace(-E_abs, E_abs, nE)
    curve_rows = []
    sup_err = 0.0
    for eta in etas:
        for E in Es:
            z = complex(E, eta)
            s = np.sum(1.0 / (lam - z)) / N
            m = semicircle.stieltjes_m(z)
            curve_rows.append((eta, E, s.imag / math.pi, m.imag / math.pi))
            if eta >= 0.5:
                sup_err = max(sup_err, abs(s - m))
    if not any(eta >= 0.5 for eta in etas):
        z0 = 2j
        sup_err = abs(np.sum(1.0 / (lam - z0)) / N - semicircle.stieltjes_m(z0))
    dens_rows = [(x, semicircle.density(x)) for x in np.linspace(-2.2, 2.2, 441)]
    spec_rows = [(i + 1, lam[i]) for i in range(N)]
    crit = [Criterion("stieltjes-agreement-order-one-eta", sup_err, 0.05, sup_err <= 0.05)]
    files = {
        "global-law.csv": ("eta,E,im_s_pi,im_m_pi", curve_rows),
        "globallaw_spectrum.csv": ("i,lambda", spec_rows),
        "globallaw_density.csv": ("x,rho", dens_rows),
    }
    return files, crit


def _run_local_law(cfg: ExperimentConfig):
    g = cfg.grid
    grid = verification.build_domain(g["tau"], cfg.ensemble.N, g["nE"], g["nEta"])
    table = verification.run_local_law(cfg.ensemble, grid, cfg.mc)
    rows = [tuple(x) for x in zip(table.N, table.seed, table.E, table.eta,
                                  table.Lambda, table.LambdaStar, table.Theta,
                                  table.Psi, table.inv_Neta, table.ok)]
    N = cfg.ensemble.N
    ok = table.ok
    worst_med = 0.0
    for E, eta in grid.pairs():
        at = ok & (table.E == E) & (table.eta == eta)
        if at.any():
            worst_med = max(worst_med, float(np.median(table.Theta[at]) * N * eta))
    exceed = float(np.mean(table.Lambda[ok] > N ** 0.2 * table.Psi[ok]))

    # fitted eta-exponent of the median entrywise error at the most central
    # energy (decreasing in eta: ~ (N eta)^(-1/2) in the bulk)
    E0 = grid.E_points[np.argmin(np.abs(grid.E_points))]
    eta_med = {}
    for eta in grid.eta_points:
        sel = ok & (table.E == E0) & (table.eta == eta)
        if sel.any():
            eta_med[float(eta)] = float(np.median(table.Lambda[sel]))
    xs = np.log(np.asarray(sorted(eta_med)))
    ys = np.log(np.asarray([eta_med[e] for e in sorted(eta_med)]))
    lam_exp = float(np.polyfit(xs, ys, 1)[0])

    # one-matrix sweep at a fixed resolution, for the band figure
    exponent = cfg.params.get("curve_eta_exponent", -0.6)
    eta_c = N ** exponent
    lam = _eig_worker(cfg.ensemble, derive_seed(cfg.mc.base_seed, 0))
    curve = []
    for E in np.linspace(-2.5, 2.5, cfg.params.get("curve_nE", 300)):
        z = complex(E, eta_c)
        s = np.sum(1.0 / (lam - z)) / N
        m = semicircle.stieltjes_m(z)
        curve.append((E, eta_c, s.imag, m.imag,
                      m.imag - 1.0 / (N * eta_c), m.imag + 1.0 / (N * eta_c)))
    crit = [
        Criterion("median-theta-times-Neta", worst_med, 10.0, worst_med <= 10.0),
        Criterion("lambda-exceedance-fraction", exceed, 0.02, exceed <= 0.02),
        Criterion("lambda-eta-exponent", lam_exp, 0.0, lam_exp < 0.0, "<"),
    ]
    files = {
        "local-law.csv":
            ("N,seed,E,eta,Lambda,LambdaStar,Theta,Psi,inv_Neta,ok", rows),
        "locallaw_curve.csv": ("E,eta,im_s,im_m,band_lo,band_hi", curve),
    }
    return files, crit


def _run_rigidity(cfg: ExperimentConfig):
    N = cfg.ensemble.N
    gammas = semicircle.typical_locations(N)
    pool = _eigenvalue_pool(cfg.ensemble, cfg.mc)
    rows = []
    maxima = []
    for idx, lam in enumerate(pool):
        seed = derive_seed(cfg.mc.base_seed, idx)
        rep = spectral_stats.rigidity_report(lam, gammas)
        maxima.append(rep.max_normalized)
        rows.extend((N, seed, int(i), l, gm, d, nm) for i, l, gm, d, nm in
                    zip(rep.i, rep.lam, rep.gamma, rep.dev, rep.normalized))
    med = float(np.median(maxima))
    thresh = N ** 0.15
    crit = [Criterion("median-max-normalized-deviation", med, thresh, med <= thresh)]
    return {"rigidity.csv": ("N,seed,i,lambda,gamma,dev,normalized", rows)}, crit


def _deloc_worker(spec, seed):
    d = spectral_stats.decompose(_sample_matrix(spec, seed))
    return spectral_stats.delocalization_report(d)


def _run_delocalization(cfg: ExperimentConfig):
    N = cfg.ensemble.N
    seeds = [derive_seed(cfg.mc.base_seed, i) for i in range(cfg.mc.samples)]
    stats = verification.run_indexed(_deloc_worker,
                                     [(cfg.ensemble, s) for s in seeds],
                                     workers=cfg.mc.workers)
    rows = []
    good = 0
    bound = 4.0 * math.log(N)
    for seed, sup in zip(seeds, stats):
        rows.extend((N, seed, int(i + 1), v) for i, v in enumerate(sup))
        good += sup.max() <= bound
    frac = good / cfg.mc.samples

    hm_N = cfg.params.get("heatmap_N", 50)
    hm_spec = ens.EnsembleSpec(cfg.ensemble.family, hm_N,
                               cfg.ensemble.offdiag_dist, cfg.ensemble.diag_dist) \
        if cfg.ensemble.family != "erdos-renyi" else cfg.ensemble
    d = spectral_stats.decompose(_sample_matrix(hm_spec, seeds[0]))
    hm_rows = [(hm_N, seeds[0], i + 1, k + 1, float(np.abs(d.vectors[k, i]) ** 2))
               for i in range(hm_N) for k in range(hm_N)]
    crit = [Criterion("fraction-below-4logN", frac, 0.95, frac >= 0.95, ">=")]
    files = {
        "deloc.csv": ("N,seed,i,supstat", rows),
        "deloc_heatmap.csv": ("N,seed,i,k,value", hm_rows),
    }
    return files, crit


def _run_counting(cfg: ExperimentConfig):
    N = cfg.ensemble.N
    n_int = cfg.params.get("n_intervals", 200)
    rng = np.random.default_rng(derive_seed(cfg.mc.base_seed, 2 ** 32))
    a = rng.uniform(-2.2, 2.2, n_int)
    b = a + rng.uniform(0.0, 2.0, n_int)
    intervals = list(zip(a, b))
    pool = _eigenvalue_pool(cfg.ensemble, cfg.mc)
    rows = []
    hits = 0
    total = 0
    thresh = N ** 0.3
    for idx, lam in enumerate(pool):
        seed = derive_seed(cfg.mc.base_seed, idx)
        rep = spectral_stats.counting_law(lam, intervals)
        rows.extend((N, seed, x, y, mu, rho, nd) for x, y, mu, rho, nd in
                    zip(rep.a, rep.b, rep.mu, rep.rho, rep.ndev))
        hits += int(np.sum(rep.ndev <= thresh))
        total += n_int
    frac = hits / total
    crit = [Criterion("fraction-within-N^0.3", frac, 0.99, frac >= 0.99, ">=")]
    return {"counting.csv": ("N,seed,a,b,mu,rho,ndev", rows)}, crit


def _run_edge(cfg: ExperimentConfig):
    N = cfg.ensemble.N
    pool = _eigenvalue_pool(cfg.ensemble, cfg.mc)
    stats = spectral_stats.edge_statistics(pool)
    seeds = [derive_seed(cfg.mc.base_seed, i) for i in range(cfg.mc.samples)]
    rows = [(N, seeds[i], stats.l1[i], stats.lN[i],
             stats.scaled_top[i], stats.scaled_bottom[i])
            for i in range(len(seeds))]
    norm_ok = float(np.mean(np.maximum(np.abs(stats.l1), np.abs(stats.lN)) <= 2.5))
    crit = [Criterion("fraction-norm-below-2.5", norm_ok, 0.99, norm_ok >= 0.99, ">=")]
    if cfg.mc.samples >= 100:
        x = np.sort(stats.scaled_top)
        F = spectral_stats.tracy_widom_f2(x, quad_order=60, check=False)
        n = x.size
        ks = float(np.max(np.maximum(np.arange(1, n + 1) / n - F,
                                     F - np.arange(n) / n)))
        crit.append(Criterion("ks-distance-to-edge-law", ks, 0.1, ks <= 0.1))
    return {"edge.csv": ("N,seed,l1,lN,scaled1,scaledN", rows)}, crit


def _run_fluct_avg(cfg: ExperimentConfig):
    N = cfg.ensemble.N
    E = cfg.params.get("E", 0.0)
    eta = N ** cfg.params.get("eta_exponent", -0.5)
    table = verification.fluctuation_averaging_experiment(
        cfg.ensemble, complex(E, eta), cfg.mc)
    seeds = [derive_seed(cfg.mc.base_seed, i) for i in range(cfg.mc.samples)]
    rows = [(N, seeds[i], table.avg_Q[i], table.max_Q[i], table.LambdaStar[i])
            for i in range(cfg.mc.samples)]
    worst = float((table.avg_Q / table.max_Q).max())
    crit = [Criterion("avg-below-max", worst, 1.0, worst <= 1.0)]
    return {"fluct-avg.csv": ("N,seed,avg_Q,max_Q,lambda_star", rows)}, crit


def _run_large_dev(cfg: ExperimentConfig):
    N = cfg.ensemble.N
    kinds = cfg.params.get("kinds", ["linear", "quadratic-offdiag", "bilinear"])
    rows = []
    worst_ratio = 0.0
    for kind in kinds:
        rep = verification.large_deviation_experiment(kind, N, cfg.mc)
        p = rep["percentiles"]
        ratio = rep["ratio_to_psi"][99]
        worst_ratio = max(worst_ratio, ratio)
        rows.append((kind, N, cfg.mc.samples, rep["psi"], p[50], p[90], p[99], ratio))
    thresh = N ** 0.2
    crit = [Criterion("p99-over-psi-below-N^0.2", worst_ratio, thresh,
                      worst_ratio <= thresh)]
    return {"large-dev.csv": ("kind,N,samples,psi,p50,p90,p99,ratio99", rows)}, crit


def _run_sine_kernel(cfg: ExperimentConfig):
    E = cfg.params.get("E", 0.0)
    window = cfg.params.get("window", 10.0)
    r_max = cfg.params.get("r_max", 3.0)
    width = cfg.params.get("bin_width", 0.2)
    edges = np.arange(width / 2, r_max + width, width)
    pool = _eigenvalue_pool(cfg.ensemble, cfg.mc)
    unfolded = [spectral_stats.unfold(lam, E, window) for lam in pool]
    est = spectral_stats.two_point_estimate(unfolded, edges)
    counts = np.zeros(est.bins.size)
    for spec in unfolded:
        u = np.sort(spec.u)
        if u.size >= 2:
            d = np.abs(u[:, None] - u[None, :])[np.triu_indices(u.size, k=1)]
            counts += np.histogram(d, bins=edges)[0]
    rows = [(est.bins[i], est.values[i], est.prediction[i], int(counts[i]))
            for i in range(est.bins.size)]
    sel = (est.bins >= 0.1) & (est.bins <= 3.0)
    sup = float(np.abs(est.values[sel] - est.prediction[sel]).max())
    crit = [Criterion("sup-deviation-from-sine-kernel", sup, 0.1, sup <= 0.1)]
    return {"twopoint.csv": ("r_bin,estimate,prediction,count", rows)}, crit


def _gfc_worker(spec, seed, z, w, shifts):
    lam = np.linalg.eigvalsh(_sample_matrix(spec, seed).entries)
    t1s, t2s = [], []
    for dE in shifts:
        t1, t2 = spectral_stats.gfc_statistic_from_eigenvalues(lam, z + dE, w + dE)
        t1s.append(t1)
        t2s.append(t2)
    return complex(np.mean(t1s)), complex(np.mean(t2s))


def _run_gfc(cfg: ExperimentConfig):
    N_values = [int(n) for n in cfg.params.get("N_values", [100, 200, 400])]
    eps = cfg.params.get("eta_epsilon", 0.02)
    E = cfg.params.get("E", 0.0)
    n_shift = int(cfg.params.get("energy_shifts", 5))
    rows = []
    diffs, sigmas = {}, {}
    for N in N_values:
        eta = N ** (-1.0 - eps)
        z = complex(E, eta)
        w = complex(E + 1.0 / N, eta)
        shifts = np.linspace(-0.5 / N, 0.5 / N, n_shift)
        spec_ref = ens.gue(N) if cfg.ensemble.family == "GUE" else ens.goe(N)
        matched_off = ens.four_moment_matched(spec_ref.offdiag_dist)
        matched_diag = ens.four_moment_matched(
            ens.gaussian_real(scale=spec_ref.diag_dist.scale))
        spec_m = ens.EnsembleSpec("wigner-custom", N, matched_off, matched_diag)
        means = {}
        ses = {}
        for label, spec in (("reference", spec_ref), ("matched", spec_m)):
            seeds = [derive_seed(cfg.mc.base_seed, i) for i in range(cfg.mc.samples)]
            out = verification.run_indexed(
                _gfc_worker, [(spec, s, z, w, shifts) for s in seeds],
                workers=cfg.mc.workers)
            t1 = np.asarray([o[0] for o in out])
            t2 = np.asarray([o[1] for o in out])
            rows.extend((N, 0, label, v1.real, v1.imag, v2.real, v2.imag, sd)
                        for v1, v2, sd in zip(t1, t2, seeds))
            means[label] = t1.mean()
            ses[label] = math.sqrt((t1.real.var(ddof=1) + t1.imag.var(ddof=1))
                                   / t1.size)
        d = means["reference"] - means["matched"]
        diffs[N] = abs(d)
        sigmas[N] = math.hypot(ses["reference"], ses["matched"])

    # weighted fit of log|diff| on log N, errors propagated from the MC noise
    x = np.log(np.array(sorted(diffs)))
    y = np.array([math.log(max(diffs[n], 1e-300)) for n in sorted(diffs)])
    sig = np.array([sigmas[n] / max(diffs[n], 1e-300) for n in sorted(diffs)])
    wts = 1.0 / np.maximum(sig, 1e-6) ** 2
    xb = np.average(x, weights=wts)
    yb = np.average(y, weights=wts)
    sxx = float(np.sum(wts * (x - xb) ** 2))
    slope = float(np.sum(wts * (x - xb) * (y - yb)) / sxx)
    slope_se = math.sqrt(1.0 / sxx)
    upper95 = slope + 1.645 * slope_se
    crit = [Criterion("t1-difference-decay-upper95", upper95, 0.0, upper95 < 0.0, "<")]
    files = {"gfc.csv": ("N,gamma_unused,ensemble,Re_t1,Im_t1,Re_t2,Im_t2,seed", rows)}
    return files, crit


def _run_hs_check(cfg: ExperimentConfig):
    N = cfg.params.get("hs_N", 12)
    seed = derive_seed(cfg.mc.base_seed, 0)
    H = ens.sample_wigner(ens.gue(N), seed)
    d = spectral_stats.decompose(H)
    rows = []
    worst_hs, worst_ct = 0.0, 0.0
    tests = [("bump[-1,1]", hs.smoothed_indicator([-1.0, 1.0], 0.5)),
             ("bump[-0.5,1.5]", hs.smoothed_indicator([-0.5, 1.5], 0.4)),
             ("plateau", hs.smoothed_indicator([-2.4, 2.4], 0.5))]
    for label, f in tests:
        oracle = (d.vectors * f(d.lambdas)) @ d.vectors.conj().T
        out = hs.hs_evaluate(H, f, n=2, grid=hs.Grid2D(1200, 400))
        err = float(np.abs(out - oracle).max())
        worst_hs = max(worst_hs, err)
        rows.append(("hs", label, N, 2, err, 1e-4, err <= 1e-4))
    for label, f, ref in [
            ("z", lambda z: z, np.asarray(H)),
            ("z^2", lambda z: z * z, np.asarray(H) @ np.asarray(H)),
            ("exp", np.exp, (d.vectors * np.exp(d.lambdas)) @ d.vectors.conj().T)]:
        out = hs.contour_evaluate(H, f, radius=4.0)
        err = float(np.abs(out - ref).max())
        worst_ct = max(worst_ct, err)
        rows.append(("contour", label, N, 0, err, 1e-8, err <= 1e-8))
    crit = [Criterion("hs-max-error", worst_hs, 1e-4, worst_hs <= 1e-4),
            Criterion("contour-max-error", worst_ct, 1e-8, worst_ct <= 1e-8)]
    return {"hs-check.csv": ("check,function,N,n,error,tolerance,ok", rows)}, crit


def _run_repulsion(cfg: ExperimentConfig):
    N_small = cfg.params.get("N_small", 50)
    N_large = cfg.params.get("N_large", 1000)
    zoom = cfg.params.get("zoom_window", 0.2)
    rows = []
    fam = cfg.ensemble.family if cfg.ensemble.family in ("GOE", "GUE") else "GUE"
    make = ens.gue if fam == "GUE" else ens.goe
    for N, win in ((N_small, None), (N_large, zoom)):
        lam = _eig_worker(make(N), derive_seed(cfg.mc.base_seed, N))
        iid = semicircle.sample_iid_semicircle(N, derive_seed(cfg.mc.base_seed, N + 1))
        for src, xs in (("matrix", lam), ("iid", np.sort(iid)[::-1])):
            for i, x in enumerate(xs):
                if win is None or abs(x) <= win:
                    rows.append((src, N, i + 1, x))
    crit = [Criterion("rows-emitted", float(len(rows)), 1.0, len(rows) >= 1, ">=")]
    return {"repulsion.csv": ("source,N,i,x", rows)}, crit


EXPERIMENTS: Dict[str, ExperimentDef] = {
    "identity-suite": ExperimentDef(
        "identity-suite",
        "exact Green-function identities: trace-sum rule, minor expansion, "
        "block-inverse and diagonal decomposition, plus functional-calculus spot checks",
        "identity-suite.csv: check,N,seed,z_E,z_eta,violation,tolerance,ok",
        _run_identity_suite, {"tolerance": float}),
    "global-law": ExperimentDef(
        "global-law",
        "spectral histogram and order-one-resolution Stieltjes transform "
        "against the semicircle curve",
        "global-law.csv: eta,E,im_s_pi,im_m_pi (+ spectrum, density files)",
        _run_global_law, {"etas": list, "nE": int, "E_max": float}),
    "local-law": ExperimentDef(
        "local-law",
        "entrywise and averaged Green-function errors over the spectral "
        "domain, against the deterministic error parameter",
        "local-law.csv: N,seed,E,eta,Lambda,LambdaStar,Theta,Psi,inv_Neta,ok",
        _run_local_law, {"curve_eta_exponent": float, "curve_nE": int},
        needs_grid=True),
    "rigidity": ExperimentDef(
        "rigidity",
        "eigenvalue locations pinned to the semicircle quantiles at scale "
        "N^(-2/3) min(i, N+1-i)^(-1/3)",
        "rigidity.csv: N,seed,i,lambda,gamma,dev,normalized",
        _run_rigidity, {}),
    "delocalization": ExperimentDef(
        "delocalization",
        "flatness of eigenvectors: sup_k N |u_i(k)|^2 per eigenvector",
        "deloc.csv: N,seed,i,supstat (+ heatmap file)",
        _run_delocalization, {"heatmap_N": int}),
    "counting": ExperimentDef(
        "counting",
        "eigenvalue counts of intervals against the semicircle mass, at "
        "accuracy 1/N",
        "counting.csv: N,seed,a,b,mu,rho,ndev",
        _run_counting, {"n_intervals": int}),
    "edge-scaling": ExperimentDef(
        "edge-scaling",
        "extreme eigenvalues: norm bound, N^(-2/3) edge fluctuations, and "
        "the edge-fluctuation law",
        "edge.csv: N,seed,l1,lN,scaled1,scaledN",
        _run_edge, {}),
    "fluct-avg": ExperimentDef(
        "fluct-avg",
        "averaged centred diagonal fluctuations versus their per-index "
        "maximum (the averaging gain)",
        "fluct-avg.csv: N,seed,avg_Q,max_Q,lambda_star",
        _run_fluct_avg, {"E": float, "eta_exponent": float}),
    "large-dev": ExperimentDef(
        "large-dev",
        "percentiles of linear, quadratic and bilinear sums against their "
        "L2 size",
        "large-dev.csv: kind,N,samples,psi,p50,p90,p99,ratio99",
        _run_large_dev, {"kinds": list}),
    "sine-kernel": ExperimentDef(
        "sine-kernel",
        "unfolded bulk pair correlations against the determinantal "
        "prediction 1 - (sin(pi r)/(pi r))^2",
        "twopoint.csv: r_bin,estimate,prediction,count",
        _run_sine_kernel, {"E": float, "window": float, "r_max": float,
                           "bin_width": float}),
    "gfc": ExperimentDef(
        "gfc",
        "four-moment comparison: decay of the trace-product statistic "
        "difference between matched ensembles",
        "gfc.csv: N,gamma_unused,ensemble,Re_t1,Im_t1,Re_t2,Im_t2,seed",
        _run_gfc, {"N_values": list, "eta_epsilon": float, "E": float,
                   "energy_shifts": int}),
    "hs-check": ExperimentDef(
        "hs-check",
        "functional calculus against the spectral oracle: d-bar integral "
        "for smooth bumps, contour integral for holomorphic functions",
        "hs-check.csv: check,function,N,n,error,tolerance,ok",
        _run_hs_check, {"hs_N": int}),
    "repulsion-contrast": ExperimentDef(
        "repulsion-contrast",
        "eigenvalue spacings versus i.i.d. semicircle samples (rigid versus "
        "Poissonian local statistics)",
        "repulsion.csv: source,N,i,x",
        _run_repulsion, {"N_small": int, "N_large": int, "zoom_window": float}),
}


def list_experiments() -> List[Tuple[str, str, str]]:
    """Catalog of (name, description, csv schema), sorted by name."""
    return [(d.name, d.description, d.csv_schema)
            for d in sorted(EXPERIMENTS.values(), key=lambda d: d.name)]


def run_experiment(cfg: ExperimentConfig):
    """Dispatch to the runner; returns (files, criteria)."""
    files, crit = EXPERIMENTS[cfg.experiment].runner(cfg)
    return files, crit
