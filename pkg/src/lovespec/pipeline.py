"""End-to-end orchestration: forward data generation, inverse reconstruction,
and round-trip verification, driven by a JSON job configuration.

Artifacts are CSV tables with JSON sidecars (media, potentials) and canonical
JSON documents (spectral data, reports); identical configurations and inputs
reproduce byte-identical outputs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import jsonio
from .errors import ConfigurationError, LoveSpecError, StageError
from .forward import RobinProblem, jost_function_derivative
from .glevitan import WeylData, build_g, check_solvability, extract_potential, solve_gl_diagonal
from .medium import (
    read_potential,
    read_profile,
    schrodinger_from_love,
    shear_from_two_potentials,
    write_potential,
    write_profile,
)
from .quadrature import _trapz
from .spectrum import (
    JumpSource,
    SpectrumData,
    close_under_pairing,
    direct_jost_evaluator,
    find_eigenvalues,
    find_resonances,
    forward_weyl_evaluator,
    jost_from_zeros,
    norming_constants,
    sample_jump_function,
    scattering_function,
    validate_weyl_class,
)


def thread_count() -> int:
    """Parallelism cap from LOVESPEC_THREADS (default: serial)."""
    raw = os.environ.get("LOVESPEC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class JobConfig:
    """Configuration of one pipeline run.

    Paths are interpreted relative to the configuration file's directory.
    """

    mode: str
    profile_csv: str | None = None
    profile_sidecar: str | None = None
    potential_csv: str | None = None
    potential_sidecar: str | None = None
    spectrum_files: list = field(default_factory=list)
    omegas: list = field(default_factory=list)
    mu_hat_tail: float | None = None
    x_support: float | None = None
    # spectral extraction
    tau_max: float = 6.0
    truncation_radius: float = 60.0
    resonance_depth: float = 8.0
    k_max: float = 200.0
    jump_dk: float = 0.025
    # inverse solver
    jost_backend: str = "samples"
    recon_n: int = 241
    recon_span: float = 1.2
    # acceptance tolerances for round trips
    tol_v_sup: float = 5e-2
    tol_h: float = 2e-2
    tol_mu_rel: float = 1e-1

    _base_dir: str = "."

    @classmethod
    def load(cls, path):
        doc = jsonio.load(path)
        return cls.from_dict(doc, base_dir=os.path.dirname(os.path.abspath(path)))

    @classmethod
    def from_dict(cls, doc, base_dir="."):
        known = {f for f in cls.__dataclass_fields__ if not f.startswith("_")}
        unknown = set(doc) - known
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {sorted(unknown)}")
        cfg = cls(**doc)
        cfg._base_dir = base_dir
        cfg.validate()
        return cfg

    def validate(self):
        if self.mode not in ("forward", "spectrum", "reconstruct", "roundtrip"):
            raise ConfigurationError(f"unknown mode '{self.mode}'")
        if self.mode in ("forward", "roundtrip"):
            if not (self.profile_csv and self.profile_sidecar):
                raise ConfigurationError(f"mode '{self.mode}' needs a profile file")
            if not self.omegas:
                raise ConfigurationError("at least one frequency required")
        if self.mode == "spectrum" and not (self.potential_csv and self.potential_sidecar):
            raise ConfigurationError("mode 'spectrum' needs a potential file")
        if self.mode == "roundtrip" or (self.mode == "reconstruct" and len(self.omegas) >= 2):
            if len(self.omegas) != 2 or self.omegas[0] == self.omegas[1]:
                raise ConfigurationError(
                    "shear recovery requires exactly two distinct frequencies")
        if self.mode == "reconstruct":
            if not self.spectrum_files:
                raise ConfigurationError("mode 'reconstruct' needs spectral-data files")
            if self.x_support is None:
                raise ConfigurationError(
                    "reconstruction needs the support bound x_support")
        if self.jost_backend not in ("samples", "hadamard"):
            raise ConfigurationError(f"unknown jost_backend '{self.jost_backend}'")

    def path(self, rel):
        return rel if os.path.isabs(rel) else os.path.join(self._base_dir, rel)


# ---------------------------------------------------------------------------
# shared stages
# ---------------------------------------------------------------------------

def extract_spectrum(prob: RobinProblem, cfg: JobConfig) -> SpectrumData:
    """Eigenvalues, resonances, norming constants and jump samples of a problem."""
    ev = direct_jost_evaluator(prob)
    eigen = find_eigenvalues(ev, tau_max=cfg.tau_max)
    region = (0.05, cfg.truncation_radius, -cfg.resonance_depth, 0.0)
    resonances = close_under_pairing(find_resonances(ev, region))
    alphas = norming_constants(ev, lambda k: jost_function_derivative(prob, k), eigen)
    k_grid = np.arange(cfg.jump_dk, cfg.k_max + 0.5 * cfg.jump_dk, cfg.jump_dk)
    samples = sample_jump_function(ev, k_grid)
    data = SpectrumData(eigen_k=eigen, resonance_k=resonances, alphas=alphas,
                        jump_samples=samples, truncation_radius=cfg.truncation_radius)
    data.validate()
    return data


def weyl_data_from_spectrum(data: SpectrumData, cfg: JobConfig) -> WeylData:
    """Inverse-solver input from serialized spectral data.

    Backend 'samples' consumes the jump samples and norming constants as
    stored (the spectral-data triple).  Backend 'hadamard' rebuilds the Jost
    function from the zeros as a normalized truncated product and recomputes
    the jump function and norming constants from it; its accuracy is limited
    by the truncation radius, so the cut data is capped at half the radius.
    """
    if cfg.jost_backend == "samples":
        src = JumpSource(samples=data.jump_samples, k_cutoff=cfg.k_max)
        return WeylData(jump=src, pole_k=data.eigen_k, pole_alpha=data.alphas)
    zeros = data.all_zeros()
    radius = data.truncation_radius
    tau_top = max(np.abs(data.eigen_k.imag), default=0.0)
    cal = 1j * np.geomspace(max(4.0, 1.6 * tau_top), max(8.0, radius / 3.0), 9)
    had = jost_from_zeros(zeros, cal, truncation_radius=radius)
    alphas = norming_constants(had, had.derivative, data.eigen_k)
    src = JumpSource(jost=had, k_cutoff=min(cfg.k_max, 0.5 * radius), sample_dk=0.02)
    return WeylData(jump=src, pole_k=data.eigen_k, pole_alpha=alphas)


def reconstruct_potential(data: SpectrumData, cfg: JobConfig, x_support: float):
    """Spectral data -> (PotentialGrid, h, diagnostics) via the kernel equation."""
    w = weyl_data_from_spectrum(data, cfg)
    grid = np.linspace(0.0, cfg.recon_span * x_support, cfg.recon_n)
    g = build_g(w, grid)
    bound = check_solvability(g, float(grid[-1]))
    diag, kernel, max_resid = solve_gl_diagonal(g, threads=thread_count(),
                                                keep_rows=True)
    pot, h = extract_potential(diag, grid, x_support=x_support)
    diagnostics = {
        "solvability_bound": float(bound),
        "gl_max_residual": float(max_resid),
        "kernel_diag_tail_drift": float(np.max(np.abs(np.diff(
            diag[grid > x_support])))) if np.any(grid > x_support) else 0.0,
    }
    return pot, h, diagnostics, kernel


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------

def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except LoveSpecError as exc:
        raise StageError(name, str(exc)) from exc


def run_forward(cfg: JobConfig, out_dir: str) -> dict:
    """Profile -> potentials and spectral data, one set per frequency."""
    os.makedirs(out_dir, exist_ok=True)
    profile = _stage("ingest", read_profile,
                     cfg.path(cfg.profile_csv), cfg.path(cfg.profile_sidecar))
    summary = {"mode": "forward", "omegas": list(map(float, cfg.omegas)), "runs": []}
    for j, omega in enumerate(cfg.omegas, start=1):
        pot, h = _stage("medium-map", schrodinger_from_love, profile, omega)
        write_potential(pot, h, os.path.join(out_dir, f"potential_omega{j}.csv"),
                        os.path.join(out_dir, f"potential_omega{j}.json"))
        prob = RobinProblem(potential=pot, h=h)
        data = _stage("spectral-extraction", extract_spectrum, prob, cfg)
        data.save(os.path.join(out_dir, f"spectrum_omega{j}.json"))
        summary["runs"].append({
            "omega": float(omega),
            "h": float(h),
            "eigenvalue_count": int(data.eigen_k.size),
            "resonance_count": int(data.resonance_k.size),
            "truncation_radius": float(data.truncation_radius),
        })
    jsonio.dump_canonical(summary, os.path.join(out_dir, "forward_summary.json"))
    return summary


def run_spectrum(cfg: JobConfig, out_dir: str) -> dict:
    """Potential file -> spectral data (no medium translation)."""
    os.makedirs(out_dir, exist_ok=True)
    pot, h = _stage("ingest", read_potential,
                    cfg.path(cfg.potential_csv), cfg.path(cfg.potential_sidecar))
    prob = RobinProblem(potential=pot, h=h)
    data = _stage("spectral-extraction", extract_spectrum, prob, cfg)
    data.save(os.path.join(out_dir, "spectrum.json"))
    summary = {"mode": "spectrum", "h": float(h),
               "eigenvalue_count": int(data.eigen_k.size),
               "resonance_count": int(data.resonance_k.size)}
    jsonio.dump_canonical(summary, os.path.join(out_dir, "spectrum_summary.json"))
    return summary


def run_inverse(cfg: JobConfig, out_dir: str, spectrum_paths=None) -> dict:
    """Spectral data -> potentials (and shear modulus when two frequencies)."""
    os.makedirs(out_dir, exist_ok=True)
    paths = spectrum_paths or [cfg.path(p) for p in cfg.spectrum_files]
    if cfg.x_support is None:
        raise StageError("configure", "reconstruction needs the support bound x_support")
    x_support = float(cfg.x_support)
    summary = {"mode": "reconstruct", "runs": []}
    potentials = []
    for j, path in enumerate(paths, start=1):
        data = _stage("load-spectrum", SpectrumData.load, path)
        _stage("validate-spectrum", data.validate)
        pot, h, diagnostics, _ = _stage("gelfand-levitan", reconstruct_potential,
                                        data, cfg, x_support)
        write_potential(pot, h,
                        os.path.join(out_dir, f"recon_potential_omega{j}.csv"),
                        os.path.join(out_dir, f"recon_potential_omega{j}.json"))
        potentials.append((pot, h))
        summary["runs"].append({"source": os.path.basename(str(path)),
                                "h": float(h), **diagnostics})
    if len(potentials) == 2:
        if len(cfg.omegas) != 2 or cfg.omegas[0] == cfg.omegas[1]:
            raise StageError("shear-recovery",
                             "two distinct frequencies required for shear recovery")
        if cfg.mu_hat_tail is None:
            raise StageError("shear-recovery", "mu_hat_tail required for shear recovery")
        profile = _stage("shear-recovery", shear_from_two_potentials,
                         potentials[0][0], potentials[1][0],
                         cfg.omegas[0], cfg.omegas[1], cfg.mu_hat_tail)
        write_profile(profile, os.path.join(out_dir, "recon_profile.csv"),
                      os.path.join(out_dir, "recon_profile.json"))
        summary["shear_recovered"] = True
    jsonio.dump_canonical(summary, os.path.join(out_dir, "inverse_summary.json"))
    return summary


def invariant_suite(prob: RobinProblem, data: SpectrumData) -> dict:
    """Structural identities of the direct problem, reported as pass/fail."""
    from .forward import jost_solution, wronskian

    ev = direct_jost_evaluator(prob)
    out = {}
    ks = np.array([0.7, 1.9, 6.0])
    wr_err = 0.0
    conj_err = 0.0
    for k in ks:
        sp = jost_solution(prob, complex(k))
        sm = jost_solution(prob, complex(-k))
        wr_err = max(wr_err, float(np.max(np.abs(wronskian(sp, sm) + 2j * k))))
        conj_err = max(conj_err, float(np.max(np.abs(sm.f - np.conj(sp.f)))))
    out["wronskian_constancy"] = wr_err < 1e-7
    out["conjugation_symmetry"] = conj_err < 1e-8
    s_vals = scattering_function(ev, np.linspace(0.4, 9.0, 9))
    out["scattering_unimodular"] = float(np.max(np.abs(np.abs(s_vals) - 1.0))) < 1e-8
    out["jump_positive"] = bool(np.all(data.jump_samples[:, 1] > 0))
    out["alphas_positive"] = bool(np.all(data.alphas > 0))
    sign_ok = True
    for j, kj in enumerate(data.eigen_k, start=1):
        fdot = jost_function_derivative(prob, kj)
        fmin = complex(ev.fn(np.array([-kj]))[0])
        sign_ok &= (1j * (-1) ** j * fdot).real > 0 and ((-1) ** j * fmin).real < 0
    out["norming_sign_ladder"] = bool(sign_ok)
    maxima = []
    for eps in (1e-1, 1e-3):
        circle = eps * np.exp(1j * np.linspace(0.1, np.pi - 0.1, 7))
        maxima.append(float(np.max(np.abs(circle / ev.fn(circle)))))
    out["small_k_bounded"] = maxima[1] < 2.0 * maxima[0] + 1.0
    return out


def run_roundtrip(cfg: JobConfig, out_dir: str) -> dict:
    """Forward -> inverse -> error report against the input medium."""
    os.makedirs(out_dir, exist_ok=True)
    profile = _stage("ingest", read_profile,
                     cfg.path(cfg.profile_csv), cfg.path(cfg.profile_sidecar))
    forward_summary = run_forward(cfg, out_dir)
    inverse_cfg_paths = [os.path.join(out_dir, f"spectrum_omega{j}.json")
                         for j in range(1, len(cfg.omegas) + 1)]
    kwargs = {f: getattr(cfg, f) for f in cfg.__dataclass_fields__
              if not f.startswith("_")}
    kwargs.update(mode="reconstruct", x_support=profile.x_support,
                  mu_hat_tail=profile.mu_hat_tail, spectrum_files=inverse_cfg_paths)
    cfg_inverse = JobConfig(**kwargs)
    cfg_inverse._base_dir = cfg._base_dir
    cfg_inverse.validate()
    inverse_summary = run_inverse(cfg_inverse, out_dir, spectrum_paths=inverse_cfg_paths)

    report = {"mode": "roundtrip", "forward": forward_summary, "inverse": inverse_summary,
              "errors": {}, "invariants": {}, "weyl_class": {}, "passed": True}
    mu_err = None
    for j, omega in enumerate(cfg.omegas, start=1):
        pot_true, h_true = schrodinger_from_love(profile, omega)
        rec, h_rec = read_potential(
            os.path.join(out_dir, f"recon_potential_omega{j}.csv"),
            os.path.join(out_dir, f"recon_potential_omega{j}.json"))
        v_true = np.interp(rec.grid_x, pot_true.grid_x, pot_true.v)
        diff = np.abs(rec.v - v_true)
        entry = {
            "v_sup_error": float(np.max(diff)),
            "v_l1_error": float(_trapz(diff, x=rec.grid_x)),
            "h_error": float(abs(h_rec - h_true)),
        }
        entry["passed"] = (entry["v_sup_error"] <= cfg.tol_v_sup
                           and entry["h_error"] <= cfg.tol_h)
        report["errors"][f"omega{j}"] = entry
        report["passed"] = report["passed"] and entry["passed"]

        prob = RobinProblem(potential=pot_true, h=h_true)
        data = SpectrumData.load(os.path.join(out_dir, f"spectrum_omega{j}.json"))
        report["invariants"][f"omega{j}"] = invariant_suite(prob, data)
        report["passed"] = report["passed"] and all(
            report["invariants"][f"omega{j}"].values())
        m = forward_weyl_evaluator(prob, eigen_k=data.eigen_k, alphas=data.alphas)
        wr = validate_weyl_class(m, expected_h=h_true)
        report["weyl_class"][f"omega{j}"] = {
            "residues_positive": wr.residues_positive,
            "small_k_bounded": wr.small_k_bounded,
            "jump_positive": wr.jump_positive,
            "asymptotics_ok": wr.asymptotics_ok,
            "fitted_h": wr.fitted_h,
            "gl_solvability": wr.gl_solvability,
        }
        report["passed"] = report["passed"] and wr.passed

    rec_profile = read_profile(os.path.join(out_dir, "recon_profile.csv"),
                               os.path.join(out_dir, "recon_profile.json"))
    mu_true = np.interp(rec_profile.grid_x, profile.grid_x, profile.mu_hat)
    mu_err = float(np.max(np.abs(rec_profile.mu_hat - mu_true) / mu_true))
    report["errors"]["mu_rel_sup_error"] = mu_err
    report["passed"] = bool(report["passed"] and mu_err <= cfg.tol_mu_rel)
    _write_comparison_tables(cfg, profile, out_dir, rec_profile, mu_true)
    jsonio.dump_canonical(report, os.path.join(out_dir, "roundtrip_report.json"))
    return report


def _write_comparison_tables(cfg, profile, out_dir, rec_profile, mu_true):
    """True-vs-reconstructed CSV tables plus a gnuplot script (no graphics
    dependency in the package itself)."""
    for j, omega in enumerate(cfg.omegas, start=1):
        pot_true, _ = schrodinger_from_love(profile, omega)
        rec, _ = read_potential(
            os.path.join(out_dir, f"recon_potential_omega{j}.csv"),
            os.path.join(out_dir, f"recon_potential_omega{j}.json"))
        v_true = np.interp(rec.grid_x, pot_true.grid_x, pot_true.v)
        with open(os.path.join(out_dir, f"comparison_omega{j}.csv"), "w") as fh:
            fh.write("x,v_true,v_reconstructed\n")
            for x, a, b in zip(rec.grid_x, v_true, rec.v):
                fh.write(f"{x:.17g},{a:.17g},{b:.17g}\n")
    with open(os.path.join(out_dir, "comparison_profile.csv"), "w") as fh:
        fh.write("x,mu_true,mu_reconstructed\n")
        for x, a, b in zip(rec_profile.grid_x, mu_true, rec_profile.mu_hat):
            fh.write(f"{x:.17g},{a:.17g},{b:.17g}\n")
    lines = ["set datafile separator ','", "set key autotitle columnhead"]
    for j in range(1, len(cfg.omegas) + 1):
        lines += [f"plot 'comparison_omega{j}.csv' using 1:2 with lines, \\",
                  f"     'comparison_omega{j}.csv' using 1:3 with lines",
                  "pause -1"]
    lines += ["plot 'comparison_profile.csv' using 1:2 with lines, \\",
              "     'comparison_profile.csv' using 1:3 with lines",
              "pause -1", ""]
    with open(os.path.join(out_dir, "plot_roundtrip.gp"), "w") as fh:
        fh.write("\n".join(lines))


def run(cfg: JobConfig, out_dir: str) -> dict:
    runner = {"forward": run_forward, "spectrum": run_spectrum,
              "reconstruct": run_inverse, "roundtrip": run_roundtrip}[cfg.mode]
    return runner(cfg, out_dir)
