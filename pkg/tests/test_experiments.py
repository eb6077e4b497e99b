import json

import numpy as np
import pytest

from dpxa import ConfigError, ContaminationSpec, DegenerateInputError
from dpxa.experiments import (
    MF_PRESETS,
    MfSpec,
    RHO_PRESETS,
    RhoSpec,
    SWEEP_PRESETS,
    SweepSpec,
    run_mf_recovery,
    run_rho_comparison,
    run_sweep,
    summarize_mf,
    summarize_rho,
    summarize_sweep,
    write_mf_outputs,
    write_rho_outputs,
    write_sweep_outputs,
)
from dpxa.io import jsonable

BETAS = ContaminationSpec(2.0, 3.0)


def result_bytes(result) -> bytes:
    return json.dumps(jsonable(result.to_dict()), sort_keys=True).encode()


def test_sweep_single_triple_recovers_mean_hurst():
    spec = SweepSpec(((0.5, 0.5, 0.5),), realizations=5, length=2 ** 13,
                     corr=0.5, beta_x=BETAS, beta_y=BETAS, seed_base=1)
    result = run_sweep(spec)
    triple = result.triples[0]
    assert abs(triple["h_rxry"] - 0.5) <= 0.05
    # averaged cross exponent tracks the mean of the component estimates
    drift = abs(triple["h_rxry"] - 0.5 * (triple["h_rx"] + triple["h_ry"]))
    assert drift <= 0.03
    assert len(result.relative_errors) == 1


def test_sweep_spec_validation():
    with pytest.raises(ConfigError):
        SweepSpec(((0.6, 0.4, 0.5),), realizations=2, length=1024, corr=0.0,
                  beta_x=BETAS, beta_y=BETAS, seed_base=0)
    with pytest.raises(ConfigError):
        SweepSpec(((0.4, 0.6, 1.5),), realizations=2, length=1024, corr=0.0,
                  beta_x=BETAS, beta_y=BETAS, seed_base=0)


def test_sweep_determinism_across_jobs():
    spec = SWEEP_PRESETS["smoke"]
    a = run_sweep(spec, jobs=1)
    b = run_sweep(spec, jobs=2)
    assert result_bytes(a) == result_bytes(b)


def test_rho_perfect_coherence_gives_unit_coefficient():
    spec = RhoSpec(corr=1.0, hurst_x=0.3, hurst_y=0.3, hurst_z=0.8,
                   length=2 ** 12, seeds=2, beta_x=BETAS, beta_y=BETAS,
                   seed_base=3)
    result = run_rho_comparison(spec)
    assert np.max(np.abs(result.rho_dpxa - 1.0)) <= 1e-6


def test_rho_uncorrelated_components():
    # with corr = 0 only the common driver correlates x and y
    spec = RhoSpec(corr=0.0, hurst_x=0.3, hurst_y=0.3, hurst_z=0.8,
                   length=2 ** 13, seeds=4, beta_x=BETAS, beta_y=BETAS,
                   seed_base=11)
    result = run_rho_comparison(spec)
    mask = result.scales <= spec.length // 10
    assert np.max(np.abs(result.rho_dpxa[mask])) <= 0.1
    assert np.max(np.abs(result.rho_dcca_r[mask])) <= 0.1
    assert np.min(result.rho_dcca_xy[mask]) >= 0.85


def test_mf_recovery_without_contamination_matches_clean():
    spec = MfSpec(p_x=0.3, p_y=0.4, depth=12, seeds=2,
                  beta_x=ContaminationSpec(2.0, 0.0),
                  beta_y=ContaminationSpec(2.0, 0.0), seed_base=7)
    result = run_mf_recovery(spec)
    gap = np.max(np.abs(result.fits["mfdcca_xy"].tau
                        - result.fits["mfdcca_r"].tau))
    assert gap <= 1e-6
    assert result.snr == float("inf")


def test_mf_recovery_near_degenerate_cascade():
    # p close to 1/2: essentially monofractal residual measures
    spec = MfSpec(p_x=0.49, p_y=0.49, depth=12, seeds=3, beta_x=BETAS,
                  beta_y=BETAS, seed_base=7)
    result = run_mf_recovery(spec)
    fit = result.fits["mfdpxa_xyz"]
    assert fit.h.max() - fit.h.min() <= 0.05
    alpha = fit.alpha[np.isfinite(fit.alpha)]
    assert alpha.max() - alpha.min() <= 0.1


def test_mf_recovery_uniform_cascade_is_degenerate():
    # p = 1/2 exactly: the residual measures are constant, so the clean
    # baseline has all-zero detrended profiles
    spec = MfSpec(p_x=0.5, p_y=0.5, depth=12, seeds=2, beta_x=BETAS,
                  beta_y=BETAS, seed_base=7)
    with pytest.raises(DegenerateInputError):
        run_mf_recovery(spec)


def test_presets_exist():
    assert "desk" in SWEEP_PRESETS and "full" in SWEEP_PRESETS
    assert "paper-fig2a-desk" in RHO_PRESETS
    assert "paper-fig3-desk" in MF_PRESETS
    preset = RHO_PRESETS["paper-fig2a-desk"]
    assert (preset.corr, preset.hurst_z, preset.length) == (0.7, 0.95, 2 ** 16)
    assert MF_PRESETS["paper-fig3-desk"].p_x == 0.3


def test_summaries_and_writers(tmp_path):
    sweep = run_sweep(SWEEP_PRESETS["smoke"])
    text = summarize_sweep(sweep)
    assert "recovery regression" in text and ("PASS" in text or "FAIL" in text)
    write_sweep_outputs(sweep, tmp_path)
    assert (tmp_path / "results.json").exists()
    assert (tmp_path / "sweep.csv").read_text().startswith(
        "H_rx,H_ry,H_z,statistic,value")

    rho = run_rho_comparison(RHO_PRESETS["smoke"])
    assert "rho_dpxa" in summarize_rho(rho)
    write_rho_outputs(rho, tmp_path)
    assert (tmp_path / "rho.csv").exists()

    mf = run_mf_recovery(MF_PRESETS["smoke"])
    assert "signal-to-noise" in summarize_mf(mf)
    write_mf_outputs(mf, tmp_path)
    assert (tmp_path / "mass_exponents.csv").exists()


def test_rerun_is_byte_identical(tmp_path):
    spec = RHO_PRESETS["smoke"]
    first, second = tmp_path / "a", tmp_path / "b"
    first.mkdir(), second.mkdir()
    write_rho_outputs(run_rho_comparison(spec), first)
    write_rho_outputs(run_rho_comparison(spec), second)
    for name in ("results.json", "rho.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
