"""Pilot 5: MF recovery across candidate dyadic fit ranges."""
import time

import numpy as np

from dpxa import ScaleGrid
from dpxa.experiments import MF_PRESETS, run_mf_recovery, summarize_mf

for s_min, s_max in ((16, 16384), (256, 16384), (512, 16384), (1024, 16384)):
    grid = ScaleGrid.dyadic(2 ** 16, s_min=s_min, s_max=s_max)
    t0 = time.time()
    res = run_mf_recovery(MF_PRESETS["paper-fig3-desk"], scales=grid, jobs=2)
    err_xyz = np.max(np.abs(res.fits["mfdpxa_xyz"].tau - res.theory_tau))
    err_r = np.max(np.abs(res.fits["mfdcca_r"].tau - res.theory_tau))
    alpha = res.fits["mfdcca_xy"].alpha
    alpha = alpha[np.isfinite(alpha)]
    print(f"s in [{s_min},{s_max}]: max|tau_xyz-T| = {err_xyz:.4f}, "
          f"max|tau_r-T| = {err_r:.4f}, xy width = {alpha.max()-alpha.min():.4f}, "
          f"xy center = {(alpha.max()+alpha.min())/2:.4f} "
          f"({time.time()-t0:.1f}s)")
