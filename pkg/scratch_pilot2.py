"""Pilot 2: reductions, textbook-DFA oracle, rho comparison, sweep slice."""
import time

import numpy as np

from dpxa import (
    FgnSpec, BfbmSpec, ContaminationSpec, gen_fgn, gen_bfbm_increments,
    contaminate, ScaleGrid, QGrid, DetrendConfig, ForceMatrix,
    fluctuation_dfa, fluctuation_dcca, fluctuation_dpxa,
    rho_curve, rho_dcca, fit_exponent,
)

t0 = time.time()
rng = np.random.default_rng(0)

# 1. reduction identities
x = rng.standard_normal(3000)
y = rng.standard_normal(3000)
grid = ScaleGrid.default(3000)
q = QGrid.default()
s_dpxa = fluctuation_dpxa(x, y, None, grid, q)
s_dcca = fluctuation_dcca(x, y, grid, q)
print("DPXA(p=0) vs DCCA rel diff:",
      np.max(np.abs(s_dpxa.F - s_dcca.F) / s_dcca.F))
s_dcca_xx = fluctuation_dcca(x, x, grid, q)
s_dfa = fluctuation_dfa(x, grid, q)
print("DCCA(x,x) vs DFA rel diff:",
      np.max(np.abs(s_dcca_xx.F - s_dfa.F) / s_dfa.F))

# also p=0 with empty ForceMatrix
s_dpxa2 = fluctuation_dpxa(x, y, ForceMatrix.empty(3000), grid, q)
print("DPXA(empty Z) vs DCCA rel diff:",
      np.max(np.abs(s_dpxa2.F - s_dcca.F) / s_dcca.F))


# 2. textbook global-profile DFA oracle
def dfa_oracle(series, scales):
    prof = np.cumsum(series - series.mean())
    out = []
    for s in scales:
        M = prof.size // s
        w = prof[:M * s].reshape(M, s)
        t = np.arange(s)
        f2 = []
        for row in w:
            c = np.polyfit(t, row, 1)
            f2.append(np.mean((row - np.polyval(c, t)) ** 2))
        out.append(np.sqrt(np.mean(f2)))
    return np.array(out)


z = gen_fgn(FgnSpec(0.7, 8192, 3)).values
grid8 = ScaleGrid.default(8192)
ours = fluctuation_dfa(z, grid8, QGrid.second_order()).F[0]
oracle = dfa_oracle(z, grid8.scales)
print("our DFA vs textbook oracle max rel diff:",
      np.max(np.abs(ours - oracle) / oracle))

# 3. rho comparison, paper fig2a setting, reduced seeds first
N = 2 ** 16
cfg = DetrendConfig()
grid16 = ScaleGrid.default(N)
curves = []
for seed in range(10):
    zz = gen_fgn(FgnSpec(0.95, N, 100 + seed))
    rx, ry = gen_bfbm_increments(BfbmSpec(0.1, 0.1, 0.7, N, 200 + seed))
    betas = ContaminationSpec(2.0, 3.0)
    xx = contaminate(rx, zz, betas)
    yy = contaminate(ry, zz, betas)
    forces = ForceMatrix.from_series([zz])
    curves.append((rho_dcca(xx, yy, grid16, cfg).rho,
                   rho_dcca(rx, ry, grid16, cfg).rho,
                   rho_curve(xx, yy, forces, grid16, cfg).rho))
curves = np.mean(curves, axis=0)
mask = grid16.scales <= N // 10
print("scales:", grid16.scales)
print("rho_dcca(x,y):  ", np.round(curves[0], 3))
print("rho_dcca(rx,ry):", np.round(curves[1], 3))
print("rho_dpxa:       ", np.round(curves[2], 3))
print("mean rho_dpxa over s<=N/10:", curves[2][mask].mean(),
      " | rho_dcca(x,y) at s=10:", curves[0][0])
print("elapsed", time.time() - t0)

# 4. one sweep triple at desk scale: (0.2, 0.2, 0.8) - the hardest corner
from dpxa.experiments import _sweep_realization, SweepSpec
spec = SweepSpec(((0.2, 0.2, 0.8),), realizations=1, length=2 ** 14,
                 corr=0.5, beta_x=ContaminationSpec(2, 3),
                 beta_y=ContaminationSpec(2, 3), seed_base=9)
vals = [np.array(_sweep_realization((spec, 0, r))) for r in range(20)]
mean = np.mean(vals, axis=0)
keys = ("h_rx", "h_ry", "h_z", "h_x", "h_y", "h_xy", "h_rxry", "h_xyz")
print({k: round(float(v), 4) for k, v in zip(keys, mean)})
print("rel err:", (mean[7] - mean[6]) / mean[6])
print("single realization time:",
      (time.time() - t0))
