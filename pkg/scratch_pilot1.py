"""Pilot 1: generator fidelity + DFA accuracy."""
import time

import numpy as np

from dpxa import (
    FgnSpec, BfbmSpec, gen_fgn, gen_bfbm_increments,
    ScaleGrid, QGrid, DetrendConfig,
    fluctuation_dfa, fluctuation_dcca, fit_exponent,
)

t0 = time.time()

# 1. FGN lag-1 autocovariance, H=0.3
vals = []
for seed in range(5):
    x = gen_fgn(FgnSpec(0.3, 4096, seed)).values
    x = x - x.mean()
    vals.append(np.mean(x[1:] * x[:-1]))
print("fgn H=0.3 lag-1 acov:", np.mean(vals), "expect", 2 ** (2 * 0.3 - 1) - 1)

# 2. FGN variance/mean at N=65536
for h in (0.3, 0.5, 0.8):
    x = gen_fgn(FgnSpec(h, 65536, 1)).values
    print(f"fgn H={h}: mean={x.mean():+.4f} var={x.var():.4f}")

# 3. DFA h-hat vs H, default grid, N=65536, 20 seeds
q2 = QGrid.second_order()
for H in (0.2, 0.5, 0.8, 0.9):
    hs = []
    for seed in range(20):
        x = gen_fgn(FgnSpec(H, 65536, 1000 + seed))
        grid = ScaleGrid.default(65536)
        hs.append(fit_exponent(fluctuation_dfa(x, grid, q2)).h[0])
    print(f"DFA H={H}: mean h = {np.mean(hs):.4f} (bias {np.mean(hs)-H:+.4f}, "
          f"sd {np.std(hs):.4f})")

print("elapsed", time.time() - t0)

# 4. BFBM zero-lag cross-correlation (0.1, 0.1, 0.7), 20 seeds N=65536
cc = []
for seed in range(20):
    rx, ry = gen_bfbm_increments(BfbmSpec(0.1, 0.1, 0.7, 65536, seed))
    a, b = rx.values - rx.values.mean(), ry.values - ry.values.mean()
    cc.append(np.mean(a * b) / (a.std() * b.std()))
print("bfbm (0.1,0.1,0.7) zero-lag corr:", np.mean(cc))

# 5. DCCA cross-Hurst for (0.2,0.6,0.5), (0.3,0.9,0.5), (0.5,0.5,0.5), N=2^14
for (hx, hy) in ((0.2, 0.6), (0.3, 0.9), (0.5, 0.5)):
    hs = []
    for seed in range(20):
        rx, ry = gen_bfbm_increments(BfbmSpec(hx, hy, 0.5, 2 ** 14, 40 + seed))
        grid = ScaleGrid.default(2 ** 14)
        hs.append(fit_exponent(fluctuation_dcca(rx, ry, grid, q2)).h[0])
    print(f"DCCA ({hx},{hy}) corr .5: h_xy = {np.mean(hs):.4f} "
          f"expect {(hx+hy)/2}")

# 6. marginals of bfbm: DFA of each component
hs = []
for seed in range(10):
    rx, ry = gen_bfbm_increments(BfbmSpec(0.2, 0.6, 0.5, 2 ** 14, seed))
    grid = ScaleGrid.default(2 ** 14)
    hs.append((fit_exponent(fluctuation_dfa(rx, grid, q2)).h[0],
               fit_exponent(fluctuation_dfa(ry, grid, q2)).h[0]))
print("bfbm marginals (0.2, 0.6):", np.mean(hs, axis=0))

print("total elapsed", time.time() - t0)
