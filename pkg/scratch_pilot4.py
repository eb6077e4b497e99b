"""Pilot 4: diagnose the MF-DFA h offset on the binomial measure."""
import numpy as np

from dpxa import (
    BinomialSpec, gen_binomial, ScaleGrid, QGrid,
    fluctuation_dfa, fit_exponent, mass_exponents, binomial_mass_exponent,
)

# c_m = RMS of linearly detrended profile of the normalized depth-m cascade
p = 0.3
for m in range(2, 17):
    meas = gen_binomial(BinomialSpec(p, m)).values
    prof = np.cumsum(meas - meas.mean())
    t = np.arange(prof.size)
    c = np.polyfit(t, prof, 1)
    cm = np.sqrt(np.mean((prof - np.polyval(c, t)) ** 2))
    print(f"m={m:2d} log2 c_m = {np.log2(cm):+.4f}")

# now fit windows: which (s_min, s_max) brings |h offset| <= 0.0125?
meas = gen_binomial(BinomialSpec(p, 16)).values
orders = QGrid(np.array([-4.0, -2.0, 0.0, 2.0, 4.0]))
tau_ref = binomial_mass_exponent(orders.orders, p)
for s_min, s_max in ((16, 16384), (64, 16384), (256, 16384), (64, 4096),
                     (128, 8192), (256, 8192), (512, 16384), (1024, 16384)):
    grid = ScaleGrid.dyadic(2 ** 16, s_min=s_min, s_max=s_max)
    fit = mass_exponents(fit_exponent(fluctuation_dfa(meas, grid, orders)))
    err = np.max(np.abs(fit.tau - tau_ref))
    print(f"s in [{s_min}, {s_max}] ({len(grid)} scales): max|tau err| = {err:.4f}")
