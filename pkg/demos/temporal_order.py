"""
Order of accuracy in time
=========================

A density wave advected through a periodic box is an exact smooth solution.
Comparing each time scheme with a tightly integrated reference of the same
semi-discretisation isolates the temporal error.
"""
import numpy as np
from scipy.integrate import solve_ivp

from ecfv import AIR, Discretization, TimeState, advance, build_mesh, density_wave, flux_ec_roe

mesh = build_mesh(0.0, 1.0, 32)
disc = Discretization(mesh, flux_ec_roe, AIR, "periodic")
u0 = density_wave(mesh)
t_end = 0.2
ref = solve_ivp(lambda t, y: disc.rhs(y.reshape(-1, 3)).ravel(), (0, t_end), u0.ravel(),
                method="DOP853", rtol=1e-13, atol=1e-14).y[:, -1].reshape(-1, 3)

dts = t_end / 10 * 2.0 ** -np.arange(5)
for scheme in ("fe", "be", "bdf2", "leapfrog", "ec"):
    errs = []
    for dt in dts:
        s = TimeState(u0.copy())
        for _ in range(int(round(t_end / dt))):
            s, _ = advance(s, dt, disc, scheme)
        errs.append(np.max(np.abs(s.fields - ref)))
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    print(f"{scheme:9s} errors " + " ".join(f"{e:.2e}" for e in errs) + f"   slope {slope:.2f}")
