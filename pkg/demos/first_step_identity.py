"""
The first step, by hand
=======================

After one forward-Euler step with the EC Roe flux, the cell right of the
centre interface sees exactly one flux change: the centre flux is pure
pressure (0, p0, 0).  Its density drops by dt/dx rho0 u0 and its specific
entropy changes by (1 - gamma) E_FE / rho^1, where E_FE is the
forward-Euler entropy production integral.  Both identities hold to
round-off.
"""
from ecfv import RecedingIC, build_mesh, density_first_step_check, first_step_s_jump_check

mesh = build_mesh(-0.5, 0.5, 100)
for ic in (RecedingIC(), RecedingIC(1.0, 0.4, 2.0)):
    for dt in (1e-3, 5e-4):
        lhs, rhs = first_step_s_jump_check(ic, mesh, dt)
        dl, dr = density_first_step_check(ic, mesh, dt)
        print(f"{ic.spec():26s} dt={dt:.0e}  dS = {lhs:+.15e}  predicted {rhs:+.15e}  "
              f"drho = {dl:+.6f} ({dr:+.6f})")

# The jump in S is negative: forward Euler *produces* mathematical entropy
# U = -rho S/(gamma - 1), which is a loss of physical entropy rho S.
