"""Energy thresholds and lifespans for the focusing nonlinearity.

For the expanding universe, data above the threshold energy cannot live longer
than an explicit time T. The worked example uses H = 1, c0 = 1, alpha = 2 and
R = 1, where the threshold is 24 and E0 = 48 gives T = ln(2)/3.

Spatially uniform data reduce the PDE to a Bernoulli ODE with a closed-form
blow-up time, which the solver reproduces. In a contracting universe the
cone integral has a finite limit, which acts as a gate on the initial energy.
"""

import numpy as np

from desitter_dirac import blowup as bl
from desitter_dirac import diagnostics as dg
from desitter_dirac.evolution import Grid3, SpinorField, evolve
from desitter_dirac.nonlinearity import NonlinSpec
from desitter_dirac.params import PhysicalParams
from desitter_dirac.profiles import uniform_field

p = bl.BlowupParams(H=1.0, m=0.0, c0=1.0, alpha=2.0, R=1.0, E0=48.0)
print(f"threshold energy {bl.threshold_energy(p):g}")
for E0 in (30.0, 48.0, 100.0, 1000.0):
    T = bl.predict_T_expanding(bl.BlowupParams(1.0, 0.0, 1.0, 2.0, 1.0, E0))
    print(f"  E0 = {E0:6g}: lifespan bound T = {T:.5f}")

grid = Grid3(8, 1.0)
params = PhysicalParams(1.0, 0.0, nonlin=NonlinSpec("BlowupG", alpha=2.0, c0=1.0))
data = uniform_field(2.0, (1, 0, 0, 0)).on_grid(grid)
E0 = dg.energy(data, grid)
k = bl.uniform_surrogate_rate(1.0, 2.0, (2 * grid.L) ** 3)
T_exact = bl.bernoulli_blowup_time(E0, k, 3.0, 2.0)
traj = evolve(SpinorField(grid, data), 2 * T_exact, params, dissipation=0.0,
              sample_every=T_exact / 200, store_fields=False, observers=dg.make_observer(grid))
t_star = bl.detect_blowup(traj, 2.0)
print(f"\nuniform data: Bernoulli blow-up {T_exact:.6f}, solver {t_star:.6f} "
      f"({abs(t_star / T_exact - 1):.1e} relative)")

pc = bl.BlowupParams(H=-1.0, m=0.0, c0=1.0, alpha=1.0, R=0.5, E0=1.0, c=1.0)
gate = bl.contracting_gate(pc)
print(f"\ncontracting universe: cone integral limit {bl.cone_integral_limit(0.5, -1.0, 1.0):.6f}")
for factor in (0.5, 1.5, 4.0, 100.0):
    T = bl.predict_T_contracting(bl.BlowupParams(-1.0, 0.0, 1.0, 1.0, 0.5, factor / gate**2, c=1.0))
    print(f"  E0 = {factor:5g} x gate threshold: T_ls = {T}")
