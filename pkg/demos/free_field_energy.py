"""Free Dirac fields in an expanding universe: energy bookkeeping.

With a real mass the energy decays exactly like e^{-3Ht}. An imaginary part
of the mass feeds or drains energy through the moment Xi = int psi* gamma^0 psi,
and the decay rate is then pinned between the two envelope exponents
delta_pm = -3H pm 2|Im m|.

Run with ``python demos/free_field_energy.py``.
"""

import numpy as np

from desitter_dirac import diagnostics as dg
from desitter_dirac.evolution import Grid3, SpinorField, evolve
from desitter_dirac.params import PhysicalParams
from desitter_dirac.profiles import compact_bump

grid = Grid3(16, 4.0)
data = compact_bump(1.0, 2.5, spinor_direction=(1, 0.5, 0.25j, 0), power=2.0).on_grid(grid)

for m in (0.7, 0.5j):
    params = PhysicalParams(H=1.0, m=m)
    traj = evolve(SpinorField(grid, data), 2.0, params, cfl=0.1, dissipation=0.0,
                  sample_every=0.1, store_fields=False, observers=dg.make_observer(grid))
    ident = dg.check_energy_identity(traj.records, params, 1e-4, "simpson")
    env = dg.check_decay_envelope(traj.records, params)
    print(f"m = {m}: delta+ = {params.delta_plus:+.1f}, delta- = {params.delta_minus:+.1f}")
    for rec in traj.records[::5]:
        t, E = rec["t"], rec["E"]
        print(f"  t = {t:4.1f}   E = {E:.6e}   E e^(3t)/E0 = {E * np.exp(3 * t) / traj.records[0]['E']:.8f}")
    print(f"  energy identity residual {ident.max_violation:.2e}, "
          f"envelope excursion {env.max_violation:.2e}\n")
