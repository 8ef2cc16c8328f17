"""
The two-scenario protocol
=========================

For every (rho, gamma) the harness draws v partial views, selects seeds on
each, runs r cascades on the oracle and r on the partial graph, then writes
relative errors, correction errors, cascade shapes and convergence tables.
This is a reduced version; the full setting is v = r = 50 on 10^4 nodes.
"""

import sys
import tempfile
from pathlib import Path

from phantomsim.experiment import METHODS, ExperimentConfig, export_csv, run_experiment

cfg = ExperimentConfig(model="toshk", nodes=2000, k=22, p_neighbor=0.9,
                       rho_list=(0.1, 0.3, 0.5), gamma_list=(0.0005, 0.01),
                       p=0.01, v=10, r=20, seed=0)
res = run_experiment(cfg)

print("rho  gamma   rel.err [95% CI]       partial  sice   rece")
for rho, gamma in res.cells():
    m, lo, hi = res.relative_error(rho, gamma)
    corr = "  ".join(f"{res.correction_error(rho, gamma, k):.3f}" for k in METHODS)
    print(f"{rho:.1f}  {gamma:<6}  {m:.3f} [{lo:.3f}, {hi:.3f}]   {corr}")

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
for path in export_csv(res, out):
    print("wrote", path)
