"""Landing scenario: capping vertical kinetic energy on touchdown.

A disk starting with a 90 degree tilt descends onto a pad.  The
directional barrier limits the kinetic energy along the pad normal to
1.5 J; without the filter the nominal controller lands far hotter.

Run with: python3 demos/06_capped_landing.py
"""

import dataclasses

from se3cbf import build_scenario_landing, run

for alpha in (0.5, 1.0, 2.0):
    records, summary = run(build_scenario_landing(alpha))
    print(
        f"alpha = {alpha:3.1f}: peak E_n = {summary.max_edir:.4f} J, "
        f"touchdown after {summary.steps * 5e-4:.2f} s"
    )

nominal = dataclasses.replace(build_scenario_landing(1.0), filter_enabled=False)
records, summary = run(nominal)
print(f"\nunfiltered: peak E_n = {summary.max_edir:.2f} J (bound is 1.5 J)")
