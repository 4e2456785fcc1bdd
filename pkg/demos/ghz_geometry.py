"""
Entropic triangle of a GHZ measurement
======================================

One detector setting on |GHZ> gives a joint distribution over three bits.
Its entropies define three edge lengths and an information area.
"""

import numpy as np

from qreact import MeasurementSetting, entropy_table, geometry_report, joint_distribution, make_state

rho = make_state("ghz3")
for tilt in (0.0, np.pi / 4, np.pi / 2):
    setting = MeasurementSetting([(0.0, 0.0), (tilt, 0.0), (tilt, 0.0)])
    report = geometry_report(entropy_table(joint_distribution(rho, setting)))
    d = report.distances
    print(f"tilt {tilt:.3f}: D_AB={d[(0, 1)]:.4f} D_AC={d[(0, 2)]:.4f} D_BC={d[(1, 2)]:.4f} area={report.surface:.4f}")

# aligned detectors see perfectly correlated bits: a degenerate triangle
