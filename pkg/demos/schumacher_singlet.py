"""
Schumacher's quadrilateral on the singlet
=========================================

Four detectors, two per qubit. Each edge of the quadrilateral is measured in
a different context, so no single joint distribution binds them together.
Classical data would obey the triangle inequality; the singlet does not.
"""

from qreact import make_state, search_schumacher

quad = search_schumacher(make_state("singlet"), points=16)
for name, (theta, phi) in quad.settings.items():
    print(f"{name}: theta={theta:.4f} phi={phi:.4f}")
for edge, value in quad.edges.items():
    print(f"D({edge}) = {value:.4f}")
print(f"violation = {quad.violation:.4f} bits")

# classical check: a product state gives no violation
print("product state:", round(search_schumacher(make_state("product_zero"), points=8).violation, 6))
