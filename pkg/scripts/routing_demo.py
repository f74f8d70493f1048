"""Route the frustrated edge of the 5x5 grid and compare the gaps and bounds."""

from cheegerkit.bounds import verify_lower_nonstoquastic
from cheegerkit.errors import NonPositiveResidual
from cheegerkit.graph_core import Hamiltonian
from cheegerkit.instances import frustrated_grid
from cheegerkit.routing import RoutingPlan, auto_route, compare_routed_gap, min_residual, validate_plan

grid = frustrated_grid()
print("negative edges:", grid.negative_edges)

one = RoutingPlan.from_mapping({(12, 13): [((12, 7, 8, 13), 1.0)]})
try:
    validate_plan(grid, one)
except NonPositiveResidual as exc:
    print(f"single detour: rejected, residual {exc.residual:g} on {exc.edge}")

plan = auto_route(grid)
for edge, paths in plan.routes:
    for p in paths:
        print(f"{edge}: path {p.vertices} alpha {p.alpha}")
print("smallest residual:", min_residual(grid, plan))

cmp = compare_routed_gap(grid, plan)
print(f"gap original {cmp.gamma_original:.6f} >= routed {cmp.gamma_routed:.6f}: {cmp.holds}")

cert = verify_lower_nonstoquastic(Hamiltonian(grid), plan, limit=25)
print(f"gap {cert.lhs:.6f} >= {cert.rhs:.6f} (h_routed {cert.inputs['h_routed']:.4f}, "
      f"Q {cert.inputs['Q']:g}, rho {cert.inputs['rho']:.4f}): {cert.holds}")
