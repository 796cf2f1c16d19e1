"""State tomography from a single generalized measurement.

Projective measurements only reveal diagonal information, so reconstructing a
density operator from them takes several measurement settings.  A complete
generalized measurement spans the whole operator space, and one outcome
distribution then determines the state by linear inversion.
"""

import numpy as np

import povmkit as pk
from povmkit.sampling import random_density_matrix, random_pure_state

rng = np.random.default_rng(7)
tetra = pk.tetrahedral_qubit_povm()

print("reconstructing random qubit states from tetrahedral statistics\n")
worst = 0.0
for trial in range(8):
    rho = random_pure_state(2, rng) if trial % 2 == 0 else random_density_matrix(2, rng)
    probabilities = pk.born_probabilities(tetra, rho)
    recovered = pk.reconstruct_state(tetra, probabilities)
    distance = pk.trace_distance(rho, recovered)
    worst = max(worst, distance)
    kind = "pure " if trial % 2 == 0 else "mixed"
    print(f"  {kind} state: trace distance after round trip = {distance:.2e}")
print(f"\nworst round-trip distance: {worst:.2e}")

# The inversion refuses to invent a state: probabilities that no density
# operator can produce raise instead of being projected onto something legal.
impossible = pk.ProbabilityTable([0.97, 0.01, 0.01, 0.01])
try:
    pk.reconstruct_state(tetra, impossible)
except pk.InfeasibleProbabilitiesError as exc:
    print(f"\nskewed probabilities rejected: {exc}")

# A two-outcome projective measurement cannot support inversion at all.
basis = pk.PvmMeasure([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
try:
    pk.reconstruct_state(basis, pk.born_probabilities(basis, pk.State.maximally_mixed(2)))
except pk.IncompleteMeasureError as exc:
    print(f"projective statistics rejected: {exc}")
