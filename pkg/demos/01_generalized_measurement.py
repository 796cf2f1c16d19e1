"""Generalized measurements from first principles.

A standard observable is a family of orthogonal projectors; a generalized
observable drops orthogonality and idempotence and only keeps positivity and
the decomposition of the identity.  Modeling the measuring instrument
explicitly (apparatus state, coupling unitary, pointer readout) produces
exactly such generalized families on the object alone, and their statistics
match the full object-apparatus computation.
"""

import numpy as np

import povmkit as pk
from povmkit.sampling import random_basis_pvm, random_density_matrix, random_unitary

rng = np.random.default_rng(1)

# A projective qubit measurement and a genuinely non-projective one.
basis = pk.PvmMeasure([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])], labels=("0", "1"))
tetra = pk.tetrahedral_qubit_povm()

print("basis measurement is a PVM:", all(pk.is_projector(e) for e in basis.elements))
print("tetrahedral elements are projectors:", any(pk.is_projector(e) for e in tetra.elements))
print("tetrahedral spans operator space:", pk.is_complete(tetra))
print("basis PVM spans operator space:  ", pk.is_complete(basis))

# Outcome statistics through the generalized Born rule.
rho = pk.State.pure([1.0, 1.0j])
print("\nstate |R> probabilities under the tetrahedral family:")
print(np.round(pk.born_probabilities(tetra, rho).values, 6))

# An instrument model: the apparatus interacts through a random coupling and
# its pointer is read out afterwards.  The induced object measure reproduces
# the full-space statistics exactly.
apparatus = random_density_matrix(2, rng)
coupling = random_unitary(4, rng)
pointer = random_basis_pvm(2, rng)
model = pk.InstrumentModel(apparatus, coupling, pointer, object_dim=2)
induced = pk.povm_from_instrument(model)

print("\ninduced object measure:", induced)
print("element 0 is a projector:", pk.is_projector(induced.elements[0]))

final = coupling @ pk.tensor(rho.matrix, apparatus.matrix) @ coupling.conj().T
direct = [
    float(np.real(np.trace(final @ pk.tensor(np.eye(2), e)))) for e in pointer.elements
]
synthesized = pk.born_probabilities(induced, rho).values
print("full-space probabilities: ", np.round(direct, 10))
print("object-space probabilities:", np.round(synthesized, 10))
print("max difference:", float(np.max(np.abs(np.array(direct) - synthesized))))
