"""Mutating a quiver with potential, step by step.

The running example is the two-triangle quiver on three vertices (the
"Markov" quiver familiar from cluster theory): two arrows between each pair
of vertices, arranged in two directed 3-cycles, with the potential summing
one cycle from each triangle.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from qpmut import (
    Arrow,
    JetSpace,
    QP,
    QQ,
    Quiver,
    cyclic_normalize,
    mutate_qp,
    premutate_qp,
)

quiver = Quiver(
    (1, 2, 3),
    (
        Arrow("a1", 1, 3), Arrow("a2", 1, 3),
        Arrow("b1", 3, 2), Arrow("b2", 3, 2),
        Arrow("c1", 2, 1), Arrow("c2", 2, 1),
    ),
)
space = JetSpace(quiver, order=12, field=QQ)
potential = cyclic_normalize(space.path(("c1", "b1", "a1")) + space.path(("c2", "b2", "a2")))
qp = QP(quiver, potential)

print("Start:", len(quiver.arrows), "arrows, potential", potential.jet)

# Premutation at vertex 3: every hook through 3 gets a composite arrow, and
# every arrow touching 3 is replaced by its reversal.
pre = premutate_qp(qp, 3)
print("\nPremutation at 3 has arrows:")
for a in pre.quiver.arrows:
    print(f"  {a.id:8s} {a.tail} -> {a.head}")
print("premuted potential:", pre.potential.jet)

# Full mutation: split the premuted potential into a trivial part (2-cycles
# whose arrows can be removed) and a reduced part, with an explicit change
# of arrows witnessing the split.
reduced, splitting, trivial = mutate_qp(qp, 3)
print("\nTrivial part:", trivial.potential.jet)
print("Reduced quiver arrows:", sorted(a.id for a in reduced.quiver.arrows))
print("Reduced potential:", reduced.potential.jet)
print("\nThe splitting change of arrows:")
for aid in sorted(splitting.images):
    img = splitting.images[aid]
    if len(img.terms) > 1 or next(iter(img.terms.keys())).arrows != (aid,):
        print(f"  {aid} -> {img}")
print("(identity on every other arrow)")

# Mutating twice returns a QP with the same shape as the original.
twice, _, _ = mutate_qp(reduced, 3)
print("\nAfter mutating twice:")
print("  arrows:", sorted(a.id for a in twice.quiver.arrows))
print("  potential:", twice.potential.jet)
print("  arrow counts per direction match the original:",
      twice.quiver.arrow_counts() == quiver.arrow_counts())
