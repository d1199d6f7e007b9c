"""Cycles in graphs of overlapping pattern-avoiding permutations."""

from permcycle.affine import (
    AffinePermutation, affine_cut_points, count_affine_by_cut_points,
    enumerate_affine_312, from_enriched_cyclic, is_affine_312_avoiding,
)
from permcycle.bijection import (
    PeriodicSequence, build_sequence, classify_DU, lift_walk, phi, phi_inverse,
)
from permcycle.compositions import (
    CyclicComposition, EnrichedCyclicComposition, WeightSequence, beta, gamma,
    enumerate_compositions, enumerate_cyclic_compositions, enumerate_enriched,
)
from permcycle.overlap_graph import (
    ClosedWalk, CycleClass, OverlapGraph, build_de_bruijn, build_overlap_graph,
    count_closed_walks, count_d_cycles, count_eulerian_circuits,
    enumerate_closed_walks, predicted_cycles_312, predicted_cycles_de_bruijn,
)
from permcycle.perm_core import (
    avoids, catalan, central_binomial, components, cut_points, mobius, standardize,
)

__version__ = "0.1.0"
