"""Random laminations from trees, cut processes and minimal factorizations."""

from ._validation import ValidationError
from .plane_tree import (LatticePath, PlaneTree, contour_path, enumerate_plane_trees, find_heavy_vertices,
                         heights, lukasiewicz_path, subtree_sizes, tree_from_lukasiewicz)
from .gw_sampler import (OffspringDistribution, builtin_distribution, compute_Bn, cycle_lemma_rotation,
                         estimate_size_probability, gw_tree_probability, sample_conditioned_gw,
                         sample_degree_sequences)
from .lamination import (CrossingChordsError, Lamination, MassSequence, epsilon_sublamination, face_masses,
                         hausdorff_distance, lamination_from_path, lamination_from_tree_contour)
from .fragmentation import (CutProcess, FragmentationTrace, epigraph_ppp_general, fragmentation_masses,
                            lamination_process, sample_tree_cut_process, tree_component_masses,
                            vertex_marking_process)
from .minimal_factorization import (LabelledTree, MinimalFactorization, enumerate_labelled_trees,
                                    enumerate_minimal_factorizations, goulden_yong_forward,
                                    goulden_yong_inverse, partition_process, prefix_lamination, product,
                                    reversed_factorization, sample_uniform_factorization, shuffle_tree,
                                    verify_minimal)
from .levy import (ExponentParams, char_exponent_psibar, count_psi_roots, density_q, density_tau,
                   laplace_exponent_phibar, mu_n_law, reduced_tree, sample_tau_path, vervaat_transform,
                   verify_generating_estimate)
from .render import RenderSpec, render_svg

__version__ = "0.1.0"
