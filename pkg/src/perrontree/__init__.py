"""Spectral and combinatorial weights of rooted trees.

Exact integer constructions of the ancestry, bottleneck and
common-descendant matrices of a rooted tree together with their
closed-form inverses; dominant eigenvalues, eigenvector entropy and the
known closed forms for stars and paths; type I/II classification of
unrooted trees with the algebraic connectivity; rooted sum/product/power
composition with their structured matrix forms; and a verification lab
that machine-checks the bound inventory on committed corpora.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .bounds import (BoundReport, RatioPoint, RatioSeries, check_bethe,
                     check_power, check_product, check_sum, check_tree,
                     conjecture_scan, default_corpus, f_of,
                     product_lower_bounds, ratio_series, reports_to_csv,
                     run_suite, series_to_csv)
from .errors import (CapacityError, ClassificationAmbiguityError,
                     PowerIterationError)
from .fiedler import (Branch, TreeClassification, algebraic_connectivity_oracle,
                      bethe_alg_conn_exact, bethe_alg_conn_lower,
                      bethe_rho_upper, branches_at, classify)
from .matrices import (PermutationSearch, bottleneck_inverse,
                       bottleneck_matrix, exact_matmul, is_permutation_similar,
                       matrix_from_text, matrix_to_text, neckbottle_inverse,
                       neckbottle_matrix, path_matrix, path_matrix_inverse,
                       product_bottleneck, product_neckbottle,
                       product_path_matrix)
from .spectral import (EntropyResult, SpectralResult, entropy_path_closed,
                       entropy_star_closed, perron, perron_entropy,
                       perron_value, perron_vector_path_closed,
                       rayleigh_lower_bound, rho_path_closed, rho_star_closed,
                       symmetric_max_eig)
from .trees import (NO_PARENT, VERTEX_CAP, RootedTree, Splitmix64,
                    UnrootedTree, bethe, bethe_moment_closed, bethe_order,
                    broom, is_path, is_star, load_tree, moment,
                    moment_power_identity, moment_product_identity,
                    moment_sum_identity, parse_tree, path, random_tree,
                    root_at, root_transmission, rooted_power, rooted_product,
                    rooted_sum, save_tree, star, subtree_sizes, tree_from_json,
                    tree_from_text, tree_to_json, tree_to_text, unroot)

__version__ = "1.0.0"
