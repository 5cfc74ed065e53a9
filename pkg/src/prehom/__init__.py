"""Dense orbits of Borel subgroups on ideals of thin dimension vectors.

Exact tools for thin dimension vectors ``d``: the classification by even
internal 1-strings, explicit representatives, modules over the algebra
A_{t,1} with their Hom and Ext^1 dimensions, and brute-force orbit counts
over prime fields.
"""

from .combinatorics import (ThinDimVector, OneStringSequence, classify, from_strings,
                            one_strings, thin_vectors, validate_thin)
from .constructions import (build_diagram, conjugator, decompose_JK, element_x, element_xbar,
                            family_F, family_Fbar, modify_diagram)
from .fields import GF, QQ
from .matrix_model import IdealElement, element_from_sparse, jordan_type, orbit_codim
from .quiver import (QuiverModule, euler_form, ext1_dim, hom_dim, hom_dim_standard, hom_space,
                     module_from_element, projective, standard_module)

__version__ = "0.1.0"
