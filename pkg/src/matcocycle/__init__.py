"""Thermodynamic formalism for locally constant matrix cocycles over subshifts of finite type.

Subpackages-by-topic:

``subshift``     transition matrices, word enumeration, entropy, connectors
``matkernel``    norms, singular values, exterior powers, scaled products
``cocycle``      cocycle specs, cylinder norm tables, example cocycles
``pressure``     certified pressure brackets and growth extremes
``spectrum``     Legendre spectrum, Lyapunov intervals, Gibbs reports
``cones``        Hilbert metric, Birkhoff contraction, kappa certificates
``typicality``   pinching and twisting at periodic and homoclinic points
``cli``          command-line front end
"""

__version__ = "0.1.0"

from .cocycle import (CocycleSpec, SpecError, butler, conformal, cylinder_norm_table, fiber_bunched,
                      golden_mean, identity_cocycle, load_spec, positive_pair, rotation, save_spec,
                      word_product)
from .cones import (Cone, KappaCertificate, birkhoff_data, cone_invariance, domination_check,
                    hilbert_distance, kappa_certificate)
from .matkernel import ScaledProduct, eigen_moduli, exterior_power, op_norm, singular_values
from .pressure import (PressureBracket, QuasiMultConstants, growth_extremes, partition_sum,
                       pressure_bracket, quasi_mult_search)
from .spectrum import (GibbsReport, PressureCurve, SpectrumPoint, gibbs_report, legendre_entropy,
                       lyapunov_interval, pressure_curve, spectrum_curve)
from .subshift import (ResourceLimitError, TransitionMatrix, count_words, enumerate_words,
                       topological_entropy)
from .typicality import (HomoclinicSpec, TypicalityReport, holonomy_loop, periodic_product,
                         pinching_check, twisting_check, typicality_report)
